#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use semigroupoid::graph::standard::*;
use semigroupoid::ncpartition::NoncrossingPartition;
use semigroupoid::*;

/// Graphs on which both rewriting modes are consistent.
pub fn consistent_graphs() -> Vec<(&'static str, Graph)> {
    vec![
        ("one-loop", one_loop()),
        ("single-edge", single_edge()),
        ("circulant-3", circulant(3)),
    ]
}

pub fn all_graphs() -> Vec<(&'static str, Graph)> {
    let mut g = consistent_graphs();
    g.push(("flower", flower()));
    g
}

pub const MODES: [SemanticsMode; 2] = [SemanticsMode::PaperRelations, SemanticsMode::FockVacuum];

/// Creation and annihilation letters for every edge, then every vertex letter.
pub fn alphabet(g: &Graph) -> Vec<Letter> {
    let mut out = Vec::new();
    for e in g.edge_ids() {
        out.push(Letter::create(g.edge_path(e)));
        out.push(Letter::annihilate(g.edge_path(e)));
    }
    for v in g.vertex_ids() {
        out.push(Letter::create(g.trivial(v)));
    }
    out
}

/// Every word of length `1..=max_len` over the alphabet.
pub fn words(alphabet: &[Letter], max_len: usize) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    let mut level: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &level {
            for l in alphabet {
                let mut x = w.clone();
                x.push(l.clone());
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// Words built only from creation/annihilation letters of edges.
pub fn edge_words(g: &Graph, max_len: usize) -> Vec<Vec<Letter>> {
    let letters: Vec<Letter> = alphabet(g)
        .into_iter()
        .filter(|l| !l.path.is_trivial())
        .collect();
    words(&letters, max_len)
}

pub fn nontrivial_paths(g: &Graph, max_len: usize) -> Vec<Path> {
    g.finite_paths(max_len)
        .into_iter()
        .filter(|p| !p.is_trivial())
        .collect()
}

/// A random element with up to `max_terms` monomials `L_α L_β*`, `|α|, |β| <= 2`,
/// and coefficients in {±1, ±1/2}.
pub fn random_element(alg: &Algebra, rng: &mut ChaCha8Rng, max_terms: usize) -> Element {
    let paths = alg.graph().finite_paths(2);
    let coefficients = [
        Scalar::from_int(1),
        Scalar::from_int(-1),
        Scalar::ratio(1, 2),
        Scalar::ratio(-1, 2),
    ];
    let mut x = alg.zero();
    let terms = rng.gen_range(1..=max_terms);
    let mut placed = 0;
    while placed < terms {
        let a = &paths[rng.gen_range(0..paths.len())];
        let b = &paths[rng.gen_range(0..paths.len())];
        if a.range() != b.range() {
            continue;
        }
        if let Some(m) = alg.iso(a.clone(), b.clone()).unwrap().into_option() {
            let c = &coefficients[rng.gen_range(0..coefficients.len())];
            x = x.add(&alg.monomial(m).scale(c)).unwrap();
            placed += 1;
        }
    }
    x
}

/// A random diagonal element with small integer coefficients.
pub fn random_diagonal(alg: &Algebra, rng: &mut ChaCha8Rng) -> Element {
    let mut d = alg.zero();
    for v in alg.graph().vertex_ids() {
        let c = rng.gen_range(-2..=2);
        d = d.add(&alg.vertex(v).scale(&Scalar::from_int(c))).unwrap();
    }
    d
}

/// `μ(π, 1_n)` for every `π`, from the inverse of the zeta matrix, solved by
/// back substitution in a linear extension of the order.
pub fn zeta_inverse_to_top(parts: &[NoncrossingPartition]) -> Vec<i64> {
    let n = parts.len();
    let top = parts.iter().position(|p| p.is_top()).unwrap();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(parts[i].block_count()));
    let mut mu = vec![0i64; n];
    // Σ_{π <= σ <= 1} μ(σ, 1) = δ(π, 1), processed from the top down.
    for &i in order.iter().rev() {
        if i == top {
            mu[i] = 1;
            continue;
        }
        let above: i64 = (0..n)
            .filter(|&j| j != i && parts[i].leq(&parts[j]).unwrap())
            .map(|j| mu[j])
            .sum();
        mu[i] = -above;
    }
    mu
}
