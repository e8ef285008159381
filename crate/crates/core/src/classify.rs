//! Distributional classifiers over `D_G`: freeness, semicircularity,
//! evenness and R-diagonality, all decided up to a finite order.

use std::cell::Cell;
use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use crate::algebra::{Algebra, Element, SemanticsMode};
use crate::cumulant::MomentFunctional;
use crate::error::{Error, Result};
use crate::graph::{diagram_distinct, Path};
use crate::scalar::Scalar;

/// Cap on the number of cumulants a freeness check may evaluate.
pub const MAX_FREE_TUPLES: u64 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CumulantEntry {
    pub n: usize,
    pub pattern: Option<String>,
    /// Rendered arguments when they are not all the subject itself.
    pub factors: Vec<String>,
    pub value: Element,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentEntry {
    pub n: usize,
    pub value: Element,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub description: String,
    pub n: Option<usize>,
    pub pattern: Option<String>,
    pub factors: Vec<String>,
    pub value: Option<Element>,
}

impl Witness {
    fn note(description: impl Into<String>) -> Witness {
        Witness {
            description: description.into(),
            n: None,
            pattern: None,
            factors: Vec::new(),
            value: None,
        }
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("description".into(), json!(self.description));
        if let Some(n) = self.n {
            m.insert("n".into(), json!(n));
        }
        if let Some(p) = &self.pattern {
            m.insert("pattern".into(), json!(p));
        }
        if !self.factors.is_empty() {
            m.insert("factors".into(), json!(self.factors));
        }
        if let Some(v) = &self.value {
            m.insert("value".into(), json!(v.to_string()));
        }
        Value::Object(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(Witness),
    Indeterminate(String),
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail(_) => "fail",
            Verdict::Indeterminate(_) => "indeterminate",
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub subject: String,
    pub mode: SemanticsMode,
    pub n_max: usize,
    pub cumulants: Vec<CumulantEntry>,
    pub moments: Vec<MomentEntry>,
    /// A second, symmetrized witness found after a freeness failure.
    pub symmetric_witness: Option<Witness>,
    pub verdict: Verdict,
}

impl ClassificationReport {
    fn new(subject: String, mode: SemanticsMode, n_max: usize) -> ClassificationReport {
        ClassificationReport {
            subject,
            mode,
            n_max,
            cumulants: Vec::new(),
            moments: Vec::new(),
            symmetric_witness: None,
            verdict: Verdict::Pass,
        }
    }

    /// The cumulant recorded for order `n` and the given pattern, if any.
    pub fn cumulant(&self, n: usize, pattern: Option<&str>) -> Option<&Element> {
        self.cumulants
            .iter()
            .find(|c| c.n == n && c.pattern.as_deref() == pattern)
            .map(|c| &c.value)
    }

    pub fn moment(&self, n: usize) -> Option<&Element> {
        self.moments.iter().find(|m| m.n == n).map(|m| &m.value)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("subject".into(), json!(self.subject));
        m.insert("mode".into(), json!(self.mode.as_str()));
        m.insert("n_max".into(), json!(self.n_max));
        let cumulants: Vec<Value> = self
            .cumulants
            .iter()
            .map(|c| {
                let mut e = Map::new();
                e.insert("n".into(), json!(c.n));
                e.insert("pattern".into(), json!(c.pattern));
                if !c.factors.is_empty() {
                    e.insert("factors".into(), json!(c.factors));
                }
                e.insert("value".into(), json!(c.value.to_string()));
                Value::Object(e)
            })
            .collect();
        m.insert("cumulants".into(), Value::Array(cumulants));
        if !self.moments.is_empty() {
            let moments: Vec<Value> = self
                .moments
                .iter()
                .map(|e| json!({"n": e.n, "value": e.value.to_string()}))
                .collect();
            m.insert("moments".into(), Value::Array(moments));
        }
        m.insert("verdict".into(), json!(self.verdict.as_str()));
        match &self.verdict {
            Verdict::Fail(w) => {
                m.insert("witness".into(), w.to_json());
            }
            Verdict::Indeterminate(reason) => {
                m.insert("reason".into(), json!(reason));
            }
            Verdict::Pass => {}
        }
        if let Some(w) = &self.symmetric_witness {
            m.insert("symmetric_witness".into(), w.to_json());
        }
        Value::Object(m)
    }
}

fn check_subject(alg: &Algebra, a: &Element) -> Result<()> {
    if a.algebra() != alg {
        return Err(Error::usage(
            "element belongs to a different algebra context",
        ));
    }
    Ok(())
}

/// Pass iff `a = a*`, `k_2(a, a) != 0` and every other `k_n(a, ..., a)`
/// with `n <= n_max` vanishes.
pub fn check_semicircular(
    alg: &Algebra,
    a: &Element,
    n_max: usize,
) -> Result<ClassificationReport> {
    check_subject(alg, a)?;
    let mut report = ClassificationReport::new(a.to_string(), alg.mode(), n_max);
    if !a.is_self_adjoint() {
        report.verdict = Verdict::Fail(Witness::note("not self-adjoint"));
        return Ok(report);
    }
    let mf = MomentFunctional::new(alg.clone());
    for n in 1..=n_max {
        let k = mf.trivial_cumulant(a, n)?;
        report.cumulants.push(CumulantEntry {
            n,
            pattern: None,
            factors: Vec::new(),
            value: k,
        });
    }
    let offending = report
        .cumulants
        .iter()
        .find(|c| (c.n == 2) == c.value.is_zero() && c.n <= n_max);
    if let Some(c) = offending {
        let description = if c.n == 2 {
            "k2 vanishes".to_string()
        } else {
            format!("k{} does not vanish", c.n)
        };
        report.verdict = Verdict::Fail(Witness {
            description,
            n: Some(c.n),
            pattern: None,
            factors: Vec::new(),
            value: Some(c.value.clone()),
        });
    } else if n_max < 2 {
        report.verdict = Verdict::Indeterminate("order too small to see k2".into());
    }
    Ok(report)
}

/// Pass iff `a = a*` and every odd moment `E(a^n)`, `n <= n_max`, vanishes.
/// Cumulants are reported alongside.
pub fn check_even(alg: &Algebra, a: &Element, n_max: usize) -> Result<ClassificationReport> {
    check_subject(alg, a)?;
    let mut report = ClassificationReport::new(a.to_string(), alg.mode(), n_max);
    if !a.is_self_adjoint() {
        report.verdict = Verdict::Fail(Witness::note("not self-adjoint"));
        return Ok(report);
    }
    let mf = MomentFunctional::new(alg.clone());
    let mut power = alg.one();
    for n in 1..=n_max {
        power = power.mul(a)?;
        report.moments.push(MomentEntry {
            n,
            value: power.expectation(),
        });
        let k = mf.trivial_cumulant(a, n)?;
        report.cumulants.push(CumulantEntry {
            n,
            pattern: None,
            factors: Vec::new(),
            value: k,
        });
    }
    if let Some(m) = report
        .moments
        .iter()
        .find(|m| m.n % 2 == 1 && !m.value.is_zero())
    {
        report.verdict = Verdict::Fail(Witness {
            description: format!("odd moment E(a^{}) does not vanish", m.n),
            n: Some(m.n),
            pattern: None,
            factors: Vec::new(),
            value: Some(m.value.clone()),
        });
    }
    Ok(report)
}

/// All star patterns of length `n`, as bit masks (bit set = starred),
/// in lexicographic order of their `1`/`*` strings.
fn patterns(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u32..1 << n).map(move |mask| (0..n).map(|i| mask >> (n - 1 - i) & 1 == 1).collect())
}

fn render_pattern(p: &[bool]) -> String {
    p.iter().map(|&s| if s { '*' } else { '1' }).collect()
}

fn is_alternating(p: &[bool]) -> bool {
    p.len().is_multiple_of(2) && p.windows(2).all(|w| w[0] != w[1])
}

/// Nonzero `P_u · x · P_v` over all vertex pairs, without repeats.
fn dilations(alg: &Algebra, x: &Element) -> Result<Vec<Element>> {
    let vertices: Vec<_> = alg.graph().vertex_ids().collect();
    if vertices.len() == 1 {
        return Ok(if x.is_zero() {
            Vec::new()
        } else {
            vec![x.clone()]
        });
    }
    let mut out: Vec<Element> = Vec::new();
    for &u in &vertices {
        let left = alg.vertex(u).mul(x)?;
        if left.is_zero() {
            continue;
        }
        for &v in &vertices {
            let d = left.mul(&alg.vertex(v))?;
            if !d.is_zero() && !out.contains(&d) {
                out.push(d);
            }
        }
    }
    Ok(out)
}

/// Visits every tuple in `choices[0] × ... × choices[n-1]` in lexicographic
/// order until `visit` returns `Some`.
fn for_each_tuple<T>(
    choices: &[Vec<Element>],
    mut visit: impl FnMut(&[Element]) -> Result<Option<T>>,
) -> Result<Option<T>> {
    let n = choices.len();
    if choices.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let mut idx = vec![0usize; n];
    let mut tuple: Vec<Element> = choices.iter().map(|c| c[0].clone()).collect();
    loop {
        if let Some(t) = visit(&tuple)? {
            return Ok(Some(t));
        }
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                tuple[k] = choices[k][idx[k]].clone();
                break;
            }
            idx[k] = 0;
            tuple[k] = choices[k][0].clone();
        }
    }
}

/// For every `n <= n_max` and pattern `(u_1, ..., u_n)`, the cumulants
/// `k_n(x^{u_1}, ..., x^{u_n})` with every slot dilated by vertex
/// projections. Pass iff each nonzero entry has an alternating pattern.
pub fn check_rdiagonal(alg: &Algebra, x: &Element, n_max: usize) -> Result<ClassificationReport> {
    check_subject(alg, x)?;
    let mut report = ClassificationReport::new(x.to_string(), alg.mode(), n_max);
    let mf = MomentFunctional::new(alg.clone());
    let plain = [dilations(alg, x)?, dilations(alg, &x.adjoint())?];
    let undilated = [x.clone(), x.adjoint()];
    for n in 1..=n_max {
        for p in patterns(n) {
            let pattern = render_pattern(&p);
            let choices: Vec<Vec<Element>> = p.iter().map(|&s| plain[s as usize].clone()).collect();
            let _: Option<()> = for_each_tuple(&choices, |tuple| {
                let k = mf.cumulant(tuple)?;
                if !k.is_zero() {
                    let dilated = tuple
                        .iter()
                        .zip(&p)
                        .any(|(t, &s)| t != &undilated[s as usize]);
                    let factors = if dilated {
                        tuple.iter().map(Element::to_string).collect()
                    } else {
                        Vec::new()
                    };
                    report.cumulants.push(CumulantEntry {
                        n,
                        pattern: Some(pattern.clone()),
                        factors,
                        value: k,
                    });
                }
                Ok(None)
            })?;
        }
    }
    if let Some(c) = report
        .cumulants
        .iter()
        .find(|c| !is_alternating(&pattern_bits(c.pattern.as_deref())))
    {
        report.verdict = Verdict::Fail(Witness {
            description: format!("non-alternating cumulant k{} does not vanish", c.n),
            n: Some(c.n),
            pattern: c.pattern.clone(),
            factors: c.factors.clone(),
            value: Some(c.value.clone()),
        });
    }
    Ok(report)
}

fn pattern_bits(p: Option<&str>) -> Vec<bool> {
    p.unwrap_or_default().chars().map(|c| c == '*').collect()
}

/// Reduced products of at most `max_word_len` generators or adjoints, split
/// into vertex dilations, without zero or diagonal members.
pub fn freeness_family(
    alg: &Algebra,
    gens: &[Element],
    max_word_len: usize,
) -> Result<Vec<Element>> {
    let mut letters: Vec<Element> = Vec::new();
    for g in gens {
        check_subject(alg, g)?;
        for x in [g.clone(), g.adjoint()] {
            if !x.is_zero() && !letters.contains(&x) {
                letters.push(x);
            }
        }
    }
    let mut words: Vec<Element> = Vec::new();
    let mut level = letters.clone();
    for len in 1..=max_word_len {
        for w in &level {
            if !words.contains(w) {
                words.push(w.clone());
            }
        }
        if len == max_word_len {
            break;
        }
        let mut next = Vec::new();
        for w in &level {
            for l in &letters {
                let p = w.mul(l)?;
                if !p.is_zero() && !next.contains(&p) {
                    next.push(p);
                }
            }
        }
        level = next;
    }
    let mut family: Vec<Element> = Vec::new();
    for w in &words {
        for d in dilations(alg, w)? {
            if !d.is_diagonal() && !family.contains(&d) {
                family.push(d);
            }
        }
    }
    Ok(family)
}

/// Range of monomial degrees appearing in an element.
fn degree_range(x: &Element) -> (i64, i64) {
    let degrees: Vec<i64> = x.terms().map(|(m, _)| m.degree()).collect();
    (
        degrees.iter().copied().min().unwrap_or(0),
        degrees.iter().copied().max().unwrap_or(0),
    )
}

struct MixedSearch<'a> {
    mf: &'a MomentFunctional,
    family: &'a [Element],
    ranges: Vec<(i64, i64)>,
    split: usize,
    global: (i64, i64),
    evaluated: Cell<u64>,
}

impl MixedSearch<'_> {
    /// First mixed tuple of order `n` with a nonzero cumulant, in lexicographic
    /// order of family indices. Tuples whose degrees cannot sum to zero are
    /// skipped; their cumulants vanish term by term.
    fn first_nonzero(&self, n: usize) -> Result<Option<(Vec<usize>, Element)>> {
        let mut idx = Vec::with_capacity(n);
        self.descend(n, &mut idx, (0, 0))
    }

    fn descend(
        &self,
        n: usize,
        idx: &mut Vec<usize>,
        partial: (i64, i64),
    ) -> Result<Option<(Vec<usize>, Element)>> {
        let rem = (n - idx.len()) as i64;
        if partial.0 + rem * self.global.0 > 0 || partial.1 + rem * self.global.1 < 0 {
            return Ok(None);
        }
        if rem == 0 {
            let left = idx.iter().any(|&i| i < self.split);
            let right = idx.iter().any(|&i| i >= self.split);
            if !(left && right) {
                return Ok(None);
            }
            self.evaluated.set(self.evaluated.get() + 1);
            if self.evaluated.get() > MAX_FREE_TUPLES {
                return Err(Error::resource(format!(
                    "freeness check exceeded {MAX_FREE_TUPLES} cumulant evaluations; lower the order or word length"
                )));
            }
            let factors: Vec<Element> = idx.iter().map(|&i| self.family[i].clone()).collect();
            let k = self.mf.cumulant(&factors)?;
            return Ok((!k.is_zero()).then(|| (idx.clone(), k)));
        }
        for i in 0..self.family.len() {
            let (lo, hi) = self.ranges[i];
            idx.push(i);
            let found = self.descend(n, idx, (partial.0 + lo, partial.1 + hi))?;
            idx.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

fn mixed_search<'a>(
    mf: &'a MomentFunctional,
    family: &'a [Element],
    split: usize,
) -> MixedSearch<'a> {
    let ranges: Vec<(i64, i64)> = family.iter().map(degree_range).collect();
    let global = (
        ranges.iter().map(|r| r.0).min().unwrap_or(0),
        ranges.iter().map(|r| r.1).max().unwrap_or(0),
    );
    MixedSearch {
        mf,
        family,
        ranges,
        split,
        global,
        evaluated: Cell::new(0),
    }
}

fn render_list(xs: &[Element]) -> String {
    format!(
        "{{{}}}",
        xs.iter()
            .map(Element::to_string)
            .collect::<Vec<_>>()
            .join("; ")
    )
}

/// Mixed cumulants of orders `2..=n_max` between the families generated by
/// `gens_a` and `gens_b`. Pass means every one of them vanished; it is a
/// statement up to the given order and word length only.
pub fn check_free(
    alg: &Algebra,
    gens_a: &[Element],
    gens_b: &[Element],
    n_max: usize,
    max_word_len: usize,
) -> Result<ClassificationReport> {
    let subject = format!("{} vs {}", render_list(gens_a), render_list(gens_b));
    let mut report = ClassificationReport::new(subject, alg.mode(), n_max);
    let fam_a = freeness_family(alg, gens_a, max_word_len)?;
    let fam_b = freeness_family(alg, gens_b, max_word_len)?;
    if fam_a.is_empty() || fam_b.is_empty() || n_max < 2 {
        report.verdict = Verdict::Indeterminate("no mixed cumulants".into());
        return Ok(report);
    }
    let split = fam_a.len();
    let family: Vec<Element> = fam_a.into_iter().chain(fam_b).collect();
    let mf = MomentFunctional::new(alg.clone());
    let search = mixed_search(&mf, &family, split);
    for n in 2..=n_max {
        if let Some((idx, k)) = search.first_nonzero(n)? {
            let factors: Vec<String> = idx.iter().map(|&i| family[i].to_string()).collect();
            report.cumulants.push(CumulantEntry {
                n,
                pattern: None,
                factors: factors.clone(),
                value: k.clone(),
            });
            report.verdict = Verdict::Fail(Witness {
                description: format!("mixed cumulant of order {n} does not vanish"),
                n: Some(n),
                pattern: None,
                factors,
                value: Some(k),
            });
            report.symmetric_witness = symmetric_witness(&mf, &family, split, n)?;
            return Ok(report);
        }
    }
    Ok(report)
}

/// After a failure, looks for a nonzero mixed cumulant of order `n` among
/// the self-adjoint parts `x + x*` of the family members.
fn symmetric_witness(
    mf: &MomentFunctional,
    family: &[Element],
    split: usize,
    n: usize,
) -> Result<Option<Witness>> {
    let mut sym: Vec<Element> = Vec::new();
    let mut sym_split = 0;
    for (i, x) in family.iter().enumerate() {
        let s = x.add(&x.adjoint())?;
        let side = if i < split {
            &sym[..]
        } else {
            &sym[sym_split..]
        };
        if !s.is_zero() && !s.is_diagonal() && !side.contains(&s) {
            sym.push(s);
        }
        if i + 1 == split {
            sym_split = sym.len();
        }
    }
    let search = mixed_search(mf, &sym, sym_split);
    Ok(search.first_nonzero(n)?.map(|(idx, k)| Witness {
        description: format!("mixed cumulant of self-adjoint parts of order {n}"),
        n: Some(n),
        pattern: None,
        factors: idx.iter().map(|&i| sym[i].to_string()).collect(),
        value: Some(k),
    }))
}

/// Freeness predicted from the diagrams of two finite paths.
pub fn predicted_free(w1: &Path, w2: &Path) -> Result<bool> {
    diagram_distinct(w1, w2)
}

/// Freeness predicted from supports: every pair across `FP(G:a) × FP(G:b)`
/// must be diagram-distinct.
pub fn predicted_free_support(a: &Element, b: &Element) -> Result<bool> {
    let fa: BTreeSet<Path> = a.finite_path_support()?;
    let fb: BTreeSet<Path> = b.finite_path_support()?;
    for p in &fa {
        for q in &fb {
            if !diagram_distinct(p, q)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `T = Σ_e (L_e + L_e*)`.
pub fn generating_operator(alg: &Algebra) -> Result<Element> {
    let g = alg.graph();
    if g.edge_count() == 0 {
        return Err(Error::domain(
            "the generating operator needs at least one edge",
        ));
    }
    let mut t = alg.zero();
    for e in g.edge_ids() {
        t = t.add(&alg.symmetric(&g.edge_path(e))?)?;
    }
    Ok(t)
}

/// For `a = Σ_j p_j (L_{l_j} + L_{l_j}*)` over loops `l_j`, the stated value
/// `Σ_j 2 p_j⁴ L_{v_j}` next to the computed `k_2(a, a)`.
pub fn weighted_loop_k2(alg: &Algebra, loops: &[(Path, Scalar)]) -> Result<(Element, Element)> {
    let mut a = alg.zero();
    let mut stated = alg.zero();
    for (l, p) in loops {
        if !l.is_loop() {
            return Err(Error::domain(format!(
                "{} is not a loop",
                alg.graph().render_path(l)
            )));
        }
        a = a.add(&alg.symmetric(l)?.scale(p))?;
        let p4 = &(p * p) * &(p * p);
        stated = stated.add(&alg.vertex(l.source()).scale(&(&Scalar::from_int(2) * &p4)))?;
    }
    let computed = MomentFunctional::new(alg.clone()).cumulant(&[a.clone(), a])?;
    Ok((stated, computed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::standard::*;
    use SemanticsMode::*;

    fn path(alg: &Algebra, s: &str) -> Path {
        alg.graph().parse_path(s).unwrap()
    }

    #[test]
    fn vacuum_loop_is_semicircular() {
        let alg = Algebra::new(one_loop(), FockVacuum);
        let a = alg.symmetric(&path(&alg, "l")).unwrap();
        let r = check_semicircular(&alg, &a, 8).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let v = alg.vertex(alg.graph().vertex("v").unwrap());
        assert_eq!(r.cumulant(2, None), Some(&v));
    }

    #[test]
    fn paper_loop_reports_k2_and_higher_terms() {
        let alg = Algebra::new(one_loop(), PaperRelations);
        let a = alg.symmetric(&path(&alg, "l")).unwrap();
        let r = check_semicircular(&alg, &a, 4).unwrap();
        assert_eq!(r.cumulant(2, None).unwrap().to_string(), "2*P(v)");
        assert_eq!(r.cumulant(4, None).unwrap().to_string(), "-2*P(v)");
        assert!(matches!(r.verdict, Verdict::Fail(ref w) if w.n == Some(4)));
    }

    #[test]
    fn creation_alone_is_not_semicircular() {
        let alg = Algebra::new(single_edge(), PaperRelations);
        let r = check_semicircular(&alg, &alg.create(&path(&alg, "e")).unwrap(), 4).unwrap();
        assert_eq!(r.verdict, Verdict::Fail(Witness::note("not self-adjoint")));
        assert!(r.cumulants.is_empty());
    }

    #[test]
    fn evenness() {
        for mode in [PaperRelations, FockVacuum] {
            let alg = Algebra::new(single_edge(), mode);
            let a = alg.symmetric(&path(&alg, "e")).unwrap();
            let r = check_even(&alg, &a, 7).unwrap();
            assert!(r.verdict.is_pass());
            let k2 = r.cumulant(2, None).unwrap();
            let (v1, v2) = (
                alg.graph().vertex("v1").unwrap(),
                alg.graph().vertex("v2").unwrap(),
            );
            if mode == PaperRelations {
                assert_eq!(k2.vertex_coefficient(v1), k2.vertex_coefficient(v2));
            }
        }
        let alg = Algebra::new(single_edge(), PaperRelations);
        let v1 = alg.vertex(alg.graph().vertex("v1").unwrap());
        let a = alg.symmetric(&path(&alg, "e")).unwrap().add(&v1).unwrap();
        let r = check_even(&alg, &a, 3).unwrap();
        assert!(matches!(r.verdict, Verdict::Fail(ref w) if w.n == Some(1)));
    }

    #[test]
    fn rdiagonal_creations() {
        for mode in [PaperRelations, FockVacuum] {
            let alg = Algebra::new(single_edge(), mode);
            let r = check_rdiagonal(&alg, &alg.create(&path(&alg, "e")).unwrap(), 6).unwrap();
            assert!(r.verdict.is_pass(), "{mode}: {:?}", r.verdict);
            assert!(r.cumulants.iter().any(|c| c.n == 2));
        }
        let alg = Algebra::new(one_loop(), PaperRelations);
        let r = check_rdiagonal(&alg, &alg.create(&path(&alg, "l")).unwrap(), 6).unwrap();
        assert!(r.verdict.is_pass());
        let v = alg.vertex(alg.graph().vertex("v").unwrap());
        let r = check_rdiagonal(&alg, &v, 2).unwrap();
        assert!(matches!(r.verdict, Verdict::Fail(ref w) if w.n == Some(1)));
    }

    #[test]
    fn freeness_of_distinct_loops() {
        let alg = Algebra::new(flower(), FockVacuum);
        let a = alg.create(&path(&alg, "e1")).unwrap();
        let b = alg.create(&path(&alg, "e2")).unwrap();
        let r = check_free(&alg, &[a], &[b], 4, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn powers_of_one_loop_are_not_free() {
        let alg = Algebra::new(one_loop(), PaperRelations);
        let a = alg.create(&path(&alg, "l.l")).unwrap();
        let b = alg.create(&path(&alg, "l.l.l")).unwrap();
        let r = check_free(&alg, &[a], &[b], 6, 3).unwrap();
        assert!(matches!(r.verdict, Verdict::Fail(ref w) if w.n == Some(2)));
        let sym = r.symmetric_witness.unwrap();
        assert_eq!(sym.value.unwrap().to_string(), "2*P(v)");
        assert!(sym
            .factors
            .iter()
            .all(|f| f == "L*(l.l.l.l.l.l) + L(l.l.l.l.l.l)"));
    }

    #[test]
    fn empty_side_is_indeterminate() {
        let alg = Algebra::new(one_loop(), PaperRelations);
        let a = alg.create(&path(&alg, "l")).unwrap();
        let r = check_free(&alg, &[a], &[], 6, 3).unwrap();
        assert_eq!(
            r.verdict,
            Verdict::Indeterminate("no mixed cumulants".into())
        );
        assert_eq!(r.to_json()["reason"], "no mixed cumulants");
    }

    #[test]
    fn predictions() {
        let g = flower();
        let alg = Algebra::new(g, PaperRelations);
        assert!(predicted_free(&path(&alg, "e1"), &path(&alg, "e2")).unwrap());
        let alg = Algebra::new(one_loop(), PaperRelations);
        assert!(!predicted_free(&path(&alg, "l.l"), &path(&alg, "l.l.l")).unwrap());
        let s = alg.symmetric(&path(&alg, "l.l")).unwrap();
        let t = alg.create(&path(&alg, "l.l.l")).unwrap();
        assert!(!predicted_free_support(&s, &t).unwrap());
    }

    #[test]
    fn generating_operators() {
        let alg = Algebra::new(flower(), PaperRelations);
        let t = generating_operator(&alg).unwrap();
        assert_eq!(t.to_string(), "L*(e1) + L*(e2) + L(e1) + L(e2)");
        assert!(t.is_self_adjoint());
        let alg = Algebra::new(circulant(3), PaperRelations);
        assert_eq!(generating_operator(&alg).unwrap().len(), 6);
        let edgeless = Algebra::new(
            crate::graph::Graph::new(["v"], Vec::<(&str, &str, &str)>::new()).unwrap(),
            PaperRelations,
        );
        assert!(matches!(
            generating_operator(&edgeless),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn weighted_loops_show_both_values() {
        let alg = Algebra::new(one_loop(), PaperRelations);
        let (stated, computed) =
            weighted_loop_k2(&alg, &[(path(&alg, "l"), Scalar::ratio(1, 2))]).unwrap();
        assert_eq!(stated.to_string(), "1/8*P(v)");
        assert_eq!(computed.to_string(), "1/2*P(v)");
    }

    #[test]
    fn report_json_shape() {
        let alg = Algebra::new(one_loop(), FockVacuum);
        let a = alg.symmetric(&path(&alg, "l")).unwrap();
        let j = check_semicircular(&alg, &a, 2).unwrap().to_json();
        assert_eq!(j["verdict"], "pass");
        assert_eq!(j["mode"], "vacuum");
        assert_eq!(j["cumulants"][1]["value"], "P(v)");
        assert!(j.get("witness").is_none());
    }
}
