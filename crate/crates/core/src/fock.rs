//! Truncated matrix model of the generators on `l²` of the path space.
//!
//! The basis `{ξ_w}` runs over all paths of length at most `depth`. `L_w`
//! sends `ξ_h` to `ξ_{wh}` when the concatenation is admissible, and `L_w*`
//! sends `ξ_{wh}` to `ξ_h` and every other basis vector to zero. A column
//! whose image would leave the truncation is recorded as truncated rather
//! than silently dropped.
//!
//! This model knows nothing about normal forms, so it serves as an
//! independent check of the vacuum-mode rewriting.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::algebra::{Algebra, Element, Letter, SemanticsMode};
use crate::error::{Error, Result};
use crate::graph::{Graph, Path};
use crate::scalar::Scalar;

/// Largest basis the oracle will build.
pub const MAX_BASIS: usize = 1_000_000;

#[derive(Debug, Clone)]
pub struct FockBasis {
    graph: Arc<Graph>,
    depth: usize,
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
}

pub type Vector = BTreeMap<usize, Scalar>;

impl FockBasis {
    /// Vertices first, then paths by length and edge sequence.
    pub fn new(graph: Arc<Graph>, depth: usize) -> Result<FockBasis> {
        let mut paths: Vec<Path> = graph.vertex_ids().map(|v| graph.trivial(v)).collect();
        let mut frontier: Vec<Path> = Vec::new();
        for len in 1..=depth {
            let next: Vec<Path> = if len == 1 {
                graph.edge_ids().map(|e| graph.edge_path(e)).collect()
            } else {
                let mut next = Vec::new();
                for p in &frontier {
                    for e in graph.edge_ids() {
                        if let Some(q) = p.concat(&graph.edge_path(e))? {
                            next.push(q);
                        }
                    }
                    if paths.len() + next.len() > MAX_BASIS {
                        break;
                    }
                }
                next
            };
            if paths.len() + next.len() > MAX_BASIS {
                return Err(Error::resource(format!(
                    "Fock basis exceeds {MAX_BASIS} paths at depth {len}"
                )));
            }
            paths.extend(next.iter().cloned());
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        let index = paths
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        Ok(FockBasis {
            graph,
            depth,
            paths,
            index,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// The vacuum vector `ξ_v`.
    pub fn vacuum(&self, p: &Path) -> Result<Vector> {
        let i = self
            .index_of(p)
            .ok_or_else(|| Error::usage("path outside the basis"))?;
        Ok([(i, Scalar::one())].into_iter().collect())
    }

    fn check_algebra(&self, alg: &Algebra) -> Result<()> {
        if alg.graph().id() != self.graph.id() {
            return Err(Error::usage(
                "element and basis are built on different graphs",
            ));
        }
        if alg.mode() != SemanticsMode::FockVacuum {
            return Err(Error::usage(
                "the matrix model only represents vacuum-mode elements",
            ));
        }
        Ok(())
    }

    /// Image of `ξ_p` under a single letter; `Err(())` marks truncation.
    fn letter_image(&self, letter: &Letter, p: &Path) -> Result<Option<Path>, ()> {
        let w = &letter.path;
        if w.is_trivial() {
            return Ok((p.source() == w.source()).then(|| p.clone()));
        }
        if letter.star {
            if p.len() < w.len() || p.source() != w.source() || !p.edges().starts_with(w.edges()) {
                return Ok(None);
            }
            Ok(p.strip_prefix(w))
        } else {
            match w.concat(p) {
                Ok(Some(q)) if q.len() <= self.depth => Ok(Some(q)),
                Ok(Some(_)) => Err(()),
                _ => Ok(None),
            }
        }
    }

    /// Applies a letter word (rightmost letter first) to a vector.
    /// Returns the image and whether any truncation occurred.
    pub fn apply_word(&self, word: &[Letter], v: &Vector) -> (Vector, bool) {
        let mut current = v.clone();
        let mut truncated = false;
        for letter in word.iter().rev() {
            let mut next = Vector::new();
            for (i, c) in &current {
                match self.letter_image(letter, &self.paths[*i]) {
                    Ok(Some(q)) => {
                        let j = self.index[&q];
                        let slot = next.entry(j).or_default();
                        *slot += c;
                    }
                    Ok(None) => {}
                    Err(()) => truncated = true,
                }
            }
            next.retain(|_, c| !c.is_zero());
            current = next;
        }
        (current, truncated)
    }

    /// `Σ_v ⟨w ξ_v, ξ_v⟩ L_v` for a letter word, computed letter by letter.
    /// The flag is true when no intermediate vector left the truncation.
    pub fn word_expectation(&self, alg: &Algebra, word: &[Letter]) -> Result<(Element, bool)> {
        self.check_algebra(alg)?;
        let mut out = alg.zero();
        let mut exact = true;
        for v in self.graph.vertex_ids() {
            let start = self.vacuum(&self.graph.trivial(v))?;
            let (image, truncated) = self.apply_word(word, &start);
            exact &= !truncated;
            if let Some(c) = image.get(&self.index[&self.graph.trivial(v)]) {
                out = out.add(&alg.vertex(v).scale(c))?;
            }
        }
        Ok((out, exact))
    }
}

/// A sparse matrix over the basis, with the set of columns whose image was
/// cut off by the truncation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseOperator {
    dim: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
    truncated: BTreeSet<usize>,
}

impl SparseOperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.entries.get(&(row, col)).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Scalar> {
        &self.entries
    }

    pub fn truncated_columns(&self) -> &BTreeSet<usize> {
        &self.truncated
    }

    fn add_entry(&mut self, row: usize, col: usize, c: &Scalar) {
        let slot = self.entries.entry((row, col)).or_default();
        *slot += c;
        if slot.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for ((r, c), x) in &self.entries {
            if let Some(y) = v.get(c) {
                *out.entry(*r).or_default() += &(x * y);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Matrix product; a column of the product is truncated when it reaches
    /// a truncated column of the left factor or is itself truncated on the right.
    pub fn mul(&self, other: &SparseOperator) -> SparseOperator {
        let mut by_row: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for ((r, c), x) in &other.entries {
            by_row.entry(*r).or_default().push((*c, x));
        }
        let mut out = SparseOperator {
            dim: self.dim,
            ..Default::default()
        };
        for ((r, k), x) in &self.entries {
            if let Some(row) = by_row.get(k) {
                for (c, y) in row {
                    out.add_entry(*r, *c, &(x * *y));
                }
            }
        }
        out.truncated = other.truncated.clone();
        for (k, c) in other.entries.keys() {
            if self.truncated.contains(k) {
                out.truncated.insert(*c);
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> SparseOperator {
        SparseOperator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|((r, c), x)| ((*c, *r), x.conj()))
                .collect(),
            truncated: BTreeSet::new(),
        }
    }
}

/// The matrix of a vacuum-mode element.
pub fn represent(basis: &FockBasis, a: &Element) -> Result<SparseOperator> {
    basis.check_algebra(a.algebra())?;
    let mut op = SparseOperator {
        dim: basis.len(),
        ..Default::default()
    };
    for (m, c) in a.terms() {
        for (col, p) in basis.paths.iter().enumerate() {
            let Some(h) = p.strip_prefix(m.right()) else {
                continue;
            };
            match m.left().concat(&h)? {
                Some(q) if q.len() <= basis.depth => op.add_entry(basis.index[&q], col, c),
                Some(_) => {
                    op.truncated.insert(col);
                }
                None => {}
            }
        }
    }
    Ok(op)
}

/// `Σ_v ⟨a ξ_v, ξ_v⟩ L_v`, with a flag that is true when no monomial of `a`
/// is longer than the truncation depth.
pub fn numeric_expectation(basis: &FockBasis, a: &Element) -> Result<(Element, bool)> {
    let op = represent(basis, a)?;
    let alg = a.algebra();
    let mut out = alg.zero();
    for v in basis.graph.vertex_ids() {
        let i = basis.index[&basis.graph.trivial(v)];
        let c = op.get(i, i);
        if !c.is_zero() {
            out = out.add(&alg.vertex(v).scale(&c))?;
        }
    }
    let valid = a
        .terms()
        .all(|(m, _)| m.left().len() + m.right().len() <= basis.depth);
    Ok((out, valid))
}

/// `Σ_v ⟨a^n ξ_v, ξ_v⟩ L_v`, applying the matrix of `a` n times; the flag
/// is true when `n` times the longest monomial fits in the depth.
pub fn power_expectation(basis: &FockBasis, a: &Element, n: usize) -> Result<(Element, bool)> {
    let op = represent(basis, a)?;
    let alg = a.algebra();
    let mut out = alg.zero();
    for v in basis.graph.vertex_ids() {
        let i = basis.index[&basis.graph.trivial(v)];
        let mut vec: Vector = [(i, Scalar::one())].into_iter().collect();
        for _ in 0..n {
            vec = op.apply(&vec);
        }
        if let Some(c) = vec.get(&i) {
            out = out.add(&alg.vertex(v).scale(c))?;
        }
    }
    let longest = a
        .terms()
        .map(|(m, _)| m.left().len().max(m.right().len()))
        .max()
        .unwrap_or(0);
    Ok((out, n * longest <= basis.depth))
}
