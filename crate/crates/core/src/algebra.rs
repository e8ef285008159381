//! The generator algebra: creation/annihilation words, their normal forms,
//! exact linear combinations, the adjoint and the diagonal expectation.
//!
//! Every product of generators reduces to zero or to a pair `L_α L_β*` with
//! `r(α) = r(β)`, stored as a [`Monomial`]. Reduction uses the creation and
//! annihilation action on the path basis:
//!
//! * `L_{w1} L_{w2} = L_{w1 w2}` when admissible, zero otherwise;
//! * `L_w* L_{w'}` is `L_h` if `w' = w h`, `L_h*` if `w = w' h`, and zero when
//!   neither path is a prefix of the other;
//! * vertex letters are projections.
//!
//! Under [`SemanticsMode::PaperRelations`] the relation `L_e L_e* = L_{s(e)}`
//! is also applied, which cancels common final edges of `α` and `β`. Under
//! [`SemanticsMode::FockVacuum`] it is not, and the normal form is the one
//! realised by the operators on `l²` of the path space.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Graph, Path, VertexId};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemanticsMode {
    /// Both `L_w* L_w = L_{r(w)}` and `L_w L_w* = L_{s(w)}` are rewriting rules.
    PaperRelations,
    /// Only the operator action on basis vectors; `L_w L_w*` stays a subprojection.
    FockVacuum,
}

impl SemanticsMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SemanticsMode::PaperRelations => "paper",
            SemanticsMode::FockVacuum => "vacuum",
        }
    }
}

impl fmt::Display for SemanticsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SemanticsMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(SemanticsMode::PaperRelations),
            "vacuum" => Ok(SemanticsMode::FockVacuum),
            other => Err(Error::usage(format!(
                "unknown mode '{other}' (expected paper|vacuum)"
            ))),
        }
    }
}

/// A generator `L_w` (`star = false`) or `L_w*` (`star = true`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Letter {
    pub path: Path,
    pub star: bool,
}

impl Letter {
    pub fn new(path: Path, star: bool) -> Letter {
        Letter { path, star }
    }

    pub fn create(path: Path) -> Letter {
        Letter { path, star: false }
    }

    pub fn annihilate(path: Path) -> Letter {
        Letter { path, star: true }
    }

    /// Signed length: `+|w|` for `L_w`, `-|w|` for `L_w*`.
    pub fn step(&self) -> i64 {
        let len = self.path.len() as i64;
        if self.star {
            -len
        } else {
            len
        }
    }

    pub fn adjoint(&self) -> Letter {
        Letter {
            path: self.path.clone(),
            star: !self.star,
        }
    }
}

/// `L_left L_right*` with `r(left) = r(right)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    left: Path,
    right: Path,
}

impl Monomial {
    pub fn left(&self) -> &Path {
        &self.left
    }

    pub fn right(&self) -> &Path {
        &self.right
    }

    /// The vertex `v` when this is the projection `L_v`.
    pub fn vertex(&self) -> Option<VertexId> {
        (self.left.is_trivial() && self.right.is_trivial()).then(|| self.left.source())
    }

    pub fn is_vertex_projection(&self) -> bool {
        self.vertex().is_some()
    }

    /// `|left| - |right|`; additive under nonzero products.
    pub fn degree(&self) -> i64 {
        self.left.len() as i64 - self.right.len() as i64
    }

    /// Pure monomials are `L_v`, `L_w` or `L_w*`.
    pub fn is_pure(&self) -> bool {
        self.left.is_trivial() || self.right.is_trivial()
    }

    pub fn adjoint(&self) -> Monomial {
        Monomial {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    /// Source of the right path: `m · L_v` is `m` for this `v`, zero otherwise.
    pub fn right_source(&self) -> VertexId {
        self.right.source()
    }

    /// Source of the left path: `L_v · m` is `m` for this `v`, zero otherwise.
    pub fn left_source(&self) -> VertexId {
        self.left.source()
    }
}

/// The normal form of a generator word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ReducedMonomial {
    Zero,
    Iso(Monomial),
}

impl ReducedMonomial {
    pub fn into_option(self) -> Option<Monomial> {
        match self {
            ReducedMonomial::Zero => None,
            ReducedMonomial::Iso(m) => Some(m),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ReducedMonomial::Zero)
    }

    pub fn vertex(&self) -> Option<VertexId> {
        match self {
            ReducedMonomial::Zero => None,
            ReducedMonomial::Iso(m) => m.vertex(),
        }
    }
}

/// A graph together with the semantics its words are reduced under.
#[derive(Debug, Clone)]
pub struct Algebra {
    graph: Arc<Graph>,
    mode: SemanticsMode,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.graph.id() == other.graph.id() && self.mode == other.mode
    }
}

impl Eq for Algebra {}

impl Hash for Algebra {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.graph.id().hash(state);
        self.mode.hash(state);
    }
}

impl Algebra {
    pub fn new(graph: impl Into<Arc<Graph>>, mode: SemanticsMode) -> Algebra {
        Algebra {
            graph: graph.into(),
            mode,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn mode(&self) -> SemanticsMode {
        self.mode
    }

    /// The same graph under another semantics.
    pub fn with_mode(&self, mode: SemanticsMode) -> Algebra {
        Algebra {
            graph: Arc::clone(&self.graph),
            mode,
        }
    }

    fn check_path(&self, p: &Path) -> Result<()> {
        self.graph.check_path(p)
    }

    pub fn projection(&self, v: VertexId) -> Monomial {
        let t = self.graph.trivial(v);
        Monomial {
            left: t.clone(),
            right: t,
        }
    }

    pub fn letter_monomial(&self, letter: &Letter) -> Result<Monomial> {
        self.check_path(&letter.path)?;
        let end = self.graph.trivial(letter.path.range());
        Ok(if letter.path.is_trivial() {
            Monomial {
                left: letter.path.clone(),
                right: letter.path.clone(),
            }
        } else if letter.star {
            Monomial {
                left: end,
                right: letter.path.clone(),
            }
        } else {
            Monomial {
                left: letter.path.clone(),
                right: end,
            }
        })
    }

    /// Builds `L_left L_right*`, reduced; zero when the ranges differ.
    pub fn iso(&self, left: Path, right: Path) -> Result<ReducedMonomial> {
        self.check_path(&left)?;
        self.check_path(&right)?;
        if left.range() != right.range() {
            return Ok(ReducedMonomial::Zero);
        }
        let mut m = Monomial { left, right };
        self.cancel(&mut m);
        Ok(ReducedMonomial::Iso(m))
    }

    fn cancel(&self, m: &mut Monomial) {
        if self.mode != SemanticsMode::PaperRelations {
            return;
        }
        while let (Some(a), Some(b)) = (m.left.edges().last(), m.right.edges().last()) {
            if a != b {
                break;
            }
            let src = self.graph.edge_source(*a);
            m.left.pop_last(src);
            m.right.pop_last(src);
        }
    }

    /// The action-level product of two monomials, before any suffix
    /// cancellation.
    fn fock_product(a: &Monomial, b: &Monomial) -> Option<Monomial> {
        if let Some(h) = b.left.strip_prefix(&a.right) {
            Some(Monomial {
                left: a.left.extend_unchecked(&h),
                right: b.right.clone(),
            })
        } else { a.right.strip_prefix(&b.left).map(|h| Monomial {
                left: a.left.clone(),
                right: b.right.extend_unchecked(&h),
            }) }
    }

    /// Multiplies an accumulated normal form by one letter's monomial and
    /// re-normalises.
    fn step(&self, acc: &Monomial, letter: &Monomial) -> Option<Monomial> {
        let mut m = Self::fock_product(acc, letter)?;
        self.cancel(&mut m);
        Some(m)
    }

    /// Normal form of a nonempty generator word, folded left to right.
    pub fn reduce(&self, word: &[Letter]) -> Result<ReducedMonomial> {
        let Some((first, rest)) = word.split_first() else {
            return Err(Error::usage(
                "cannot reduce the empty word; the identity is the sum of vertex projections",
            ));
        };
        let mut acc = self.letter_monomial(first)?;
        for letter in rest {
            let m = self.letter_monomial(letter)?;
            match self.step(&acc, &m) {
                Some(next) => acc = next,
                None => {
                    for later in word {
                        self.check_path(&later.path)?;
                    }
                    return Ok(ReducedMonomial::Zero);
                }
            }
        }
        Ok(ReducedMonomial::Iso(acc))
    }

    /// `a · b` for normal forms, evaluated as the word `[.., L_{b.left}, L_{b.right}*]`.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<Monomial> {
        let end = self.graph.trivial(b.left.range());
        let create = Monomial {
            left: b.left.clone(),
            right: end.clone(),
        };
        let annihilate = Monomial {
            left: end,
            right: b.right.clone(),
        };
        let acc = self.step(a, &create)?;
        self.step(&acc, &annihilate)
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        let g = &self.graph;
        match (m.left.is_trivial(), m.right.is_trivial()) {
            (true, true) => format!("P({})", g.vertex_name(m.left.source())),
            (false, true) => format!("L({})", g.render_path(&m.left)),
            (true, false) => format!("L*({})", g.render_path(&m.right)),
            (false, false) => format!(
                "L({})L*({})",
                g.render_path(&m.left),
                g.render_path(&m.right)
            ),
        }
    }

    pub fn zero(&self) -> Element {
        Element {
            alg: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// `Σ_v L_v`.
    pub fn one(&self) -> Element {
        let terms = self
            .graph
            .vertex_ids()
            .map(|v| (self.projection(v), Scalar::one()))
            .collect();
        Element {
            alg: self.clone(),
            terms,
        }
    }

    pub fn vertex(&self, v: VertexId) -> Element {
        self.monomial(self.projection(v))
    }

    pub fn monomial(&self, m: Monomial) -> Element {
        let mut terms = BTreeMap::new();
        terms.insert(m, Scalar::one());
        Element {
            alg: self.clone(),
            terms,
        }
    }

    pub fn scalar(&self, c: Scalar) -> Element {
        self.one().scale(&c)
    }

    pub fn letter(&self, letter: &Letter) -> Result<Element> {
        Ok(self.monomial(self.letter_monomial(letter)?))
    }

    pub fn create(&self, p: &Path) -> Result<Element> {
        self.letter(&Letter::create(p.clone()))
    }

    pub fn annihilate(&self, p: &Path) -> Result<Element> {
        self.letter(&Letter::annihilate(p.clone()))
    }

    /// `L_w + L_w*`.
    pub fn symmetric(&self, p: &Path) -> Result<Element> {
        self.create(p)?.add(&self.annihilate(p)?)
    }

    /// The reduced product of a word, as an element (zero when it vanishes).
    pub fn word(&self, word: &[Letter]) -> Result<Element> {
        Ok(match self.reduce(word)? {
            ReducedMonomial::Zero => self.zero(),
            ReducedMonomial::Iso(m) => self.monomial(m),
        })
    }

    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Element {
        let mut e = self.zero();
        for (m, c) in terms {
            e.add_term(m, &c);
        }
        e
    }
}

/// A finite linear combination of normal-form monomials over one algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    alg: Algebra,
    terms: BTreeMap<Monomial, Scalar>,
}

/// `a = a_d + a_(*) + a_(non-*)` together with its support sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportDecomposition {
    pub diagonal: Element,
    pub starred: Element,
    pub unstarred: Element,
    pub vertices: BTreeSet<VertexId>,
    pub star_paths: BTreeSet<Path>,
    pub nonstar_paths: BTreeSet<Path>,
}

impl Element {
    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Coefficient of the vertex projection `L_v`.
    pub fn vertex_coefficient(&self, v: VertexId) -> Scalar {
        self.coefficient(&self.alg.projection(v))
    }

    /// Whether every term is a vertex projection, i.e. the element lies in `D_G`.
    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(Monomial::is_vertex_projection)
    }

    /// The single monomial of a one-term element with coefficient 1.
    pub fn as_monomial(&self) -> Option<&Monomial> {
        match self.terms.iter().next() {
            Some((m, c)) if self.terms.len() == 1 && c.is_one() => Some(m),
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Element) -> Result<()> {
        if self.alg != other.alg {
            return Err(Error::usage(
                "elements belong to different algebra contexts",
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        let mut out = self.alg.zero();
        if c.is_zero() {
            return out;
        }
        for (m, x) in &self.terms {
            out.terms.insert(m.clone(), x * c);
        }
        out
    }

    /// Bilinear product.
    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        let mut out = self.alg.zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some(m) = self.alg.mul_monomials(m1, m2) {
                    out.add_term(m, &(c1 * c2));
                }
            }
        }
        Ok(out)
    }

    /// `self^n` for `n >= 1`.
    pub fn pow(&self, n: usize) -> Result<Element> {
        if n == 0 {
            return Ok(self.alg.one());
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn adjoint(&self) -> Element {
        let mut out = self.alg.zero();
        for (m, c) in &self.terms {
            out.terms.insert(m.adjoint(), c.conj());
        }
        out
    }

    pub fn is_self_adjoint(&self) -> bool {
        *self == self.adjoint()
    }

    /// The conditional expectation onto `D_G`: keeps the vertex-projection terms.
    pub fn expectation(&self) -> Element {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.is_vertex_projection())
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Element {
            alg: self.alg.clone(),
            terms,
        }
    }

    /// Splits a Fourier expansion into diagonal, paired and unpaired parts.
    pub fn support_decompose(&self) -> Result<SupportDecomposition> {
        let mut diagonal = self.alg.zero();
        let mut created: BTreeMap<Path, Scalar> = BTreeMap::new();
        let mut annihilated: BTreeMap<Path, Scalar> = BTreeMap::new();
        let mut vertices = BTreeSet::new();
        for (m, c) in &self.terms {
            if let Some(v) = m.vertex() {
                vertices.insert(v);
                diagonal.add_term(m.clone(), c);
            } else if m.right.is_trivial() {
                created.insert(m.left.clone(), c.clone());
            } else if m.left.is_trivial() {
                annihilated.insert(m.right.clone(), c.clone());
            } else {
                return Err(Error::NotAFourierExpansion(self.alg.render_monomial(m)));
            }
        }
        let mut starred = self.alg.zero();
        let mut unstarred = self.alg.zero();
        let mut star_paths = BTreeSet::new();
        let mut nonstar_paths = BTreeSet::new();
        let paths: BTreeSet<&Path> = created.keys().chain(annihilated.keys()).collect();
        for p in paths {
            let both = created.contains_key(p) && annihilated.contains_key(p);
            let target = if both { &mut starred } else { &mut unstarred };
            if let Some(c) = created.get(p) {
                target.add_term(self.alg.letter_monomial(&Letter::create(p.clone()))?, c);
            }
            if let Some(c) = annihilated.get(p) {
                target.add_term(self.alg.letter_monomial(&Letter::annihilate(p.clone()))?, c);
            }
            if both {
                star_paths.insert(p.clone());
            } else {
                nonstar_paths.insert(p.clone());
            }
        }
        Ok(SupportDecomposition {
            diagonal,
            starred,
            unstarred,
            vertices,
            star_paths,
            nonstar_paths,
        })
    }

    /// `FP(G:a)`: the finite paths `w` with `L_w` or `L_w*` in the support.
    pub fn finite_path_support(&self) -> Result<BTreeSet<Path>> {
        let d = self.support_decompose()?;
        Ok(d.star_paths.into_iter().chain(d.nonstar_paths).collect())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let atom = self.alg.render_monomial(m);
            let negative = c.is_negative_real();
            let magnitude = if negative { -c } else { c.clone() };
            match (i, negative) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                (_, false) => f.write_str(" + ")?,
                (_, true) => f.write_str(" - ")?,
            }
            if magnitude.is_one() {
                f.write_str(&atom)?;
            } else {
                write!(f, "{magnitude}*{atom}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element[{}]({self})", self.alg.mode)
    }
}
