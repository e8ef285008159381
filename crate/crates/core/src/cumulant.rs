//! Operator-valued moments and free cumulants with values in `D_G`.
//!
//! For a noncrossing partition `π` the partitioned moment `Ê(π)` is evaluated
//! by peeling interval blocks: the expectation of an interval block is a
//! diagonal element `d`, which is multiplied onto the right of the factor
//! just before the block (or kept as a left multiplier when the block opens
//! the sequence). The cumulant is the Möbius sum
//! `k_n = Σ_{π ∈ NC(n)} Ê(π) · μ(π, 1_n)`, and `k_π` uses the same nesting
//! with `k_|V|` in place of `E` on each block.
//!
//! Cumulants of elements are computed by expanding every factor into its
//! monomials. For a tuple of monomials each `Ê(π)` is zero or a single vertex
//! projection, and a block can only contribute when the degrees of its
//! factors sum to zero, which prunes most partitions before any rewriting.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use crate::algebra::{Algebra, Element, Letter, Monomial};
use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::ncpartition::{self, NoncrossingPartition, MAX_MOBIUS};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    /// Multiply onto the right of the factor at this position.
    After(usize),
    /// Hold as a left multiplier of the remaining sequence.
    Front,
    /// The outermost remaining block; its value closes the evaluation.
    Final,
}

#[derive(Debug, Clone)]
struct Step {
    positions: Vec<usize>,
    target: Target,
}

/// The order in which a partition's blocks are peeled.
#[derive(Debug, Clone)]
struct Plan {
    steps: Vec<Step>,
}

impl Plan {
    fn build(pi: &NoncrossingPartition) -> Plan {
        let mut blocks: Vec<Vec<usize>> = pi
            .blocks()
            .into_iter()
            .map(|b| b.into_iter().map(|i| i - 1).collect())
            .collect();
        let mut remaining: Vec<usize> = (0..pi.n()).collect();
        let mut steps = Vec::with_capacity(blocks.len());
        while blocks.len() > 1 {
            let (bi, start) = blocks
                .iter()
                .enumerate()
                .find_map(|(bi, block)| {
                    let start = remaining.iter().position(|&x| x == block[0])?;
                    let contiguous = remaining[start..].iter().take(block.len()).eq(block.iter());
                    contiguous.then_some((bi, start))
                })
                .expect("a noncrossing partition always has an interval block");
            let block = blocks.remove(bi);
            let target = if start > 0 {
                Target::After(remaining[start - 1])
            } else {
                Target::Front
            };
            remaining.drain(start..start + block.len());
            steps.push(Step {
                positions: block,
                target,
            });
        }
        steps.push(Step {
            positions: blocks.pop().unwrap_or_default(),
            target: Target::Final,
        });
        Plan { steps }
    }
}

/// `NC(n)` with its Möbius values and evaluation plans.
struct Table {
    partitions: Arc<Vec<NoncrossingPartition>>,
    mobius: Arc<Vec<i64>>,
    plans: Vec<Plan>,
}

static TABLES: [OnceLock<Arc<Table>>; MAX_MOBIUS + 1] = [const { OnceLock::new() }; MAX_MOBIUS + 1];

fn table(n: usize) -> Result<Arc<Table>> {
    if n == 0 {
        return Err(Error::usage("at least one factor is required"));
    }
    if n > MAX_MOBIUS {
        return Err(Error::resource(format!(
            "cumulants are computed for n <= {MAX_MOBIUS}, got n = {n}"
        )));
    }
    if let Some(t) = TABLES[n].get() {
        return Ok(Arc::clone(t));
    }
    let partitions = ncpartition::enumerate_nc(n)?;
    let mobius = ncpartition::mobius_table(n)?;
    let plans = partitions.iter().map(Plan::build).collect();
    let t = TABLES[n].get_or_init(|| {
        Arc::new(Table {
            partitions,
            mobius,
            plans,
        })
    });
    Ok(Arc::clone(t))
}

/// A diagonal value `Σ_v c_v L_v` with integer coefficients.
type Weights = BTreeMap<VertexId, i64>;

fn add_weights(acc: &mut Weights, w: &Weights, scale: i64) {
    if scale == 0 {
        return;
    }
    for (v, c) in w {
        let slot = acc.entry(*v).or_insert(0);
        *slot += c * scale;
        if *slot == 0 {
            acc.remove(v);
        }
    }
}

fn product_weights(a: &Weights, b: &Weights) -> Weights {
    a.iter()
        .filter_map(|(v, x)| b.get(v).map(|y| (*v, x * y)))
        .filter(|(_, c)| *c != 0)
        .collect()
}

/// Moments and cumulants with values in `D_G`, over one algebra context.
#[derive(Debug, Clone)]
pub struct MomentFunctional {
    alg: Algebra,
}

/// Partitions under which a generator word has nonzero nested expectation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectedSet {
    pub word: Vec<Letter>,
    pub partitions: Vec<NoncrossingPartition>,
}

impl MomentFunctional {
    pub fn new(alg: Algebra) -> MomentFunctional {
        MomentFunctional { alg }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    fn check_factors(&self, factors: &[Element]) -> Result<()> {
        if factors.is_empty() {
            return Err(Error::usage("at least one factor is required"));
        }
        if let Some(bad) = factors.iter().find(|f| f.algebra() != &self.alg) {
            return Err(Error::usage(format!(
                "factor {bad} belongs to a different algebra context"
            )));
        }
        Ok(())
    }

    /// `E(a_1 a_2 ... a_n)`.
    pub fn moment(&self, factors: &[Element]) -> Result<Element> {
        self.check_factors(factors)?;
        let mut acc = factors[0].clone();
        for f in &factors[1..] {
            acc = acc.mul(f)?;
        }
        Ok(acc.expectation())
    }

    /// `Ê(π)(a_1, ..., a_n)` by nested evaluation on elements.
    pub fn partitioned_moment(
        &self,
        pi: &NoncrossingPartition,
        factors: &[Element],
    ) -> Result<Element> {
        self.check_factors(factors)?;
        if pi.n() != factors.len() {
            return Err(Error::usage(format!(
                "partition of {} points applied to {} factors",
                pi.n(),
                factors.len()
            )));
        }
        let plan = if pi.n() <= MAX_MOBIUS {
            let t = table(pi.n())?;
            t.plans[ncpartition::index_of(pi)?].clone()
        } else {
            Plan::build(pi)
        };
        self.nested(&plan, factors, |block| self.moment(block))
    }

    fn nested(
        &self,
        plan: &Plan,
        factors: &[Element],
        mut block_value: impl FnMut(&[Element]) -> Result<Element>,
    ) -> Result<Element> {
        let mut factors = factors.to_vec();
        let mut front: Option<Element> = None;
        for step in &plan.steps {
            let block: Vec<Element> = step.positions.iter().map(|&i| factors[i].clone()).collect();
            let d = block_value(&block)?;
            match step.target {
                Target::After(j) => factors[j] = factors[j].mul(&d)?,
                Target::Front => {
                    front = Some(match front {
                        Some(f) => f.mul(&d)?,
                        None => d,
                    })
                }
                Target::Final => {
                    return match front {
                        Some(f) => f.mul(&d),
                        None => Ok(d),
                    }
                }
            }
        }
        unreachable!("every plan ends with a final step")
    }

    /// `k_n(a_1, ..., a_n) = Σ_π Ê(π)(a_1, ..., a_n) · μ(π, 1_n)`.
    pub fn cumulant(&self, factors: &[Element]) -> Result<Element> {
        self.check_factors(factors)?;
        let t = table(factors.len())?;
        self.expand(factors, |monos| Ok(self.cumulant_kernel(&t, monos)))
    }

    /// `k_n(a, ..., a)`.
    pub fn trivial_cumulant(&self, a: &Element, n: usize) -> Result<Element> {
        self.cumulant(&vec![a.clone(); n])
    }

    /// `k_π(a_1, ..., a_n)`: nested evaluation with block cumulants.
    pub fn partitioned_cumulant(
        &self,
        pi: &NoncrossingPartition,
        factors: &[Element],
    ) -> Result<Element> {
        self.check_factors(factors)?;
        if pi.n() != factors.len() {
            return Err(Error::usage(format!(
                "partition of {} points applied to {} factors",
                pi.n(),
                factors.len()
            )));
        }
        let t = table(pi.n())?;
        let plan = &t.plans[ncpartition::index_of(pi)?];
        self.expand(factors, |monos| {
            self.partitioned_cumulant_kernel(plan, monos)
        })
    }

    /// `Σ_{π ∈ NC(n)} k_π(a_1, ..., a_n)`, which must reproduce the moment.
    pub fn moment_from_cumulants(&self, factors: &[Element]) -> Result<Element> {
        self.check_factors(factors)?;
        let t = table(factors.len())?;
        self.expand(factors, |monos| {
            let mut acc = Weights::new();
            for plan in &t.plans {
                add_weights(&mut acc, &self.partitioned_cumulant_kernel(plan, monos)?, 1);
            }
            Ok(acc)
        })
    }

    /// Partitions `π` with `Ê(π)(word) != 0`.
    pub fn connected_set(&self, word: &[Letter]) -> Result<ConnectedSet> {
        let monos = self.word_monomials(word)?;
        let t = table(monos.len())?;
        let partitions = t
            .plans
            .iter()
            .zip(t.partitions.iter())
            .filter(|(plan, _)| self.partitioned_moment_kernel(plan, &monos).is_some())
            .map(|(_, p)| p.clone())
            .collect();
        Ok(ConnectedSet {
            word: word.to_vec(),
            partitions,
        })
    }

    /// `Σ_{π connected} μ(π, 1_n)`.
    pub fn mu_coefficient(&self, word: &[Letter]) -> Result<i64> {
        let set = self.connected_set(word)?;
        let t = table(word.len())?;
        set.partitions
            .iter()
            .map(|p| {
                Ok(t.mobius[t
                    .partitions
                    .binary_search(p)
                    .map_err(|_| Error::usage("partition not found"))?])
            })
            .sum()
    }

    /// `μ-coefficient · E(word)`, the closed form for cumulants of generator words.
    pub fn cumulant_via_mu(&self, word: &[Letter]) -> Result<Element> {
        let mu = self.mu_coefficient(word)?;
        let e = self.alg.word(word)?.expectation();
        Ok(e.scale(&Scalar::from_int(mu)))
    }

    /// Cumulant of a tuple of normal-form monomials.
    pub fn cumulant_of_monomials(&self, monos: &[Monomial]) -> Result<Element> {
        let t = table(monos.len())?;
        let w = self.cumulant_kernel(&t, monos);
        Ok(self.weights_element(&w, &Scalar::one()))
    }

    fn word_monomials(&self, word: &[Letter]) -> Result<Vec<Monomial>> {
        if word.is_empty() {
            return Err(Error::usage("empty word"));
        }
        word.iter().map(|l| self.alg.letter_monomial(l)).collect()
    }

    fn weights_element(&self, w: &Weights, scale: &Scalar) -> Element {
        self.alg.from_terms(
            w.iter()
                .map(|(v, c)| (self.alg.projection(*v), &Scalar::from_int(*c) * scale)),
        )
    }

    /// Multilinear expansion over the monomials of every factor.
    fn expand(
        &self,
        factors: &[Element],
        mut kernel: impl FnMut(&[Monomial]) -> Result<Weights>,
    ) -> Result<Element> {
        let terms: Vec<Vec<(&Monomial, &Scalar)>> =
            factors.iter().map(|f| f.terms().collect()).collect();
        let mut out = self.alg.zero();
        if terms.iter().any(Vec::is_empty) {
            return Ok(out);
        }
        let n = terms.len();
        let mut idx = vec![0usize; n];
        let mut monos: Vec<Monomial> = terms.iter().map(|t| t[0].0.clone()).collect();
        loop {
            let degree: i64 = monos.iter().map(Monomial::degree).sum();
            if degree == 0 {
                let w = kernel(&monos)?;
                if !w.is_empty() {
                    let mut coef = Scalar::one();
                    for (k, &i) in idx.iter().enumerate() {
                        coef = &coef * terms[k][i].1;
                    }
                    out = out.add(&self.weights_element(&w, &coef))?;
                }
            }
            let mut k = n;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < terms[k].len() {
                    monos[k] = terms[k][idx[k]].0.clone();
                    break;
                }
                idx[k] = 0;
                monos[k] = terms[k][0].0.clone();
            }
        }
    }

    fn block_expectation(&self, monos: &[&Monomial]) -> Option<VertexId> {
        let mut acc = monos[0].clone();
        for m in &monos[1..] {
            acc = self.alg.mul_monomials(&acc, m)?;
        }
        acc.vertex()
    }

    /// `Ê(π)` on monomials: `Some(v)` for `L_v`, `None` for zero.
    fn partitioned_moment_kernel(&self, plan: &Plan, monos: &[Monomial]) -> Option<VertexId> {
        for step in &plan.steps {
            if step
                .positions
                .iter()
                .map(|&i| monos[i].degree())
                .sum::<i64>()
                != 0
            {
                return None;
            }
        }
        let mut kept: Vec<Option<VertexId>> = vec![None; monos.len()];
        let mut front: Option<VertexId> = None;
        for step in &plan.steps {
            let block: Vec<&Monomial> = step.positions.iter().map(|&i| &monos[i]).collect();
            let mut v = self.block_expectation(&block)?;
            // Right-multiplying a block member by an earlier inner value only
            // survives when the vertices agree.
            for &i in &step.positions {
                if let Some(inner) = kept[i] {
                    if inner != monos[i].right_source() {
                        return None;
                    }
                }
            }
            match step.target {
                Target::After(j) => {
                    if kept[j].is_some_and(|u| u != v) {
                        return None;
                    }
                    kept[j] = Some(v);
                }
                Target::Front => {
                    if front.is_some_and(|u| u != v) {
                        return None;
                    }
                    front = Some(v);
                }
                Target::Final => {
                    if let Some(u) = front {
                        if u != v {
                            return None;
                        }
                        v = u;
                    }
                    return Some(v);
                }
            }
        }
        None
    }

    fn cumulant_kernel(&self, t: &Table, monos: &[Monomial]) -> Weights {
        let mut acc = Weights::new();
        for (plan, mu) in t.plans.iter().zip(t.mobius.iter()) {
            if let Some(v) = self.partitioned_moment_kernel(plan, monos) {
                let slot = acc.entry(v).or_insert(0);
                *slot += mu;
                if *slot == 0 {
                    acc.remove(&v);
                }
            }
        }
        acc
    }

    fn partitioned_cumulant_kernel(&self, plan: &Plan, monos: &[Monomial]) -> Result<Weights> {
        let mut front: Option<Weights> = None;
        let mut scaled: Vec<i64> = vec![1; monos.len()];
        for step in &plan.steps {
            if step
                .positions
                .iter()
                .map(|&i| monos[i].degree())
                .sum::<i64>()
                != 0
            {
                return Ok(Weights::new());
            }
            let block: Vec<Monomial> = step.positions.iter().map(|&i| monos[i].clone()).collect();
            let t = table(block.len())?;
            let mut w = self.cumulant_kernel(&t, &block);
            let factor: i64 = step.positions.iter().map(|&i| scaled[i]).product();
            if factor != 1 {
                w.values_mut().for_each(|c| *c *= factor);
            }
            if w.is_empty() {
                return Ok(w);
            }
            match step.target {
                Target::After(j) => {
                    let c = w.get(&monos[j].right_source()).copied().unwrap_or(0);
                    if c == 0 {
                        return Ok(Weights::new());
                    }
                    scaled[j] *= c;
                }
                Target::Front => {
                    front = Some(match front {
                        Some(f) => product_weights(&f, &w),
                        None => w,
                    });
                }
                Target::Final => {
                    return Ok(match front {
                        Some(f) => product_weights(&f, &w),
                        None => w,
                    });
                }
            }
        }
        Ok(Weights::new())
    }
}
