//! Noncrossing partitions of `{1..n}`, their refinement order and the
//! Möbius function `μ(π, 1_n)` of the lattice.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Largest `n` for which `NC(n)` is enumerated.
pub const MAX_ENUMERATION: usize = 14;

/// Largest `n` for which Möbius tables are built. The recursion touches every
/// comparable pair of the lattice, which is quadratic in `|NC(n)|`.
pub const MAX_MOBIUS: usize = 10;

/// A noncrossing partition stored as its restricted growth string: entry
/// `i` is the index of the block containing `i + 1`, blocks numbered by
/// their minimum element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NoncrossingPartition {
    labels: Vec<u8>,
}

impl NoncrossingPartition {
    /// Builds a partition from 1-based blocks; rejects overlaps, gaps and crossings.
    pub fn new(n: usize, blocks: &[Vec<usize>]) -> Result<NoncrossingPartition> {
        if n == 0 {
            return Err(Error::usage("partitions are over {1..n} with n >= 1"));
        }
        if n > u8::MAX as usize {
            return Err(Error::resource(format!("n = {n} is too large")));
        }
        let mut owner = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::usage("empty block"));
            }
            for &i in block {
                if i == 0 || i > n {
                    return Err(Error::usage(format!("element {i} outside 1..{n}")));
                }
                if owner[i - 1] != usize::MAX {
                    return Err(Error::usage(format!("element {i} appears twice")));
                }
                owner[i - 1] = b;
            }
        }
        if let Some(i) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::usage(format!("element {} is not covered", i + 1)));
        }
        let mut relabel = vec![u8::MAX; blocks.len()];
        let mut next = 0u8;
        let labels = owner
            .iter()
            .map(|&b| {
                if relabel[b] == u8::MAX {
                    relabel[b] = next;
                    next += 1;
                }
                relabel[b]
            })
            .collect();
        let p = NoncrossingPartition { labels };
        if !p.is_noncrossing() {
            return Err(Error::usage(format!("{p} is crossing")));
        }
        Ok(p)
    }

    /// `0_n`: all singletons.
    pub fn bottom(n: usize) -> NoncrossingPartition {
        NoncrossingPartition {
            labels: (0..n as u8).collect(),
        }
    }

    /// `1_n`: a single block.
    pub fn top(n: usize) -> NoncrossingPartition {
        NoncrossingPartition { labels: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn block_count(&self) -> usize {
        self.labels.iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// Blocks as sorted 1-based lists, ordered by minimum element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (i, &b) in self.labels.iter().enumerate() {
            blocks[b as usize].push(i + 1);
        }
        blocks
    }

    pub fn is_top(&self) -> bool {
        self.labels.iter().all(|&b| b == 0)
    }

    pub fn is_bottom(&self) -> bool {
        self.block_count() == self.n()
    }

    fn is_noncrossing(&self) -> bool {
        let n = self.labels.len();
        for a in 0..n {
            for b in a + 1..n {
                if self.labels[b] == self.labels[a] {
                    continue;
                }
                for c in b + 1..n {
                    if self.labels[c] != self.labels[a] {
                        continue;
                    }
                    for d in c + 1..n {
                        if self.labels[d] == self.labels[b] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Refinement order: every block of `self` sits inside a block of `other`.
    pub fn leq(&self, other: &NoncrossingPartition) -> Result<bool> {
        if self.n() != other.n() {
            return Err(Error::usage(format!(
                "cannot compare partitions of {} and {}",
                self.n(),
                other.n()
            )));
        }
        Ok(self.leq_unchecked(other))
    }

    fn leq_unchecked(&self, other: &NoncrossingPartition) -> bool {
        let mut first = [u8::MAX; 256];
        for (i, &b) in self.labels.iter().enumerate() {
            let slot = &mut first[b as usize];
            if *slot == u8::MAX {
                *slot = i as u8;
            } else if other.labels[i] != other.labels[*slot as usize] {
                return false;
            }
        }
        true
    }

    /// Whether every block has even size.
    pub fn all_blocks_even(&self) -> bool {
        self.blocks().iter().all(|b| b.len() % 2 == 0)
    }

    pub fn is_pairing(&self) -> bool {
        self.blocks().iter().all(|b| b.len() == 2)
    }
}

/// Enumeration order: descending restricted growth strings, so `0_n` comes
/// first and `1_n` last.
impl Ord for NoncrossingPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        other.labels.cmp(&self.labels)
    }
}

impl PartialOrd for NoncrossingPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NoncrossingPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in self.blocks() {
            let items: Vec<String> = block.iter().map(usize::to_string).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for NoncrossingPartition {
    type Err = Error;

    /// Parses the rendering `{1,4}{2,3}`; `n` is the largest element.
    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let inner = rest
                .strip_prefix('{')
                .and_then(|r| r.find('}').map(|end| (&r[..end], &r[end + 1..])))
                .ok_or_else(|| Error::Parse(format!("malformed partition '{s}'")))?;
            let block: Vec<usize> = inner
                .0
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad element '{x}' in '{s}'")))
                })
                .collect::<Result<_>>()?;
            blocks.push(block);
            rest = inner.1.trim_start();
        }
        let n = blocks.iter().flatten().copied().max().unwrap_or(0);
        NoncrossingPartition::new(n, &blocks)
    }
}

fn generate(n: usize, out: &mut Vec<NoncrossingPartition>) {
    // Depth-first over restricted growth strings; the new-block option is
    // tried first and existing blocks in descending label order, which
    // yields the canonical (descending) order directly.
    struct State {
        labels: Vec<u8>,
        block_min: Vec<usize>,
        block_last: Vec<usize>,
    }

    fn can_join(st: &State, block: usize, i: usize) -> bool {
        let last = st.block_last[block];
        (last + 1..i).all(|x| st.block_min[st.labels[x] as usize] > last)
    }

    fn rec(st: &mut State, i: usize, n: usize, out: &mut Vec<NoncrossingPartition>) {
        if i == n {
            out.push(NoncrossingPartition {
                labels: st.labels.clone(),
            });
            return;
        }
        let count = st.block_min.len();
        st.labels.push(count as u8);
        st.block_min.push(i);
        st.block_last.push(i);
        rec(st, i + 1, n, out);
        st.block_min.pop();
        st.block_last.pop();
        st.labels.pop();
        for b in (0..count).rev() {
            if !can_join(st, b, i) {
                continue;
            }
            let saved = st.block_last[b];
            st.labels.push(b as u8);
            st.block_last[b] = i;
            rec(st, i + 1, n, out);
            st.block_last[b] = saved;
            st.labels.pop();
        }
    }

    let mut st = State {
        labels: Vec::with_capacity(n),
        block_min: Vec::new(),
        block_last: Vec::new(),
    };
    rec(&mut st, 0, n, out);
}

fn check_enumeration_range(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ENUMERATION {
        return Err(Error::resource(format!(
            "NC(n) is enumerated for 1 <= n <= {MAX_ENUMERATION}, got n = {n}"
        )));
    }
    Ok(())
}

static ENUMERATIONS: [OnceLock<Arc<Vec<NoncrossingPartition>>>; MAX_ENUMERATION + 1] =
    [const { OnceLock::new() }; MAX_ENUMERATION + 1];

static MOBIUS: [OnceLock<Arc<Vec<i64>>>; MAX_MOBIUS + 1] =
    [const { OnceLock::new() }; MAX_MOBIUS + 1];

/// All of `NC(n)` in canonical order; computed once per `n`.
pub fn enumerate_nc(n: usize) -> Result<Arc<Vec<NoncrossingPartition>>> {
    check_enumeration_range(n)?;
    Ok(Arc::clone(ENUMERATIONS[n].get_or_init(|| {
        let mut out = Vec::new();
        generate(n, &mut out);
        Arc::new(out)
    })))
}

/// Noncrossing pairings; empty for odd `n`.
pub fn enumerate_nc2(n: usize) -> Result<Vec<NoncrossingPartition>> {
    if n % 2 == 1 {
        return Ok(Vec::new());
    }
    Ok(enumerate_nc(n)?
        .iter()
        .filter(|p| p.is_pairing())
        .cloned()
        .collect())
}

/// Noncrossing partitions whose blocks all have even size.
pub fn enumerate_nc_even(n: usize) -> Result<Vec<NoncrossingPartition>> {
    if n % 2 == 1 {
        return Ok(Vec::new());
    }
    Ok(enumerate_nc(n)?
        .iter()
        .filter(|p| p.all_blocks_even())
        .cloned()
        .collect())
}

/// Position of `p` in [`enumerate_nc`]`(p.n())`.
pub fn index_of(p: &NoncrossingPartition) -> Result<usize> {
    let all = enumerate_nc(p.n())?;
    all.binary_search(p)
        .map_err(|_| Error::usage(format!("{p} is not in NC({})", p.n())))
}

/// `μ(π, 1_n)` for every `π ∈ NC(n)`, aligned with [`enumerate_nc`].
///
/// Solved from `Σ_{π ≤ σ ≤ 1_n} μ(σ, 1_n) = δ(π, 1_n)`, coarsest partitions first.
pub fn mobius_table(n: usize) -> Result<Arc<Vec<i64>>> {
    check_enumeration_range(n)?;
    if n > MAX_MOBIUS {
        return Err(Error::resource(format!(
            "Möbius tables are built for n <= {MAX_MOBIUS}, got n = {n}"
        )));
    }
    let all = enumerate_nc(n)?;
    Ok(Arc::clone(MOBIUS[n].get_or_init(|| {
        let mut order: Vec<usize> = (0..all.len()).collect();
        order.sort_by_key(|&i| all[i].block_count());
        let mut mu = vec![0i64; all.len()];
        for (pos, &i) in order.iter().enumerate() {
            let p = &all[i];
            if p.is_top() {
                mu[i] = 1;
                continue;
            }
            let blocks = p.block_count();
            let mut sum = 0i64;
            for &j in &order[..pos] {
                let s = &all[j];
                if s.block_count() < blocks && p.leq_unchecked(s) {
                    sum += mu[j];
                }
            }
            mu[i] = -sum;
        }
        Arc::new(mu)
    })))
}

/// `μ(p, 1_n)`.
pub fn mobius_to_top(p: &NoncrossingPartition) -> Result<i64> {
    let table = mobius_table(p.n())?;
    Ok(table[index_of(p)?])
}

/// The Catalan number `c_n = binom(2n, n) / (n + 1)`.
pub fn catalan(n: usize) -> u128 {
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}
