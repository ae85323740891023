//! Exhaustive enumerators used as oracles for the closed-form counts.
//!
//! Each enumerator has a visitor form that never materializes results and a
//! list form built on top of it. All of them are single-threaded and emit
//! results in a fixed order.

use crate::error::{Error, Result};
use crate::partition::{APBlock, APPartition, CycleElement};
use crate::ptype::PartitionType;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OnExceed {
    Fail,
    /// Stop the search and report a truncated result.
    Truncate,
}

/// Cap on the number of search-tree nodes an enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    max_nodes: u64,
    on_exceed: OnExceed,
}

impl EnumerationBudget {
    pub fn new(max_nodes: u64, on_exceed: OnExceed) -> Result<Self> {
        if max_nodes == 0 {
            return Err(Error::InvalidArgument("max_nodes must be at least 1".into()));
        }
        Ok(EnumerationBudget {
            max_nodes,
            on_exceed,
        })
    }

    pub fn unlimited() -> Self {
        EnumerationBudget {
            max_nodes: u64::MAX,
            on_exceed: OnExceed::Fail,
        }
    }

    pub fn max_nodes(&self) -> u64 {
        self.max_nodes
    }

    pub fn on_exceed(&self) -> OnExceed {
        self.on_exceed
    }
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self::unlimited()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub results: u64,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration<T> {
    pub items: Vec<T>,
    pub stats: SearchStats,
}

impl<T> Enumeration<T> {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn truncated(&self) -> bool {
        self.stats.truncated
    }
}

struct Meter {
    budget: EnumerationBudget,
    stats: SearchStats,
}

impl Meter {
    fn new(budget: EnumerationBudget) -> Self {
        Meter {
            budget,
            stats: SearchStats::default(),
        }
    }

    /// Counts a node. `Ok(false)` means stop: the budget ran out in truncate mode.
    fn enter(&mut self) -> Result<bool> {
        self.stats.nodes += 1;
        if self.stats.nodes <= self.budget.max_nodes {
            return Ok(true);
        }
        match self.budget.on_exceed {
            OnExceed::Fail => Err(Error::BudgetExceeded {
                max_nodes: self.budget.max_nodes,
            }),
            OnExceed::Truncate => {
                self.stats.truncated = true;
                Ok(false)
            }
        }
    }
}

fn check_weight(n: usize, t: &PartitionType) -> Result<()> {
    if t.weight() != n {
        return Err(Error::WeightMismatch {
            ptype: t.clone(),
            weight: t.weight(),
            n,
        });
    }
    Ok(())
}

struct ApSearch<'a, F> {
    n: usize,
    m: usize,
    sizes: Vec<usize>,
    remaining: Vec<usize>,
    covered: Vec<bool>,
    uncovered: usize,
    stack: Vec<APBlock>,
    meter: &'a mut Meter,
    visit: F,
}

impl<F: FnMut(&[APBlock])> ApSearch<'_, F> {
    /// Marks the block's elements; on conflict restores state and returns false.
    fn place(&mut self, head_idx: usize, len: usize) -> bool {
        let mut idx = head_idx;
        for placed in 0..len {
            if self.covered[idx] {
                let mut back = head_idx;
                for _ in 0..placed {
                    self.covered[back] = false;
                    back = (back + self.m) % self.n;
                }
                return false;
            }
            self.covered[idx] = true;
            idx = (idx + self.m) % self.n;
        }
        self.uncovered -= len;
        true
    }

    fn unplace(&mut self, head_idx: usize, len: usize) {
        let mut idx = head_idx;
        for _ in 0..len {
            self.covered[idx] = false;
            idx = (idx + self.m) % self.n;
        }
        self.uncovered += len;
    }

    fn go(&mut self, from: usize) -> Result<bool> {
        if !self.meter.enter()? {
            return Ok(false);
        }
        if self.uncovered == 0 {
            self.meter.stats.results += 1;
            (self.visit)(&self.stack);
            return Ok(true);
        }
        let x = (from..self.n)
            .find(|&i| !self.covered[i])
            .expect("uncovered element exists");
        let step = self.m % self.n;
        for si in 0..self.sizes.len() {
            if self.remaining[si] == 0 {
                continue;
            }
            let s = self.sizes[si];
            // x sits at position j of the new block.
            for j in 0..s {
                let head_idx = (x + self.n - (j * step) % self.n) % self.n;
                if !self.place(head_idx, s) {
                    continue;
                }
                self.remaining[si] -= 1;
                self.stack.push(APBlock::new(CycleElement::reduce(head_idx as i64 + 1, self.n), s));
                let keep_going = self.go(x + 1)?;
                self.stack.pop();
                self.remaining[si] += 1;
                self.unplace(head_idx, s);
                if !keep_going {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Calls `visit` once per `m`-AP-partition of `Z_n` of type `t`.
///
/// Branches on the smallest uncovered element `x`; every block that could
/// cover `x` is tried, with `x` at each possible position. The block covering
/// the minimum uncovered element of a partition is unique, so each partition
/// is produced exactly once. Blocks passed to `visit` are in search order.
pub fn visit_ap_partitions<F>(
    n: usize,
    m: usize,
    t: &PartitionType,
    budget: EnumerationBudget,
    visit: F,
) -> Result<SearchStats>
where
    F: FnMut(&[APBlock]),
{
    check_weight(n, t)?;
    if m == 0 {
        return Err(Error::InvalidArgument("difference must be at least 1".into()));
    }
    let mut meter = Meter::new(budget);
    let mut search = ApSearch {
        n,
        m,
        sizes: t.parts().iter().map(|&(s, _)| s).collect(),
        remaining: t.parts().iter().map(|&(_, k)| k).collect(),
        covered: vec![false; n],
        uncovered: n,
        stack: Vec::with_capacity(t.block_count()),
        meter: &mut meter,
        visit,
    };
    search.go(0)?;
    Ok(meter.stats)
}

/// All `m`-AP-partitions of `Z_n` of type `t`.
pub fn enumerate_ap_partitions(
    n: usize,
    m: usize,
    t: &PartitionType,
    budget: EnumerationBudget,
) -> Result<Enumeration<APPartition>> {
    let mut items = Vec::new();
    let stats = visit_ap_partitions(n, m, t, budget, |blocks| {
        items.push(APPartition::new_unchecked(n, m, blocks.to_vec()));
    })?;
    Ok(Enumeration { items, stats })
}

pub fn count_ap_partitions(
    n: usize,
    m: usize,
    t: &PartitionType,
    budget: EnumerationBudget,
) -> Result<SearchStats> {
    visit_ap_partitions(n, m, t, budget, |_| {})
}

struct DissectionSearch<'a, F> {
    n: usize,
    sizes: Vec<usize>,
    remaining: Vec<usize>,
    stack: Vec<APBlock>,
    meter: &'a mut Meter,
    visit: F,
}

impl<F: FnMut(&[APBlock])> DissectionSearch<'_, F> {
    /// Fills the arc starting at index `pos` with `left` elements using the
    /// remaining sizes in every distinct order.
    fn fill(&mut self, pos: usize, left: usize) -> Result<bool> {
        if !self.meter.enter()? {
            return Ok(false);
        }
        if left == 0 {
            self.meter.stats.results += 1;
            (self.visit)(&self.stack);
            return Ok(true);
        }
        for si in 0..self.sizes.len() {
            let s = self.sizes[si];
            if self.remaining[si] == 0 || s > left {
                continue;
            }
            self.remaining[si] -= 1;
            self.stack
                .push(APBlock::new(CycleElement::reduce(pos as i64 + 1, self.n), s));
            let keep_going = self.fill((pos + s) % self.n, left - s)?;
            self.stack.pop();
            self.remaining[si] += 1;
            if !keep_going {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Calls `visit` once per dissection of the `n`-cycle of type `t`.
///
/// Chooses the segment containing element 1 (its size and the position of 1
/// inside it), then lays the remaining sizes along the leftover arc as a
/// multiset permutation.
pub fn visit_dissections<F>(
    n: usize,
    t: &PartitionType,
    budget: EnumerationBudget,
    visit: F,
) -> Result<SearchStats>
where
    F: FnMut(&[APBlock]),
{
    check_weight(n, t)?;
    let mut meter = Meter::new(budget);
    let mut search = DissectionSearch {
        n,
        sizes: t.parts().iter().map(|&(s, _)| s).collect(),
        remaining: t.parts().iter().map(|&(_, k)| k).collect(),
        stack: Vec::with_capacity(t.block_count()),
        meter: &mut meter,
        visit,
    };
    'outer: for si in 0..search.sizes.len() {
        let s = search.sizes[si];
        for offset in 0..s {
            let head_idx = (n - offset) % n;
            search.remaining[si] -= 1;
            search
                .stack
                .push(APBlock::new(CycleElement::reduce(head_idx as i64 + 1, n), s));
            let keep_going = search.fill((head_idx + s) % n, n - s)?;
            search.stack.pop();
            search.remaining[si] += 1;
            if !keep_going {
                break 'outer;
            }
        }
    }
    Ok(meter.stats)
}

/// All dissections (1-AP-partitions) of the `n`-cycle of type `t`.
pub fn enumerate_dissections(
    n: usize,
    t: &PartitionType,
    budget: EnumerationBudget,
) -> Result<Enumeration<APPartition>> {
    let mut items = Vec::new();
    let stats = visit_dissections(n, t, budget, |blocks| {
        items.push(APPartition::new_unchecked(n, 1, blocks.to_vec()));
    })?;
    Ok(Enumeration { items, stats })
}

pub fn count_dissections(n: usize, t: &PartitionType, budget: EnumerationBudget) -> Result<SearchStats> {
    visit_dissections(n, t, budget, |_| {})
}

/// Residues `{m, 2m, ..., pm} mod n` as a lookup table indexed by residue.
fn forbidden_differences(n: usize, m: usize, p: usize) -> Vec<bool> {
    let mut forbidden = vec![false; n];
    for j in 1..=p {
        forbidden[(j * m) % n] = true;
    }
    forbidden
}

/// Calls `visit` with every `k`-subset of `Z_n`, as increasing elements, such
/// that for every ordered pair of distinct elements the directed difference
/// `x_i - x_j mod n` avoids `{m, 2m, ..., pm}`.
pub fn visit_spaced_subsets<F>(n: usize, m: usize, p: usize, k: usize, mut visit: F) -> Result<u64>
where
    F: FnMut(&[CycleElement]),
{
    if n == 0 || m == 0 || p == 0 {
        return Err(Error::InvalidArgument("n, m and p must be at least 1".into()));
    }
    let forbidden = forbidden_differences(n, m, p);
    let clash = |a: usize, b: usize| forbidden[(a + n - b) % n] || forbidden[(b + n - a) % n];

    fn rec<F: FnMut(&[CycleElement])>(
        n: usize,
        k: usize,
        next: usize,
        chosen: &mut Vec<usize>,
        clash: &dyn Fn(usize, usize) -> bool,
        visit: &mut F,
        count: &mut u64,
    ) {
        if chosen.len() == k {
            *count += 1;
            let elems: Vec<CycleElement> =
                chosen.iter().map(|&i| CycleElement::reduce(i as i64 + 1, n)).collect();
            visit(&elems);
            return;
        }
        let need = k - chosen.len();
        for x in next..=n - need {
            if chosen.iter().any(|&y| clash(x, y)) {
                continue;
            }
            chosen.push(x);
            rec(n, k, x + 1, chosen, clash, visit, count);
            chosen.pop();
        }
    }

    let mut count = 0;
    if k <= n {
        rec(n, k, 0, &mut Vec::with_capacity(k), &clash, &mut visit, &mut count);
    }
    Ok(count)
}

pub fn enumerate_spaced_subsets(
    n: usize,
    m: usize,
    p: usize,
    k: usize,
) -> Result<Vec<Vec<CycleElement>>> {
    let mut out = Vec::new();
    visit_spaced_subsets(n, m, p, k, |s| out.push(s.to_vec()))?;
    Ok(out)
}

/// The partition of type `1^{n-(p+1)k} (p+1)^k` whose long blocks start at `heads`.
pub fn subsets_to_partitions(
    n: usize,
    m: usize,
    p: usize,
    heads: &[CycleElement],
) -> Result<APPartition> {
    if n == 0 || m == 0 || p == 0 {
        return Err(Error::InvalidArgument("n, m and p must be at least 1".into()));
    }
    let k = heads.len();
    if k > 0 && n <= m * p * k {
        return Err(Error::OutOfRegime(format!(
            "head selection needs n >= mpk+1, got n={n}, m={m}, p={p}, k={k}"
        )));
    }
    if let Some(h) = heads.iter().find(|h| h.get() > n) {
        return Err(Error::InvalidArgument(format!("head {h} is not in Z_{n}")));
    }
    let forbidden = forbidden_differences(n, m, p);
    for (i, a) in heads.iter().enumerate() {
        for b in &heads[i + 1..] {
            let d = a.distance_from(*b, n);
            if a == b || forbidden[d] || forbidden[(n - d) % n] {
                return Err(Error::SpacingViolated {
                    a: a.get(),
                    b: b.get(),
                    m,
                });
            }
        }
    }
    let blocks = heads.iter().map(|&h| APBlock::new(h, p + 1)).collect();
    APPartition::with_singletons(n, m, blocks)
}
