use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::exact::{edges_by_min_vertex, full_mask, Budget, ExactConfig, VertexMask};
use crate::hypergraph::EdgeSublist;

/// Exact number of matchings of each size `0..=m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingCountTable {
    pub counts: Vec<BigUint>,
}

impl MatchingCountTable {
    pub fn perfect(&self) -> &BigUint {
        self.counts.last().expect("table has m + 1 entries")
    }

    /// Largest `s` with a nonzero count.
    pub fn max_size(&self) -> usize {
        self.counts.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }
}

/// Counts the matchings of every size inside the sublist.
///
/// Branches on the lowest-index available vertex: either it stays unmatched
/// for good, or it is covered by one of the member edges lying inside the
/// available set. Results are memoised by available set; the budget counts
/// distinct sets evaluated.
pub fn count_matchings_by_size(sub: &EdgeSublist, cfg: &ExactConfig) -> Result<MatchingCountTable> {
    let spec = sub.base();
    let lists = edges_by_min_vertex(spec, |i| sub.contains(i).then_some(()))?;
    let mut memo: HashMap<VertexMask, Vec<BigUint>> = HashMap::new();
    let mut budget = Budget::new(cfg.leaf_budget);
    let mut counts = count(full_mask(spec.n()), &lists, &mut memo, &mut budget)?;
    counts.resize(spec.m() + 1, BigUint::zero());
    Ok(MatchingCountTable { counts })
}

fn count(
    free: VertexMask,
    lists: &[Vec<(VertexMask, ())>],
    memo: &mut HashMap<VertexMask, Vec<BigUint>>,
    budget: &mut Budget,
) -> Result<Vec<BigUint>> {
    if free == 0 {
        return Ok(vec![BigUint::one()]);
    }
    if let Some(hit) = memo.get(&free) {
        return Ok(hit.clone());
    }
    budget.tick()?;
    let u = free.trailing_zeros() as usize;
    let mut acc = count(free & !(1 << u), lists, memo, budget)?;
    for &(mask, ()) in &lists[u] {
        if mask & free == mask {
            let sub = count(free & !mask, lists, memo, budget)?;
            if acc.len() < sub.len() + 1 {
                acc.resize(sub.len() + 1, BigUint::zero());
            }
            for (s, c) in sub.into_iter().enumerate() {
                acc[s + 1] += c;
            }
        }
    }
    memo.insert(free, acc.clone());
    Ok(acc)
}

/// Size of a maximum matching inside the sublist.
///
/// Depth-first branch and bound: branch on the lowest available vertex
/// (match it with some member edge, or drop it), seeded by a greedy matching
/// and pruned with the bound `current + |available| / k`.
pub fn max_matching_size(sub: &EdgeSublist, cfg: &ExactConfig) -> Result<usize> {
    let spec = sub.base();
    let lists = edges_by_min_vertex(spec, |i| sub.contains(i).then_some(()))?;
    let mut used: VertexMask = 0;
    let mut best = 0usize;
    for edge in sub.edges() {
        let mask = edge.vertices().iter().fold(0 as VertexMask, |acc, &v| acc | (1 << v));
        if used & mask == 0 {
            used |= mask;
            best += 1;
        }
    }
    let mut search = MaxSearch { lists: &lists, k: spec.k(), best, budget: Budget::new(cfg.leaf_budget) };
    search.run(full_mask(spec.n()), 0)?;
    Ok(search.best)
}

struct MaxSearch<'a> {
    lists: &'a [Vec<(VertexMask, ())>],
    k: usize,
    best: usize,
    budget: Budget,
}

impl MaxSearch<'_> {
    fn run(&mut self, free: VertexMask, current: usize) -> Result<()> {
        self.best = self.best.max(current);
        if current + free.count_ones() as usize / self.k <= self.best {
            return Ok(());
        }
        self.budget.tick()?;
        let u = free.trailing_zeros() as usize;
        for &(mask, ()) in &self.lists[u] {
            if mask & free == mask {
                self.run(free & !mask, current + 1)?;
            }
        }
        self.run(free & !(1 << u), current)
    }
}
