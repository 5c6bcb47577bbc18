//! Exact evaluation at desk scale: the partition function by pinned-vertex
//! expansion, a subset DP for the partite kind, the k = 2 oracles (Ryser
//! permanent and hafnian) and matching counts of edge sublists.

mod counting;
mod dp;
mod hafnian;
mod ryser;

pub use counting::{count_matchings_by_size, max_matching_size, MatchingCountTable};
pub use dp::{partition_function_dp_partite, DpConfig};
pub use hafnian::{hafnian_exact, MAX_HAFNIAN_DIM};
pub use ryser::{permanent_ryser, MAX_RYSER_DIM};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::HypergraphSpec;
use crate::numeric::log_sum_exp;
use crate::weight::WeightVector;

/// Vertex sets are bitmasks; this bounds `k·m` for the exact engines.
pub const MAX_EXACT_VERTICES: usize = 128;

pub(crate) type VertexMask = u128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactConfig {
    /// Maximum number of recursion nodes visited before giving up.
    pub leaf_budget: u64,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig { leaf_budget: 1_000_000_000 }
    }
}

/// A nonnegative quantity held as its natural log, with an explicit zero flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogValue {
    /// `ln` of the value; `-inf` when the value is zero.
    pub ln: f64,
    pub is_zero: bool,
}

impl LogValue {
    pub fn from_ln(ln: f64) -> Self {
        LogValue { ln, is_zero: ln == f64::NEG_INFINITY }
    }

    pub const ZERO: LogValue = LogValue { ln: f64::NEG_INFINITY, is_zero: true };

    /// Natural-domain value; may overflow to `inf` or underflow to 0.
    pub fn value(&self) -> f64 {
        if self.is_zero {
            0.0
        } else {
            self.ln.exp()
        }
    }

    /// The natural-domain value when it is representable as a normal `f64`.
    pub fn representable(&self) -> Option<f64> {
        let v = self.value();
        (self.is_zero || (v.is_finite() && v.is_normal())).then_some(v)
    }
}

/// For every vertex `u`, the support edges whose smallest vertex is `u`, as
/// `(vertex mask, payload)` pairs in canonical edge order.
pub(crate) fn edges_by_min_vertex<T>(
    spec: &HypergraphSpec,
    mut keep: impl FnMut(usize) -> Option<T>,
) -> Result<Vec<Vec<(VertexMask, T)>>> {
    if spec.n() > MAX_EXACT_VERTICES {
        return Err(Error::capacity(
            format!("exact engines need k*m <= {MAX_EXACT_VERTICES}, got {}", spec.n()),
            MAX_EXACT_VERTICES as u64,
        ));
    }
    let mut lists: Vec<Vec<(VertexMask, T)>> = (0..spec.n()).map(|_| Vec::new()).collect();
    for (i, edge) in spec.enumerate_edges().enumerate() {
        if let Some(payload) = keep(i) {
            let mask = edge.vertices().iter().fold(0, |acc, &v| acc | (1 << v));
            lists[edge.vertices()[0]].push((mask, payload));
        }
    }
    Ok(lists)
}

pub(crate) fn full_mask(n: usize) -> VertexMask {
    if n == 128 {
        VertexMask::MAX
    } else {
        (1 << n) - 1
    }
}

/// Counts visited nodes against a budget.
pub(crate) struct Budget {
    used: u64,
    limit: u64,
}

impl Budget {
    pub(crate) fn new(limit: u64) -> Self {
        Budget { used: 0, limit }
    }

    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::capacity("exact recursion node budget", self.limit));
        }
        Ok(())
    }
}

/// `ln P_H(W)` summed over all perfect matchings.
///
/// Expands on the lowest-index free vertex `u`: every positive-weight edge
/// `A ∋ u` inside the free set contributes `w_A · P(free \ A)`. Zero-weight
/// edges are pruned before branching. Child values are combined with a
/// compensated log-sum-exp in canonical edge order, so results are
/// deterministic.
pub fn partition_function_exact(w: &WeightVector, cfg: &ExactConfig) -> Result<LogValue> {
    let spec = w.spec();
    let lists = edges_by_min_vertex(spec, |i| {
        let x = w.get(i);
        (x > 0.0).then(|| x.ln())
    })?;
    let mut budget = Budget::new(cfg.leaf_budget);
    let ln = expand(full_mask(spec.n()), &lists, &mut budget)?;
    Ok(LogValue::from_ln(ln))
}

fn expand(free: VertexMask, lists: &[Vec<(VertexMask, f64)>], budget: &mut Budget) -> Result<f64> {
    budget.tick()?;
    if free == 0 {
        return Ok(0.0);
    }
    let u = free.trailing_zeros() as usize;
    let mut terms = Vec::new();
    for &(mask, ln_w) in &lists[u] {
        if mask & free == mask {
            let rest = expand(free & !mask, lists, budget)?;
            if rest != f64::NEG_INFINITY {
                terms.push(ln_w + rest);
            }
        }
    }
    Ok(log_sum_exp(&terms))
}
