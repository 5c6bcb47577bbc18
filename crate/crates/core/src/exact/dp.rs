use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact::LogValue;
use crate::hypergraph::Kind;
use crate::weight::WeightVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpConfig {
    /// Upper bound on `(k-1)·m`, the width of the used-vertex state.
    pub max_state_bits: usize,
}

impl Default for DpConfig {
    fn default() -> Self {
        DpConfig { max_state_bits: 24 }
    }
}

/// `ln P` for the partite kind by dynamic programming over used-vertex
/// subsets of parts `1..k`, sweeping the vertices of part 0 in order.
///
/// Layer `i` maps a state (the used vertices of every other part, packed into
/// one bitmask) to the weighted count of partial matchings covering part-0
/// vertices `0..i`. Each layer is renormalised by its maximum and the scale is
/// tracked in log space.
pub fn partition_function_dp_partite(w: &WeightVector, cfg: &DpConfig) -> Result<LogValue> {
    let spec = w.spec();
    if spec.kind() != Kind::CompletePartite {
        return Err(Error::structural("subset DP applies to the complete partite kind only"));
    }
    let (k, m) = (spec.k(), spec.m());
    let bits = (k - 1) * m;
    if bits > cfg.max_state_bits || bits > 64 {
        return Err(Error::capacity(
            format!("subset DP state needs (k-1)*m = {bits} bits"),
            cfg.max_state_bits.min(64) as u64,
        ));
    }

    // Edges grouped by their part-0 vertex: (mask over parts 1..k, weight).
    let mut by_row: Vec<Vec<(u64, f64)>> = vec![Vec::new(); m];
    for (i, edge) in spec.enumerate_edges().enumerate() {
        let x = w.get(i);
        if x > 0.0 {
            let vs = edge.vertices();
            let mask = vs[1..].iter().fold(0u64, |acc, &v| acc | 1 << (v - m));
            by_row[vs[0]].push((mask, x));
        }
    }

    let mut layer: Vec<(u64, f64)> = vec![(0, 1.0)];
    let mut log_scale = 0.0;
    for row in &by_row {
        let mut next: HashMap<u64, f64> = HashMap::new();
        for &(state, value) in &layer {
            for &(mask, x) in row {
                if state & mask == 0 {
                    *next.entry(state | mask).or_insert(0.0) += value * x;
                }
            }
        }
        if next.is_empty() {
            return Ok(LogValue::ZERO);
        }
        let mut entries: Vec<(u64, f64)> = next.into_iter().collect();
        entries.sort_unstable_by_key(|&(s, _)| s);
        let max = entries.iter().map(|&(_, v)| v).fold(0.0, f64::max);
        entries.iter_mut().for_each(|e| e.1 /= max);
        log_scale += max.ln();
        layer = entries;
    }
    // A single state remains: every vertex of parts 1..k used.
    debug_assert_eq!(layer.len(), 1);
    Ok(LogValue::from_ln(log_scale + layer[0].1.ln()))
}
