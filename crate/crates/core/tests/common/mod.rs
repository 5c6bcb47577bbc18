#![allow(dead_code)]

use pmatch_core::io::UniformStream;
use pmatch_core::{Edge, HypergraphSpec, Kind, WeightVector};

/// Sum over perfect matchings by direct enumeration, in the natural domain.
pub fn brute_force_p(w: &WeightVector) -> f64 {
    let spec = *w.spec();
    let free: Vec<usize> = (0..spec.n()).collect();
    brute(&spec, w, &free)
}

fn brute(spec: &HypergraphSpec, w: &WeightVector, free: &[usize]) -> f64 {
    if free.is_empty() {
        return 1.0;
    }
    let v = free[0];
    let rest = &free[1..];
    let mut total = 0.0;
    for combo in combinations(rest, spec.k() - 1) {
        let mut verts = vec![v];
        verts.extend(&combo);
        let edge = Edge::new(verts).unwrap();
        let Ok(idx) = spec.edge_index(&edge) else { continue };
        let remaining: Vec<usize> = rest.iter().copied().filter(|x| !combo.contains(x)).collect();
        total += w.get(idx) * brute(spec, w, &remaining);
    }
    total
}

pub fn combinations(items: &[usize], r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![vec![]];
    }
    if items.len() < r {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut tail in combinations(&items[i + 1..], r - 1) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// Positive weights drawn from `[lo, hi]`.
pub fn random_weight(spec: HypergraphSpec, lo: f64, hi: f64, rng: &mut UniformStream) -> WeightVector {
    WeightVector::from_fn(spec, |_| lo + (hi - lo) * rng.next_f64()).unwrap()
}

pub fn spec(kind: Kind, k: usize, m: usize) -> HypergraphSpec {
    HypergraphSpec::new(kind, k, m).unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// The k=3 partite weight at m=6 that is 3-stochastic yet has no perfect
/// matching: `1/18` on edges whose in-part labels sum to an even number.
pub fn parity_weight() -> WeightVector {
    let spec = spec(Kind::CompletePartite, 3, 6);
    WeightVector::from_fn(spec, |e| {
        let label_sum: usize = e.vertices().iter().enumerate().map(|(i, v)| v - i * 6 + 1).sum();
        if label_sum.is_multiple_of(2) { 1.0 / 18.0 } else { 0.0 }
    })
    .unwrap()
}

/// 2-stochastic weight on two disjoint triangles of K₆.
pub fn two_triangles_weight() -> WeightVector {
    let spec = spec(Kind::CompleteUniform, 2, 3);
    WeightVector::from_fn(spec, |e| {
        let v = e.vertices();
        if (v[0] < 3) == (v[1] < 3) { 0.5 } else { 0.0 }
    })
    .unwrap()
}
