//! Scaling a positive weight to the unique k-stochastic weight
//! `z_S = (∏_{v∈S} λ_v) w_S`, plus the quantities used to certify the result:
//! marginals, balance ratio, the relative entropy `f_W(X)` and the dual
//! boundary/stationarity residuals.
//!
//! The iteration is multiplicative marginal fitting on a copy of `W`
//! pre-normalised to total weight `m`, starting from `λ ≡ 1`:
//!
//! * partite kind: parts are swept cyclically and every vertex `v` of the
//!   active part is updated `λ_v ← λ_v / r_v`; each edge meets the part once,
//!   so the part's marginals become exactly 1;
//! * uniform kind: all vertices are updated at once, `λ_v ← λ_v · r_v^{-1/k}`.
//!
//! The normalising constant `c` is folded back at the end as `c^{1/k}` per
//! vertex, so the reported `λ` scale the original `W`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{HypergraphSpec, Kind};
use crate::numeric::CompensatedSum;
use crate::weight::WeightVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingConfig {
    /// Target for `max_v |1 - r_v(Z)|`.
    pub tol: f64,
    pub max_sweeps: usize,
    /// Give up after this many sweeps without progress.
    pub stall_window: usize,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        ScalingConfig { tol: 1e-10, max_sweeps: 10_000, stall_window: 50 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingOutcome {
    /// Per-vertex factors relative to the input weight.
    pub lambda: Vec<f64>,
    pub z: WeightVector,
    /// `Σ_v ln λ_v`.
    pub zeta: f64,
    /// `max_v |1 - Σ_{S∋v} z_S|`.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Per-vertex sums `r_v = Σ_{S∋v} w_S` and the total `Σ_S w_S`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Marginals {
    pub per_vertex: Vec<f64>,
    pub total: f64,
}

pub fn marginals(w: &WeightVector) -> Marginals {
    let spec = w.spec();
    let mut per_vertex = vec![CompensatedSum::default(); spec.n()];
    let mut total = CompensatedSum::default();
    for (edge, &x) in spec.enumerate_edges().zip(w.values()) {
        for &v in edge.vertices() {
            per_vertex[v].add(x);
        }
        total.add(x);
    }
    Marginals { per_vertex: per_vertex.iter().map(|s| s.value()).collect(), total: total.value() }
}

/// `max_S w_S / min_S w_S` of a positive weight.
pub fn balance_ratio(w: &WeightVector) -> Result<f64> {
    w.require_positive()?;
    let (lo, hi) = w
        .values()
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    Ok(hi / lo)
}

/// Vertex lists of all edges, flattened in canonical order.
struct Incidence {
    k: usize,
    n: usize,
    vertices: Vec<usize>,
}

impl Incidence {
    fn new(spec: &HypergraphSpec) -> Self {
        let mut vertices = Vec::with_capacity(spec.edge_count() * spec.k());
        for e in spec.enumerate_edges() {
            vertices.extend_from_slice(e.vertices());
        }
        Incidence { k: spec.k(), n: spec.n(), vertices }
    }

    fn edges(&self) -> impl Iterator<Item = &[usize]> {
        self.vertices.chunks_exact(self.k)
    }

    /// Scaled weights `w_S ∏ λ_v`.
    fn scaled(&self, w: &[f64], lambda: &[f64]) -> Vec<f64> {
        self.edges()
            .zip(w)
            .map(|(vs, &x)| vs.iter().fold(x, |acc, &v| acc * lambda[v]))
            .collect()
    }

    fn marginals(&self, z: &[f64]) -> Vec<f64> {
        let mut r = vec![0.0; self.n];
        for (vs, &x) in self.edges().zip(z) {
            for &v in vs {
                r[v] += x;
            }
        }
        r
    }
}

fn residual_of(r: &[f64]) -> f64 {
    r.iter().map(|x| (1.0 - x).abs()).fold(0.0, f64::max)
}

/// Scales `w` to a k-stochastic weight starting from `λ ≡ 1`.
pub fn scale_to_k_stochastic(w: &WeightVector, cfg: &ScalingConfig) -> Result<ScalingOutcome> {
    scale_from(w, None, cfg)
}

/// Scales `w` starting from the given factors (applied to the normalised
/// copy of `w`), or from `λ ≡ 1` when `init` is `None`.
pub fn scale_from(w: &WeightVector, init: Option<&[f64]>, cfg: &ScalingConfig) -> Result<ScalingOutcome> {
    w.require_positive()?;
    if !(cfg.tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be > 0, got {}", cfg.tol)));
    }
    let spec = *w.spec();
    let (k, m, n) = (spec.k(), spec.m(), spec.n());
    let inc = Incidence::new(&spec);

    let c = m as f64 / w.total();
    let base: Vec<f64> = w.values().iter().map(|x| x * c).collect();
    let mut lambda = match init {
        Some(l) if l.len() != n => {
            return Err(Error::structural(format!("initial factors have length {}, expected {n}", l.len())))
        }
        Some(l) if l.iter().any(|x| !(*x > 0.0) || !x.is_finite()) => {
            return Err(Error::domain("initial factors must be positive and finite"))
        }
        Some(l) => l.to_vec(),
        None => vec![1.0; n],
    };

    let mut r = inc.marginals(&inc.scaled(&base, &lambda));
    let mut residual = residual_of(&r);
    let mut best = (residual, lambda.clone(), 0usize);
    let mut best_dual = f64::NEG_INFINITY;
    let mut last_progress = 0usize;
    let mut sweeps = 0usize;

    while residual > cfg.tol && sweeps < cfg.max_sweeps {
        sweeps += 1;
        match spec.kind() {
            Kind::CompletePartite => {
                for part in 0..k {
                    if part > 0 {
                        r = inc.marginals(&inc.scaled(&base, &lambda));
                    }
                    for v in part * m..(part + 1) * m {
                        lambda[v] /= r[v];
                    }
                }
            }
            Kind::CompleteUniform => {
                let exponent = -1.0 / k as f64;
                for (l, &rv) in lambda.iter_mut().zip(&r) {
                    *l *= rv.powf(exponent);
                }
            }
        }
        r = inc.marginals(&inc.scaled(&base, &lambda));
        residual = residual_of(&r);

        let dual: f64 = lambda.iter().map(|l| l.ln()).sum();
        let mut progressed = false;
        if residual < best.0 {
            best = (residual, lambda.clone(), sweeps);
            progressed = true;
        }
        if dual > best_dual {
            best_dual = dual;
            progressed = true;
        }
        if progressed {
            last_progress = sweeps;
        } else if sweeps - last_progress >= cfg.stall_window {
            break;
        }
    }

    let converged = residual <= cfg.tol;
    let (residual, lambda_norm) = if converged { (residual, lambda) } else { (best.0, best.1) };
    let z = WeightVector::new(spec, inc.scaled(&base, &lambda_norm))?;
    let shift = c.ln() / k as f64;
    let lambda: Vec<f64> = lambda_norm.iter().map(|l| l * c.powf(1.0 / k as f64)).collect();
    let mut zeta = CompensatedSum::default();
    lambda_norm.iter().for_each(|l| zeta.add(l.ln() + shift));
    let outcome = ScalingOutcome { lambda, z, zeta: zeta.value(), residual, iterations: sweeps, converged };
    if converged {
        Ok(outcome)
    } else {
        Err(Error::NonConvergence { best: Box::new(outcome) })
    }
}

/// A weight whose vertex marginals are all 1 (within the tolerance given at
/// construction).
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticPolytopePoint {
    x: WeightVector,
}

impl StochasticPolytopePoint {
    pub fn new(x: WeightVector, tol: f64) -> Result<Self> {
        let r = marginals(&x);
        let res = residual_of(&r.per_vertex);
        if res > tol {
            return Err(Error::domain(format!("weight is not k-stochastic: marginal residual {res} > {tol}")));
        }
        Ok(StochasticPolytopePoint { x })
    }

    pub fn weight(&self) -> &WeightVector {
        &self.x
    }
}

/// `f_W(X) = Σ_S x_S ln(x_S / w_S)`; terms with `x_S = 0` contribute 0.
pub fn relative_entropy(w: &WeightVector, x: &StochasticPolytopePoint) -> Result<f64> {
    if x.weight().spec() != w.spec() {
        return Err(Error::structural("W and X live on different hypergraphs"));
    }
    w.require_positive()?;
    let mut acc = CompensatedSum::default();
    for (&xs, &ws) in x.weight().values().iter().zip(w.values()) {
        if xs > 0.0 {
            acc.add(xs * (xs / ws).ln());
        }
    }
    Ok(acc.value())
}

/// Residuals of the dual optimality conditions at `μ_v = ln λ_v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualReport {
    /// `|Σ_S w_S exp(Σ_{v∈S} μ_v) - m|`.
    pub boundary_residual: f64,
    /// `max_v |1 - Σ_{S∋v} z_S|` for the scaled weight.
    pub stationarity_residual: f64,
}

pub fn dual_certificate_check(w: &WeightVector, lambda: &[f64]) -> Result<DualReport> {
    let spec = w.spec();
    if lambda.len() != spec.n() {
        return Err(Error::structural(format!("expected {} factors, got {}", spec.n(), lambda.len())));
    }
    let inc = Incidence::new(spec);
    let z = inc.scaled(w.values(), lambda);
    let mut total = CompensatedSum::default();
    z.iter().for_each(|&x| total.add(x));
    Ok(DualReport {
        boundary_residual: (total.value() - spec.m() as f64).abs(),
        stationarity_residual: residual_of(&inc.marginals(&z)),
    })
}
