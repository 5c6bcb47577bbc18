//! Closed-form quantities in natural-log space: `Φ_k(m)`, the sandwich
//! constants for balanced k-stochastic weights, the resulting intervals for
//! `ln P`, and the lower bound on matchings of regular hypergraphs.
//!
//! The constants for an `α`-balanced k-stochastic weight are
//!
//! ```text
//! l      = ⌈α^{2(k+1)} k²⌉ + 1
//! γ₁     = α^{3(k+1)} (k²+k)² + (k-1)²        γ₂ = k² α^{k+1} / 2
//! ln ε₁  = -(k+1) l ln α + l ln l + (1-l) ln C(kl, k)
//! ln ε₂  =  (k+1) l ln α + (l - kl + k) ln l
//! ```
//!
//! and require `α^{k+1} > 2`. Smaller `α` are raised to
//! `(2 + 1e-6)^{1/(k+1)}`; every constant is monotone in `α` in the loosening
//! direction, so this never invalidates a bound.
//!
//! Note that `ln ε₂` is strongly negative: the upper end `ln ε₂ + γ₂ ln m -
//! m(k-1)` falls below the true value for all desk-scale `m` and only becomes
//! effective for very large `m` (tens of thousands of matching edges at
//! `k = 2`). The lower end is valid but extremely loose.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{binomial, ln_binomial, ln_factorial};
use crate::scaling::ScalingOutcome;

/// Largest `k·m` for which [`phi_exact`] returns a value.
pub const PHI_EXACT_MAX_VERTICES: usize = 20;

/// Smallest admissible `α^{k+1}` is this value; the gate raises `α` to it.
const GATE_TARGET: f64 = 2.0 + 1e-6;

/// `ln Φ_k(m) = ln (km)! - m ln k! - ln m!`.
pub fn log_phi(k: usize, m: usize) -> f64 {
    let (k, m) = (k as f64, m as f64);
    ln_factorial(k * m) - m * ln_factorial(k) - ln_factorial(m)
}

/// `Φ_k(m)` as an exact integer, for `k·m <= 20`.
pub fn phi_exact(k: usize, m: usize) -> Option<BigUint> {
    if k * m > PHI_EXACT_MAX_VERTICES {
        return None;
    }
    // Φ_k(m) = Π_{j=1..m} C(jk - 1, k - 1)
    let mut acc = BigUint::from(1u32);
    for j in 1..=m {
        acc *= binomial((j * k - 1) as u64, (k - 1) as u64)?;
    }
    Some(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichConstants {
    /// `α` actually used, after the gate.
    pub alpha: f64,
    pub alpha_requested: f64,
    pub inflated: bool,
    pub k: usize,
    /// Integer-valued; kept as `f64` because it can exceed `u64`.
    pub l: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub log_eps1: f64,
    pub log_eps2: f64,
}

/// Raises `α` so that `α^{k+1} > 2`.
pub fn gate_alpha(k: usize, alpha: f64) -> f64 {
    if alpha.powi(k as i32 + 1) > 2.0 {
        alpha
    } else {
        GATE_TARGET.powf(1.0 / (k as f64 + 1.0))
    }
}

pub fn sandwich_constants(k: usize, alpha: f64) -> Result<SandwichConstants> {
    if k < 2 {
        return Err(Error::domain(format!("k must be >= 2, got {k}")));
    }
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("balance ratio alpha must be >= 1, got {alpha}")));
    }
    let a = gate_alpha(k, alpha);
    let kf = k as f64;
    let kp1 = k as i32 + 1;
    let l = (a.powi(2 * kp1) * kf * kf).ceil() + 1.0;
    let gamma1 = a.powi(3 * kp1) * (kf * kf + kf).powi(2) + (kf - 1.0).powi(2);
    let gamma2 = kf * kf * a.powi(kp1) / 2.0;
    let ln_a = a.ln();
    let log_eps1 = -(kf + 1.0) * l * ln_a + l * l.ln() + (1.0 - l) * ln_binomial(kf * l, kf);
    let log_eps2 = (kf + 1.0) * l * ln_a + (l - kf * l + kf) * l.ln();
    let c = SandwichConstants {
        alpha: a,
        alpha_requested: alpha,
        inflated: a != alpha,
        k,
        l,
        gamma1,
        gamma2,
        log_eps1,
        log_eps2,
    };
    if [l, gamma1, gamma2, log_eps1, log_eps2].iter().any(|x| !x.is_finite()) {
        return Err(Error::domain(format!(
            "sandwich constants overflow f64 for k={k}, alpha={alpha}"
        )));
    }
    Ok(c)
}

/// Bounds on `ln P` with the constants that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateInterval {
    pub k: usize,
    pub m: usize,
    pub log_lower: f64,
    /// `-ζ - m(k-1)`.
    pub log_point: f64,
    pub log_upper: f64,
    pub zeta: f64,
    pub constants: SandwichConstants,
}

impl EstimateInterval {
    pub fn contains(&self, ln_p: f64) -> bool {
        self.log_lower <= ln_p && ln_p <= self.log_upper
    }

    pub fn width(&self) -> f64 {
        self.log_upper - self.log_lower
    }

    /// Single exponent `γ` with `[point - γ ln m, point + γ ln m]` covering
    /// both ends of the interval.
    pub fn symmetric_gamma(&self) -> f64 {
        let ln_m = (self.m as f64).ln();
        ((self.log_point - self.log_lower) / ln_m).max((self.log_upper - self.log_point) / ln_m)
    }
}

/// Interval for `ln P(Z)` of an `α`-balanced k-stochastic weight on `k·m` vertices.
pub fn interval_stochastic(k: usize, m: usize, alpha: f64) -> Result<EstimateInterval> {
    shifted_interval(k, m, alpha, 0.0)
}

fn shifted_interval(k: usize, m: usize, alpha: f64, zeta: f64) -> Result<EstimateInterval> {
    if m <= 1 {
        return Err(Error::domain(format!("the interval needs m > 1, got {m}")));
    }
    let c = sandwich_constants(k, alpha)?;
    let ln_m = (m as f64).ln();
    let base = -((m * (k - 1)) as f64) - zeta;
    Ok(EstimateInterval {
        k,
        m,
        log_lower: c.log_eps1 - c.gamma1 * ln_m + base,
        log_point: base,
        log_upper: c.log_eps2 + c.gamma2 * ln_m + base,
        zeta,
        constants: c,
    })
}

/// Interval for `ln P(W)` from the scaling of `W`.
///
/// `alpha_w` is the balance ratio of `W`; the scaled weight is then
/// `alpha_w^{k+1}`-balanced and the constants are taken at that value.
pub fn interval_from_scaling(outcome: &ScalingOutcome, alpha_w: f64) -> Result<EstimateInterval> {
    if !outcome.converged {
        return Err(Error::State("scaling outcome did not converge".into()));
    }
    if !(alpha_w >= 1.0) {
        return Err(Error::domain(format!("balance ratio alpha must be >= 1, got {alpha_w}")));
    }
    let spec = outcome.z.spec();
    let alpha_z = alpha_w.powi(spec.k() as i32 + 1);
    shifted_interval(spec.k(), spec.m(), alpha_z, outcome.zeta)
}

/// Whether the hypotheses of the regular-hypergraph bound are met.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Applicability {
    /// `0 < α < 1` and `s < m`: the bound is guaranteed for `m >= m₀`, with
    /// `m₀` not known explicitly, so at a given `m` it is not certified.
    AsymptoticOnly,
    /// `α >= 1` or `s = m`: outside the proven range; reported for reference.
    OutsideHypotheses,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularBound {
    /// `m ln α + ln Φ_k(m) - ln Φ_k(m-s)`.
    pub log_value: f64,
    /// `d / C(km-1, k-1)`.
    pub alpha: f64,
    pub applicability: Applicability,
}

impl RegularBound {
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }
}

/// Lower bound on the number of size-`s` matchings of a `d`-regular
/// k-uniform hypergraph on `k·m` vertices.
pub fn regular_matching_lower_bound(k: usize, m: usize, d: u64, s: usize) -> Result<RegularBound> {
    if k < 2 || m < 1 {
        return Err(Error::domain(format!("need k >= 2 and m >= 1, got k={k}, m={m}")));
    }
    if s < 1 || s > m {
        return Err(Error::domain(format!("matching size s must be in 1..={m}, got {s}")));
    }
    if d < 1 {
        return Err(Error::domain("degree d must be >= 1"));
    }
    let full = ln_binomial((k * m - 1) as f64, (k - 1) as f64);
    let ln_alpha = (d as f64).ln() - full;
    let alpha = ln_alpha.exp();
    let applicability = if alpha < 1.0 && s < m {
        Applicability::AsymptoticOnly
    } else {
        Applicability::OutsideHypotheses
    };
    Ok(RegularBound {
        log_value: m as f64 * ln_alpha + log_phi(k, m) - log_phi(k, m - s),
        alpha,
        applicability,
    })
}
