//! Deciding between "has a matching with at least βm edges" and "has at most
//! δ^m Φ_k(m) perfect matchings" for a k-uniform hypergraph given as an edge
//! sublist of the complete one.
//!
//! With `ε = ½ δ^{1/(1-β)}`, the hypergraph is turned into the weight
//! `w_S = 1` on its edges and `ε` elsewhere. For small `m` (`m = 1` or
//! `m / ln m <= 2γ / ((1-β) ln 2)`) both conclusions are decided by exact
//! enumeration. Otherwise `η = exp(-ζ - m(k-1))` from the scaling of the
//! weight is compared against the threshold: conclusion (a) when
//! `η m^γ > δ^m Φ_k(m)`, else (b).
//!
//! The default `γ` is `γ₁ + γ₂` of the sandwich constants at `α = 1/ε`. With
//! those constants the estimated branch is only reached for very large `m`;
//! [`TestReport::crossover_m`] reports where.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::bounds::{interval_from_scaling, log_phi, sandwich_constants};
use crate::error::{Error, Result};
use crate::exact::{count_matchings_by_size, max_matching_size, ExactConfig};
use crate::hypergraph::{EdgeSublist, Kind};
use crate::scaling::{scale_to_k_stochastic, ScalingConfig};
use crate::weight::WeightVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// (a): a matching with at least `βm` edges exists.
    ManyMatchings,
    /// (b): at most `δ^m Φ_k(m)` perfect matchings.
    FewPerfectMatchings,
    Both,
}

impl Verdict {
    pub fn includes_many(self) -> bool {
        matches!(self, Verdict::ManyMatchings | Verdict::Both)
    }

    pub fn includes_few(self) -> bool {
        matches!(self, Verdict::FewPerfectMatchings | Verdict::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    DirectEnumeration,
    Estimated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestParams {
    pub delta: f64,
    pub beta: f64,
    pub gamma_override: Option<f64>,
    /// Bypasses the small-`m` gate.
    pub force_branch: Option<Branch>,
}

impl TestParams {
    pub fn new(delta: f64, beta: f64) -> Self {
        TestParams { delta, beta, gamma_override: None, force_branch: None }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TestConfig {
    pub exact: ExactConfig,
    pub scaling: ScalingConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestReport {
    pub verdict: Verdict,
    pub branch: Branch,
    pub k: usize,
    pub m: usize,
    pub delta: f64,
    pub beta: f64,
    pub epsilon: f64,
    /// `ln η`; estimated branch only.
    pub log_eta: Option<f64>,
    pub gamma_used: f64,
    /// False when `γ` came from an override.
    pub gamma_is_default: bool,
    /// `m ln δ + ln Φ_k(m)`.
    pub log_threshold: f64,
    /// Smallest `m` at which the small-`m` gate stops firing for this `γ`
    /// and `β`; `None` if it does not fit in `u64`.
    pub crossover_m: Option<u64>,
    /// Direct branch only.
    pub max_matching: Option<usize>,
    /// Direct branch only.
    #[serde(serialize_with = "ser_opt_biguint")]
    pub perfect_matchings: Option<BigUint>,
}

fn ser_opt_biguint<S: serde::Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_some(&x.to_string()),
        None => s.serialize_none(),
    }
}

/// `ε = ½ δ^{1/(1-β)}`.
pub fn epsilon(delta: f64, beta: f64) -> f64 {
    0.5 * delta.powf(1.0 / (1.0 - beta))
}

/// Weight on the complete hypergraph: 1 on members, `ε` elsewhere.
pub fn build_test_weight(sub: &EdgeSublist, eps: f64) -> Result<WeightVector> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!("epsilon must be in (0, 1), got {eps}")));
    }
    let values = (0..sub.base().edge_count())
        .map(|i| if sub.contains(i) { 1.0 } else { eps })
        .collect();
    WeightVector::new(*sub.base(), values)
}

/// True when `m = 1` or `m / ln m <= 2γ / ((1-β) ln 2)`, i.e. when the
/// decision must be made by direct enumeration.
pub fn small_m_gate(m: usize, gamma: f64, beta: f64) -> bool {
    if m <= 1 {
        return true;
    }
    let m = m as f64;
    m / m.ln() <= gate_rhs(gamma, beta)
}

fn gate_rhs(gamma: f64, beta: f64) -> f64 {
    2.0 * gamma / ((1.0 - beta) * std::f64::consts::LN_2)
}

/// Smallest integer `m >= 2` with `small_m_gate(m) == false`.
pub fn crossover_m(gamma: f64, beta: f64) -> Option<u64> {
    let rhs = gate_rhs(gamma, beta);
    if !rhs.is_finite() {
        return None;
    }
    let fails = |m: u64| !small_m_gate(m as usize, gamma, beta);
    // m / ln m decreases on [2, e] and increases afterwards
    for m in 2..=3 {
        if fails(m) {
            return Some(m);
        }
    }
    let mut hi = 4u64;
    while !fails(hi) {
        hi = hi.checked_mul(2)?;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fails(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

pub fn test_hypergraph(sub: &EdgeSublist, params: &TestParams, cfg: &TestConfig) -> Result<TestReport> {
    let spec = *sub.base();
    if spec.kind() != Kind::CompleteUniform {
        return Err(Error::structural("testing applies to sublists of the complete k-uniform hypergraph"));
    }
    let TestParams { delta, beta, gamma_override, force_branch } = *params;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::domain(format!("delta must be in (0, 1], got {delta}")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::domain(format!("beta must be in (0, 1), got {beta}")));
    }
    let (k, m) = (spec.k(), spec.m());
    let eps = epsilon(delta, beta);
    let gamma = match gamma_override {
        Some(g) if !(g > 0.0) || !g.is_finite() => {
            return Err(Error::domain(format!("gamma override must be positive and finite, got {g}")))
        }
        Some(g) => g,
        None => {
            let c = sandwich_constants(k, 1.0 / eps)?;
            c.gamma1 + c.gamma2
        }
    };
    let log_threshold = m as f64 * delta.ln() + log_phi(k, m);
    let branch = force_branch.unwrap_or(if small_m_gate(m, gamma, beta) {
        Branch::DirectEnumeration
    } else {
        Branch::Estimated
    });

    let mut report = TestReport {
        verdict: Verdict::Both,
        branch,
        k,
        m,
        delta,
        beta,
        epsilon: eps,
        log_eta: None,
        gamma_used: gamma,
        gamma_is_default: gamma_override.is_none(),
        log_threshold,
        crossover_m: crossover_m(gamma, beta),
        max_matching: None,
        perfect_matchings: None,
    };

    match branch {
        Branch::DirectEnumeration => {
            let need = (beta * m as f64).ceil() as usize;
            let largest = max_matching_size(sub, &cfg.exact)?;
            let perfect = count_matchings_by_size(sub, &cfg.exact)?.perfect().clone();
            let many = largest >= need;
            let few = count_at_most(&perfect, log_threshold);
            assert!(many || few, "at least one conclusion holds on every hypergraph");
            report.verdict = match (many, few) {
                (true, true) => Verdict::Both,
                (true, false) => Verdict::ManyMatchings,
                _ => Verdict::FewPerfectMatchings,
            };
            report.max_matching = Some(largest);
            report.perfect_matchings = Some(perfect);
        }
        Branch::Estimated => {
            let w = build_test_weight(sub, eps)?;
            let outcome = scale_to_k_stochastic(&w, &cfg.scaling)?;
            let interval = interval_from_scaling(&outcome, 1.0 / eps)?;
            let log_eta = interval.log_point;
            report.log_eta = Some(log_eta);
            report.verdict = if log_eta + gamma * (m as f64).ln() > log_threshold {
                Verdict::ManyMatchings
            } else {
                Verdict::FewPerfectMatchings
            };
        }
    }
    Ok(report)
}

/// `count <= exp(log_threshold)`, with a relative slack of 1e-12 in log
/// space to absorb rounding in `ln Φ_k(m)`.
fn count_at_most(count: &BigUint, log_threshold: f64) -> bool {
    if count.is_zero() {
        return true;
    }
    let ln_count = match count.to_f64() {
        Some(x) if x.is_finite() => x.ln(),
        _ => count.bits() as f64 * std::f64::consts::LN_2,
    };
    ln_count <= log_threshold + 1e-12 * log_threshold.abs().max(1.0)
}
