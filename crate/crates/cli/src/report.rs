use std::fmt::Write as _;

use anyhow::{bail, Result};
use pmatch_core::bounds::{
    interval_from_scaling, log_phi, phi_exact, regular_matching_lower_bound, EstimateInterval, RegularBound,
};
use pmatch_core::exact::{count_matchings_by_size, partition_function_exact, LogValue};
use pmatch_core::io::{gen_balanced, gen_sublist, parse_instance, serialize_instance, Instance, OutputFormat, Payload, RunConfig};
use pmatch_core::scaling::{balance_ratio, scale_to_k_stochastic, ScalingOutcome};
use pmatch_core::tester::{test_hypergraph, TestConfig, TestParams, TestReport};
use pmatch_core::{Error, HypergraphSpec};
use serde::Serialize;

use crate::{read_input, Command};

pub fn run(command: &Command, config: &RunConfig) -> Result<String> {
    config.validate()?;
    let fmt = config.output_format;
    match command {
        Command::Exact { path } => {
            let inst = parse_instance(&read_input(path)?)?;
            match &inst.payload {
                Payload::Weights(w) => {
                    let p = partition_function_exact(w, &config.exact())?;
                    Ok(render(fmt, &ExactReport::new(&inst.spec, p), exact_text))
                }
                Payload::Sublist(s) => {
                    let table = count_matchings_by_size(s, &config.exact())?;
                    let counts = table.counts.iter().map(|c| c.to_string()).collect();
                    Ok(render(fmt, &CountsReport { k: inst.spec.k(), m: inst.spec.m(), counts }, counts_text))
                }
            }
        }
        Command::Scale { path } => {
            let w = weights_of(parse_instance(&read_input(path)?)?)?;
            let outcome = scale_to_k_stochastic(&w, &config.scaling())?;
            Ok(render(fmt, &ScaleReport::new(&w, &outcome)?, scale_text))
        }
        Command::Estimate { path, alpha } => {
            let w = weights_of(parse_instance(&read_input(path)?)?)?;
            let alpha = match alpha {
                Some(a) => *a,
                None => balance_ratio(&w)?,
            };
            let outcome = scale_to_k_stochastic(&w, &config.scaling())?;
            let interval = interval_from_scaling(&outcome, alpha)?;
            let report = EstimateReport { alpha_w: alpha, residual: outcome.residual, iterations: outcome.iterations, interval };
            Ok(render(fmt, &report, estimate_text))
        }
        Command::Test { path, delta, beta, gamma_override } => {
            let inst = parse_instance(&read_input(path)?)?;
            let Payload::Sublist(sub) = inst.payload else {
                bail!(Error::Domain("the test subcommand needs a sublist instance".into()));
            };
            let params = TestParams { gamma_override: *gamma_override, ..TestParams::new(*delta, *beta) };
            let cfg = TestConfig { exact: config.exact(), scaling: config.scaling() };
            let report = test_hypergraph(&sub, &params, &cfg)?;
            Ok(render(fmt, &report, test_text))
        }
        Command::Phi { k, m } => {
            if *k < 2 {
                bail!(Error::Domain(format!("k must be >= 2, got {k}")));
            }
            let report = PhiReport { k: *k, m: *m, log_phi: log_phi(*k, *m), phi: phi_exact(*k, *m).map(|p| p.to_string()) };
            Ok(render(fmt, &report, phi_text))
        }
        Command::BoundRegular { k, m, d, s } => {
            let bound = regular_matching_lower_bound(*k, *m, *d, *s)?;
            Ok(render(fmt, &BoundReport { k: *k, m: *m, d: *d, s: *s, bound }, bound_text))
        }
        Command::Gen { kind, k, m, alpha, sublist } => {
            let spec = HypergraphSpec::new(*kind, *k, *m)?;
            let inst = match sublist {
                Some(p) => Instance::sublist(gen_sublist(&spec, *p, config.seed)?),
                None => Instance::weights(gen_balanced(&spec, *alpha, config.seed)?),
            };
            Ok(serialize_instance(&inst))
        }
    }
}

fn weights_of(inst: Instance) -> Result<pmatch_core::WeightVector> {
    match inst.payload {
        Payload::Weights(w) => Ok(w),
        Payload::Sublist(_) => bail!(Error::Domain("this subcommand needs a weight instance".into())),
    }
}

fn render<T: Serialize>(fmt: OutputFormat, report: &T, text: fn(&T) -> String) -> String {
    match fmt {
        OutputFormat::Text => text(report),
        OutputFormat::Machine => {
            let mut s = serde_json::to_string(report).expect("reports serialize");
            s.push('\n');
            s
        }
    }
}

pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Capacity { .. }) => 3,
        Some(Error::NonConvergence { .. }) => 4,
        _ => 2,
    }
}

fn error_class(err: &anyhow::Error) -> &'static str {
    match err.downcast_ref::<Error>() {
        Some(Error::Structural(_)) => "structural",
        Some(Error::Domain(_)) => "domain",
        Some(Error::Positivity { .. }) => "positivity",
        Some(Error::Capacity { .. }) => "capacity",
        Some(Error::NonConvergence { .. }) => "non_convergence",
        Some(Error::State(_)) => "state",
        Some(Error::Parse { .. }) => "parse",
        None => "input",
    }
}

pub fn diagnostic(err: &anyhow::Error, fmt: OutputFormat) -> String {
    let class = error_class(err);
    let message = format!("{err:#}");
    match fmt {
        OutputFormat::Text => format!("error[{class}]: {message}\n"),
        OutputFormat::Machine => {
            let v = serde_json::json!({ "error": { "class": class, "exit_code": exit_code(err), "message": message } });
            format!("{v}\n")
        }
    }
}

#[derive(Serialize)]
struct ExactReport {
    k: usize,
    m: usize,
    ln_p: Option<f64>,
    p: Option<f64>,
    is_zero: bool,
}

impl ExactReport {
    fn new(spec: &HypergraphSpec, v: LogValue) -> Self {
        ExactReport {
            k: spec.k(),
            m: spec.m(),
            ln_p: (!v.is_zero).then_some(v.ln),
            p: v.representable(),
            is_zero: v.is_zero,
        }
    }
}

fn exact_text(r: &ExactReport) -> String {
    if r.is_zero {
        return "P = 0\nln P = -inf\n".to_string();
    }
    let mut s = String::new();
    if let Some(p) = r.p {
        let _ = writeln!(s, "P = {p:.17e}");
    }
    let _ = writeln!(s, "ln P = {:.17e}", r.ln_p.unwrap());
    s
}

#[derive(Serialize)]
struct CountsReport {
    k: usize,
    m: usize,
    counts: Vec<String>,
}

fn counts_text(r: &CountsReport) -> String {
    let mut s = String::new();
    for (size, c) in r.counts.iter().enumerate() {
        let _ = writeln!(s, "matchings of size {size}: {c}");
    }
    s
}

#[derive(Serialize)]
struct ScaleReport {
    k: usize,
    m: usize,
    zeta: f64,
    residual: f64,
    iterations: usize,
    converged: bool,
    balance_w: f64,
    balance_z: f64,
    lambda: Vec<f64>,
}

impl ScaleReport {
    fn new(w: &pmatch_core::WeightVector, o: &ScalingOutcome) -> Result<Self> {
        Ok(ScaleReport {
            k: w.spec().k(),
            m: w.spec().m(),
            zeta: o.zeta,
            residual: o.residual,
            iterations: o.iterations,
            converged: o.converged,
            balance_w: balance_ratio(w)?,
            balance_z: balance_ratio(&o.z)?,
            lambda: o.lambda.clone(),
        })
    }
}

fn scale_text(r: &ScaleReport) -> String {
    format!(
        "zeta = {:.17e}\nresidual = {:.3e}\niterations = {}\nconverged = {}\nbalance(W) = {:.17e}\nbalance(Z) = {:.17e}\n",
        r.zeta, r.residual, r.iterations, r.converged, r.balance_w, r.balance_z
    )
}

#[derive(Serialize)]
struct EstimateReport {
    alpha_w: f64,
    residual: f64,
    iterations: usize,
    interval: EstimateInterval,
}

fn estimate_text(r: &EstimateReport) -> String {
    let i = &r.interval;
    let c = &i.constants;
    let mut s = String::new();
    let _ = writeln!(s, "zeta = {:.17e}", i.zeta);
    let _ = writeln!(s, "ln P lower = {:.17e}", i.log_lower);
    let _ = writeln!(s, "ln P point = {:.17e}", i.log_point);
    let _ = writeln!(s, "ln P upper = {:.17e}", i.log_upper);
    let _ = writeln!(
        s,
        "constants: alpha(W) = {}, alpha = {}{}, l = {}, gamma1 = {:.6e}, gamma2 = {:.6e}, ln eps1 = {:.6e}, ln eps2 = {:.6e}",
        r.alpha_w,
        c.alpha,
        if c.inflated { " (raised so alpha^(k+1) > 2)" } else { "" },
        c.l,
        c.gamma1,
        c.gamma2,
        c.log_eps1,
        c.log_eps2
    );
    let _ = writeln!(s, "scaling: residual = {:.3e}, iterations = {}", r.residual, r.iterations);
    s
}

fn test_text(r: &TestReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "verdict = {:?}", r.verdict);
    let _ = writeln!(s, "branch = {:?}", r.branch);
    let _ = writeln!(s, "epsilon = {:.17e}", r.epsilon);
    let _ = writeln!(
        s,
        "gamma = {:.6e} ({})",
        r.gamma_used,
        if r.gamma_is_default { "default gamma1 + gamma2" } else { "override" }
    );
    let _ = writeln!(s, "ln threshold = {:.17e}", r.log_threshold);
    if let Some(e) = r.log_eta {
        let _ = writeln!(s, "ln eta = {e:.17e}");
    }
    if let Some(mm) = r.max_matching {
        let _ = writeln!(s, "max matching = {mm}");
    }
    if let Some(p) = &r.perfect_matchings {
        let _ = writeln!(s, "perfect matchings = {p}");
    }
    match r.crossover_m {
        Some(c) => {
            let _ = writeln!(s, "estimated branch applies from m = {c}");
        }
        None => {
            let _ = writeln!(s, "estimated branch applies beyond u64 range");
        }
    }
    s
}

#[derive(Serialize)]
struct PhiReport {
    k: usize,
    m: usize,
    log_phi: f64,
    phi: Option<String>,
}

fn phi_text(r: &PhiReport) -> String {
    match &r.phi {
        Some(p) => format!("Φ = {p}\nln Φ = {:.17e}\n", r.log_phi),
        None => format!("ln Φ = {:.17e}\n", r.log_phi),
    }
}

#[derive(Serialize)]
struct BoundReport {
    k: usize,
    m: usize,
    d: u64,
    s: usize,
    bound: RegularBound,
}

fn bound_text(r: &BoundReport) -> String {
    format!(
        "ln bound = {:.17e}\nbound = {:.17e}\nalpha = {:.17e}\napplicability = {:?}\n",
        r.bound.log_value,
        r.bound.value(),
        r.bound.alpha,
        r.bound.applicability
    )
}
