//! Acceptance criteria, one line per criterion. Exits nonzero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use pmatch_core::bounds::{interval_from_scaling, log_phi, phi_exact, regular_matching_lower_bound};
use pmatch_core::exact::{
    count_matchings_by_size, hafnian_exact, partition_function_exact, permanent_ryser, ExactConfig,
};
use pmatch_core::io::{gen_balanced, serialize_instance, Instance, UniformStream};
use pmatch_core::scaling::{balance_ratio, marginals, scale_to_k_stochastic, ScalingConfig, ScalingOutcome};
use pmatch_core::tester::{test_hypergraph, TestConfig, TestParams, Verdict};
use pmatch_core::{Edge, EdgeSublist, HypergraphSpec, Kind, WeightVector};

const KINDS: [Kind; 2] = [Kind::CompleteUniform, Kind::CompletePartite];

struct Check {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Check {
    Check { pass, detail: detail.into() }
}

fn spec(kind: Kind, k: usize, m: usize) -> HypergraphSpec {
    HypergraphSpec::new(kind, k, m).unwrap()
}

fn exact_ln(w: &WeightVector) -> f64 {
    partition_function_exact(w, &ExactConfig::default()).unwrap().ln
}

fn random_weight(spec: HypergraphSpec, lo: f64, hi: f64, rng: &mut UniformStream) -> WeightVector {
    WeightVector::from_fn(spec, |_| lo + (hi - lo) * rng.next_f64()).unwrap()
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn c1_oracles() -> Check {
    let start = Instant::now();
    let mut rng = UniformStream::new(1);
    let (mut worst_perm, mut worst_haf) = (0.0f64, 0.0f64);
    let trials = 120;
    for t in 0..trials {
        let m = 1 + t % 6;
        let w = random_weight(spec(Kind::CompletePartite, 2, m), 0.1, 3.0, &mut rng);
        let a: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| w.get(w.spec().edge_index(&Edge::new(vec![i, m + j]).unwrap()).unwrap()))
                    .collect()
            })
            .collect();
        worst_perm = worst_perm.max(rel_err(exact_ln(&w).exp(), permanent_ryser(&a).unwrap()));

        let w = random_weight(spec(Kind::CompleteUniform, 2, m), 0.1, 3.0, &mut rng);
        let mut b = vec![vec![0.0; 2 * m]; 2 * m];
        for (idx, e) in w.spec().enumerate_edges().enumerate() {
            let (x, y) = (e.vertices()[0], e.vertices()[1]);
            b[x][y] = w.get(idx);
            b[y][x] = w.get(idx);
        }
        worst_haf = worst_haf.max(rel_err(exact_ln(&w).exp(), hafnian_exact(&b).unwrap()));
    }
    let elapsed = start.elapsed();
    verdict(
        worst_perm <= 1e-10 && worst_haf <= 1e-10 && elapsed < Duration::from_secs(10),
        format!(
            "{trials}+{trials} instances, max rel err permanent {worst_perm:.2e}, hafnian {worst_haf:.2e}, {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn c2_fixtures() -> Check {
    let tri = WeightVector::from_fn(spec(Kind::CompleteUniform, 2, 3), |e| {
        let v = e.vertices();
        if (v[0] < 3) == (v[1] < 3) { 0.5 } else { 0.0 }
    })
    .unwrap();
    let parity = WeightVector::from_fn(spec(Kind::CompletePartite, 3, 6), |e| {
        let s: usize = e.vertices().iter().enumerate().map(|(i, v)| v - i * 6 + 1).sum();
        if s.is_multiple_of(2) { 1.0 / 18.0 } else { 0.0 }
    })
    .unwrap();
    let stochastic = |w: &WeightVector| marginals(w).per_vertex.iter().all(|r| (r - 1.0).abs() < 1e-12);
    let zero = |w: &WeightVector| partition_function_exact(w, &ExactConfig::default()).unwrap().is_zero;
    let ok = stochastic(&tri) && stochastic(&parity) && zero(&tri) && zero(&parity);
    verdict(ok, format!("two triangles P=0: {}, parity m=6 P=0: {}", zero(&tri), zero(&parity)))
}

struct ScaledInstance {
    alpha: f64,
    outcome: ScalingOutcome,
    ln_w: f64,
}

/// Instances shared by the scaling-identity and sandwich criteria.
fn identity_instances() -> Vec<ScaledInstance> {
    let mut out = Vec::new();
    let mut seed = 3000;
    for alpha in [1.1, 1.3, 2.0, 4.0] {
        for kind in KINDS {
            for k in [2, 3] {
                for m in 2..=4 {
                    for _ in 0..4 {
                        seed += 1;
                        let w = gen_balanced(&spec(kind, k, m), alpha, seed).unwrap();
                        let outcome = scale_to_k_stochastic(&w, &ScalingConfig::default()).unwrap();
                        let ln_w = exact_ln(&w);
                        out.push(ScaledInstance { alpha: balance_ratio(&w).unwrap(), outcome, ln_w });
                    }
                }
            }
        }
    }
    for round in 0..8 {
        let mut rng = UniformStream::new(round);
        for kind in KINDS {
            for k in [2, 3] {
                let w = random_weight(spec(kind, k, 2 + round as usize % 2), 0.05, 5.0, &mut rng);
                let outcome = scale_to_k_stochastic(&w, &ScalingConfig::default()).unwrap();
                let ln_w = exact_ln(&w);
                out.push(ScaledInstance { alpha: balance_ratio(&w).unwrap(), outcome, ln_w });
            }
        }
    }
    out
}

fn c3_identity(instances: &[ScaledInstance]) -> Check {
    let worst = instances
        .iter()
        .map(|i| (exact_ln(&i.outcome.z) - i.ln_w - i.outcome.zeta).abs())
        .fold(0.0, f64::max);
    verdict(
        instances.len() >= 200 && worst <= 1e-8,
        format!("{} instances, max |ln P(Z) - ln P(W) - zeta| = {worst:.2e}", instances.len()),
    )
}

fn c4_convergence() -> Check {
    let (mut count, mut worst_res, mut worst_time, mut max_iter) = (0, 0.0f64, Duration::ZERO, 0);
    let mut all_ok = true;
    let mut seed = 4000;
    for kind in KINDS {
        let max_m = if kind == Kind::CompletePartite { 8 } else { 5 };
        for k in [2, 3] {
            for m in 1..=max_m {
                for alpha in [1.0, 1.25, 1.5, 1.75, 2.0] {
                    seed += 1;
                    let w = gen_balanced(&spec(kind, k, m), alpha, seed).unwrap();
                    let start = Instant::now();
                    let res = scale_to_k_stochastic(&w, &ScalingConfig::default());
                    let t = start.elapsed();
                    count += 1;
                    worst_time = worst_time.max(t);
                    match res {
                        Ok(o) => {
                            worst_res = worst_res.max(o.residual);
                            max_iter = max_iter.max(o.iterations);
                            all_ok &= o.residual <= 1e-10 && o.iterations <= 10_000 && t < Duration::from_secs(5);
                        }
                        Err(_) => all_ok = false,
                    }
                }
            }
        }
    }
    verdict(
        all_ok,
        format!(
            "{count} instances, max residual {worst_res:.2e}, max sweeps {max_iter}, slowest {:.3} s",
            worst_time.as_secs_f64()
        ),
    )
}

fn c5_balance() -> Check {
    let (mut count, mut worst) = (0, 0.0f64);
    let mut seed = 5000;
    for alpha in [1.1, 1.3, 2.0] {
        for kind in KINDS {
            for k in [2, 3] {
                for m in 1..=5 {
                    for _ in 0..4 {
                        seed += 1;
                        let w = gen_balanced(&spec(kind, k, m), alpha, seed).unwrap();
                        let z = scale_to_k_stochastic(&w, &ScalingConfig::default()).unwrap().z;
                        worst = worst.max(balance_ratio(&z).unwrap() / alpha.powi(k as i32 + 1));
                        count += 1;
                    }
                }
            }
        }
    }
    verdict(
        count >= 200 && worst <= 1.0 + 1e-6,
        format!("{count} instances, max balance(Z) / alpha^(k+1) = {worst:.6}"),
    )
}

/// Uniform stochastic weight perturbed edgewise, normalised to total `m`,
/// with ratio at most `alpha` and marginal deviation at most `dev`.
fn near_stochastic(kind: Kind, k: usize, m: usize, alpha: f64, dev: f64, seed: u64) -> WeightVector {
    let spec = spec(kind, k, m);
    let y = 1.0 / spec.vertex_degree() as f64;
    let mut rng = UniformStream::new(seed);
    let u: Vec<f64> = (0..spec.edge_count()).map(|_| 2.0 * rng.next_f64() - 1.0).collect();
    let build = |t: f64| {
        let raw = WeightVector::new(spec, u.iter().map(|x| y * (1.0 + t * x)).collect()).unwrap();
        raw.scaled(m as f64 / raw.total()).unwrap()
    };
    let deviation = |w: &WeightVector| marginals(w).per_vertex.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max);
    let mut t = (alpha - 1.0) / (alpha + 1.0);
    let mut w = build(t);
    while deviation(&w) > dev {
        t *= 0.9 * dev / deviation(&w);
        w = build(t);
    }
    w
}

fn c6_near_stochastic() -> Check {
    let (mut points, mut ok, mut worst) = (0, true, 0.0f64);
    let mut seed = 6000;
    for kind in KINDS {
        for k in [2, 3] {
            for alpha in [1.1, 1.3, 2.0] {
                for delta in [0.25, 0.5, 1.0] {
                    let m0 = (1 + (alpha * delta * k as f64).ceil() as usize).max(k);
                    for m in m0..m0 + 3 {
                        seed += 1;
                        let w = near_stochastic(kind, k, m, alpha, delta / m as f64, seed);
                        ok &= balance_ratio(&w).unwrap() <= alpha;
                        let zeta = scale_to_k_stochastic(&w, &ScalingConfig::default()).unwrap().zeta;
                        let bound = alpha * delta * delta * ((k + 1) * (k + 1)) as f64 / m as f64;
                        ok &= zeta >= -1e-12 && zeta <= bound;
                        worst = worst.max(zeta / bound);
                        points += 1;
                    }
                }
            }
        }
    }
    verdict(ok && points >= 27, format!("{points} grid points, max zeta / bound = {worst:.3e}"))
}

fn c7_sandwich(instances: &[ScaledInstance]) -> Check {
    let (mut lower_ok, mut upper_ok, mut worst_upper) = (0, 0, f64::NEG_INFINITY);
    for i in instances {
        let interval = interval_from_scaling(&i.outcome, i.alpha).unwrap();
        lower_ok += usize::from(interval.log_lower <= i.ln_w);
        upper_ok += usize::from(i.ln_w <= interval.log_upper);
        worst_upper = worst_upper.max(i.ln_w - interval.log_upper);
    }
    let n = instances.len();
    verdict(
        lower_ok == n && upper_ok == n,
        format!(
            "{n} instances, lower end holds on {lower_ok}, upper end holds on {upper_ok} (max ln P - upper = {worst_upper:.3e})"
        ),
    )
}

fn c8_phi() -> Check {
    let mut ok = phi_exact(2, 2).map(|p| p.to_string()) == Some("3".into())
        && phi_exact(3, 2).map(|p| p.to_string()) == Some("10".into())
        && (log_phi(2, 2).exp() - 3.0).abs() < 1e-9
        && (log_phi(3, 2).exp() - 10.0).abs() < 1e-9;
    let mut phi34 = String::new();
    for k in [2, 3] {
        for m in 1..=4 {
            let sub = EdgeSublist::full(spec(Kind::CompleteUniform, k, m));
            let table = count_matchings_by_size(&sub, &ExactConfig::default()).unwrap();
            let phi = phi_exact(k, m).unwrap();
            ok &= table.perfect() == &phi;
            if (k, m) == (3, 4) {
                phi34 = table.perfect().to_string();
                ok &= phi.to_string() == "15400";
            }
        }
    }
    verdict(ok, format!("Phi_2(2)=3, Phi_3(2)=10, enumerated Phi_3(4)={phi34}"))
}

fn c9_tester() -> Check {
    let cfg = TestConfig::default();
    let mut checked = 0;
    let mut ok = true;
    for m in 1..=3 {
        let base = spec(Kind::CompleteUniform, 2, m);
        let e = base.edge_count();
        for mask in 0u32..1 << e {
            let members: BTreeSet<usize> = (0..e).filter(|i| mask >> i & 1 == 1).collect();
            let sub = EdgeSublist::new(base, members).unwrap();
            for (delta, beta) in [(0.5, 0.5), (0.9, 0.9), (0.2, 0.3)] {
                match catch_unwind(AssertUnwindSafe(|| test_hypergraph(&sub, &TestParams::new(delta, beta), &cfg))) {
                    Ok(Ok(r)) => ok &= r.verdict.includes_many() || r.verdict.includes_few(),
                    _ => ok = false,
                }
                checked += 1;
            }
        }
    }
    let k6 = spec(Kind::CompleteUniform, 2, 3);
    let half = TestParams::new(0.5, 0.5);
    let full = test_hypergraph(&EdgeSublist::full(k6), &half, &cfg).unwrap().verdict;
    let empty = test_hypergraph(&EdgeSublist::empty(k6), &half, &cfg).unwrap().verdict;
    let triangles = EdgeSublist::from_edges(
        k6,
        [[0, 1], [0, 2], [1, 2], [3, 4], [3, 5], [4, 5]].map(|e| Edge::new(e.to_vec()).unwrap()),
    )
    .unwrap();
    let tri = test_hypergraph(&triangles, &TestParams::new(0.9, 0.9), &cfg).unwrap().verdict;
    ok &= full.includes_many() && empty.includes_few() && tri == Verdict::FewPerfectMatchings;
    verdict(ok, format!("{checked} direct-branch runs; full {full:?}, empty {empty:?}, two triangles {tri:?}"))
}

fn c10_regular_bound() -> Check {
    let (mut ok, mut checked) = (true, 0);
    for k in [2, 3] {
        for m in 1..=4 {
            let sub = EdgeSublist::full(spec(Kind::CompleteUniform, k, m));
            let d = sub.base().vertex_degree() as u64;
            let counts = count_matchings_by_size(&sub, &ExactConfig::default()).unwrap().counts;
            for s in 1..=m {
                let bound = regular_matching_lower_bound(k, m, d, s).unwrap();
                let ln_count = counts[s].to_string().parse::<f64>().unwrap().ln();
                ok &= ln_count >= bound.log_value - 1e-9;
                checked += 1;
            }
        }
    }
    verdict(ok, format!("{checked} (k, m, s) cases"))
}

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_pmatch")).args(args).output().expect("spawn pmatch");
    (out.status.code(), out.stdout)
}

fn write(dir: &Path, name: &str, inst: &Instance) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serialize_instance(inst)).unwrap();
    path.to_string_lossy().into_owned()
}

fn c11_determinism() -> Check {
    let dir: PathBuf = std::env::temp_dir().join(format!("pmatch-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let weights = write(&dir, "w.json", &Instance::weights(gen_balanced(&spec(Kind::CompleteUniform, 3, 3), 2.0, 7).unwrap()));
    let partite = write(&dir, "p.json", &Instance::weights(gen_balanced(&spec(Kind::CompletePartite, 3, 4), 1.5, 8).unwrap()));
    let sub = write(
        &dir,
        "s.json",
        &Instance::sublist(pmatch_core::io::gen_sublist(&spec(Kind::CompleteUniform, 2, 4), 0.5, 9).unwrap()),
    );
    let runs: Vec<Vec<&str>> = vec![
        vec!["exact", &weights],
        vec!["exact", &partite],
        vec!["exact", &sub],
        vec!["scale", &weights],
        vec!["scale", &partite],
        vec!["estimate", &weights],
        vec!["estimate", &partite, "--alpha", "1.5"],
        vec!["test", &sub, "--delta", "0.5", "--beta", "0.5"],
        vec!["test", &sub, "--delta", "0.5", "--beta", "0.5", "--gamma-override", "0.1"],
        vec!["phi", "3", "4"],
        vec!["phi", "5", "30"],
        vec!["bound-regular", "3", "4", "20", "2"],
        vec!["gen", "--kind", "partite", "--k", "3", "--m", "3", "--alpha", "2", "--seed", "11"],
        vec!["gen", "--kind", "uniform", "--k", "2", "--m", "4", "--sublist", "0.3", "--seed", "11"],
    ];
    let mut failures = Vec::new();
    for args in &runs {
        let mut full = vec!["--format", "machine"];
        full.extend(args.iter().copied());
        let (c1, a) = run_cli(&full);
        let (c2, b) = run_cli(&full);
        if c1 != Some(0) || c1 != c2 || a != b || a.is_empty() {
            failures.push(args[0].to_string());
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    verdict(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} invocations, each run twice, identical bytes", runs.len())
        } else {
            format!("differing or failing runs: {failures:?}")
        },
    )
}

fn main() {
    let shared = identity_instances();
    let criteria: Vec<(&str, Box<dyn Fn() -> Check + '_>)> = vec![
        ("C1 exact engine vs permanent and hafnian oracles", Box::new(c1_oracles)),
        ("C2 stochastic weights with no perfect matching", Box::new(c2_fixtures)),
        ("C3 scaling identity", Box::new(|| c3_identity(&shared))),
        ("C4 scaling convergence", Box::new(c4_convergence)),
        ("C5 balance propagation", Box::new(c5_balance)),
        ("C6 near-stochastic zeta bound", Box::new(c6_near_stochastic)),
        ("C7 sandwich containment", Box::new(|| c7_sandwich(&shared))),
        ("C8 Phi values", Box::new(c8_phi)),
        ("C9 tester dichotomy", Box::new(c9_tester)),
        ("C10 regular-hypergraph bound dominance", Box::new(c10_regular_bound)),
        ("C11 deterministic CLI output", Box::new(c11_determinism)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let v = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| verdict(false, "panicked"));
        failed += usize::from(!v.pass);
        println!("[{}] {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
