//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with a
//! non-zero status if any criterion fails.
//!
//! ```text
//! cargo test --release --test acceptance
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rerm::bounds::{
    convergence_errors, expected_bound, high_prob_bound, kernel_stability, sufficient_training, ConvergenceErrors,
    Regime, RhoSource,
};
use rerm::data::{generate_gaussian_regression, generate_logistic_classification, Dataset};
use rerm::harness::{
    check_gradients, logistic_reference, ridge_solution, run_experiment, stability_audit, AuditConfig,
    ExperimentConfig, REFERENCE_TOLERANCE,
};
use rerm::model::{LossSpec, Model};
use rerm::objective::{default_domain_radius, estimate_constants, Objective, ProblemConstants};
use rerm::optim::{
    run_gd, run_sgd, run_svrg, svrg_direction, Algorithm, RunOptions, StepSchedule, SvrgParams, Trace,
};
use rerm::ParameterVector;

type Outcome = Result<(bool, String), Box<dyn std::error::Error>>;

fn constants_at_zero(objective: &Objective) -> rerm::Result<ProblemConstants> {
    let w0 = ParameterVector::zeros(objective.num_params());
    estimate_constants(objective, default_domain_radius(objective, &w0)?)
}

fn ridge_problem() -> rerm::Result<Objective> {
    let (data, _) = generate_gaussian_regression(1000, 20, 0.1, 3)?;
    let lambda = 1.0 / (data.len() as f64).sqrt();
    Objective::new(data, Model::linear(20), LossSpec::Squared, lambda)
}

/// Train/test split with exactly `n_train` training instances.
fn split_exact(all: &Dataset, n_train: usize, seed: u64) -> rerm::Result<(Dataset, Dataset)> {
    let frac = (n_train as f64 + 0.5) / all.len() as f64;
    all.split(frac, seed)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let report = check_gradients(2024, 30)?;
    let secs = start.elapsed().as_secs_f64();
    let worst = report.cases.iter().map(|c| c.max_relative_error).fold(0.0, f64::max);
    let enough = report.cases.iter().all(|c| c.probes >= 30);
    let ok = report.passed() && enough && report.step == 1e-5 && secs < 60.0;
    Ok((ok, format!("{} cases, worst relative error {worst:.2e}, {secs:.1}s", report.cases.len())))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (all, _) = generate_gaussian_regression(40_000, 100, 0.1, 0)?;
    let (train, _) = all.split(0.5, 0)?;
    let lambda = 1.0 / (train.len() as f64).sqrt();
    let objective = Objective::new(train, Model::linear(100), LossSpec::Squared, lambda)?;
    let c = constants_at_zero(&objective)?;
    let secs = start.elapsed().as_secs_f64();
    let kappa = c.kappa_finite_sum;
    let ok = (116.0 / 2.0..=116.0 * 2.0).contains(&kappa) && secs < 120.0;
    Ok((ok, format!("kappa = {kappa:.1} (Hessian gamma_w/mu = {:.3}), {secs:.1}s", c.kappa)))
}

fn criterion_3() -> Outcome {
    let objective = ridge_problem()?;
    let c = constants_at_zero(&objective)?;
    let w_star = ridge_solution(&objective)?;
    let w0 = ParameterVector::zeros(20);
    let trace = run_gd(&objective, &w0, 1.0 / c.smoothness, 200, RunOptions::default().with_reference(&w_star))?;
    let rho: Vec<f64> = trace.records.iter().map(|r| r.suboptimality.unwrap_or(f64::NAN)).collect();
    let Some(hit) = rho.iter().position(|&r| r <= 1e-12) else {
        return Ok((false, format!("rho0 never reached 1e-12 (last {:.3e})", rho[rho.len() - 1])));
    };
    let bound = (1.0 - c.strong_convexity / c.smoothness).powi(2) + 1e-6;
    let worst = rho[..=hit].windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    Ok((
        worst <= bound,
        format!("max ratio {worst:.6} <= {bound:.6} over {hit} iterations"),
    ))
}

fn criterion_4() -> Outcome {
    let objective = ridge_problem()?;
    let c = constants_at_zero(&objective)?;
    let w_star = ridge_solution(&objective)?;
    let n = objective.n() as u64;
    let params = SvrgParams {
        eta: 0.1 / c.max_instance_smoothness,
        inner: 2 * n,
        stages: 80,
        output: Default::default(),
    };
    let opts = RunOptions::default().with_reference(&w_star).with_eval_every(params.inner);
    let trace = run_svrg(&objective, &ParameterVector::zeros(20), &params, 4, opts)?;
    let rho: Vec<f64> = trace.records.iter().map(|r| r.suboptimality.unwrap_or(f64::NAN)).collect();
    let eps = 1e-10;
    let Some(stages) = rho.iter().position(|&r| r <= eps) else {
        return Ok((false, format!("rho0 never reached {eps:e} in {} stages", params.stages)));
    };
    let ratios: Vec<f64> = rho[..=stages].windows(2).map(|w| w[1] / w[0]).collect();
    let r_max = ratios.iter().copied().fold(0.0, f64::max);
    // least-squares slope of ln rho0 against the stage index
    let pts: Vec<(f64, f64)> = rho[..=stages].iter().enumerate().map(|(s, r)| (s as f64, r.max(1e-300).ln())).collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let budget = c.kappa * (1.0 / eps).ln();
    let c_needed = stages as f64 / budget;
    let ok = r_max < 1.0 && c_needed <= 10.0;
    Ok((
        ok,
        format!(
            "{stages} stages to 1e-10, max stage ratio {r_max:.3e} (fit {:.3e}), c = {c_needed:.3}",
            slope.exp()
        ),
    ))
}

fn criterion_5() -> Outcome {
    let (data, _) = generate_gaussian_regression(1000, 1, 0.5, 5)?;
    let lambda = 1.0 / (data.len() as f64).sqrt();
    let objective = Objective::new(data, Model::linear(1), LossSpec::Squared, lambda)?;
    let c = constants_at_zero(&objective)?;
    let w_star = ridge_solution(&objective)?;
    let schedule = StepSchedule::inverse(1.0 / c.strong_convexity);
    let opts = RunOptions::default().with_reference(&w_star).with_eval_every(1000);
    let (mut at_1e3, mut at_1e4) = (Vec::new(), Vec::new());
    for seed in 0..20 {
        let trace = run_sgd(&objective, &ParameterVector::zeros(1), &schedule, 10_000, seed, opts)?;
        let at = |t: u64| trace.records.iter().find(|r| r.iteration == t).and_then(|r| r.suboptimality);
        at_1e3.push(at(1000).unwrap_or(f64::NAN));
        at_1e4.push(at(10_000).unwrap_or(f64::NAN));
    }
    let (m3, m4) = (median(at_1e3), median(at_1e4));
    let ratio = m4 / m3;
    Ok((
        (0.02..=0.5).contains(&ratio),
        format!("median rho0 {m3:.3e} at T=1e3, {m4:.3e} at T=1e4, ratio {ratio:.3}"),
    ))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let cfg = AuditConfig::default();
    let r = stability_audit(&cfg)?;
    let secs = start.elapsed().as_secs_f64();
    Ok((
        r.passed() && cfg.trials == 200 && secs < 300.0,
        format!(
            "loss {:.3e} <= {:.3e}, output {:.3e} <= {:.3e}, {} violations, {secs:.1}s",
            r.max_loss_change,
            r.beta.beta0,
            r.max_output_change,
            r.beta.beta1,
            r.loss_violations + r.output_violations
        ),
    ))
}

/// Logistic problem whose test sample and generating parameter give the
/// observed excess risk.
struct LogisticDraw {
    objective: Objective,
    test: Dataset,
    constants: ProblemConstants,
    reference: ParameterVector,
    /// Test risk of the generating parameter.
    baseline: f64,
}

fn logistic_draw(n: usize, n_test: usize, seed: u64) -> rerm::Result<LogisticDraw> {
    let d = 10;
    let (all, w_gen) = generate_logistic_classification(n + n_test, d, 2.0, seed)?;
    let (train, test) = split_exact(&all, n, seed)?;
    let lambda = 1.0 / (n as f64).sqrt();
    let objective = Objective::new(train, Model::linear(d), LossSpec::Logistic, lambda)?;
    let constants = constants_at_zero(&objective)?;
    let reference = logistic_reference(&objective, REFERENCE_TOLERANCE)?;
    let baseline = objective.empirical_risk(&ParameterVector::from_vec(w_gen), &test)?;
    Ok(LogisticDraw { objective, test, constants, reference, baseline })
}

fn logistic_run(p: &LogisticDraw, algorithm: Algorithm, passes: u64, seed: u64) -> rerm::Result<Trace> {
    let obj = &p.objective;
    let c = &p.constants;
    let n = obj.n() as u64;
    let w0 = ParameterVector::zeros(obj.num_params());
    let opts = RunOptions::default().with_reference(&p.reference);
    match algorithm {
        Algorithm::Gd => run_gd(obj, &w0, 1.0 / c.smoothness, passes, opts),
        Algorithm::Sgd => {
            let schedule = StepSchedule::Inverse {
                c: 1.0 / c.strong_convexity,
                offset: c.max_instance_smoothness / c.strong_convexity,
            };
            run_sgd(obj, &w0, &schedule, passes * n, seed, opts)
        }
        Algorithm::Svrg => {
            let params = SvrgParams {
                eta: 0.1 / c.max_instance_smoothness,
                inner: 2 * n,
                stages: (passes / 5).max(1),
                output: Default::default(),
            };
            run_svrg(obj, &w0, &params, seed, opts)
        }
    }
}

fn criterion_7() -> Outcome {
    let n = 500;
    let p = logistic_draw(n, 20_000, 7)?;
    let c = &p.constants;
    let beta = kernel_stability(c.lipschitz, c.kernel_bound, c.lambda, n)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for alg in Algorithm::ALL {
        let mut errs = Vec::new();
        let mut excess = 0.0;
        for seed in 0..20 {
            let trace = logistic_run(&p, alg, 10, seed)?;
            errs.push(convergence_errors(&p.objective, &trace, &p.reference)?);
            excess += p.objective.empirical_risk(&trace.final_w, &p.test)? - p.baseline;
        }
        excess /= 20.0;
        let rho = ConvergenceErrors::average(&errs)?;
        let rep = expected_bound(&beta, &rho, c.lipschitz, c.output_smoothness, n, RhoSource::SeedAverage { runs: 20 })?;
        ok &= rep.total_excess >= excess;
        parts.push(format!("{alg} {:.3} >= {excess:.4}", rep.total_excess));
    }
    Ok((ok, format!("bound vs observed: {}", parts.join(", "))))
}

fn criterion_8() -> Outcome {
    let n = 500;
    let draws = 200;
    let delta = 0.1;
    let mut exceed = 0;
    let mut worst_margin = f64::INFINITY;
    for s in 0..draws {
        let p = logistic_draw(n, 5000, 10_000 + s)?;
        let c = &p.constants;
        let beta = kernel_stability(c.lipschitz, c.kernel_bound, c.lambda, n)?;
        let trace = logistic_run(&p, Algorithm::Sgd, 10, s)?;
        let rho = convergence_errors(&p.objective, &trace, &p.reference)?;
        let rep = high_prob_bound(
            &beta,
            &rho,
            c.lipschitz,
            c.output_smoothness,
            c.loss_bound,
            n,
            delta,
            RhoSource::SingleRun,
        )?;
        let observed = p.objective.empirical_risk(&trace.final_w, &p.test)? - p.baseline;
        if observed > rep.total_excess {
            exceed += 1;
        }
        worst_margin = worst_margin.min(rep.total_excess - observed);
    }
    let frac = exceed as f64 / draws as f64;
    Ok((
        frac <= delta,
        format!("{exceed}/{draws} draws exceed the bound (fraction {frac:.3}), smallest margin {worst_margin:.3}"),
    ))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir()?;
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["desk_regression", "desk_logistic", "desk_mlp"] {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(format!("{name}.toml"));
        let mut config = ExperimentConfig::from_file(&path)?;
        config.output_dir = Some(dir.path().join(name));
        let art = run_experiment(&config, false)?;
        let test_drops = art.runs.iter().all(|r| {
            let first = r.trace.first().test_risk.unwrap_or(f64::NAN);
            let last = r.trace.last().test_risk.unwrap_or(f64::NAN);
            last < first
        });
        let (_, cmp) = &art.comparisons[0];
        let late = cmp.late_phase.as_ref();
        let passes = |label: &str| late.and_then(|p| p.ordering.iter().find(|o| o.0 == label).map(|o| o.1));
        let order = match (passes("svrg"), passes("gd"), passes("sgd")) {
            (Some(v), Some(g), Some(s)) => v <= g && g <= s,
            _ => false,
        };
        let early = cmp.early_phase.as_ref();
        let sgd_first = early.is_some_and(|p| {
            let best = p.ordering.first().map(|o| o.1);
            p.ordering.iter().any(|o| o.0 == "sgd" && Some(o.1) == best)
        });
        ok &= test_drops && order && sgd_first;
        let fmt = |p: Option<&rerm::harness::PhaseSummary>| {
            p.map(|p| {
                let o: Vec<String> = p.ordering.iter().map(|(l, v)| format!("{l} {v:.2}")).collect();
                format!("@{:.0e} {}", p.threshold, o.join(" < "))
            })
            .unwrap_or_else(|| "none".into())
        };
        parts.push(format!(
            "{name}: (a) {} (b) {} {} (c) {} {}",
            pass(test_drops),
            pass(order),
            fmt(late),
            pass(sgd_first),
            fmt(early)
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 600.0;
    Ok((ok, format!("{secs:.0}s\n    {}", parts.join("\n    "))))
}

fn criterion_10() -> Outcome {
    let mut ok = true;
    let mut checked = 0;
    let mut ns: Vec<f64> = (4..=26).map(|k| 2f64.powi(k)).collect();
    ns.extend([1e3, 1e4, 1e5, 1e6, 1e7]);
    for &n in &ns {
        for d in [1.0, 10.0, 100.0, 1000.0] {
            let t = |a| sufficient_training(a, Regime::Convex, n.sqrt(), n, d, None, 1.0).map(|s| s.time_units);
            let (svrg, gd, sgd) = (t(Algorithm::Svrg)?, t(Algorithm::Gd)?, t(Algorithm::Sgd)?);
            ok &= svrg < gd && gd < sgd;
            checked += 1;
        }
    }
    let mut ratios = Vec::new();
    for n in [1e3, 1e6] {
        let t = |a| sufficient_training(a, Regime::Nonconvex, 1.0, n, 100.0, Some(1.0), 1.0).map(|s| s.time_units);
        let svrg = t(Algorithm::Svrg)?;
        let gd_ratio = t(Algorithm::Gd)? / svrg / n.powf(1.0 / 3.0);
        let sgd_ratio = t(Algorithm::Sgd)? / svrg / n.powf(4.0 / 3.0);
        ok &= (0.5..=2.0).contains(&gd_ratio) && (0.5..=2.0).contains(&sgd_ratio);
        ratios.push(format!("n={n:.0e}: (GD/SVRG)/n^(1/3) = {gd_ratio:.3}, (SGD/SVRG)/n^(4/3) = {sgd_ratio:.3}"));
    }
    Ok((ok, format!("convex order on {checked} (n, d) pairs; {}", ratios.join("; "))))
}

fn criterion_11() -> Outcome {
    let (data, _) = generate_gaussian_regression(50, 6, 0.3, 11)?;
    let objective = Objective::new(data, Model::linear(6), LossSpec::Squared, 0.05)?;
    let anchor = ParameterVector::from_vec(vec![0.3, -1.0, 0.5, 2.0, -0.7, 0.1]);
    let w = ParameterVector::from_vec(vec![-0.4, 0.2, 1.5, -0.3, 0.9, -1.2]);
    let mu = objective.full_gradient(&anchor)?;
    let full_w = objective.full_gradient(&w)?;
    let scale = |v: &ParameterVector| v.norm().max(1.0);

    let mut coincidence = 0.0f64;
    let mut mean = vec![0.0; 6];
    for i in 0..objective.n() {
        let v = svrg_direction(&objective, &anchor, &anchor, &mu, i)?;
        coincidence = coincidence.max(v.sub(&mu)?.norm() / scale(&mu));
        let v = svrg_direction(&objective, &w, &anchor, &mu, i)?;
        for (m, x) in mean.iter_mut().zip(v.iter()) {
            *m += x / objective.n() as f64;
        }
    }
    let unbiased = ParameterVector::from_vec(mean).sub(&full_w)?.norm() / scale(&full_w);
    Ok((
        coincidence <= 1e-12 && unbiased <= 1e-12,
        format!("anchor coincidence {coincidence:.2e}, mean direction vs full gradient {unbiased:.2e}"),
    ))
}

const DETERMINISM_CONFIG: &str = r#"
name = "determinism"
task = "linreg"
seeds = [1, 2]

[data]
source = "synthetic"
n = 400
d = 10

[[algorithms]]
kind = "gd"
eta = 0.2
passes = 10

[[algorithms]]
kind = "sgd"
schedule = { kind = "inverse", c = 0.5, offset = 20.0 }
passes = 5
evals_per_pass = 4

[[algorithms]]
kind = "svrg"
eta = 0.005
inner_factor = 2.0
passes = 10
evals_per_pass = 4
"#;

fn csv_files(dir: &Path) -> std::io::Result<BTreeMap<String, Vec<u8>>> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_some_and(|x| x == "csv") {
            let bytes = fs::read(&path)?;
            out.insert(path.file_name().unwrap().to_string_lossy().into_owned(), bytes);
        }
    }
    Ok(out)
}

fn criterion_12() -> Outcome {
    let dir = tempfile::tempdir()?;
    let mut outputs = Vec::new();
    for k in 0..2 {
        let mut config = ExperimentConfig::from_toml_str(DETERMINISM_CONFIG)?;
        config.output_dir = Some(dir.path().join(format!("run{k}")));
        let art = run_experiment(&config, false)?;
        outputs.push(csv_files(&art.dir)?);
    }
    let count = outputs[0].len();
    let algorithms = ["gd", "sgd", "svrg"].iter().all(|a| outputs[0].keys().any(|k| k.starts_with(a)));
    Ok((
        count == 6 && algorithms && outputs[0] == outputs[1],
        format!("{count} trace CSVs compared byte for byte"),
    ))
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("gradient oracle", criterion_1),
        ("condition number", criterion_2),
        ("GD linear rate", criterion_3),
        ("SVRG linear rate", criterion_4),
        ("SGD sublinear trend", criterion_5),
        ("stability containment", criterion_6),
        ("expected bound containment", criterion_7),
        ("high-probability coverage", criterion_8),
        ("desk-scale qualitative replication", criterion_9),
        ("sufficient training orders", criterion_10),
        ("SVRG identities", criterion_11),
        ("determinism", criterion_12),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "criterion {:>2} {} {name} [{:.1}s]: {detail}",
            k + 1,
            pass(ok),
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
