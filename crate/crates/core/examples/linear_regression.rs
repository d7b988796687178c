//! Ridge regression on synthetic Gaussian data with GD, SGD and SVRG.
//!
//! Computes the exact ridge solution, runs the three methods for the same
//! number of data passes and prints how many passes each needs to shrink the
//! suboptimality `R_S^r(w_t) - R_S^r(w*)` by a given factor.
//!
//! ```text
//! cargo run --release --example linear_regression
//! ```

use rerm::data::generate_gaussian_regression;
use rerm::harness::{compare_report, ridge_solution};
use rerm::model::{LossSpec, Model};
use rerm::objective::{default_domain_radius, estimate_constants, Objective};
use rerm::optim::{run_gd, run_sgd, run_svrg, RunOptions, StepSchedule, SvrgParams};
use rerm::ParameterVector;

fn main() -> rerm::Result<()> {
    let (all, _) = generate_gaussian_regression(2000, 50, 0.1, 7)?;
    let (train, test) = all.split(0.5, 7)?;
    let n = train.len();
    let lambda = 1.0 / (n as f64).sqrt();
    let objective = Objective::new(train, Model::linear(50), LossSpec::Squared, lambda)?;

    let w0 = ParameterVector::zeros(50);
    let c = estimate_constants(&objective, default_domain_radius(&objective, &w0)?)?;
    println!(
        "n = {n}, lambda = {lambda:.4}, gamma_w = {:.3}, mu = {:.3}, kappa = {:.2}, finite-sum kappa = {:.1}",
        c.smoothness, c.strong_convexity, c.kappa, c.kappa_finite_sum
    );

    let w_star = ridge_solution(&objective)?;
    let opts = RunOptions::default().with_test_set(&test).with_reference(&w_star);
    let passes = 40u64;

    let gd = run_gd(&objective, &w0, 1.0 / c.smoothness, passes, opts)?;
    let schedule = StepSchedule::Inverse { c: 1.0 / c.strong_convexity, offset: c.max_instance_smoothness / c.strong_convexity };
    let sgd = run_sgd(&objective, &w0, &schedule, passes * n as u64, 1, opts.with_eval_every(n as u64 / 10))?;
    let svrg_params = SvrgParams {
        eta: 0.1 / c.max_instance_smoothness,
        inner: 2 * n as u64,
        stages: passes / 5,
        output: Default::default(),
    };
    let svrg = run_svrg(&objective, &w0, &svrg_params, 1, opts.with_eval_every(n as u64 / 20))?;

    for t in [&gd, &sgd, &svrg] {
        let last = t.last();
        println!(
            "{:>5}: {:>6.1} passes, suboptimality {:.3e}, test risk {:.5}",
            t.algorithm,
            last.data_passes,
            last.suboptimality.unwrap_or(f64::NAN),
            last.test_risk.unwrap_or(f64::NAN)
        );
    }

    let labelled: Vec<(String, _)> =
        [gd, sgd, svrg].into_iter().map(|t| (t.algorithm.clone(), t.records)).collect();
    let report = compare_report(&labelled, &[1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-8])?;
    print!("\n{}", report.to_table());
    Ok(())
}
