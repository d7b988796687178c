//! Evaluates the expected and high-probability generalization bounds for
//! SGD and GD runs of logistic regression and sets them against the excess
//! test risk actually observed.
//!
//! The data follow a well-specified logistic model, so the generating
//! parameter is the best linear predictor and the observed excess risk is
//! `R_test(w_T) - R_test(w_gen)` on a large held-out sample.
//!
//! ```text
//! cargo run --release --example generalization_bounds
//! ```

use rerm::bounds::{convergence_errors, expected_bound, high_prob_bound, kernel_stability, RhoSource};
use rerm::data::generate_logistic_classification;
use rerm::harness::{logistic_reference, REFERENCE_TOLERANCE};
use rerm::model::{LossSpec, Model};
use rerm::objective::{default_domain_radius, estimate_constants, Objective};
use rerm::optim::{run_gd, run_sgd, RunOptions, StepSchedule};
use rerm::ParameterVector;

const N_TRAIN: usize = 500;
const N_TEST: usize = 20_000;
const D: usize = 10;

fn main() -> rerm::Result<()> {
    let (all, w_gen) = generate_logistic_classification(N_TRAIN + N_TEST, D, 2.0, 11)?;
    let (train, test) = all.split((N_TRAIN as f64 + 0.5) / (N_TRAIN + N_TEST) as f64, 11)?;
    let lambda = 1.0 / (N_TRAIN as f64).sqrt();
    let objective = Objective::new(train, Model::linear(D), LossSpec::Logistic, lambda)?;
    let w0 = ParameterVector::zeros(D);
    let c = estimate_constants(&objective, default_domain_radius(&objective, &w0)?)?;
    let beta = kernel_stability(c.lipschitz, c.kernel_bound, lambda, N_TRAIN)?;
    let w_star = logistic_reference(&objective, REFERENCE_TOLERANCE)?;
    let baseline = objective.empirical_risk(&ParameterVector::from_vec(w_gen), &test)?;
    println!("beta0 = {:.4}, beta1 = {:.4}, M = {:.2}", beta.beta0, beta.beta1, c.loss_bound);

    let opts = RunOptions::default().with_reference(&w_star);
    let schedule = StepSchedule::Inverse { c: 1.0 / c.strong_convexity, offset: 50.0 };
    let runs = [
        run_gd(&objective, &w0, 1.0 / c.smoothness, 30, opts)?,
        run_sgd(&objective, &w0, &schedule, 30 * N_TRAIN as u64, 5, opts)?,
    ];
    for trace in &runs {
        let rho = convergence_errors(&objective, trace, &w_star)?;
        let exp = expected_bound(&beta, &rho, c.lipschitz, c.output_smoothness, N_TRAIN, RhoSource::SingleRun)?;
        let hp = high_prob_bound(
            &beta,
            &rho,
            c.lipschitz,
            c.output_smoothness,
            c.loss_bound,
            N_TRAIN,
            0.1,
            RhoSource::SingleRun,
        )?;
        let observed = objective.empirical_risk(&trace.final_w, &test)? - baseline;
        println!("\n{} after {:.0} passes: rho0 = {:.2e}, rho1 = {:.2e}", trace.algorithm, trace.last().data_passes, rho.rho0, rho.rho1);
        for t in &exp.terms {
            println!("  {:<42} {:.4e}", t.name, t.value);
        }
        println!("  expected bound     {:.4}", exp.total_excess);
        println!("  high-prob bound    {:.4}  (delta = 0.1)", hp.total_excess);
        println!("  observed excess    {:.4}", observed);
    }
    Ok(())
}
