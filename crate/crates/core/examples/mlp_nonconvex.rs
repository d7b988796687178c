//! Trains the one-hidden-layer MLP with SGD and SVRG and evaluates the
//! nonconvex generalization bound from the smallest gradient norm reached.
//!
//! The landscape constants (`μ`, `ε0`, the local gap and the stability
//! constant `β0`) have no closed form for the MLP; the values below are
//! stated assumptions, and the bound is only reported when the run is
//! certified to have entered the `ε0`-neighbourhood.
//!
//! ```text
//! cargo run --release --example mlp_nonconvex
//! ```

use rerm::bounds::{nonconvex_bound, t1_reached, NonconvexInputs};
use rerm::data::generate_gaussian_mixture;
use rerm::model::{LossSpec, Model};
use rerm::objective::Objective;
use rerm::optim::{run_sgd, run_svrg, RunOptions, StepSchedule, SvrgParams};

fn main() -> rerm::Result<()> {
    let all = generate_gaussian_mixture(1000, 20, 10, 3.0, 0)?;
    let (train, test) = all.split(0.5, 0)?;
    let n = train.len() as u64;
    let model = Model::mlp(20);
    let lambda = 1.0 / (n as f64).sqrt();
    let objective = Objective::new(train, model.clone(), LossSpec::CrossEntropy, lambda)?;
    let w0 = model.init_params(1);
    let opts = RunOptions::default().with_test_set(&test);

    let runs = [
        run_sgd(&objective, &w0, &StepSchedule::inverse_sqrt(0.25), 60 * n, 1, opts)?,
        run_svrg(&objective, &w0, &SvrgParams { eta: 0.02, inner: 5 * n, stages: 5, output: Default::default() }, 1, opts)?,
    ];

    for trace in &runs {
        let min_rho2 = trace.records.iter().map(|r| r.grad_norm_sq).fold(f64::INFINITY, f64::min);
        let first = trace.first();
        let last = trace.last();
        println!(
            "{}: {:.0} passes, test loss {:.4} -> {:.4}, min |grad|^2 = {:.3e}",
            trace.algorithm,
            last.data_passes,
            first.test_risk.unwrap_or(f64::NAN),
            last.test_risk.unwrap_or(f64::NAN),
            min_rho2
        );
        let inputs = NonconvexInputs {
            beta0: 0.05,
            lipschitz: 1.0,
            mu: 0.05,
            min_rho2,
            local_gap: 0.0,
            epsilon0: 0.1,
            gamma: 1.0,
        };
        let certified = t1_reached(min_rho2, inputs.gamma, inputs.epsilon0);
        match nonconvex_bound(&inputs, certified) {
            Ok(report) => println!("  nonconvex bound (assumed constants): {:.4}", report.total_excess),
            Err(e) => println!("  no bound: {e}"),
        }
    }
    Ok(())
}
