//! Logistic regression on the bundled libsvm data set.
//!
//! Loads `data/logistic_desk.svm`, splits it in half, certifies a reference
//! minimizer and reports train/test loss and accuracy for each optimizer.
//!
//! ```text
//! cargo run --release --example logistic_regression [path.svm]
//! ```

use rerm::data::{parse_libsvm, Dataset};
use rerm::harness::{logistic_reference, REFERENCE_TOLERANCE};
use rerm::model::{LossSpec, Model};
use rerm::objective::{default_domain_radius, estimate_constants, Objective};
use rerm::optim::{run_gd, run_sgd, run_svrg, RunOptions, StepSchedule, SvrgParams, Trace};
use rerm::ParameterVector;

fn accuracy(model: &Model, w: &ParameterVector, data: &Dataset) -> rerm::Result<f64> {
    let mut hits = 0usize;
    for z in data.instances() {
        let f = model.predict(w, &z.features)?[0];
        if f * z.label > 0.0 {
            hits += 1;
        }
    }
    Ok(hits as f64 / data.len() as f64)
}

fn main() -> rerm::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/logistic_desk.svm").into());
    let (train, test) = parse_libsvm(&path)?.split(0.5, 0)?;
    let d = train.dim();
    let n = train.len();
    let lambda = 1.0 / (n as f64).sqrt();
    let model = Model::linear(d);
    let objective = Objective::new(train, model.clone(), LossSpec::Logistic, lambda)?;

    let w0 = ParameterVector::zeros(d);
    let c = estimate_constants(&objective, default_domain_radius(&objective, &w0)?)?;
    let w_star = logistic_reference(&objective, REFERENCE_TOLERANCE)?;
    println!("{path}: n_train = {n}, d = {d}, kappa = {:.1}", c.kappa);

    let opts = RunOptions::default().with_test_set(&test).with_reference(&w_star);
    let m = n as u64;
    let runs: Vec<Trace> = vec![
        run_gd(&objective, &w0, 1.0 / c.smoothness, 100, opts)?,
        run_sgd(
            &objective,
            &w0,
            &StepSchedule::Inverse { c: 1.0 / c.strong_convexity, offset: 400.0 },
            100 * m,
            3,
            opts,
        )?,
        run_svrg(&objective, &w0, &SvrgParams { eta: 0.01, inner: 2 * m, stages: 20, output: Default::default() }, 3, opts)?,
    ];

    println!("{:>5} {:>8} {:>12} {:>10} {:>10} {:>9}", "alg", "passes", "rho0", "train", "test", "test acc");
    for t in &runs {
        let r = t.last();
        println!(
            "{:>5} {:>8.1} {:>12.3e} {:>10.5} {:>10.5} {:>9.3}",
            t.algorithm,
            r.data_passes,
            r.suboptimality.unwrap_or(f64::NAN),
            r.train_risk,
            r.test_risk.unwrap_or(f64::NAN),
            accuracy(&model, &t.final_w, &test)?
        );
    }
    Ok(())
}
