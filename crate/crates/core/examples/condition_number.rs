//! Smoothness and strong-convexity constants of the synthetic regression
//! problem at full size (40000 instances, half for training, d = 100).
//!
//! Two condition numbers are printed: `γ_w/μ` from the Hessian spectrum, and
//! the finite-sum `κ = L̄/μ` built from the average single-instance smoothness,
//! which governs the stochastic methods.
//!
//! ```text
//! cargo run --release --example condition_number [n] [d]
//! ```

use rerm::data::generate_gaussian_regression;
use rerm::model::{LossSpec, Model};
use rerm::objective::{default_domain_radius, estimate_constants, Objective};
use rerm::ParameterVector;

fn main() -> rerm::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let n = args.next().unwrap_or(40_000);
    let d = args.next().unwrap_or(100);
    let (all, _) = generate_gaussian_regression(n, d, 0.1, 0)?;
    let (train, _) = all.split(0.5, 0)?;
    let lambda = 1.0 / (train.len() as f64).sqrt();
    let objective = Objective::new(train, Model::linear(d), LossSpec::Squared, lambda)?;
    let w0 = ParameterVector::zeros(d);
    let c = estimate_constants(&objective, default_domain_radius(&objective, &w0)?)?;

    println!("n_train = {}, d = {d}, lambda = {lambda:.5}", c.n);
    println!("largest Hessian eigenvalue   {:>10.4}", c.smoothness);
    println!("smallest Hessian eigenvalue  {:>10.4}", c.strong_convexity);
    println!("mean instance smoothness     {:>10.4}", c.mean_instance_smoothness);
    println!("max instance smoothness      {:>10.4}", c.max_instance_smoothness);
    println!("kappa (Hessian)              {:>10.3}", c.kappa);
    println!("kappa (finite sum)           {:>10.3}", c.kappa_finite_sum);
    Ok(())
}
