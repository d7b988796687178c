use super::*;
use crate::data::{generate_gaussian_regression, generate_logistic_classification, Dataset, Instance, Task};
use crate::harness::{exact_minimizer, ridge_closed_form};
use crate::model::{LossSpec, Model};
use crate::optim::{run_gd, Algorithm, RunOptions};

fn zero_rho() -> ConvergenceErrors {
    ConvergenceErrors::new(0.0, 0.0, 0.0).unwrap()
}

#[test]
fn kernel_stability_substitution_and_scaling() {
    let b = kernel_stability(1.0, 1.0, 0.5, 1).unwrap();
    assert_eq!((b.beta0, b.beta1), (1.0, 1.0));
    let a = kernel_stability(1.3, 2.1, 0.2, 50).unwrap();
    let c = kernel_stability(1.3, 2.1, 0.2, 100).unwrap();
    assert_eq!(a.beta0, 2.0 * c.beta0);
    assert_eq!(a.beta1, 2.0 * c.beta1);
    let d = kernel_stability(1.3, 2.1, 0.4, 50).unwrap();
    assert_eq!(a.beta0, 2.0 * d.beta0);
    assert!(kernel_stability(0.0, 1.0, 1.0, 1).is_err());
    assert!(kernel_stability(1.0, 1.0, 1.0, 0).is_err());
}

#[test]
fn convergence_errors_at_reference_are_zero() {
    let (s, _) = generate_gaussian_regression(60, 4, 0.1, 3).unwrap();
    let obj = Objective::new(s.clone(), Model::linear(4), LossSpec::Squared, 0.1).unwrap();
    let w = ridge_closed_form(&s, 0.1).unwrap();
    let tr = run_gd(&obj, &w, 0.1, 0, RunOptions::default().with_reference(&w)).unwrap();
    let e = convergence_errors(&obj, &tr, &w).unwrap();
    assert_eq!(e.rho0, 0.0);
    assert_eq!(e.rho1, 0.0);
    assert!(e.rho2 < 1e-16);
}

#[test]
fn rho1_matches_direct_norm() {
    let (s, _) = generate_gaussian_regression(80, 3, 0.1, 4).unwrap();
    let obj = Objective::new(s.clone(), Model::linear(3), LossSpec::Squared, 0.1).unwrap();
    let w_ref = ridge_closed_form(&s, 0.1).unwrap();
    let tr = run_gd(&obj, &ParameterVector::zeros(3), 0.05, 20, RunOptions::default()).unwrap();
    let e = convergence_errors(&obj, &tr, &w_ref).unwrap();
    let direct: f64 = tr.final_w.iter().zip(w_ref.iter()).map(|(a, b)| (a - b).powi(2)).sum();
    assert!((e.rho1 - direct).abs() <= 1e-15 * direct.max(1.0));
    assert!(e.rho0 > 0.0);
}

#[test]
fn rho2_at_origin_for_balanced_logistic() {
    let rows = vec![
        Instance::new(vec![1.0, 0.5], 1.0),
        Instance::new(vec![-2.0, 1.0], -1.0),
        Instance::new(vec![0.3, 2.0], 1.0),
        Instance::new(vec![1.5, -1.0], -1.0),
    ];
    let s = Dataset::new(rows.clone(), Task::Binary).unwrap();
    let obj = Objective::new(s, Model::linear(2), LossSpec::Logistic, 0.0).unwrap();
    let w0 = ParameterVector::zeros(2);
    let tr = run_gd(&obj, &w0, 0.1, 0, RunOptions::default()).unwrap();
    let e = convergence_errors(&obj, &tr, &w0);
    // w = 0 is not the minimizer here, so ρ0 would be checked against itself: 0.
    let e = e.unwrap();
    let mut m = [0.0; 2];
    for z in &rows {
        for k in 0..2 {
            m[k] += -z.features[k] * z.label / 4.0;
        }
    }
    let expect = (m[0] / 2.0).powi(2) + (m[1] / 2.0).powi(2);
    assert!((e.rho2 - expect).abs() < 1e-15);
}

#[test]
fn non_minimizer_reference_is_rejected() {
    let (s, _) = generate_gaussian_regression(40, 3, 0.1, 1).unwrap();
    let obj = Objective::new(s.clone(), Model::linear(3), LossSpec::Squared, 0.1).unwrap();
    let w_ref = ridge_closed_form(&s, 0.1).unwrap();
    let tr = run_gd(&obj, &w_ref, 0.1, 0, RunOptions::default()).unwrap();
    let bad = ParameterVector::from_vec(vec![5.0, 5.0, 5.0]);
    assert!(matches!(convergence_errors(&obj, &tr, &bad), Err(Error::Reference { .. })));
}

#[test]
fn expected_bound_term_isolation() {
    let b = StabilityConstants { beta0: 0.0, beta1: 0.0 };
    let r = expected_bound(&b, &zero_rho(), 1.0, 1.0, 10, RhoSource::Supplied).unwrap();
    assert_eq!(r.total_excess, 0.0);
    let b = StabilityConstants { beta0: 0.3, beta1: 0.2 };
    let rho = ConvergenceErrors::new(0.05, 0.0, 0.0).unwrap();
    let r = expected_bound(&b, &rho, 2.0, 1.0, 10, RhoSource::Supplied).unwrap();
    assert!((r.total_excess - (0.6 + 0.05)).abs() < 1e-15);
    assert_eq!(r.stability_term + r.optimization_term + r.concentration_term, r.total_excess);
    assert!(r.app_offset.contains("E_app"));
}

#[test]
fn expected_bound_formula() {
    let b = StabilityConstants { beta0: 0.01, beta1: 0.02 };
    let rho = ConvergenceErrors::new(0.1, 0.4, 0.0).unwrap();
    let r = expected_bound(&b, &rho, 1.5, 0.25, 200, RhoSource::SingleRun).unwrap();
    let want = 0.02 + 0.1 + 0.25 * 0.4 / 2.0 + (0.4f64 * (2.25 / 400.0 + 6.0 * 1.5 * 0.25 * 0.02)).sqrt();
    assert!((r.total_excess - want).abs() < 1e-15);
}

#[test]
fn high_prob_bound_formula_and_delta() {
    let b = StabilityConstants { beta0: 0.01, beta1: 0.005 };
    let r0 = high_prob_bound(&b, &zero_rho(), 1.0, 0.25, 2.0, 100, 0.1, RhoSource::Supplied).unwrap();
    let want = 0.02 + (4.0 + 4.0) * ((40f64).ln() / 200.0).sqrt();
    assert!((r0.total_excess - want).abs() < 1e-14);

    let rho = ConvergenceErrors::new(0.02, 0.09, 0.0).unwrap();
    let a = high_prob_bound(&b, &rho, 1.0, 0.25, 2.0, 100, 0.1, RhoSource::Supplied).unwrap();
    let c = high_prob_bound(&b, &rho, 1.0, 0.25, 2.0, 100, 0.01, RhoSource::Supplied).unwrap();
    assert_eq!(a.stability_term, c.stability_term);
    assert_eq!(a.optimization_term, c.optimization_term);
    let ratio = c.concentration_term / a.concentration_term;
    assert!((ratio - (400f64.ln() / 40f64.ln()).sqrt()).abs() < 1e-12);
    assert!(high_prob_bound(&b, &rho, 1.0, 0.25, 2.0, 100, 1.0, RhoSource::Supplied).is_err());
    assert!(high_prob_bound(&b, &rho, 1.0, 0.25, 0.0, 100, 0.1, RhoSource::Supplied).is_err());
}

#[test]
fn high_prob_bound_vanishes_with_n() {
    let total = |n: usize| {
        let b = kernel_stability(1.0, 1.0, 0.1, n).unwrap();
        high_prob_bound(&b, &zero_rho(), 1.0, 0.25, 1.0, n, 0.1, RhoSource::Supplied)
            .unwrap()
            .total_excess
    };
    let r1 = total(10_000) / total(1_000_000);
    assert!((r1 - 10.0).abs() < 0.1, "ratio {r1}");
}

#[test]
fn nonconvex_bound_rules() {
    let base = NonconvexInputs {
        beta0: 0.1,
        lipschitz: 2.0,
        mu: 0.5,
        min_rho2: 0.0,
        local_gap: 0.0,
        epsilon0: 0.1,
        gamma: 1.0,
    };
    assert_eq!(nonconvex_bound(&base, true).unwrap().total_excess, 0.2);
    let a = nonconvex_bound(&NonconvexInputs { min_rho2: 1e-4, ..base }, true).unwrap();
    let b = nonconvex_bound(&NonconvexInputs { min_rho2: 4e-4, ..base }, true).unwrap();
    let ga = a.term("(L/mu)*sqrt(min_rho2)").unwrap();
    let gb = b.term("(L/mu)*sqrt(min_rho2)").unwrap();
    assert!((gb - 2.0 * ga).abs() < 1e-15);
    assert!(matches!(nonconvex_bound(&base, false), Err(Error::Precondition(_))));
    assert!(t1_reached(1e-4, 1.0, 0.1));
    assert!(!t1_reached(1e-1, 1.0, 0.1));
}

#[test]
fn report_json_round_trip() {
    let b = StabilityConstants { beta0: 0.01, beta1: 0.02 };
    let rho = ConvergenceErrors::new(0.1, 0.4, 0.0).unwrap();
    let r = expected_bound(&b, &rho, 1.5, 0.25, 200, RhoSource::SeedAverage { runs: 20 }).unwrap();
    let back = BoundReport::from_json(&r.to_json().unwrap()).unwrap();
    assert_eq!(back, r);
}

#[test]
fn sufficient_training_examples() {
    let gd = sufficient_training(Algorithm::Gd, Regime::Convex, 1.0, std::f64::consts::E, 1.0, None, 3.0).unwrap();
    assert!((gd.iterations - 3.0).abs() < 1e-15);
    assert_eq!(gd.label, ORDER_ESTIMATE_LABEL);
    assert!(sufficient_training(Algorithm::Gd, Regime::Nonconvex, 1.0, 10.0, 1.0, None, 1.0).is_err());
    assert!(sufficient_training(Algorithm::Gd, Regime::Convex, 1.0, 10.0, 1.0, None, 0.0).is_err());
}

#[test]
fn excess_risk_order_shapes() {
    let a = excess_risk_order(Algorithm::Sgd, 2.0, 1e12, 1e6, 0.1).unwrap();
    let b = excess_risk_order(Algorithm::Sgd, 2.0, 1e12, 2e6, 0.1).unwrap();
    let est = (10f64.ln() / 1e12).sqrt();
    let r = (b - est) / (a - est);
    assert!(r > 0.5 && r < 0.53, "ratio {r}");
    let g1 = excess_risk_order(Algorithm::Gd, 0.5, 1e12, 10.0, 0.1).unwrap() - est;
    let g2 = excess_risk_order(Algorithm::Gd, 0.5, 1e12, 20.0, 0.1).unwrap() - est;
    assert!((g2 / g1 - (-5.0f64).exp()).abs() < 1e-6);
    assert!(excess_risk_order(Algorithm::Svrg, 1.0, 10.0, 10.0, 0.1).is_err());
    assert!(excess_risk_order(Algorithm::Gd, 1.0, 10.0, 1.0, 0.1).is_err());
}

#[test]
fn huge_lambda_is_perfectly_stable() {
    let (s, _) = generate_logistic_classification(40, 3, 2.0, 2).unwrap();
    let obj = Objective::new(s, Model::linear(3), LossSpec::Logistic, 1e6).unwrap();
    let m = empirical_stability(&obj, 10, 1, 1e-12).unwrap();
    assert!(m.max_loss_change < 1e-6 && m.max_output_change < 1e-6);
}

#[test]
fn stability_is_deterministic_and_contained() {
    let (s, _) = generate_logistic_classification(60, 4, 2.0, 8).unwrap();
    let obj = Objective::new(s.clone(), Model::linear(4), LossSpec::Logistic, 0.1).unwrap();
    let a = empirical_stability(&obj, 15, 3, 1e-10).unwrap();
    let b = empirical_stability(&obj, 15, 3, 1e-10).unwrap();
    assert_eq!(a, b);
    let beta = kernel_stability(1.0, s.max_feature_norm(), 0.1, 60).unwrap();
    assert_eq!(a.violations(&beta), (0, 0));
    let _ = exact_minimizer(&obj, 1e-10).unwrap();
}
