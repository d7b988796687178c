//! Reference solutions and gradient checks used to certify everything else.

use nalgebra::{DMatrix, DVector};

use crate::data::Dataset;
use crate::error::{check_dim, Error, Result};
use crate::model::{LossSpec, Model};
use crate::objective::{largest_eigenvalue, Objective, EIGEN_TOLERANCE};
use crate::params::{axpy, norm_sq};
use crate::ParameterVector;

/// Gradient norm a closed-form ridge solution must reach.
pub const RIDGE_RESIDUAL_TOLERANCE: f64 = 1e-8;
/// Gradient norm the iterative logistic reference runs to.
pub const REFERENCE_TOLERANCE: f64 = 1e-10;
const REFERENCE_MAX_ITERATIONS: u64 = 2_000_000;

/// Minimizer of `(1/n) Σ (⟨w, x_i⟩ - y_i)² + λ‖w‖²`, from the normal
/// equations `((2/n) XᵀX + 2λI) w = (2/n) Xᵀy`.
pub fn ridge_closed_form(dataset: &Dataset, lambda: f64) -> Result<ParameterVector> {
    let obj = Objective::new(dataset.clone(), Model::linear(dataset.dim()), LossSpec::Squared, lambda)?;
    ridge_solution(&obj)
}

/// Closed-form minimizer of a squared-loss linear objective, bias included
/// when the model has one (the bias is not penalized).
///
/// Two Newton refinement steps on the exact gradient bring the residual to
/// the rounding level; the result is rejected unless its gradient norm is at
/// most [`RIDGE_RESIDUAL_TOLERANCE`].
pub fn ridge_solution(objective: &Objective) -> Result<ParameterVector> {
    let lin = match (objective.model(), objective.loss()) {
        (Model::Linear(m), LossSpec::Squared) => m,
        _ => return Err(Error::Unsupported("closed form exists only for squared-loss linear models".into())),
    };
    let data = objective.dataset();
    let n = data.len() as f64;
    let p = lin.num_params();
    let x = DMatrix::from_fn(data.len(), p, |i, k| {
        if k < lin.dim {
            data.instances()[i].features[k]
        } else {
            1.0
        }
    });
    let y = DVector::from_iterator(data.len(), data.instances().iter().map(|z| z.label));
    let mut h = x.tr_mul(&x) * (2.0 / n);
    for k in 0..p {
        if objective.model().is_regularized(k) {
            h[(k, k)] += 2.0 * objective.lambda();
        }
    }
    let b = x.tr_mul(&y) * (2.0 / n);
    let chol = h
        .cholesky()
        .ok_or_else(|| Error::Numeric("ridge system is not positive definite; use lambda > 0".into()))?;
    let mut w = chol.solve(&b).as_slice().to_vec();
    let mut g = vec![0.0; p];
    for _ in 0..2 {
        objective.gradient_uncounted(&w, &mut g);
        let step = chol.solve(&DVector::from_column_slice(&g));
        axpy(-1.0, step.as_slice(), &mut w);
    }
    objective.gradient_uncounted(&w, &mut g);
    let gn = norm_sq(&g).sqrt();
    if !(gn <= RIDGE_RESIDUAL_TOLERANCE) {
        return Err(Error::Numeric(format!(
            "ridge solution residual gradient norm {gn:e} exceeds {RIDGE_RESIDUAL_TOLERANCE:e}"
        )));
    }
    Ok(ParameterVector::from_vec(w))
}

/// Minimizer of a logistic linear objective by gradient descent with
/// `η = 1/γ_w`, run until `‖∇R_S^r‖ ≤ tolerance`. Hitting the iteration cap is
/// a numeric error.
pub fn logistic_reference(objective: &Objective, tolerance: f64) -> Result<ParameterVector> {
    let lin = match (objective.model(), objective.loss()) {
        (Model::Linear(m), LossSpec::Logistic) => m,
        _ => return Err(Error::Unsupported("logistic reference needs a logistic linear model".into())),
    };
    if !(tolerance > 0.0) {
        return Err(Error::arg(format!("tolerance must be > 0, got {tolerance}")));
    }
    let data = objective.dataset();
    let p = lin.num_params();
    let x = DMatrix::from_fn(data.len(), p, |i, k| {
        if k < lin.dim {
            data.instances()[i].features[k]
        } else {
            1.0
        }
    });
    let mut h = x.tr_mul(&x) * (0.25 / data.len() as f64);
    for k in 0..p {
        if objective.model().is_regularized(k) {
            h[(k, k)] += 2.0 * objective.lambda();
        }
    }
    let eta = 1.0 / largest_eigenvalue(&h, EIGEN_TOLERANCE)?;
    let tol_sq = tolerance * tolerance;
    let mut w = vec![0.0; p];
    let mut g = vec![0.0; p];
    for _ in 0..REFERENCE_MAX_ITERATIONS {
        objective.gradient_uncounted(&w, &mut g);
        if norm_sq(&g) <= tol_sq {
            return Ok(ParameterVector::from_vec(w));
        }
        axpy(-eta, &g, &mut w);
    }
    Err(Error::Numeric(format!(
        "logistic reference did not reach gradient norm {tolerance:e} in {REFERENCE_MAX_ITERATIONS} iterations"
    )))
}

/// Certified minimizer of a convex linear objective: closed form for the
/// squared loss, [`logistic_reference`] for the logistic loss.
pub fn exact_minimizer(objective: &Objective, tolerance: f64) -> Result<ParameterVector> {
    match objective.loss() {
        LossSpec::Squared => ridge_solution(objective),
        LossSpec::Logistic => logistic_reference(objective, tolerance),
        LossSpec::CrossEntropy => Err(Error::Unsupported(
            "the MLP objective is nonconvex and has no certified minimizer".into(),
        )),
    }
}

/// `‖∇R_S^r(w)‖`, not counted as gradient evaluations.
pub fn gradient_norm(objective: &Objective, w: &ParameterVector) -> Result<f64> {
    check_dim(objective.num_params(), w.len())?;
    let mut g = vec![0.0; w.len()];
    objective.gradient_uncounted(w, &mut g);
    Ok(norm_sq(&g).sqrt())
}

/// Central differences `(f(w + h e_i) - f(w - h e_i)) / 2h`.
pub fn finite_diff_gradient(f: impl Fn(&[f64]) -> f64, w: &[f64], h: f64) -> Result<Vec<f64>> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::arg(format!("finite-difference step must be > 0, got {h}")));
    }
    let mut probe = w.to_vec();
    let mut out = Vec::with_capacity(w.len());
    for i in 0..w.len() {
        probe[i] = w[i] + h;
        let up = f(&probe);
        probe[i] = w[i] - h;
        let down = f(&probe);
        probe[i] = w[i];
        out.push((up - down) / (2.0 * h));
    }
    Ok(out)
}

/// `max_i |a_i - b_i| / max(‖b‖_∞, floor)`: the relative error used by the
/// gradient checks.
pub fn relative_error(a: &[f64], b: &[f64], floor: f64) -> f64 {
    let scale = b.iter().fold(floor, |m, v| m.max(v.abs()));
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate_gaussian_regression, generate_logistic_classification, Instance, Task};

    #[test]
    fn hand_solvable_ridge() {
        let rows = vec![Instance::new(vec![1.0], 1.0), Instance::new(vec![2.0], 2.0)];
        let s = Dataset::new(rows, Task::Regression).unwrap();
        let w = ridge_closed_form(&s, 1e-12).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn huge_lambda_pins_to_origin() {
        let (s, _) = generate_gaussian_regression(50, 4, 0.1, 2).unwrap();
        let w = ridge_closed_form(&s, 1e9).unwrap();
        assert!(w.norm() < 1e-8);
    }

    #[test]
    fn ridge_with_bias_fits_offset() {
        let rows = (0..10).map(|i| Instance::new(vec![i as f64], 3.0 + 0.5 * i as f64)).collect();
        let s = Dataset::new(rows, Task::Regression).unwrap();
        let model = Model::Linear(crate::model::LinearModel::with_bias(1));
        let obj = Objective::new(s, model, LossSpec::Squared, 1e-12).unwrap();
        let w = ridge_solution(&obj).unwrap();
        assert!((w[0] - 0.5).abs() < 1e-8 && (w[1] - 3.0).abs() < 1e-8);
    }

    #[test]
    fn logistic_reference_is_stationary() {
        let (s, _) = generate_logistic_classification(80, 3, 2.0, 1).unwrap();
        let obj = Objective::new(s, Model::linear(3), LossSpec::Logistic, 0.05).unwrap();
        let w = logistic_reference(&obj, 1e-10).unwrap();
        assert!(gradient_norm(&obj, &w).unwrap() <= 1e-10);
        assert_eq!(obj.gradient_evaluations(), 0);
    }

    #[test]
    fn finite_differences_of_simple_functions() {
        let w = [0.3, -1.2, 2.0];
        let g = finite_diff_gradient(|v| norm_sq(v), &w, 1e-3).unwrap();
        for (a, b) in g.iter().zip(&w) {
            assert!((a - 2.0 * b).abs() < 1e-9);
        }
        assert_eq!(finite_diff_gradient(|_| 4.0, &w, 1e-5).unwrap(), vec![0.0; 3]);
        assert!(finite_diff_gradient(|_| 0.0, &w, 0.0).is_err());
    }

    #[test]
    fn mlp_has_no_exact_minimizer() {
        let s = crate::data::generate_gaussian_mixture(20, 2, 3, 1.0, 0).unwrap();
        let obj = Objective::new(s, Model::mlp(2), LossSpec::CrossEntropy, 0.1).unwrap();
        assert!(matches!(exact_minimizer(&obj, 1e-10), Err(Error::Unsupported(_))));
    }
}
