use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::eigen::{extreme_eigenvalues, largest_eigenvalue, EIGEN_TOLERANCE};
use super::Objective;
use crate::error::{Error, Result};
use crate::model::{LossSpec, Model};
use crate::ParameterVector;

/// Smoothness, convexity and boundedness constants of an objective,
/// certified on the parameter ball `‖w‖ ≤ domain_radius`.
///
/// Output-space constants (`lipschitz`, `output_smoothness`) refer to the loss
/// as a function of the prediction `f(x)`; the remaining ones refer to
/// `R_S^r` as a function of `w`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemConstants {
    /// `L`: Lipschitz constant of the loss in the prediction.
    pub lipschitz: f64,
    /// `γ`: smoothness of the loss in the prediction.
    pub output_smoothness: f64,
    /// `γ_w`: largest eigenvalue bound of `∇²R_S^r`.
    pub smoothness: f64,
    /// `max_i` smoothness of the single-instance objective `l(·, z_i) + λ‖·‖²`.
    pub max_instance_smoothness: f64,
    /// `μ`: strong convexity of `R_S^r`.
    pub strong_convexity: f64,
    /// `κ = γ_w / μ`.
    pub kappa: f64,
    /// Average smoothness of the single-instance objectives.
    pub mean_instance_smoothness: f64,
    /// Finite-sum condition number: `mean_instance_smoothness / μ`. This is
    /// the `κ` in the iteration counts of the stochastic methods.
    pub kappa_finite_sum: f64,
    /// `K = max_i ‖x_i‖`.
    pub kernel_bound: f64,
    /// `M`: upper bound of the loss on the ball.
    pub loss_bound: f64,
    pub domain_radius: f64,
    pub lambda: f64,
    pub n: usize,
}

/// Twice the radius of the initial level set: any `w` with
/// `R_S^r(w) ≤ R_S^r(w0)` has `λ‖w‖² ≤ R_S^r(w0)`.
pub fn default_domain_radius(objective: &Objective, w0: &ParameterVector) -> Result<f64> {
    if objective.lambda() <= 0.0 {
        return Err(Error::arg("level-set radius needs lambda > 0"));
    }
    let r0 = objective.regularized_risk(w0)?;
    Ok(2.0 * (r0 / objective.lambda()).sqrt().max(w0.norm()))
}

/// Estimates the constants of a linear objective.
///
/// Squared loss: `γ_w` and `μ` are the extreme eigenvalues of the exact
/// Hessian `(2/n) XᵀX + 2λI`. Logistic loss: `γ_w` is the largest eigenvalue
/// of `(1/4n) XᵀX + 2λI` and `μ = 2λ`. The MLP has no closed-form constants.
pub fn estimate_constants(objective: &Objective, domain_radius: f64) -> Result<ProblemConstants> {
    if !(domain_radius > 0.0) || !domain_radius.is_finite() {
        return Err(Error::arg(format!("domain radius must be > 0, got {domain_radius}")));
    }
    let lin = match objective.model() {
        Model::Linear(m) => m,
        Model::Mlp(_) => {
            return Err(Error::Unsupported(
                "smoothness and convexity constants of the MLP objective have no closed form".into(),
            ))
        }
    };
    let data = objective.dataset();
    let n = data.len();
    let p = lin.num_params();
    let lambda = objective.lambda();

    let x = DMatrix::from_fn(n, p, |i, k| {
        if k < lin.dim {
            data.instances()[i].features[k]
        } else {
            1.0
        }
    });
    let gram = x.tr_mul(&x) / n as f64;
    let augmented_sq = |i: usize| {
        let z = &data.instances()[i];
        crate::params::norm_sq(&z.features) + if lin.bias { 1.0 } else { 0.0 }
    };
    let max_row_sq = (0..n).map(augmented_sq).fold(0.0, f64::max);
    let mean_row_sq = (0..n).map(augmented_sq).sum::<f64>() / n as f64;
    let penalty = DMatrix::from_fn(p, p, |i, k| {
        if i == k && objective.model().is_regularized(i) {
            2.0 * lambda
        } else {
            0.0
        }
    });

    let kernel_bound = data.max_feature_norm();
    let k_aug = max_row_sq.sqrt();
    let output_bound = k_aug * domain_radius;

    let (curvature, lipschitz, output_smoothness, loss_bound, smoothness, strong_convexity) =
        match objective.loss() {
            LossSpec::Squared => {
                let h = gram * 2.0 + penalty;
                let e = extreme_eigenvalues(&h, EIGEN_TOLERANCE)?;
                let y = data.max_abs_label();
                let reach = output_bound + y;
                (2.0, 2.0 * reach, 2.0, reach * reach, e.max, e.min)
            }
            LossSpec::Logistic => {
                if lin.bias {
                    return Err(Error::Unsupported(
                        "logistic objective with an unregularized bias is not strongly convex".into(),
                    ));
                }
                let h = gram * 0.25 + penalty;
                let max = largest_eigenvalue(&h, EIGEN_TOLERANCE)?;
                let m = (output_bound.exp()).ln_1p();
                (0.25, 1.0, 0.25, m, max, 2.0 * lambda)
            }
            LossSpec::CrossEntropy => unreachable!("linear models never use cross-entropy"),
        };
    if !(strong_convexity > 0.0) {
        return Err(Error::Numeric(format!(
            "objective is not strongly convex (mu = {strong_convexity:e})"
        )));
    }
    Ok(ProblemConstants {
        lipschitz,
        output_smoothness,
        smoothness,
        max_instance_smoothness: curvature * max_row_sq + 2.0 * lambda,
        strong_convexity,
        kappa: (smoothness / strong_convexity).max(1.0),
        mean_instance_smoothness: curvature * mean_row_sq + 2.0 * lambda,
        kappa_finite_sum: ((curvature * mean_row_sq + 2.0 * lambda) / strong_convexity).max(1.0),
        kernel_bound,
        loss_bound,
        domain_radius,
        lambda,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Dataset, Instance, Task};

    #[test]
    fn isotropic_design_has_unit_condition_number() {
        // rows ±√2 e_k give XᵀX/n = I
        let r = 2f64.sqrt();
        let rows = vec![
            Instance::new(vec![r, 0.0], 1.0),
            Instance::new(vec![-r, 0.0], 0.0),
            Instance::new(vec![0.0, r], 2.0),
            Instance::new(vec![0.0, -r], -1.0),
        ];
        let s = Dataset::new(rows, Task::Regression).unwrap();
        let obj = Objective::new(s, Model::linear(2), LossSpec::Squared, 0.0).unwrap();
        let c = estimate_constants(&obj, 1.0).unwrap();
        assert!((c.smoothness - 2.0).abs() < 1e-12);
        assert!((c.strong_convexity - 2.0).abs() < 1e-12);
        assert_eq!(c.kappa, 1.0);
        assert!((c.mean_instance_smoothness - 4.0).abs() < 1e-12);
        assert!((c.kappa_finite_sum - 2.0).abs() < 1e-12);
        assert!((c.kernel_bound - r).abs() < 1e-15);
    }

    #[test]
    fn logistic_uses_regularizer_convexity() {
        let rows = vec![
            Instance::new(vec![1.0, 2.0], 1.0),
            Instance::new(vec![-1.0, 0.5], -1.0),
        ];
        let s = Dataset::new(rows, Task::Binary).unwrap();
        let obj = Objective::new(s, Model::linear(2), LossSpec::Logistic, 0.05).unwrap();
        let c = estimate_constants(&obj, 3.0).unwrap();
        assert_eq!(c.strong_convexity, 0.1);
        assert_eq!(c.lipschitz, 1.0);
        assert_eq!(c.output_smoothness, 0.25);
        assert!(c.kappa >= 1.0);
        let k = 5f64.sqrt();
        assert!((c.loss_bound - (k * 3.0f64).exp().ln_1p()).abs() < 1e-12);
        assert!((c.max_instance_smoothness - (5.0 / 4.0 + 0.1)).abs() < 1e-12);
    }

    #[test]
    fn argument_and_model_checks() {
        let s = Dataset::new(vec![Instance::new(vec![1.0], 1.0)], Task::Regression).unwrap();
        let obj = Objective::new(s, Model::linear(1), LossSpec::Squared, 0.1).unwrap();
        assert!(estimate_constants(&obj, 0.0).is_err());
        let m = crate::data::generate_gaussian_mixture(20, 2, 3, 1.0, 0).unwrap();
        let mlp = Objective::new(m, Model::mlp(2), LossSpec::CrossEntropy, 0.1).unwrap();
        assert!(matches!(estimate_constants(&mlp, 1.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rank_deficient_without_penalty_fails() {
        let rows = vec![Instance::new(vec![1.0, 1.0], 1.0), Instance::new(vec![2.0, 2.0], 0.0)];
        let s = Dataset::new(rows, Task::Regression).unwrap();
        let obj = Objective::new(s, Model::linear(2), LossSpec::Squared, 0.0).unwrap();
        assert!(matches!(estimate_constants(&obj, 1.0), Err(Error::Numeric(_))));
    }
}
