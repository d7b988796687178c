//! Stability constants, convergence errors and stability-based bounds on the
//! generalization error of regularized ERM.
//!
//! Every bound total is a bound on `E - E_app`: the approximation error is not
//! estimated and appears in reports only as a symbolic offset.

mod orders;
mod report;
mod stability;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::objective::Objective;
use crate::optim::Trace;
use crate::params::{dist_sq, norm_sq};
use crate::ParameterVector;

pub use orders::{excess_risk_order, sufficient_training, Regime, SufficientTraining, ORDER_ESTIMATE_LABEL};
pub use report::{
    expected_bound, high_prob_bound, nonconvex_bound, t1_reached, BoundKind, BoundReport, BoundTerm,
    NonconvexInputs, RhoSource, TermGroup, APP_OFFSET_LABEL,
};
pub use stability::{empirical_stability, StabilityMeasurement, StabilityTrial};

/// Negative suboptimality below this is a reference failure, not rounding.
pub const REFERENCE_SLACK: f64 = 1e-9;

/// Uniform loss stability `β0` and output stability `β1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityConstants {
    pub beta0: f64,
    pub beta1: f64,
}

/// Closed-form stability of kernel R-ERM with an `L`-Lipschitz loss and
/// kernel bound `K`: `β0 = L²K²/(2λn)`, `β1 = LK/(2λn)`.
pub fn kernel_stability(lipschitz: f64, kernel_bound: f64, lambda: f64, n: usize) -> Result<StabilityConstants> {
    for (name, v) in [("L", lipschitz), ("K", kernel_bound), ("lambda", lambda)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::arg(format!("{name} must be finite and > 0, got {v}")));
        }
    }
    if n == 0 {
        return Err(Error::arg("n must be > 0"));
    }
    let denom = 2.0 * lambda * n as f64;
    Ok(StabilityConstants {
        beta0: lipschitz * lipschitz * kernel_bound * kernel_bound / denom,
        beta1: lipschitz * kernel_bound / denom,
    })
}

/// One evaluation point of the convergence-error series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePoint {
    pub iteration: u64,
    pub data_passes: f64,
    pub rho0: Option<f64>,
    pub rho1: Option<f64>,
    pub rho2: f64,
}

/// Optimization error of an output `w_T` against a certified minimizer `w*`.
///
/// - `rho0 = R_S^r(w_T) - R_S^r(w*)`, the suboptimality of the objective the
///   algorithms minimize,
/// - `rho1 = ‖w_T - w*‖²`,
/// - `rho2 = ‖∇R_S^r(w_T)‖²`.
///
/// `train_gap = R_S(w_T) - R_S(w*)` is kept for reference; it omits the
/// penalty and can be negative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceErrors {
    pub rho0: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub train_gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<ConvergencePoint>,
}

impl ConvergenceErrors {
    pub fn new(rho0: f64, rho1: f64, rho2: f64) -> Result<Self> {
        for (name, v) in [("rho0", rho0), ("rho1", rho1), ("rho2", rho2)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::arg(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(ConvergenceErrors { rho0, rho1, rho2, train_gap: None, series: Vec::new() })
    }

    /// Smallest `ρ2` over the recorded series and the final point.
    pub fn min_rho2(&self) -> f64 {
        self.series.iter().map(|p| p.rho2).fold(self.rho2, f64::min)
    }

    /// Component-wise mean over runs, without series.
    pub fn average(runs: &[ConvergenceErrors]) -> Result<ConvergenceErrors> {
        if runs.is_empty() {
            return Err(Error::arg("cannot average zero runs"));
        }
        let k = runs.len() as f64;
        let mean = |f: fn(&ConvergenceErrors) -> f64| runs.iter().map(f).sum::<f64>() / k;
        let gaps: Option<Vec<f64>> = runs.iter().map(|r| r.train_gap).collect();
        Ok(ConvergenceErrors {
            rho0: mean(|r| r.rho0),
            rho1: mean(|r| r.rho1),
            rho2: mean(|r| r.rho2),
            train_gap: gaps.map(|g| g.iter().sum::<f64>() / k),
            series: Vec::new(),
        })
    }
}

fn checked_gap(gap: f64) -> Result<f64> {
    if gap < -REFERENCE_SLACK || gap.is_nan() {
        Err(Error::Reference { gap })
    } else {
        Ok(gap.max(0.0))
    }
}

/// Convergence errors of `trace.final_w` against `reference`, with the series
/// taken from the trace records.
///
/// A suboptimality below `-1e-9` anywhere means `reference` is not a
/// minimizer and is reported as [`Error::Reference`]; smaller negative values
/// are rounding and clamp to zero.
pub fn convergence_errors(
    objective: &Objective,
    trace: &Trace,
    reference: &ParameterVector,
) -> Result<ConvergenceErrors> {
    check_dim(objective.num_params(), reference.len())?;
    check_dim(objective.num_params(), trace.final_w.len())?;
    let w = &trace.final_w;
    let rho0 = checked_gap(objective.suboptimality(w, reference)?)?;
    let train_gap = objective.train_risk(w)? - objective.train_risk(reference)?;
    let mut g = vec![0.0; w.len()];
    objective.gradient_uncounted(w, &mut g);
    let mut series = Vec::with_capacity(trace.records.len());
    for r in &trace.records {
        series.push(ConvergencePoint {
            iteration: r.iteration,
            data_passes: r.data_passes,
            rho0: r.suboptimality.map(checked_gap).transpose()?,
            rho1: r.dist_sq_to_reference,
            rho2: r.grad_norm_sq,
        });
    }
    Ok(ConvergenceErrors {
        rho0,
        rho1: dist_sq(w, reference),
        rho2: norm_sq(&g),
        train_gap: Some(train_gap),
        series,
    })
}

#[cfg(test)]
mod tests;
