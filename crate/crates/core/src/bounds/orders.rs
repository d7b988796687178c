use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optim::Algorithm;

/// Attached to every order-of-magnitude output.
pub const ORDER_ESTIMATE_LABEL: &str = "order estimate, valid for comparisons at fixed constant";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Convex,
    Nonconvex,
}

/// Iterations and running time after which the optimization error falls
/// below the `O(1/n)` estimation error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SufficientTraining {
    pub algorithm: Algorithm,
    pub regime: Regime,
    pub iterations: f64,
    pub time_units: f64,
    pub label: String,
}

/// Sufficient training iterations and time with every hidden constant set to
/// `constant_factor`.
///
/// | | iterations | time |
/// |---|---|---|
/// | convex GD | `κ ln n` | `ndκ ln n` |
/// | convex SGD | `κ² n` | `ndκ²` |
/// | convex SVRG | `κ ln(nκ)` | `(nd + dκ) ln(nκ)` |
/// | nonconvex GD | `1/ε0² + n²` | `n/ε0² + n³` |
/// | nonconvex SGD | `1/ε0⁴ + n⁴` | `1/ε0⁴ + n⁴` |
/// | nonconvex SVRG | `1/ε0² + n²` | `n^{2/3}/ε0² + n^{8/3}` |
pub fn sufficient_training(
    algorithm: Algorithm,
    regime: Regime,
    kappa: f64,
    n: f64,
    d: f64,
    epsilon0: Option<f64>,
    constant_factor: f64,
) -> Result<SufficientTraining> {
    if !(constant_factor > 0.0) || !constant_factor.is_finite() {
        return Err(Error::arg(format!("constant_factor must be > 0, got {constant_factor}")));
    }
    if !(n >= 1.0) || !(d >= 1.0) {
        return Err(Error::arg(format!("n and d must be >= 1, got n = {n}, d = {d}")));
    }
    let (iterations, time) = match regime {
        Regime::Convex => {
            if !(kappa >= 1.0) || !kappa.is_finite() {
                return Err(Error::arg(format!("kappa must be >= 1, got {kappa}")));
            }
            match algorithm {
                Algorithm::Gd => (kappa * n.ln(), n * d * kappa * n.ln()),
                Algorithm::Sgd => (kappa * kappa * n, n * d * kappa * kappa),
                Algorithm::Svrg => {
                    let l = (n * kappa).ln();
                    (kappa * l, (n * d + d * kappa) * l)
                }
            }
        }
        Regime::Nonconvex => {
            let e = match epsilon0 {
                Some(e) if e > 0.0 && e.is_finite() => e,
                Some(e) => return Err(Error::arg(format!("epsilon0 must be > 0, got {e}"))),
                None => return Err(Error::arg("the nonconvex regime needs epsilon0")),
            };
            let e2 = 1.0 / (e * e);
            match algorithm {
                Algorithm::Gd => (e2 + n.powi(2), n * e2 + n.powi(3)),
                Algorithm::Sgd => (e2 * e2 + n.powi(4), e2 * e2 + n.powi(4)),
                Algorithm::Svrg => (e2 + n.powi(2), n.powf(2.0 / 3.0) * e2 + n.powf(8.0 / 3.0)),
            }
        }
    };
    Ok(SufficientTraining {
        algorithm,
        regime,
        iterations: constant_factor * iterations,
        time_units: constant_factor * time,
        label: ORDER_ESTIMATE_LABEL.to_string(),
    })
}

/// Order of the high-probability generalization bound after `T` iterations,
/// with unit constants:
///
/// - SGD: `sqrt(ln(1/δ)/n) + κ² ln(ln(T)/δ) / T`,
/// - GD: `sqrt(ln(1/δ)/n) + e^{-κT}`.
///
/// The SGD log factor is floored at 1 so the term stays positive for small
/// `ln(T)/δ`.
pub fn excess_risk_order(algorithm: Algorithm, kappa: f64, n: f64, t: f64, delta: f64) -> Result<f64> {
    if !(t >= 2.0) {
        return Err(Error::arg(format!("T must be >= 2, got {t}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::arg(format!("delta must lie in (0, 1), got {delta}")));
    }
    if !(n >= 1.0) || !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::arg(format!("need n >= 1 and kappa > 0, got n = {n}, kappa = {kappa}")));
    }
    let estimation = ((1.0 / delta).ln() / n).sqrt();
    let optimization = match algorithm {
        Algorithm::Sgd => kappa * kappa * (t.ln() / delta).ln().max(1.0) / t,
        Algorithm::Gd => (-kappa * t).exp(),
        Algorithm::Svrg => return Err(Error::arg("excess risk orders are defined for gd and sgd only")),
    };
    Ok(estimation + optimization)
}
