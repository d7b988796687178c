//! Stand-alone bound evaluation from an input file, and the replace-one
//! stability audit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::{
    empirical_stability, expected_bound, high_prob_bound, kernel_stability, nonconvex_bound, t1_reached,
    BoundKind, BoundReport, ConvergenceErrors, NonconvexInputs, RhoSource, StabilityConstants,
};
use crate::data::generate_logistic_classification;
use crate::error::{Error, Result};
use crate::model::{LossSpec, Model};
use crate::objective::Objective;

/// Inputs of a single bound evaluation, read from TOML or JSON.
///
/// `beta0`/`beta1` may be given directly, or derived from `kernel_bound`
/// and `lambda` with the kernel closed form.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundInputs {
    pub kind: Option<BoundKind>,
    pub n: Option<usize>,
    pub lipschitz: Option<f64>,
    pub gamma: Option<f64>,
    pub beta0: Option<f64>,
    pub beta1: Option<f64>,
    pub kernel_bound: Option<f64>,
    pub lambda: Option<f64>,
    #[serde(default)]
    pub rho0: f64,
    #[serde(default)]
    pub rho1: f64,
    pub loss_bound: Option<f64>,
    pub delta: Option<f64>,
    pub mu: Option<f64>,
    pub min_rho2: Option<f64>,
    pub local_gap: Option<f64>,
    pub epsilon0: Option<f64>,
    /// Overrides the `min_rho2 ≤ γ²ε0²` check for the nonconvex bound.
    pub certified: Option<bool>,
}

fn need<T>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("missing input `{name}`")))
}

impl BoundInputs {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        if path.extension().is_some_and(|e| e == "json") {
            Ok(serde_json::from_str(&text)?)
        } else {
            toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))
        }
    }

    fn stability(&self) -> Result<StabilityConstants> {
        match (self.beta0, self.beta1) {
            (Some(beta0), Some(beta1)) => Ok(StabilityConstants { beta0, beta1 }),
            _ => kernel_stability(
                need(self.lipschitz, "lipschitz")?,
                need(self.kernel_bound, "kernel_bound (or beta0 and beta1)")?,
                need(self.lambda, "lambda")?,
                need(self.n, "n")?,
            ),
        }
    }

    pub fn evaluate(&self) -> Result<BoundReport> {
        let kind = need(self.kind, "kind")?;
        match kind {
            BoundKind::Expected | BoundKind::HighProb => {
                let beta = self.stability()?;
                let rho = ConvergenceErrors::new(self.rho0, self.rho1, 0.0)?;
                let l = need(self.lipschitz, "lipschitz")?;
                let g = need(self.gamma, "gamma")?;
                let n = need(self.n, "n")?;
                if kind == BoundKind::Expected {
                    expected_bound(&beta, &rho, l, g, n, RhoSource::Supplied)
                } else {
                    let m = need(self.loss_bound, "loss_bound")?;
                    let d = need(self.delta, "delta")?;
                    high_prob_bound(&beta, &rho, l, g, m, n, d, RhoSource::Supplied)
                }
            }
            BoundKind::Nonconvex => {
                let inputs = NonconvexInputs {
                    beta0: need(self.beta0, "beta0")?,
                    lipschitz: need(self.lipschitz, "lipschitz")?,
                    mu: need(self.mu, "mu")?,
                    min_rho2: need(self.min_rho2, "min_rho2")?,
                    local_gap: need(self.local_gap, "local_gap")?,
                    epsilon0: need(self.epsilon0, "epsilon0")?,
                    gamma: need(self.gamma, "gamma")?,
                };
                let ok = self.certified.unwrap_or_else(|| t1_reached(inputs.min_rho2, inputs.gamma, inputs.epsilon0));
                nonconvex_bound(&inputs, ok)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub n: usize,
    pub d: usize,
    pub lambda: f64,
    pub trials: usize,
    pub seed: u64,
    pub signal: f64,
    pub solver_tolerance: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig { n: 100, d: 10, lambda: 0.1, trials: 200, seed: 0, signal: 2.0, solver_tolerance: 1e-10 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub config: AuditConfig,
    pub kernel_bound: f64,
    pub beta: StabilityConstants,
    pub max_loss_change: f64,
    pub max_output_change: f64,
    pub max_prediction_change: f64,
    /// `K·β1`, which bounds the pointwise prediction change.
    pub prediction_bound: f64,
    pub replace_max_loss_change: f64,
    pub replace_max_output_change: f64,
    pub loss_violations: usize,
    pub output_violations: usize,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.loss_violations == 0 && self.output_violations == 0
    }
}

/// Replace-one / leave-one-out audit of logistic regression on synthetic
/// data against `β0 = K²/(2λn)` and `β1 = K/(2λn)` (`L = 1`).
pub fn stability_audit(cfg: &AuditConfig) -> Result<AuditReport> {
    let (data, _) = generate_logistic_classification(cfg.n, cfg.d, cfg.signal, cfg.seed)?;
    let k = data.max_feature_norm();
    let obj = Objective::new(data, Model::linear(cfg.d), LossSpec::Logistic, cfg.lambda)?;
    let beta = kernel_stability(1.0, k, cfg.lambda, cfg.n)?;
    let m = empirical_stability(&obj, cfg.trials, cfg.seed, cfg.solver_tolerance)?;
    let (loss_violations, output_violations) = m.violations(&beta);
    Ok(AuditReport {
        config: *cfg,
        kernel_bound: k,
        beta,
        max_loss_change: m.max_loss_change,
        max_output_change: m.max_output_change,
        max_prediction_change: m.max_prediction_change,
        prediction_bound: k * beta.beta1,
        replace_max_loss_change: m.replace_max_loss_change,
        replace_max_output_change: m.replace_max_output_change,
        loss_violations,
        output_violations,
    })
}
