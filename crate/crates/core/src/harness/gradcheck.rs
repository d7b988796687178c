//! Analytic gradients against central finite differences.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::oracle::{finite_diff_gradient, relative_error};
use crate::data::{generate_gaussian_mixture, generate_gaussian_regression, generate_logistic_classification, rng_from_seed};
use crate::error::Result;
use crate::model::{LinearModel, LossSpec, Model};
use crate::objective::Objective;
use crate::ParameterVector;

pub const GRADIENT_CHECK_STEP: f64 = 1e-5;
pub const GRADIENT_CHECK_TOLERANCE: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientCase {
    pub name: String,
    pub probes: usize,
    pub max_relative_error: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientCheckReport {
    pub step: f64,
    pub tolerance: f64,
    pub cases: Vec<GradientCase>,
}

impl GradientCheckReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }
}

const CASES: [&str; 5] = [
    "squared/linear",
    "squared/linear+bias",
    "logistic/linear",
    "logistic/linear+bias",
    "cross_entropy/mlp",
];

fn probe_objective(case: &str, seed: u64) -> Result<Objective> {
    let (n, d) = (7, 5);
    Ok(match case {
        "squared/linear" | "squared/linear+bias" => {
            let (s, _) = generate_gaussian_regression(n, d, 0.5, seed)?;
            let m = if case.ends_with("bias") { LinearModel::with_bias(d) } else { LinearModel::new(d) };
            Objective::new(s, Model::Linear(m), LossSpec::Squared, 0.1)?
        }
        "logistic/linear" | "logistic/linear+bias" => {
            let (s, _) = generate_logistic_classification(n, d, 2.0, seed)?;
            let m = if case.ends_with("bias") { LinearModel::with_bias(d) } else { LinearModel::new(d) };
            Objective::new(s, Model::Linear(m), LossSpec::Logistic, 0.1)?
        }
        _ => {
            let s = generate_gaussian_mixture(n, 4, 10, 2.0, seed)?;
            Objective::new(s, Model::mlp(4), LossSpec::CrossEntropy, 0.01)?
        }
    })
}

/// Compares `∇R_S^r` with central differences of `R_S^r` on `probes` random
/// problems and parameter vectors per model/loss pair.
pub fn check_gradients(seed: u64, probes: usize) -> Result<GradientCheckReport> {
    let mut cases = Vec::new();
    for (ci, case) in CASES.iter().enumerate() {
        let mut worst = 0.0f64;
        for p in 0..probes {
            let s = seed.wrapping_mul(1000).wrapping_add((ci * probes + p) as u64);
            let obj = probe_objective(case, s)?;
            let mut rng = rng_from_seed(s ^ 0xA5A5);
            let mut w = obj.model().init_params(s);
            for v in w.iter_mut() {
                *v += 0.5 * rng.sample::<f64, _>(StandardNormal);
            }
            let analytic = obj.full_gradient(&w)?;
            let numeric = finite_diff_gradient(
                |v| obj.regularized_risk(&ParameterVector::from_vec(v.to_vec())).unwrap_or(f64::NAN),
                &w,
                GRADIENT_CHECK_STEP,
            )?;
            let err = relative_error(&analytic, &numeric, 1e-8);
            worst = if err.is_nan() { f64::INFINITY } else { worst.max(err) };
        }
        cases.push(GradientCase {
            name: case.to_string(),
            probes,
            max_relative_error: worst,
            passed: worst <= GRADIENT_CHECK_TOLERANCE,
        });
    }
    Ok(GradientCheckReport { step: GRADIENT_CHECK_STEP, tolerance: GRADIENT_CHECK_TOLERANCE, cases })
}
