use rand::Rng;
use serde::{Deserialize, Serialize};

use super::StabilityConstants;
use crate::data::{rng_from_seed, Instance, Task};
use crate::error::{Error, Result};
use crate::harness::exact_minimizer;
use crate::model::Model;
use crate::objective::Objective;
use crate::params::dist_sq;

/// One replace-one / leave-one-out trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityTrial {
    /// Index of the perturbed training instance.
    pub index: usize,
    /// Index of the training instance used as probe point.
    pub probe: usize,
    /// `|l(w_S, z) - l(w_{S\j}, z)|`.
    pub loss_change: f64,
    /// `‖w_S - w_{S\j}‖`.
    pub output_change: f64,
    /// `|f_S(x) - f_{S\j}(x)|` at the probe.
    pub prediction_change: f64,
    /// `|l(w_S, z) - l(w_{S^j}, z)|` with instance `j` replaced.
    pub replace_loss_change: f64,
    /// `‖w_S - w_{S^j}‖`.
    pub replace_output_change: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityMeasurement {
    pub max_loss_change: f64,
    pub max_output_change: f64,
    pub max_prediction_change: f64,
    pub replace_max_loss_change: f64,
    pub replace_max_output_change: f64,
    pub trials: Vec<StabilityTrial>,
}

impl StabilityMeasurement {
    /// Trials whose leave-one-out loss change exceeds `β0` and whose output
    /// change exceeds `β1`, in that order.
    pub fn violations(&self, beta: &StabilityConstants) -> (usize, usize) {
        let loss = self.trials.iter().filter(|t| t.loss_change > beta.beta0).count();
        let out = self.trials.iter().filter(|t| t.output_change > beta.beta1).count();
        (loss, out)
    }
}

fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Measures the stability of the exact regularized minimizer by brute force.
///
/// Each trial draws an index `j`, a replacement `z'` (features of a random
/// training instance with a fresh random label) and a probe `z` from the
/// training set. It then solves the problem on `S`, on `S^j` (instance `j`
/// replaced by `z'`) and on `S\j` (instance `j` removed). The leave-one-out
/// problem keeps the `1/n` normalization of the loss sum, which is the same
/// as minimizing the usual objective on `S\j` with `λ·n/(n-1)`.
///
/// Solves use [`exact_minimizer`] with `solver_tolerance`; trials draw from
/// independent streams derived from `seed`.
pub fn empirical_stability(
    objective: &Objective,
    trials: usize,
    seed: u64,
    solver_tolerance: f64,
) -> Result<StabilityMeasurement> {
    let lin = match objective.model() {
        Model::Linear(m) if !m.bias => m,
        _ => {
            return Err(Error::Unsupported(
                "empirical stability is defined for linear models without bias".into(),
            ))
        }
    };
    let data = objective.dataset();
    let n = data.len();
    if n < 2 {
        return Err(Error::arg("stability measurement needs at least two instances"));
    }
    if trials == 0 {
        return Err(Error::arg("trials must be >= 1"));
    }
    let loss = objective.loss();
    let w_s = exact_minimizer(objective, solver_tolerance)?;
    let loo_lambda = objective.lambda() * n as f64 / (n as f64 - 1.0);

    let mut out = Vec::with_capacity(trials);
    for trial in 0..trials as u64 {
        let mut rng = rng_from_seed(trial_seed(seed, trial));
        let j = rng.random_range(0..n);
        let donor = &data.instances()[rng.random_range(0..n)];
        let label = match data.task() {
            Task::Binary => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            _ => data.instances()[rng.random_range(0..n)].label,
        };
        let probe = rng.random_range(0..n);
        let z = &data.instances()[probe];

        let replaced = objective.with_dataset(data.replace_instance(j, Instance::new(donor.features.clone(), label))?)?;
        let w_rep = exact_minimizer(&replaced, solver_tolerance)?;
        let removed = Objective::new(data.remove_instance(j)?, objective.model().clone(), loss, loo_lambda)?;
        let w_loo = exact_minimizer(&removed, solver_tolerance)?;

        let f_s = lin.output(&w_s, &z.features);
        let f_loo = lin.output(&w_loo, &z.features);
        let f_rep = lin.output(&w_rep, &z.features);
        out.push(StabilityTrial {
            index: j,
            probe,
            loss_change: (loss.scalar_value(f_s, z.label) - loss.scalar_value(f_loo, z.label)).abs(),
            output_change: dist_sq(&w_s, &w_loo).sqrt(),
            prediction_change: (f_s - f_loo).abs(),
            replace_loss_change: (loss.scalar_value(f_s, z.label) - loss.scalar_value(f_rep, z.label)).abs(),
            replace_output_change: dist_sq(&w_s, &w_rep).sqrt(),
        });
    }
    let max = |f: fn(&StabilityTrial) -> f64| out.iter().map(f).fold(0.0, f64::max);
    Ok(StabilityMeasurement {
        max_loss_change: max(|t| t.loss_change),
        max_output_change: max(|t| t.output_change),
        max_prediction_change: max(|t| t.prediction_change),
        replace_max_loss_change: max(|t| t.replace_loss_change),
        replace_max_output_change: max(|t| t.replace_output_change),
        trials: out,
    })
}
