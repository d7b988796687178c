use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Monitor, RunOptions, Trace};
use crate::data::rng_from_seed;
use crate::error::{check_dim, Error, Result};
use crate::objective::Objective;
use crate::ParameterVector;

/// Which point of a stage becomes the next anchor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SvrgStageOutput {
    #[default]
    Last,
    /// Uniformly chosen among the stage's inner iterates `w_1, ..., w_m`.
    RandomIterate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvrgParams {
    pub eta: f64,
    /// Inner steps per stage.
    pub inner: u64,
    pub stages: u64,
    #[serde(default)]
    pub output: SvrgStageOutput,
}

impl SvrgParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0) || !self.eta.is_finite() {
            return Err(Error::arg(format!("SVRG step size must be > 0, got {}", self.eta)));
        }
        if self.inner == 0 {
            return Err(Error::arg("SVRG inner loop length must be >= 1"));
        }
        Ok(())
    }
}

/// Variance-reduced direction `g_i(w) - g_i(w̃) + ∇R_S^r(w̃)` for anchor `w̃`.
pub fn svrg_direction(
    objective: &Objective,
    w: &ParameterVector,
    anchor: &ParameterVector,
    anchor_full_grad: &ParameterVector,
    i: usize,
) -> Result<ParameterVector> {
    check_dim(objective.num_params(), anchor.len())?;
    check_dim(objective.num_params(), anchor_full_grad.len())?;
    let gw = objective.stochastic_gradient(w, i)?;
    let ga = objective.stochastic_gradient(anchor, i)?;
    let v = gw
        .iter()
        .zip(ga.iter())
        .zip(anchor_full_grad.iter())
        .map(|((a, b), c)| a - b + c)
        .collect();
    Ok(ParameterVector::from_vec(v))
}

/// SVRG with `stages` outer loops of `inner` steps each. Iterations in the
/// trace count inner steps.
pub fn run_svrg(
    objective: &Objective,
    w0: &ParameterVector,
    params: &SvrgParams,
    seed: u64,
    opts: RunOptions<'_>,
) -> Result<Trace> {
    params.validate()?;
    let n = objective.n();
    let every = opts.eval_every.unwrap_or((n as u64).div_ceil(2)).max(1);
    let step = format!("{}", params.eta);
    let mut monitor = Monitor::new(objective, w0, opts, "svrg", step)?;
    let mut rng = rng_from_seed(seed);
    let p = w0.len();
    let mut anchor = w0.as_slice().to_vec();
    let mut mu = vec![0.0; p];
    let mut w = vec![0.0; p];
    let mut gw = vec![0.0; p];
    let mut ga = vec![0.0; p];
    let mut chosen = vec![0.0; p];
    let mut evals = 0u64;
    let mut t = 0u64;
    for _ in 0..params.stages {
        objective.full_gradient_into(&anchor, &mut mu);
        evals += n as u64;
        w.copy_from_slice(&anchor);
        let pick = match params.output {
            SvrgStageOutput::Last => params.inner,
            SvrgStageOutput::RandomIterate => rng.random_range(1..=params.inner),
        };
        for k in 1..=params.inner {
            let i = rng.random_range(0..n);
            objective.stochastic_gradient_into(&w, i, &mut gw);
            objective.stochastic_gradient_into(&anchor, i, &mut ga);
            evals += 2;
            for j in 0..p {
                w[j] -= params.eta * (gw[j] - ga[j] + mu[j]);
            }
            t += 1;
            if k == pick {
                chosen.copy_from_slice(&w);
            }
            if k < params.inner && t % every == 0 {
                monitor.record(t, evals, &w)?;
            }
        }
        anchor.copy_from_slice(&chosen);
        if t % every == 0 {
            monitor.record(t, evals, &anchor)?;
        }
    }
    monitor.finish(t, evals, anchor)
}
