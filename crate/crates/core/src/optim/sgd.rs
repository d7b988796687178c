use rand::Rng;

use super::{Monitor, RunOptions, StepSchedule, Trace};
use crate::data::rng_from_seed;
use crate::error::Result;
use crate::objective::Objective;
use crate::params::axpy;
use crate::ParameterVector;

/// Stochastic gradient descent `w ← w - η_t (∇l(w, z_i) + 2λw)` with `i`
/// drawn uniformly with replacement.
pub fn run_sgd(
    objective: &Objective,
    w0: &ParameterVector,
    schedule: &StepSchedule,
    iterations: u64,
    seed: u64,
    opts: RunOptions<'_>,
) -> Result<Trace> {
    schedule.validate()?;
    let n = objective.n();
    let every = opts.eval_every.unwrap_or(n as u64).max(1);
    let mut monitor = Monitor::new(objective, w0, opts, "sgd", schedule.describe())?;
    let mut rng = rng_from_seed(seed);
    let mut w = w0.as_slice().to_vec();
    let mut g = vec![0.0; w.len()];
    for t in 1..=iterations {
        let i = rng.random_range(0..n);
        objective.stochastic_gradient_into(&w, i, &mut g);
        axpy(-schedule.step(t), &g, &mut w);
        if t % every == 0 {
            monitor.record(t, t, &w)?;
        }
    }
    monitor.finish(iterations, iterations, w)
}
