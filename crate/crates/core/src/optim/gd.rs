use super::{Monitor, RunOptions, Trace};
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::params::axpy;
use crate::ParameterVector;

/// Full-batch gradient descent `w ← w - η ∇R_S^r(w)` for `iterations` steps.
pub fn run_gd(
    objective: &Objective,
    w0: &ParameterVector,
    eta: f64,
    iterations: u64,
    opts: RunOptions<'_>,
) -> Result<Trace> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::arg(format!("GD step size must be > 0, got {eta}")));
    }
    let every = opts.eval_every.unwrap_or(1).max(1);
    let mut monitor = Monitor::new(objective, w0, opts, "gd", format!("{eta}"))?;
    let n = objective.n() as u64;
    let mut w = w0.as_slice().to_vec();
    let mut g = vec![0.0; w.len()];
    let mut evals = 0u64;
    for t in 1..=iterations {
        objective.full_gradient_into(&w, &mut g);
        evals += n;
        axpy(-eta, &g, &mut w);
        if t % every == 0 {
            monitor.record(t, evals, &w)?;
        }
    }
    monitor.finish(iterations, evals, w)
}
