//! Gradient descent, stochastic gradient descent and SVRG on an [`Objective`].
//!
//! Every run returns a [`Trace`] of evaluation records. Data passes are the
//! number of per-instance gradient evaluations divided by `n`: a GD step
//! costs one pass, an SGD step `1/n`, and an SVRG stage one pass for the
//! anchor gradient plus `2/n` per inner step (the anchor's per-instance
//! gradient is recomputed, not cached).
//!
//! Runs abort with [`Error::Divergence`] as soon as an evaluated regularized
//! risk exceeds `1e6` times its initial value or stops being finite.

mod gd;
mod schedule;
mod sgd;
mod svrg;
mod trace;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{check_dim, Error, Result};
use crate::objective::Objective;
use crate::params::{dist_sq, norm_sq};
use crate::ParameterVector;

pub use gd::run_gd;
pub use schedule::StepSchedule;
pub use sgd::run_sgd;
pub use svrg::{run_svrg, svrg_direction, SvrgParams, SvrgStageOutput};
pub use trace::{read_records, write_records, Trace, TraceRecord};

const DIVERGENCE_FACTOR: f64 = 1e6;

/// The three first-order methods.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Gd,
    Sgd,
    Svrg,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Gd, Algorithm::Sgd, Algorithm::Svrg];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Gd => "gd",
            Algorithm::Sgd => "sgd",
            Algorithm::Svrg => "svrg",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gd" => Ok(Algorithm::Gd),
            "sgd" => Ok(Algorithm::Sgd),
            "svrg" => Ok(Algorithm::Svrg),
            other => Err(Error::arg(format!("unknown algorithm `{other}` (expected gd, sgd or svrg)"))),
        }
    }
}

/// Evaluation settings shared by all three methods.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions<'a> {
    /// Iterations between evaluations. `None` picks one evaluation per
    /// iteration for GD and one per data pass for SGD and SVRG.
    pub eval_every: Option<u64>,
    pub test_set: Option<&'a Dataset>,
    /// Certified minimizer used for `ρ0` and `ρ1`.
    pub reference: Option<&'a ParameterVector>,
}

impl<'a> RunOptions<'a> {
    pub fn with_test_set(mut self, test: &'a Dataset) -> Self {
        self.test_set = Some(test);
        self
    }

    pub fn with_reference(mut self, reference: &'a ParameterVector) -> Self {
        self.reference = Some(reference);
        self
    }

    pub fn with_eval_every(mut self, every: u64) -> Self {
        self.eval_every = Some(every);
        self
    }
}

struct Monitor<'a> {
    objective: &'a Objective,
    opts: RunOptions<'a>,
    algorithm: &'static str,
    step: String,
    records: Vec<TraceRecord>,
    initial_risk: f64,
    grad_buf: Vec<f64>,
    start: Instant,
}

impl<'a> Monitor<'a> {
    fn new(
        objective: &'a Objective,
        w0: &ParameterVector,
        opts: RunOptions<'a>,
        algorithm: &'static str,
        step: String,
    ) -> Result<Self> {
        check_dim(objective.num_params(), w0.len())?;
        if let Some(r) = opts.reference {
            check_dim(objective.num_params(), r.len())?;
        }
        if let Some(t) = opts.test_set {
            check_dim(objective.model().input_dim(), t.dim())?;
            objective.model().check_compatible(objective.loss(), t.task())?;
        }
        let mut m = Monitor {
            objective,
            opts,
            algorithm,
            step,
            records: Vec::new(),
            initial_risk: f64::NAN,
            grad_buf: vec![0.0; w0.len()],
            start: Instant::now(),
        };
        m.record(0, 0, w0)?;
        m.initial_risk = m.records[0].reg_risk;
        Ok(m)
    }

    fn record(&mut self, iteration: u64, grad_evals: u64, w: &[f64]) -> Result<()> {
        let obj = self.objective;
        let wv = ParameterVector::from_vec(w.to_vec());
        let train_risk = obj.train_risk(&wv)?;
        let reg_risk = train_risk + obj.lambda() * obj.penalty(w);
        let iteration_err = |risk: f64, initial: f64| Error::Divergence {
            algorithm: self.algorithm.to_string(),
            step: self.step.clone(),
            iteration,
            risk,
            initial,
        };
        if !reg_risk.is_finite() || !wv.is_finite() {
            return Err(iteration_err(reg_risk, self.initial_risk));
        }
        if !self.records.is_empty()
            && reg_risk > DIVERGENCE_FACTOR * self.initial_risk.max(f64::EPSILON)
        {
            return Err(iteration_err(reg_risk, self.initial_risk));
        }
        obj.gradient_uncounted(w, &mut self.grad_buf);
        let test_risk = match self.opts.test_set {
            Some(t) => Some(obj.empirical_risk(&wv, t)?),
            None => None,
        };
        let (dist, subopt) = match self.opts.reference {
            Some(r) => (Some(dist_sq(w, r)), Some(obj.suboptimality(&wv, r)?)),
            None => (None, None),
        };
        self.records.push(TraceRecord {
            iteration,
            data_passes: grad_evals as f64 / obj.n() as f64,
            train_risk,
            test_risk,
            reg_risk,
            grad_norm_sq: norm_sq(&self.grad_buf),
            dist_sq_to_reference: dist,
            suboptimality: subopt,
            wall_time: self.start.elapsed().as_secs_f64(),
        });
        Ok(())
    }

    fn last_iteration(&self) -> u64 {
        self.records.last().map_or(0, |r| r.iteration)
    }

    fn finish(mut self, iteration: u64, grad_evals: u64, w: Vec<f64>) -> Result<Trace> {
        if self.last_iteration() != iteration {
            self.record(iteration, grad_evals, &w)?;
        }
        Ok(Trace {
            algorithm: self.algorithm.to_string(),
            step: self.step,
            records: self.records,
            final_w: ParameterVector::from_vec(w),
            gradient_evaluations: grad_evals,
            wall_time: self.start.elapsed().as_secs_f64(),
        })
    }
}
