use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Step-size schedule `η_t`, `t = 1, 2, ...`.
///
/// The decaying schedules take an optional `offset` `t0 ≥ 0`:
/// `η_t = c / (t + t0)` and `η_t = c / √(t + t0)`. With `t0 = 0` they are the
/// plain `c/t` and `c/√t` schedules.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepSchedule {
    Constant {
        eta: f64,
    },
    Inverse {
        c: f64,
        #[serde(default)]
        offset: f64,
    },
    InverseSqrt {
        c: f64,
        #[serde(default)]
        offset: f64,
    },
}

impl StepSchedule {
    pub fn constant(eta: f64) -> Self {
        StepSchedule::Constant { eta }
    }

    pub fn inverse(c: f64) -> Self {
        StepSchedule::Inverse { c, offset: 0.0 }
    }

    pub fn inverse_sqrt(c: f64) -> Self {
        StepSchedule::InverseSqrt { c, offset: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let (coef, offset) = match *self {
            StepSchedule::Constant { eta } => (eta, 0.0),
            StepSchedule::Inverse { c, offset } | StepSchedule::InverseSqrt { c, offset } => {
                (c, offset)
            }
        };
        if !(coef > 0.0) || !coef.is_finite() {
            return Err(Error::arg(format!("step coefficient must be > 0, got {coef}")));
        }
        if !(offset >= 0.0) || !offset.is_finite() {
            return Err(Error::arg(format!("schedule offset must be >= 0, got {offset}")));
        }
        Ok(())
    }

    /// `η_t` for the 1-based iteration `t`.
    pub fn step(&self, t: u64) -> f64 {
        let t = t.max(1) as f64;
        match *self {
            StepSchedule::Constant { eta } => eta,
            StepSchedule::Inverse { c, offset } => c / (t + offset),
            StepSchedule::InverseSqrt { c, offset } => c / (t + offset).sqrt(),
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            StepSchedule::Constant { eta } => format!("{eta}"),
            StepSchedule::Inverse { c, offset } if offset == 0.0 => format!("{c}/t"),
            StepSchedule::Inverse { c, offset } => format!("{c}/(t+{offset})"),
            StepSchedule::InverseSqrt { c, offset } if offset == 0.0 => format!("{c}/sqrt(t)"),
            StepSchedule::InverseSqrt { c, offset } => format!("{c}/sqrt(t+{offset})"),
        }
    }
}
