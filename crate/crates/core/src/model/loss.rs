use serde::{Deserialize, Serialize};

/// Per-instance loss `l(f, z)`.
///
/// - `Squared`: `(f(x) - y)²`
/// - `Logistic`: `log(1 + exp(-y f(x)))` with `y ∈ {-1, +1}`
/// - `CrossEntropy`: `-log p_y` where `p = softmax(logits)`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossSpec {
    Squared,
    Logistic,
    CrossEntropy,
}

impl LossSpec {
    /// Value for a scalar output (squared and logistic only).
    pub fn scalar_value(self, f: f64, y: f64) -> f64 {
        match self {
            LossSpec::Squared => {
                let r = f - y;
                r * r
            }
            LossSpec::Logistic => softplus(-y * f),
            LossSpec::CrossEntropy => panic!("cross-entropy has no scalar form"),
        }
    }

    /// `∂l/∂f` for a scalar output.
    pub fn scalar_derivative(self, f: f64, y: f64) -> f64 {
        match self {
            LossSpec::Squared => 2.0 * (f - y),
            LossSpec::Logistic => -y * sigmoid(-y * f),
            LossSpec::CrossEntropy => panic!("cross-entropy has no scalar form"),
        }
    }

    /// `l(f_a, y) - l(f_b, y)` evaluated without cancellation between two
    /// nearby outputs. `delta = f_a - f_b` must be supplied by the caller, who
    /// can usually compute it more accurately than by subtraction.
    pub(crate) fn scalar_difference(self, f_a: f64, f_b: f64, delta: f64, y: f64) -> f64 {
        match self {
            LossSpec::Squared => delta * (f_a + f_b - 2.0 * y),
            LossSpec::Logistic => {
                // softplus(a) - softplus(b) = ln(1 + σ(b)·expm1(a - b)), a = -y f_a, b = -y f_b
                let b = -y * f_b;
                (sigmoid(b) * (-y * delta).exp_m1()).ln_1p()
            }
            LossSpec::CrossEntropy => panic!("cross-entropy has no scalar form"),
        }
    }
}

pub(crate) fn softplus(a: f64) -> f64 {
    a.max(0.0) + (-a.abs()).exp().ln_1p()
}

pub(crate) fn sigmoid(a: f64) -> f64 {
    if a >= 0.0 {
        1.0 / (1.0 + (-a).exp())
    } else {
        let e = a.exp();
        e / (1.0 + e)
    }
}
