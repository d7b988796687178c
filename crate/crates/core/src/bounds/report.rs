use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ConvergenceErrors, StabilityConstants};
use crate::error::{Error, Result};

/// Symbolic approximation-error offset carried by every report.
pub const APP_OFFSET_LABEL: &str = "E_app (approximation error, not estimated; totals bound E - E_app)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Expected,
    HighProb,
    Nonconvex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermGroup {
    Stability,
    Optimization,
    Concentration,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundTerm {
    pub name: String,
    pub group: TermGroup,
    pub value: f64,
}

/// Whether the `ρ` inputs come from one run or a mean over seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RhoSource {
    SingleRun,
    SeedAverage { runs: usize },
    Supplied,
}

/// Itemized bound on the excess generalization error `E - E_app`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_kind: BoundKind,
    pub inputs: BTreeMap<String, f64>,
    pub terms: Vec<BoundTerm>,
    pub stability_term: f64,
    pub optimization_term: f64,
    pub concentration_term: f64,
    pub app_offset: String,
    pub total_excess: f64,
    pub rho_source: RhoSource,
    pub assumptions: Vec<String>,
}

impl BoundReport {
    fn build(
        bound_kind: BoundKind,
        inputs: &[(&str, f64)],
        terms: Vec<BoundTerm>,
        rho_source: RhoSource,
        assumptions: Vec<String>,
    ) -> Self {
        let sum = |g: TermGroup| terms.iter().filter(|t| t.group == g).map(|t| t.value).fold(0.0, |a, b| a + b);
        let stability_term = sum(TermGroup::Stability);
        let optimization_term = sum(TermGroup::Optimization);
        let concentration_term = sum(TermGroup::Concentration);
        BoundReport {
            bound_kind,
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            total_excess: terms.iter().map(|t| t.value).sum(),
            terms,
            stability_term,
            optimization_term,
            concentration_term,
            app_offset: APP_OFFSET_LABEL.to_string(),
            rho_source,
            assumptions,
        }
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.name == name).map(|t| t.value)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn term(name: &str, group: TermGroup, value: f64) -> BoundTerm {
    BoundTerm { name: name.to_string(), group, value }
}

fn check_nonneg(values: &[(&str, f64)]) -> Result<()> {
    for (name, v) in values {
        if !(*v >= 0.0) || !v.is_finite() {
            return Err(Error::arg(format!("{name} must be finite and >= 0, got {v}")));
        }
    }
    Ok(())
}

fn check_n(n: usize) -> Result<f64> {
    if n == 0 {
        Err(Error::arg("n must be > 0"))
    } else {
        Ok(n as f64)
    }
}

const NORM_NOTE: &str =
    "rho1 is measured in parameter space; for a linear kernel without bias this equals the RKHS norm";

/// Bound in expectation for convex problems:
///
/// ```text
/// 2β0 + ρ0 + γρ1/2 + sqrt(ρ1 (L²/2n + 6Lγβ1))
/// ```
pub fn expected_bound(
    beta: &StabilityConstants,
    rho: &ConvergenceErrors,
    lipschitz: f64,
    gamma: f64,
    n: usize,
    rho_source: RhoSource,
) -> Result<BoundReport> {
    let nf = check_n(n)?;
    let inputs = [
        ("beta0", beta.beta0),
        ("beta1", beta.beta1),
        ("rho0", rho.rho0),
        ("rho1", rho.rho1),
        ("L", lipschitz),
        ("gamma", gamma),
        ("n", nf),
    ];
    check_nonneg(&inputs)?;
    let cross = (rho.rho1 * (lipschitz * lipschitz / (2.0 * nf) + 6.0 * lipschitz * gamma * beta.beta1)).sqrt();
    let terms = vec![
        term("2*beta0", TermGroup::Stability, 2.0 * beta.beta0),
        term("rho0", TermGroup::Optimization, rho.rho0),
        term("gamma*rho1/2", TermGroup::Optimization, gamma * rho.rho1 / 2.0),
        term("sqrt(rho1*(L^2/(2n)+6*L*gamma*beta1))", TermGroup::Optimization, cross),
    ];
    let notes = vec![
        "bound holds in expectation over the sample and the algorithm".to_string(),
        NORM_NOTE.to_string(),
    ];
    Ok(BoundReport::build(BoundKind::Expected, &inputs, terms, rho_source, notes))
}

/// Bound holding with probability at least `1 - δ` for convex problems:
///
/// ```text
/// 2β0 + ρ0 + γρ1/2 + 2γβ1√ρ1 + (4nβ0 + 2M + (4nγβ1 + L)√ρ1) sqrt(ln(4/δ)/2n)
/// ```
#[allow(clippy::too_many_arguments)]
pub fn high_prob_bound(
    beta: &StabilityConstants,
    rho: &ConvergenceErrors,
    lipschitz: f64,
    gamma: f64,
    loss_bound: f64,
    n: usize,
    delta: f64,
    rho_source: RhoSource,
) -> Result<BoundReport> {
    let nf = check_n(n)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::arg(format!("delta must lie in (0, 1), got {delta}")));
    }
    if !(loss_bound > 0.0) {
        return Err(Error::arg(format!("M must be > 0, got {loss_bound}")));
    }
    let inputs = [
        ("beta0", beta.beta0),
        ("beta1", beta.beta1),
        ("rho0", rho.rho0),
        ("rho1", rho.rho1),
        ("L", lipschitz),
        ("gamma", gamma),
        ("M", loss_bound),
        ("n", nf),
        ("delta", delta),
    ];
    check_nonneg(&inputs)?;
    let sr1 = rho.rho1.sqrt();
    let width = ((4.0 / delta).ln() / (2.0 * nf)).sqrt();
    let scale = 4.0 * nf * beta.beta0 + 2.0 * loss_bound + (4.0 * nf * gamma * beta.beta1 + lipschitz) * sr1;
    let terms = vec![
        term("2*beta0", TermGroup::Stability, 2.0 * beta.beta0),
        term("rho0", TermGroup::Optimization, rho.rho0),
        term("gamma*rho1/2", TermGroup::Optimization, gamma * rho.rho1 / 2.0),
        term("2*gamma*beta1*sqrt(rho1)", TermGroup::Optimization, 2.0 * gamma * beta.beta1 * sr1),
        term(
            "(4n*beta0+2M+(4n*gamma*beta1+L)*sqrt(rho1))*sqrt(ln(4/delta)/(2n))",
            TermGroup::Concentration,
            scale * width,
        ),
    ];
    let notes = vec![format!("holds with probability at least {}", 1.0 - delta), NORM_NOTE.to_string()];
    Ok(BoundReport::build(BoundKind::HighProb, &inputs, terms, rho_source, notes))
}

/// Inputs of the nonconvex bound. `mu`, `epsilon0` and `local_gap` are user
/// assumptions about the landscape and are echoed into the report.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonconvexInputs {
    pub beta0: f64,
    pub lipschitz: f64,
    /// Strong convexity around the local minimum.
    pub mu: f64,
    pub min_rho2: f64,
    /// `R(w_loc) - R(w*)`.
    pub local_gap: f64,
    pub epsilon0: f64,
    /// `γ` entering the `min ρ2 ≤ γ²ε0²` condition.
    pub gamma: f64,
}

/// `min_t ρ2(t) ≤ γ²ε0²`: the run is long enough for the nonconvex bound.
pub fn t1_reached(min_rho2: f64, gamma: f64, epsilon0: f64) -> bool {
    min_rho2 <= gamma * gamma * epsilon0 * epsilon0
}

/// Bound for nonconvex problems under the strict saddle property:
///
/// ```text
/// 2β0 + (R(w_loc) - R(w*)) + (L/μ) sqrt(min_t ρ2(t))
/// ```
///
/// `certified` is the caller's statement that the run reached `T₁`; without
/// it the bound is refused.
pub fn nonconvex_bound(inputs: &NonconvexInputs, certified: bool) -> Result<BoundReport> {
    let vals = [
        ("beta0", inputs.beta0),
        ("L", inputs.lipschitz),
        ("mu", inputs.mu),
        ("min_rho2", inputs.min_rho2),
        ("local_gap", inputs.local_gap),
        ("epsilon0", inputs.epsilon0),
        ("gamma", inputs.gamma),
    ];
    check_nonneg(&vals)?;
    if !(inputs.mu > 0.0) {
        return Err(Error::arg(format!("mu must be > 0, got {}", inputs.mu)));
    }
    if !certified {
        return Err(Error::Precondition(format!(
            "T1 not reached: min rho2 = {:e} is not certified to be <= gamma^2 epsilon0^2 = {:e}",
            inputs.min_rho2,
            inputs.gamma * inputs.gamma * inputs.epsilon0 * inputs.epsilon0
        )));
    }
    let terms = vec![
        term("2*beta0", TermGroup::Stability, 2.0 * inputs.beta0),
        term("local_gap", TermGroup::Optimization, inputs.local_gap),
        term("(L/mu)*sqrt(min_rho2)", TermGroup::Optimization, inputs.lipschitz / inputs.mu * inputs.min_rho2.sqrt()),
    ];
    let notes = vec![
        "assumes the strict saddle property".to_string(),
        "mu, epsilon0, local_gap and beta0 are user assumptions, not measured".to_string(),
    ];
    Ok(BoundReport::build(BoundKind::Nonconvex, &vals, terms, RhoSource::SingleRun, notes))
}
