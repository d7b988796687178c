use rand::Rng;
use rand_distr::StandardNormal;

use super::{rng_from_seed, Dataset, Instance, Task};
use crate::error::{Error, Result};

fn gaussian_vec<R: Rng>(rng: &mut R, d: usize, scale: f64) -> Vec<f64> {
    (0..d)
        .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Linear-Gaussian regression data.
///
/// Draws the target `w★ ~ N(0, I/d)` first (so `⟨x, w★⟩` has unit variance),
/// then `n` instances with `x ~ N(0, I_d)` and `y = ⟨x, w★⟩ + ε`,
/// `ε ~ N(0, noise_sd²)`. Returns the dataset together with `w★`.
pub fn generate_gaussian_regression(
    n: usize,
    d: usize,
    noise_sd: f64,
    seed: u64,
) -> Result<(Dataset, Vec<f64>)> {
    if n < 2 || d < 1 {
        return Err(Error::arg(format!(
            "regression generator needs n >= 2 and d >= 1, got n = {n}, d = {d}"
        )));
    }
    if !(noise_sd >= 0.0) || !noise_sd.is_finite() {
        return Err(Error::arg(format!("noise_sd must be >= 0, got {noise_sd}")));
    }
    let mut rng = rng_from_seed(seed);
    let w_star = gaussian_vec(&mut rng, d, 1.0 / (d as f64).sqrt());
    let instances = (0..n)
        .map(|_| {
            let x = gaussian_vec(&mut rng, d, 1.0);
            let eps: f64 = rng.sample(StandardNormal);
            let y = crate::params::dot(&x, &w_star) + noise_sd * eps;
            Instance::new(x, y)
        })
        .collect();
    Ok((Dataset::new(instances, Task::Regression)?, w_star))
}

/// Binary classification drawn from a well-specified logistic model:
/// `x ~ N(0, I_d)`, `P(y = +1 | x) = σ(⟨x, w★⟩)` with `w★ ~ N(0, signal²·I/d)`.
pub fn generate_logistic_classification(
    n: usize,
    d: usize,
    signal: f64,
    seed: u64,
) -> Result<(Dataset, Vec<f64>)> {
    if n < 2 || d < 1 {
        return Err(Error::arg(format!(
            "classification generator needs n >= 2 and d >= 1, got n = {n}, d = {d}"
        )));
    }
    if !(signal >= 0.0) || !signal.is_finite() {
        return Err(Error::arg(format!("signal must be >= 0, got {signal}")));
    }
    let mut rng = rng_from_seed(seed);
    let w_star = gaussian_vec(&mut rng, d, signal / (d as f64).sqrt());
    let instances = (0..n)
        .map(|_| {
            let x = gaussian_vec(&mut rng, d, 1.0);
            let p = 1.0 / (1.0 + (-crate::params::dot(&x, &w_star)).exp());
            let y = if rng.random::<f64>() < p { 1.0 } else { -1.0 };
            Instance::new(x, y)
        })
        .collect();
    Ok((Dataset::new(instances, Task::Binary)?, w_star))
}

/// Multiclass Gaussian mixture: class means `m_c ~ N(0, separation²·I/d)`,
/// labels uniform over `0..classes`, and `x = m_y + N(0, I_d)`.
pub fn generate_gaussian_mixture(
    n: usize,
    d: usize,
    classes: usize,
    separation: f64,
    seed: u64,
) -> Result<Dataset> {
    if n < 2 || d < 1 || classes < 2 {
        return Err(Error::arg(format!(
            "mixture generator needs n >= 2, d >= 1, classes >= 2; got {n}, {d}, {classes}"
        )));
    }
    if !(separation >= 0.0) || !separation.is_finite() {
        return Err(Error::arg(format!("separation must be >= 0, got {separation}")));
    }
    let mut rng = rng_from_seed(seed);
    let scale = separation / (d as f64).sqrt();
    let means: Vec<Vec<f64>> = (0..classes).map(|_| gaussian_vec(&mut rng, d, scale)).collect();
    let instances = (0..n)
        .map(|_| {
            let c = rng.random_range(0..classes);
            let x = means[c]
                .iter()
                .map(|m| m + rng.sample::<f64, _>(StandardNormal))
                .collect();
            Instance::new(x, c as f64)
        })
        .collect();
    Dataset::new(instances, Task::Multiclass { classes })
}
