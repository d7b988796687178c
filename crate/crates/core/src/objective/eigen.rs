//! Extreme eigenvalues of a symmetric positive (semi-)definite matrix by power
//! iteration (largest) and inverse power iteration on a Cholesky factor
//! (smallest).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative residual `‖Av - θv‖ / |θ|` at which an iteration stops.
pub const EIGEN_TOLERANCE: f64 = 1e-8;
const MAX_ITERATIONS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenExtremes {
    pub max: f64,
    pub min: f64,
}

/// Largest and smallest eigenvalue of the symmetric matrix `a`.
///
/// Fails with a numeric error if `a` is not positive definite or an iteration
/// does not reach `tol` within the iteration cap.
///
/// Both iterations run on `a - σI`, where `σ` is the Gershgorin lower bound
/// of the spectrum (when positive). This removes a dominant multiple of the
/// identity, such as a large ridge penalty, which would otherwise leave the
/// extreme eigenvalues nearly tied.
pub fn extreme_eigenvalues(a: &DMatrix<f64>, tol: f64) -> Result<EigenExtremes> {
    let max = largest_eigenvalue(a, tol)?;
    let not_pd = || Error::Numeric("matrix is not positive definite; smallest eigenvalue is <= 0".into());
    a.clone().cholesky().ok_or_else(not_pd)?;
    let shift = 0.999 * gershgorin_lower(a).max(0.0);
    let chol = shifted(a, shift).cholesky().ok_or_else(not_pd)?;
    let min = iterate(a, tol, "inverse power iteration", |v| chol.solve(v))?;
    Ok(EigenExtremes { max, min })
}

pub(crate) fn largest_eigenvalue(a: &DMatrix<f64>, tol: f64) -> Result<f64> {
    let b = shifted(a, gershgorin_lower(a).max(0.0));
    iterate(a, tol, "power iteration", |v| &b * v)
}

fn gershgorin_lower(a: &DMatrix<f64>) -> f64 {
    (0..a.nrows())
        .map(|i| {
            let off: f64 = (0..a.ncols()).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
            a[(i, i)] - off
        })
        .fold(f64::INFINITY, f64::min)
}

fn shifted(a: &DMatrix<f64>, sigma: f64) -> DMatrix<f64> {
    let mut b = a.clone();
    for i in 0..b.nrows().min(b.ncols()) {
        b[(i, i)] -= sigma;
    }
    b
}

fn start_vector(d: usize) -> DVector<f64> {
    let v = DVector::from_fn(d, |i, _| 1.0 + 0.5 * ((i * 7919) % 101) as f64 / 101.0);
    let n = v.norm();
    v / n
}

/// Iterates `v ← step(v) / ‖step(v)‖` and returns the Rayleigh quotient of `a`
/// once its residual is below `tol` relative to the quotient.
fn iterate(
    a: &DMatrix<f64>,
    tol: f64,
    what: &str,
    step: impl Fn(&DVector<f64>) -> DVector<f64>,
) -> Result<f64> {
    let d = a.nrows();
    if d == 0 || a.ncols() != d {
        return Err(Error::arg("eigenvalue iteration needs a non-empty square matrix"));
    }
    let mut v = start_vector(d);
    let mut theta = 0.0;
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let av = a * &v;
        theta = v.dot(&av);
        residual = (&av - &v * theta).norm();
        if residual <= tol * theta.abs() {
            return Ok(theta);
        }
        let u = step(&v);
        let norm = u.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Numeric(format!("{what} broke down (iterate norm {norm})")));
        }
        v = u / norm;
    }
    Err(Error::Numeric(format!(
        "{what} did not converge in {MAX_ITERATIONS} iterations: Rayleigh quotient {theta:e}, residual {residual:e}, tolerance {tol:e}"
    )))
}
