//! Thin wrappers over `faer` for the dense Hermitian problems used here.

use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("eigendecomposition failed to converge")]
    EigenFailure,
    #[error("matrix is not numerically positive definite")]
    NotPositiveDefinite,
}

/// Eigenvalues in descending order.
pub fn hermitian_eigenvalues(a: &Mat<Complex64>) -> Result<Vec<f64>, LinalgError> {
    let ev = a.self_adjoint_eigenvalues(Side::Lower).map_err(|_| LinalgError::EigenFailure)?;
    Ok(ev.into_iter().rev().collect())
}

pub fn symmetric_eigenvalues(a: &Mat<f64>) -> Result<Vec<f64>, LinalgError> {
    let ev = a.self_adjoint_eigenvalues(Side::Lower).map_err(|_| LinalgError::EigenFailure)?;
    Ok(ev.into_iter().rev().collect())
}

/// Eigenpairs in descending eigenvalue order; column `j` of the returned
/// matrix is the unit eigenvector for value `j`.
pub fn hermitian_eigen(a: &Mat<Complex64>) -> Result<(Vec<f64>, Mat<Complex64>), LinalgError> {
    let eig = a.self_adjoint_eigen(Side::Lower).map_err(|_| LinalgError::EigenFailure)?;
    let n = a.nrows();
    let s = eig.S().column_vector();
    let u = eig.U();
    let values = (0..n).rev().map(|j| s[j].re).collect();
    let vectors = Mat::from_fn(n, n, |i, j| u[(i, n - 1 - j)]);
    Ok((values, vectors))
}

/// Real symmetric eigenpairs, returned with complex vectors for a uniform
/// downstream path.
pub fn symmetric_eigen(a: &Mat<f64>) -> Result<(Vec<f64>, Mat<Complex64>), LinalgError> {
    let eig = a.self_adjoint_eigen(Side::Lower).map_err(|_| LinalgError::EigenFailure)?;
    let n = a.nrows();
    let s = eig.S().column_vector();
    let u = eig.U();
    let values = (0..n).rev().map(|j| s[j]).collect();
    let vectors = Mat::from_fn(n, n, |i, j| Complex64::new(u[(i, n - 1 - j)], 0.0));
    Ok((values, vectors))
}

/// Solves `a x = b` for Hermitian positive definite `a` by Cholesky.
pub fn cholesky_solve(a: &Mat<Complex64>, b: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
    let llt = a.llt(Side::Lower).map_err(|_| LinalgError::NotPositiveDefinite)?;
    let rhs = Mat::from_fn(b.len(), 1, |i, _| b[i]);
    let x = llt.solve(&rhs);
    Ok((0..b.len()).map(|i| x[(i, 0)]).collect())
}

/// `a · x`.
pub fn matvec(a: &Mat<Complex64>, x: &[Complex64]) -> Vec<Complex64> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)] * x[j]).sum())
        .collect()
}

pub fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}
