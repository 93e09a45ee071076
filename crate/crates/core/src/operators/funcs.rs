//! Functional calculus for Hermitian matrices.

use super::eigen::{herm_eig_with_tol, HermitianEigen};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `U g(Λ) U*` for positive semidefinite `a`.
///
/// Eigenvalues within the PSD tolerance below zero are clamped to zero before
/// `g` is applied.
pub fn matrix_function<T: Real>(a: &ComplexMatrix<T>, g: impl Fn(T) -> T) -> Result<ComplexMatrix<T>> {
    matrix_function_with_tol(a, g, T::default_tol())
}

pub fn matrix_function_with_tol<T: Real>(
    a: &ComplexMatrix<T>,
    g: impl Fn(T) -> T,
    tol: T,
) -> Result<ComplexMatrix<T>> {
    let eig = psd_eig(a, tol)?;
    apply_to_spectrum(&eig, g)
}

/// Eigendecomposition of a PSD matrix with clamped spectrum.
pub fn psd_eig<T: Real>(a: &ComplexMatrix<T>, tol: T) -> Result<HermitianEigen<T>> {
    let mut eig = herm_eig_with_tol(a, tol)?;
    let floor = -tol * T::one().max(a.frobenius_norm());
    if eig.min_eigenvalue() < floor {
        return Err(Error::NotPsd { min_eigenvalue: eig.min_eigenvalue().f64() });
    }
    for l in eig.eigenvalues.iter_mut() {
        *l = l.max(T::zero());
    }
    Ok(eig)
}

pub fn apply_to_spectrum<T: Real>(eig: &HermitianEigen<T>, g: impl Fn(T) -> T) -> Result<ComplexMatrix<T>> {
    for &l in &eig.eigenvalues {
        if !g(l).is_finite() {
            return Err(Error::DomainError { at: l.f64() });
        }
    }
    Ok(eig.reconstruct_with(g))
}

/// Function of a Hermitian (not necessarily PSD) matrix.
pub fn hermitian_function<T: Real>(a: &ComplexMatrix<T>, g: impl Fn(T) -> T) -> Result<ComplexMatrix<T>> {
    let eig = herm_eig_with_tol(a, T::default_tol())?;
    apply_to_spectrum(&eig, g)
}
