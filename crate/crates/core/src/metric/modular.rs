use crate::error::Result;
use crate::operators::{ComplexMatrix, Superoperator};
use crate::qms::DensityMatrix;
use crate::scalar::{c, Real, C};

/// Δ(x) = ρxρ^{-1} as a superoperator.
pub fn modular_superop<T: Real>(rho: &DensityMatrix<T>) -> Result<Superoperator<T>> {
    let inv = rho.power(-T::one())?;
    Ok(Superoperator::sandwich(rho.matrix(), &inv))
}

/// σ_t(x) = ρ^{it} x ρ^{-it}.
pub fn modular_flow<T: Real>(rho: &DensityMatrix<T>, x: &ComplexMatrix<T>, t: T) -> Result<ComplexMatrix<T>> {
    rho.require_faithful()?;
    let u = imaginary_power(rho, t);
    Ok(&(&u * x) * &u.adjoint())
}

/// ρ^{it}.
fn imaginary_power<T: Real>(rho: &DensityMatrix<T>, t: T) -> ComplexMatrix<T> {
    let eig = rho.eigen();
    let d = eig.dim();
    let v = &eig.eigenvectors;
    let phases: Vec<C<T>> = eig.eigenvalues.iter().map(|&p| c(T::zero(), t * p.ln()).exp()).collect();
    ComplexMatrix::from_fn(d, d, |i, j| (0..d).map(|k| v[(i, k)] * phases[k] * v[(j, k)].conj()).fold(C::new(T::zero(), T::zero()), |a, b| a + b))
}
