use rand::Rng;

use super::model::GKSLModel;
use super::random::random_matrix;
use super::state::DensityMatrix;
use crate::error::Result;
use crate::operators::{herm_eig_with_tol, ComplexMatrix, Superoperator};
use crate::scalar::Real;

/// Smallest eigenvalue of the Choi matrix; nonnegative iff the map is
/// completely positive.
pub fn choi_min_eigenvalue<T: Real>(map: &Superoperator<T>) -> Result<T> {
    let choi = map.choi();
    // Hermiticity-preserving maps have Hermitian Choi matrices; allow round-off
    let tol = T::lit(1e-8).max(T::default_tol());
    Ok(herm_eig_with_tol(&choi, tol)?.min_eigenvalue())
}

/// ‖S(1) − 1‖_F.
pub fn unitality_defect<T: Real>(map: &Superoperator<T>) -> T {
    let id = ComplexMatrix::identity(map.dim());
    map.apply(&id).dist(&id)
}

/// min over random x of φ(Φ_t(x*x)) − φ(Φ_t(x)*Φ_t(x)), with x normalized in
/// Frobenius norm. Zero trials return +∞.
pub fn kadison_schwarz_probe<T: Real, R: Rng + ?Sized>(
    model: &GKSLModel<T>,
    rho: &DensityMatrix<T>,
    t: T,
    trials: usize,
    rng: &mut R,
) -> Result<T> {
    let phi = model.semigroup(t)?;
    let d = model.dim();
    let mut worst = T::infinity();
    for _ in 0..trials {
        let x: ComplexMatrix<T> = random_matrix(d, rng);
        let x = x.scale_real(x.frobenius_norm().recip());
        worst = worst.min(kadison_schwarz_gap(&phi, rho, &x));
    }
    Ok(worst)
}

/// φ(Φ(x*x)) − φ(Φ(x)*Φ(x)) for a single x.
pub fn kadison_schwarz_gap<T: Real>(phi: &Superoperator<T>, rho: &DensityMatrix<T>, x: &ComplexMatrix<T>) -> T {
    let xx = &x.adjoint() * x;
    let px = phi.apply(x);
    let lhs = rho.expectation(&phi.apply(&xx)).re;
    let rhs = rho.expectation(&(&px.adjoint() * &px)).re;
    lhs - rhs
}
