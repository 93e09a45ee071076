use num_traits::Zero;

use super::model::GKSLModel;
use crate::error::{Error, Result};
use crate::operators::{herm_eig, svd, unvec, vec, ComplexMatrix, HermitianEigen};
use crate::scalar::{re, Real, C};

/// Eigenvalue above which a state counts as faithful.
pub const FAITHFUL_THRESHOLD: f64 = 1e-8;

/// A state φ(x) = tr(ρx).
#[derive(Debug, Clone)]
pub struct DensityMatrix<T> {
    rho: ComplexMatrix<T>,
    eigen: HermitianEigen<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates trace one, Hermiticity and positivity; the input is symmetrized.
    pub fn new(rho: ComplexMatrix<T>) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::DimensionMismatch("density matrix must be square".into()));
        }
        let tol = T::default_tol();
        let tr = rho.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace is {} + {}i, expected 1", tr.re, tr.im)));
        }
        let eigen = herm_eig(&rho)?;
        if eigen.min_eigenvalue() < -tol {
            return Err(Error::NotPsd { min_eigenvalue: eigen.min_eigenvalue().f64() });
        }
        Ok(Self { rho: rho.hermitian_part(), eigen })
    }

    /// I/d.
    pub fn maximally_mixed(d: usize) -> Self {
        Self::diagonal(&vec![T::one() / T::lit(d as f64); d]).expect("valid state")
    }

    pub fn diagonal(p: &[T]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(p))
    }

    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.rho
    }

    /// Eigendecomposition with ascending eigenvalues.
    pub fn eigen(&self) -> &HermitianEigen<T> {
        &self.eigen
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigen.min_eigenvalue()
    }

    pub fn is_faithful(&self) -> bool {
        self.min_eigenvalue() > T::lit(FAITHFUL_THRESHOLD)
    }

    pub fn require_faithful(&self) -> Result<()> {
        if self.is_faithful() {
            Ok(())
        } else {
            Err(Error::NotFaithful { min_eigenvalue: self.min_eigenvalue().f64() })
        }
    }

    /// φ(x) = tr(ρx).
    pub fn expectation(&self, x: &ComplexMatrix<T>) -> C<T> {
        let d = self.dim();
        let mut s = C::zero();
        for i in 0..d {
            for k in 0..d {
                s = s + self.rho[(i, k)] * x[(k, i)];
            }
        }
        s
    }

    /// ρ^s for real s (ρ faithful when s < 0).
    pub fn power(&self, s: T) -> Result<ComplexMatrix<T>> {
        if s < T::zero() {
            self.require_faithful()?;
        }
        Ok(self.eigen.reconstruct_with(|l| if l > T::zero() { l.powf(s) } else { T::zero() }))
    }
}

/// Unique trace-one solution of L_*(ρ) = 0, where L_* is the Hilbert–Schmidt
/// adjoint of the generator matrix.
pub fn invariant_state<T: Real>(model: &GKSLModel<T>) -> Result<DensityMatrix<T>> {
    let dual = model.generator().hs_adjoint();
    let s = svd(dual.matrix())?;
    let kernel = s.kernel_basis(T::rank_tol());
    if kernel.len() != 1 {
        return Err(Error::NonUniqueInvariantState { kernel_dim: kernel.len() });
    }
    let x = unvec(&kernel[0])?;
    let tr = x.trace();
    if tr.norm() <= T::epsilon() {
        return Err(Error::InvalidState("kernel vector of the dual generator is traceless".into()));
    }
    let rho = x.scale(tr.inv()).hermitian_part();
    let state = DensityMatrix::new(rho)?;
    if !state.is_faithful() {
        return Err(Error::NoFaithfulInvariantState { min_eigenvalue: state.min_eigenvalue().f64() });
    }
    Ok(state)
}

/// ‖L_*(ρ)‖_F.
pub fn check_invariance<T: Real>(model: &GKSLModel<T>, rho: &DensityMatrix<T>) -> T {
    let dual = model.generator().hs_adjoint();
    let r = dual.apply_vec(&vec(rho.matrix()));
    r.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Rescales a nonzero Hermitian PSD matrix to unit trace.
pub(crate) fn normalize_trace<T: Real>(a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a.scale(re(T::one() / a.trace().re))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depolarizing_fixed_state() {
        let m = GKSLModel::depolarizing_qubit(0.7);
        let rho = invariant_state(&m).unwrap();
        assert!(rho.matrix().dist(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-12);
        assert!(check_invariance(&m, &DensityMatrix::maximally_mixed(2)) < 1e-12);
    }

    #[test]
    fn thermal_state_from_rate_equation() {
        // stationary populations solve γ₊p_g = γ₋p_e
        let (gp, gm) = (0.3, 0.9);
        let m = GKSLModel::thermal_qubit(gp, gm, 1.3);
        let rho = invariant_state(&m).unwrap();
        let want = ComplexMatrix::from_real_diagonal(&[gp / (gp + gm), gm / (gp + gm)]);
        assert!(rho.matrix().dist(&want) < 1e-12);
        assert!(check_invariance(&m, &rho) < 1e-12);
        assert!(check_invariance(&m, &DensityMatrix::maximally_mixed(2)) > 0.1);
    }

    #[test]
    fn amplitude_damping_is_not_faithful() {
        let m = GKSLModel::thermal_qubit(0.0, 1.0, 0.5);
        assert!(matches!(invariant_state(&m), Err(Error::NoFaithfulInvariantState { .. })));
    }

    #[test]
    fn trivial_model_is_not_unique() {
        let m = GKSLModel::<f64>::trivial(2);
        assert_eq!(invariant_state(&m).unwrap_err(), Error::NonUniqueInvariantState { kernel_dim: 4 });
    }

    #[test]
    fn state_validation() {
        assert!(DensityMatrix::diagonal(&[0.5, 0.6]).is_err());
        assert!(matches!(DensityMatrix::diagonal(&[1.5, -0.5]), Err(Error::NotPsd { .. })));
        let pure = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        assert!(!pure.is_faithful());
        assert!(pure.power(-0.5).is_err());
    }

    #[test]
    fn expectation_is_trace_pairing() {
        let rho = DensityMatrix::diagonal(&[0.25f64, 0.75]).unwrap();
        let x = ComplexMatrix::from_real_diagonal(&[2.0, 4.0]);
        assert!((rho.expectation(&x).re - 3.5).abs() < 1e-15);
    }
}
