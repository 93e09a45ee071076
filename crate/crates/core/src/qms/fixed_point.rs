use super::model::GKSLModel;
use super::state::DensityMatrix;
use crate::error::{Error, Result};
use crate::operators::{dot, inverse, matrix_unit, svd, unvec, vec, ComplexMatrix, Superoperator};
use crate::scalar::{Real, C};

/// Residuals of the identities a conditional expectation must satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectationChecks {
    /// ‖E∘E − E‖_F.
    pub idempotence: f64,
    /// ‖E(1) − 1‖_F.
    pub unit: f64,
    /// max over matrix units of |φ(E(x)) − φ(x)|.
    pub state: f64,
    /// max over matrix units of ‖E(x*) − E(x)*‖_F.
    pub star: f64,
}

/// Fixed-point space N = ker L and the φ-preserving projection E onto it.
#[derive(Debug, Clone)]
pub struct FixedPointStructure<T> {
    basis: Vec<ComplexMatrix<T>>,
    projector: Superoperator<T>,
    checks: ExpectationChecks,
}

impl<T: Real> FixedPointStructure<T> {
    /// Matrices spanning N.
    pub fn basis(&self) -> &[ComplexMatrix<T>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// dim N > 1.
    pub fn degenerate(&self) -> bool {
        self.basis.len() > 1
    }

    pub fn projector(&self) -> &Superoperator<T> {
        &self.projector
    }

    pub fn checks(&self) -> ExpectationChecks {
        self.checks
    }
}

/// GNS Gram superoperator x ↦ xρ, so that ⟨vec x, G vec y⟩ = tr(x* y ρ).
pub(crate) fn gns_gram<T: Real>(rho: &DensityMatrix<T>) -> Superoperator<T> {
    Superoperator::right(rho.matrix())
}

/// Kernel of the generator (relative singular value threshold 1e-8) and the
/// GNS-orthogonal projection onto it.
pub fn fixed_point_structure<T: Real>(model: &GKSLModel<T>, rho: &DensityMatrix<T>) -> Result<FixedPointStructure<T>> {
    rho.require_faithful()?;
    let d = model.dim();
    if rho.dim() != d {
        return Err(Error::DimensionMismatch("state and model dimensions differ".into()));
    }
    let l = model.generator();
    let kernel = svd(l.matrix())?.kernel_basis(T::rank_tol());
    if kernel.is_empty() {
        // L(1) = 0 always holds, so an empty kernel means the rank threshold misfired
        return Err(Error::StructureCheck { check: "unit in kernel", residual: 1.0 });
    }
    let g = gns_gram(rho);
    let gb: Vec<Vec<C<T>>> = kernel.iter().map(|b| g.apply_vec(b)).collect();
    let k = kernel.len();
    let gram = ComplexMatrix::from_fn(k, k, |i, j| dot(&kernel[i], &gb[j]));
    let gram_inv = inverse(&gram)?;
    // E = B (B* G B)^{-1} B* G
    let n = d * d;
    let b = ComplexMatrix::from_columns(n, &kernel);
    let bg = ComplexMatrix::from_columns(n, &gb).adjoint();
    let e = Superoperator::from_matrix(d, &(&b * &gram_inv) * &bg)?;

    let checks = expectation_checks(&e, rho);
    let scale = T::one().max(e.matrix().frobenius_norm()).f64();
    let tol = 1e-9 * scale;
    for (name, r) in [
        ("E∘E = E", checks.idempotence),
        ("E(1) = 1", checks.unit),
        ("φ∘E = φ", checks.state),
        ("E(x*) = E(x)*", checks.star),
    ] {
        if !(r <= tol) {
            return Err(Error::StructureCheck { check: name, residual: r });
        }
    }
    let basis = kernel.iter().map(|v| unvec(v)).collect::<Result<_>>()?;
    Ok(FixedPointStructure { basis, projector: e, checks })
}

fn expectation_checks<T: Real>(e: &Superoperator<T>, rho: &DensityMatrix<T>) -> ExpectationChecks {
    let d = e.dim();
    let idempotence = e.compose(e).dist(e).f64();
    let id = ComplexMatrix::<T>::identity(d);
    let unit = e.apply(&id).dist(&id).f64();
    let mut state = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let x = matrix_unit::<T>(d, i, j);
            state = state.max((rho.expectation(&e.apply(&x)) - rho.expectation(&x)).norm().f64());
        }
    }
    let star = e.star_defect().f64();
    ExpectationChecks { idempotence, unit, state, star }
}

/// ⟨x, 1⟩ in the GNS pairing equals φ(x*); exposed for callers assembling
/// their own projections.
pub fn gns_pairing_with_unit<T: Real>(rho: &DensityMatrix<T>, x: &ComplexMatrix<T>) -> C<T> {
    let one = vec(&ComplexMatrix::<T>::identity(rho.dim()));
    dot(&vec(x), &gns_gram(rho).apply_vec(&one))
}

/// φ(·)1 as a superoperator.
pub fn state_projection<T: Real>(rho: &DensityMatrix<T>) -> Superoperator<T> {
    let d = rho.dim();
    let one = vec(&ComplexMatrix::<T>::identity(d));
    // E(x) = tr(ρx)·1, i.e. |vec 1⟩⟨vec ρ*|
    let r = vec(&rho.matrix().adjoint());
    let n = d * d;
    let m = ComplexMatrix::from_fn(n, n, |i, j| one[i] * r[j].conj());
    Superoperator::from_matrix(d, m).expect("square by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qms::invariant_state;
    use crate::scalar::c;

    #[test]
    fn depolarizing_has_trivial_structure() {
        let m = GKSLModel::depolarizing_qubit(0.5);
        let rho = invariant_state(&m).unwrap();
        let fps = fixed_point_structure(&m, &rho).unwrap();
        assert_eq!(fps.dim(), 1);
        assert!(!fps.degenerate());
        assert!(fps.projector().dist(&state_projection(&rho)) < 1e-12);
    }

    #[test]
    fn zero_generator_gives_identity() {
        let m = GKSLModel::<f64>::trivial(2);
        let rho = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        let fps = fixed_point_structure(&m, &rho).unwrap();
        assert_eq!(fps.dim(), 4);
        assert!(fps.degenerate());
        assert!(fps.projector().dist(&Superoperator::identity(2)) < 1e-12);
    }

    /// Dimension of {x : [x, a] = [x, a*] = 0} from the kernel of the
    /// stacked commutator maps.
    fn commutant_dim(a: &ComplexMatrix<f64>) -> usize {
        let d = a.rows();
        let n = d * d;
        let ca = Superoperator::left(a).sub(&Superoperator::right(a));
        let ad = a.adjoint();
        let cad = Superoperator::left(&ad).sub(&Superoperator::right(&ad));
        let stacked = ComplexMatrix::from_fn(2 * n, n, |i, j| {
            if i < n {
                ca.matrix()[(i, j)]
            } else {
                cad.matrix()[(i - n, j)]
            }
        });
        n - svd(&stacked).unwrap().rank(1e-10)
    }

    #[test]
    fn block_model_fixed_points_are_the_commutant() {
        let sz = ComplexMatrix::from_real_diagonal(&[1.0, -1.0]);
        let v = sz.kron(&ComplexMatrix::identity(2));
        assert_eq!(commutant_dim(&v), 8);
        let m = GKSLModel::new(ComplexMatrix::zeros(4, 4), vec![v]).unwrap();
        let rho = DensityMatrix::diagonal(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        let fps = fixed_point_structure(&m, &rho).unwrap();
        assert_eq!(fps.dim(), 8);
        assert!(fps.degenerate());
        for b in fps.basis() {
            assert!(m.apply_generator(b).frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn pairing_with_unit_is_state() {
        let rho = DensityMatrix::diagonal(&[0.2, 0.8]).unwrap();
        let x = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 2.0), c(0.5, 0.0), c(-1.0, 1.0), c(3.0, -1.0)]).unwrap();
        let lhs = gns_pairing_with_unit(&rho, &x);
        let want = rho.expectation(&x.adjoint());
        assert!((lhs - want).norm() < 1e-15);
    }
}
