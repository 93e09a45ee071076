use crate::error::{Error, Result};
use crate::operators::{ComplexMatrix, Superoperator};
use crate::scalar::{c, Real};

/// Hamiltonian plus jump operators of a Lindblad generator on M_d(ℂ).
#[derive(Debug, Clone, PartialEq)]
pub struct GKSLModel<T> {
    dim: usize,
    hamiltonian: ComplexMatrix<T>,
    jumps: Vec<ComplexMatrix<T>>,
}

impl<T: Real> GKSLModel<T> {
    pub fn new(hamiltonian: ComplexMatrix<T>, jumps: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let dim = hamiltonian.rows();
        if !hamiltonian.is_square() || dim == 0 {
            return Err(Error::DimensionMismatch("hamiltonian must be a non-empty square matrix".into()));
        }
        for (k, v) in jumps.iter().enumerate() {
            if v.rows() != dim || v.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "jump {k} is {}x{}, expected {dim}x{dim}",
                    v.rows(),
                    v.cols()
                )));
            }
        }
        if !hamiltonian.is_finite() || jumps.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let tol = T::default_tol() * T::one().max(hamiltonian.frobenius_norm());
        let asym = hamiltonian.hermitian_defect();
        if asym > tol {
            return Err(Error::NotHermitian { asymmetry: asym.f64(), tol: tol.f64() });
        }
        Ok(Self { dim, hamiltonian, jumps })
    }

    /// H = 0 and no jumps.
    pub fn trivial(dim: usize) -> Self {
        Self { dim, hamiltonian: ComplexMatrix::zeros(dim, dim), jumps: Vec::new() }
    }

    /// Qubit with jumps √(γ/2)·σ_j, j ∈ {x, y, z}. Traceless observables decay at rate 2γ.
    pub fn depolarizing_qubit(gamma: T) -> Self {
        let s = (gamma / T::lit(2.0)).sqrt();
        let jumps = paulis().into_iter().map(|p| p.scale_real(s)).collect();
        Self { dim: 2, hamiltonian: ComplexMatrix::zeros(2, 2), jumps }
    }

    /// Qubit in the basis (excited, ground) with H = (ω/2)σ_z, decay √γ₋·σ₋
    /// and excitation √γ₊·σ₊.
    pub fn thermal_qubit(gamma_plus: T, gamma_minus: T, omega: T) -> Self {
        let h = ComplexMatrix::from_real_diagonal(&[omega / T::lit(2.0), -omega / T::lit(2.0)]);
        let (lower, raise) = ladder();
        let mut jumps = Vec::new();
        if gamma_minus > T::zero() {
            jumps.push(lower.scale_real(gamma_minus.sqrt()));
        }
        if gamma_plus > T::zero() {
            jumps.push(raise.scale_real(gamma_plus.sqrt()));
        }
        Self { dim: 2, hamiltonian: h, jumps }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix<T> {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[ComplexMatrix<T>] {
        &self.jumps
    }

    /// Heisenberg generator L(x) = i[H, x] + Σ_j (V_j* x V_j − ½{V_j* V_j, x}).
    pub fn generator(&self) -> Superoperator<T> {
        let d = self.dim;
        let i = c(T::zero(), T::one());
        let h = &self.hamiltonian;
        let mut l = Superoperator::left(h).sub(&Superoperator::right(h)).scale(i);
        let half = c(T::lit(0.5), T::zero());
        for v in &self.jumps {
            let vd = v.adjoint();
            let vv = &vd * v;
            let dissipator = Superoperator::sandwich(&vd, v)
                .sub(&Superoperator::left(&vv).add(&Superoperator::right(&vv)).scale(half));
            l = l.add(&dissipator);
        }
        debug_assert_eq!(l.dim(), d);
        l
    }

    /// L(x) evaluated from the formula, without forming the superoperator.
    pub fn apply_generator(&self, x: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let i = c(T::zero(), T::one());
        let mut out = self.hamiltonian.commutator(x).scale(i);
        for v in &self.jumps {
            let vd = v.adjoint();
            let vv = &vd * v;
            out = &out + &(&(&(&vd * x) * v) - &vv.anticommutator(x).scale_real(T::lit(0.5)));
        }
        out
    }

    /// Φ_t = e^{tL}.
    pub fn semigroup(&self, t: T) -> Result<Superoperator<T>> {
        if t < T::zero() || !t.is_finite() {
            return Err(Error::NegativeArgument(t.f64()));
        }
        if t.is_zero() {
            return Ok(Superoperator::identity(self.dim));
        }
        self.generator().exp(t)
    }

    /// The model with H ↦ UHU*, V ↦ UVU*.
    pub fn conjugate(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        if u.rows() != self.dim || u.cols() != self.dim {
            return Err(Error::DimensionMismatch("unitary has the wrong size".into()));
        }
        let ud = u.adjoint();
        let h = (&(u * &self.hamiltonian) * &ud).hermitian_part();
        let jumps = self.jumps.iter().map(|v| &(u * v) * &ud).collect();
        Self::new(h, jumps)
    }
}

/// σ_x, σ_y, σ_z.
pub fn paulis<T: Real>() -> [ComplexMatrix<T>; 3] {
    let (o, z) = (T::one(), T::zero());
    [
        ComplexMatrix::from_fn(2, 2, |i, j| if i != j { c(o, z) } else { c(z, z) }),
        ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c(z, -o),
            (1, 0) => c(z, o),
            _ => c(z, z),
        }),
        ComplexMatrix::from_real_diagonal(&[o, -o]),
    ]
}

/// (σ₋, σ₊) in the basis (excited, ground).
fn ladder<T: Real>() -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let mut lower = ComplexMatrix::zeros(2, 2);
    lower[(1, 0)] = c(T::one(), T::zero());
    (lower.clone(), lower.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{matrix_unit, superop_from_map};

    #[test]
    fn trivial_model_has_zero_generator() {
        let l = GKSLModel::<f64>::trivial(3).generator();
        assert_eq!(l.matrix().max_abs(), 0.0);
    }

    #[test]
    fn generator_matches_formula() {
        let m = GKSLModel::thermal_qubit(0.3, 0.9, 1.7);
        let direct = superop_from_map(2, |x| m.apply_generator(x)).unwrap();
        assert!(direct.dist(&m.generator()) < 1e-14);
    }

    #[test]
    fn depolarizing_action() {
        // Σ_j σ_j x σ_j = 2 tr(x) I − x gives L(x) = 2γ(tr(x)/2·I − x)
        let g = 0.35;
        let m = GKSLModel::depolarizing_qubit(g);
        let l = m.generator();
        for i in 0..2 {
            for j in 0..2 {
                let x = matrix_unit::<f64>(2, i, j);
                let tr = x.trace();
                let want = (&ComplexMatrix::identity(2).scale(tr * 0.5) - &x).scale_real(2.0 * g);
                assert!(l.apply(&x).dist(&want) < 1e-15);
            }
        }
        assert!(l.apply(&ComplexMatrix::identity(2)).max_abs() < 1e-15);
    }

    #[test]
    fn thermal_rate_equation() {
        // populations obey ṗ_e = γ₊p_g − γ₋p_e, so L(σ_z) = −(γ₊+γ₋)σ_z + (γ₊−γ₋)I
        let (gp, gm) = (0.4, 1.1);
        let m = GKSLModel::thermal_qubit(gp, gm, 0.0);
        let sz = &paulis::<f64>()[2];
        let want = &sz.scale_real(-(gp + gm)) + &ComplexMatrix::identity(2).scale_real(gp - gm);
        assert!(m.generator().apply(sz).dist(&want) < 1e-15);
    }

    #[test]
    fn semigroup_at_zero_is_identity() {
        let m = GKSLModel::depolarizing_qubit(1.0);
        assert_eq!(m.semigroup(0.0).unwrap(), Superoperator::identity(2));
        assert!(m.semigroup(-1.0).is_err());
    }

    #[test]
    fn depolarizing_closed_form_channel() {
        let g = 0.6f64;
        let t = 0.8;
        let phi = GKSLModel::depolarizing_qubit(g).semigroup(t).unwrap();
        let x = ComplexMatrix::from_vec(2, 2, vec![c(0.3, 0.0), c(1.0, -2.0), c(0.5, 0.1), c(-1.2, 0.4)]).unwrap();
        let half_tr = ComplexMatrix::identity(2).scale(x.trace() * 0.5);
        let want = &(&x - &half_tr).scale_real((-2.0 * g * t).exp()) + &half_tr;
        assert!(phi.apply(&x).dist(&want) < 1e-13);
    }

    #[test]
    fn non_hermitian_hamiltonian_rejected() {
        let h = matrix_unit::<f64>(2, 0, 1);
        assert!(matches!(GKSLModel::new(h, vec![]), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn jump_dimension_checked() {
        let h = ComplexMatrix::<f64>::zeros(2, 2);
        assert!(GKSLModel::new(h, vec![ComplexMatrix::zeros(3, 3)]).is_err());
    }
}
