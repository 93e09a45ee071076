use num_traits::Zero;

use crate::error::{Error, Result};
use crate::monotone::MonotoneFunction;
use crate::operators::{vec, ComplexMatrix, Superoperator};
use crate::qms::DensityMatrix;
use crate::scalar::{re, Real, C};

/// cond(G_f) above which adjoints are reported as ill-conditioned.
pub const CONDITION_WARNING: f64 = 1e12;

/// The inner product ⟨x, y⟩_f = Σ_ij w_ij conj(x̂_ij) ŷ_ij, where x̂ = U*xU is x
/// in the eigenbasis of ρ and w_ij = p_j f(p_i/p_j).
#[derive(Debug, Clone)]
pub struct FMetric<T> {
    state: DensityMatrix<T>,
    f: MonotoneFunction<T>,
    /// Eigenvalues of ρ, descending.
    p: Vec<T>,
    /// Eigenvectors matching `p`.
    u: ComplexMatrix<T>,
    /// w[i + d·j] = w_ij, the diagonal of the Gram matrix in matrix-unit coordinates.
    w: Vec<T>,
}

impl<T: Real> FMetric<T> {
    pub fn new(state: &DensityMatrix<T>, f: MonotoneFunction<T>) -> Result<Self> {
        state.require_faithful()?;
        f.ensure_normalized()?;
        let d = state.dim();
        let eig = state.eigen();
        let order: Vec<usize> = (0..d).rev().collect();
        let p: Vec<T> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let u = eig.eigenvectors.sub_matrix_cols(&order);
        let mut w = vec![T::zero(); d * d];
        for j in 0..d {
            for i in 0..d {
                let wij = f.mean(p[i], p[j])?;
                if !(wij > T::zero()) || !wij.is_finite() {
                    return Err(Error::InvalidState(format!("weight w_{i}{j} = {} is not positive", wij.f64())));
                }
                w[i + d * j] = wij;
            }
        }
        Ok(Self { state: state.clone(), f, p, u, w })
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn state(&self) -> &DensityMatrix<T> {
        &self.state
    }

    pub fn function(&self) -> &MonotoneFunction<T> {
        &self.f
    }

    /// Eigenvalues of ρ in descending order.
    pub fn eigenvalues(&self) -> &[T] {
        &self.p
    }

    /// Eigenbasis of ρ (columns ordered like [`Self::eigenvalues`]).
    pub fn eigenbasis(&self) -> &ComplexMatrix<T> {
        &self.u
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> T {
        self.w[i + self.dim() * j]
    }

    /// Weights as a d×d real matrix.
    pub fn weights(&self) -> Vec<Vec<T>> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.weight(i, j)).collect()).collect()
    }

    /// U*xU.
    pub fn to_eigenbasis(&self, x: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        &(&self.u.adjoint() * x) * &self.u
    }

    /// UxU*.
    pub fn from_eigenbasis(&self, x: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        &(&self.u * x) * &self.u.adjoint()
    }

    pub fn f_inner(&self, x: &ComplexMatrix<T>, y: &ComplexMatrix<T>) -> C<T> {
        let d = self.dim();
        let (xh, yh) = (self.to_eigenbasis(x), self.to_eigenbasis(y));
        let mut s = C::zero();
        for j in 0..d {
            for i in 0..d {
                s = s + xh[(i, j)].conj() * yh[(i, j)] * self.weight(i, j);
            }
        }
        s
    }

    pub fn f_norm(&self, x: &ComplexMatrix<T>) -> T {
        self.f_inner(x, x).re.max(T::zero()).sqrt()
    }

    /// K = Uᵀ ⊗ U*, the unitary with K vec(x) = vec(U*xU).
    pub fn basis_change(&self) -> ComplexMatrix<T> {
        self.u.transpose().kron(&self.u.adjoint())
    }

    /// G_f = K* W K with ⟨vec x, G_f vec y⟩ = ⟨x, y⟩_f.
    pub fn gram(&self) -> Superoperator<T> {
        self.scaled_basis_change(|w| w).0
    }

    /// W^{1/2} K: maps vec(x) to coordinates in which ⟨·,·⟩_f is Euclidean.
    pub fn whitening(&self) -> ComplexMatrix<T> {
        let k = self.basis_change();
        scale_rows(&k, &self.w.iter().map(|w| w.sqrt()).collect::<Vec<_>>())
    }

    /// K* W^{-1/2}, the inverse of [`Self::whitening`].
    pub fn unwhitening(&self) -> ComplexMatrix<T> {
        let k = self.basis_change();
        scale_rows(&k, &self.w.iter().map(|w| w.sqrt().recip()).collect::<Vec<_>>()).adjoint()
    }

    /// max w / min w.
    pub fn condition_number(&self) -> T {
        let max = self.w.iter().copied().fold(T::zero(), T::max);
        let min = self.w.iter().copied().fold(T::infinity(), T::min);
        max / min
    }

    /// G_f^{-1} S* G_f, the adjoint of `s` for ⟨·,·⟩_f.
    pub fn f_adjoint(&self, s: &Superoperator<T>) -> Superoperator<T> {
        if self.condition_number().f64() > CONDITION_WARNING {
            log::warn!("f-Gram condition number {:.3e} exceeds {:.0e}", self.condition_number().f64(), CONDITION_WARNING);
        }
        let (g, _) = self.scaled_basis_change(|w| w);
        let (g_inv, _) = self.scaled_basis_change(|w| w.recip());
        g_inv.compose(&s.hs_adjoint()).compose(&g)
    }

    /// Operator norm of `s` on (M, ‖·‖_f): σ_max(W^{1/2} K S K* W^{-1/2}).
    pub fn operator_norm(&self, s: &Superoperator<T>) -> Result<T> {
        let m = &(&self.whitening() * s.matrix()) * &self.unwhitening();
        crate::operators::spectral_norm(&m)
    }

    /// ⟨x, 1⟩_f, which equals φ(x*) for every f.
    pub fn unit_pairing(&self, x: &ComplexMatrix<T>) -> C<T> {
        self.f_inner(x, &ComplexMatrix::identity(self.dim()))
    }

    /// K* diag(g(w)) K.
    fn scaled_basis_change(&self, g: impl Fn(T) -> T) -> (Superoperator<T>, ComplexMatrix<T>) {
        let k = self.basis_change();
        let scaled = scale_rows(&k, &self.w.iter().map(|&w| g(w)).collect::<Vec<_>>());
        let m = &k.adjoint() * &scaled;
        (Superoperator::from_matrix(self.dim(), m).expect("square"), k)
    }
}

fn scale_rows<T: Real>(m: &ComplexMatrix<T>, s: &[T]) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)] * re(s[i]))
}

/// ⟨vec x, G vec y⟩.
pub fn gram_form<T: Real>(g: &Superoperator<T>, x: &ComplexMatrix<T>, y: &ComplexMatrix<T>) -> C<T> {
    crate::operators::dot(&vec(x), &g.apply_vec(&vec(y)))
}
