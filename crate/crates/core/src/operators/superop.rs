//! Vectorization and linear maps on M_d(ℂ).
//!
//! Convention: column stacking, so `vec(x)[i + d·j] = x[i, j]` and
//! `vec(A x B) = (Bᵀ ⊗ A) vec(x)`.

use num_traits::One;

use super::expm::expm;
use super::matrix::{norm, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::{c, Real, C};

/// Column-stacking vectorization.
pub fn vec<T: Real>(x: &ComplexMatrix<T>) -> Vec<C<T>> {
    let mut out = Vec::with_capacity(x.rows() * x.cols());
    for j in 0..x.cols() {
        for i in 0..x.rows() {
            out.push(x[(i, j)]);
        }
    }
    out
}

/// Inverse of [`vec`] for square matrices.
pub fn unvec<T: Real>(v: &[C<T>]) -> Result<ComplexMatrix<T>> {
    let d = (v.len() as f64).sqrt().round() as usize;
    if d * d != v.len() {
        return Err(Error::DimensionMismatch(format!("length {} is not a perfect square", v.len())));
    }
    Ok(ComplexMatrix::from_fn(d, d, |i, j| v[i + d * j]))
}

/// Matrix unit E_ij.
pub fn matrix_unit<T: Real>(d: usize, i: usize, j: usize) -> ComplexMatrix<T> {
    let mut e = ComplexMatrix::zeros(d, d);
    e[(i, j)] = C::one();
    e
}

/// A linear map on M_d(ℂ) stored as its d²×d² matrix in the column-stacking basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator<T> {
    dim: usize,
    matrix: ComplexMatrix<T>,
}

impl<T: Real> Superoperator<T> {
    pub fn from_matrix(dim: usize, matrix: ComplexMatrix<T>) -> Result<Self> {
        if matrix.rows() != dim * dim || matrix.cols() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "superoperator on M_{dim} needs a {}x{} matrix, got {}x{}",
                dim * dim,
                dim * dim,
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { dim, matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, matrix: ComplexMatrix::identity(dim * dim) }
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, matrix: ComplexMatrix::zeros(dim * dim, dim * dim) }
    }

    /// x ↦ A x B.
    pub fn sandwich(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Self {
        Self { dim: a.rows(), matrix: b.transpose().kron(a) }
    }

    /// x ↦ A x.
    pub fn left(a: &ComplexMatrix<T>) -> Self {
        Self::sandwich(a, &ComplexMatrix::identity(a.rows()))
    }

    /// x ↦ x B.
    pub fn right(b: &ComplexMatrix<T>) -> Self {
        Self::sandwich(&ComplexMatrix::identity(b.rows()), b)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn apply(&self, x: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(x.rows(), self.dim, "superoperator argument dimension");
        unvec(&self.matrix.matvec(&vec(x))).expect("square by construction")
    }

    pub fn apply_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        self.matrix.matvec(v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { dim: self.dim, matrix: &self.matrix * &other.matrix }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { dim: self.dim, matrix: &self.matrix + &other.matrix }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { dim: self.dim, matrix: &self.matrix - &other.matrix }
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self { dim: self.dim, matrix: self.matrix.scale(s) }
    }

    /// Hilbert–Schmidt adjoint: conjugate transpose of the matrix.
    pub fn hs_adjoint(&self) -> Self {
        Self { dim: self.dim, matrix: self.matrix.adjoint() }
    }

    /// e^{t·self}.
    pub fn exp(&self, t: T) -> Result<Self> {
        Ok(Self { dim: self.dim, matrix: expm(&self.matrix.scale_real(t))? })
    }

    pub fn dist(&self, other: &Self) -> T {
        self.matrix.dist(&other.matrix)
    }

    /// Choi matrix Σ_ij E_ij ⊗ S(E_ij).
    pub fn choi(&self) -> ComplexMatrix<T> {
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                let img = self.apply(&matrix_unit(d, i, j));
                for a in 0..d {
                    for b in 0..d {
                        out[(i * d + a, j * d + b)] = img[(a, b)];
                    }
                }
            }
        }
        out
    }

    /// Largest ‖S(x*) − S(x)*‖_F over the matrix-unit basis.
    pub fn star_defect(&self) -> T {
        let d = self.dim;
        let mut worst = T::zero();
        for i in 0..d {
            for j in 0..d {
                let e = matrix_unit::<T>(d, i, j);
                let lhs = self.apply(&e.adjoint());
                let rhs = self.apply(&e).adjoint();
                worst = worst.max(lhs.dist(&rhs));
            }
        }
        worst
    }
}

/// Matrix of a linear map given by its action, with column
/// `k = vec(S(unvec(e_k)))`.
///
/// The action is probed for complex homogeneity on every basis element and for
/// additivity on a fixed combination; conjugate-linear maps such as `x ↦ x*`
/// fail with [`Error::NotLinear`].
pub fn superop_from_map<T: Real>(
    d: usize,
    action: impl Fn(&ComplexMatrix<T>) -> ComplexMatrix<T>,
) -> Result<Superoperator<T>> {
    let n = d * d;
    let mut m = ComplexMatrix::zeros(n, n);
    let i_unit = c(T::zero(), T::one());
    let mut defect = T::zero();
    let mut scale = T::zero();
    let mut combo = ComplexMatrix::<T>::zeros(d, d);
    let mut combo_image = ComplexMatrix::<T>::zeros(d, d);
    for k in 0..n {
        let (i, j) = (k % d, k / d);
        let e = matrix_unit::<T>(d, i, j);
        let img = action(&e);
        if img.rows() != d || img.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "map returned {}x{} for a {d}x{d} argument",
                img.rows(),
                img.cols()
            )));
        }
        let img_i = action(&e.scale(i_unit));
        defect = defect.max(img_i.dist(&img.scale(i_unit)));
        scale = scale.max(img.frobenius_norm());

        let w = c(T::one() + T::lit(k as f64 * 0.37), T::lit(0.5 - k as f64 * 0.11));
        combo = &combo + &e.scale(w);
        combo_image = &combo_image + &img.scale(w);
        m.set_col(k, &vec(&img));
    }
    defect = defect.max(action(&combo).dist(&combo_image));
    let tol = T::default_tol() * T::one().max(scale) * T::lit(n as f64);
    if defect > tol {
        return Err(Error::NotLinear { defect: defect.f64() });
    }
    Superoperator::from_matrix(d, m)
}

/// Euclidean norm of a superoperator image difference, used by tests and probes.
pub fn vec_residual<T: Real>(a: &[C<T>], b: &[C<T>]) -> T {
    let diff: Vec<C<T>> = a.iter().zip(b).map(|(x, y)| *x - *y).collect();
    norm(&diff)
}
