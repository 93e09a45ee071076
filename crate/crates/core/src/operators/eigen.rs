//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use num_traits::Zero;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `a = U diag(λ) U*` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub eigenvalues: Vec<T>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// U g(Λ) U*.
    pub fn reconstruct_with(&self, g: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.dim();
        let u = &self.eigenvectors;
        let vals: Vec<T> = self.eigenvalues.iter().map(|&l| g(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).fold(C::zero(), |acc, k| acc + u[(i, k)] * u[(j, k)].conj() * vals[k])
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.reconstruct_with(|l| l)
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues.first().copied().unwrap_or_else(T::zero)
    }

    pub fn max_eigenvalue(&self) -> T {
        self.eigenvalues.last().copied().unwrap_or_else(T::zero)
    }
}

/// Eigendecomposition of a Hermitian matrix with the default tolerance.
pub fn herm_eig<T: Real>(a: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    herm_eig_with_tol(a, T::default_tol())
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Fails with [`Error::NotHermitian`] when `‖a − a*‖_F > tol·max(1, ‖a‖_F)`;
/// otherwise the input is symmetrized before the iteration.
pub fn herm_eig_with_tol<T: Real>(a: &ComplexMatrix<T>, tol: T) -> Result<HermitianEigen<T>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", a.rows(), a.cols())));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = a.hermitian_defect();
    let scale = T::one().max(a.frobenius_norm());
    if defect > tol * scale {
        return Err(Error::NotHermitian { asymmetry: defect.f64(), tol: (tol * scale).f64() });
    }
    jacobi(a.hermitian_part())
}

fn off_diagonal_sq<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

fn jacobi<T: Real>(mut a: ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    let n = a.rows();
    let mut v = ComplexMatrix::<T>::identity(n);
    let total = a.frobenius_norm();
    let eps = T::epsilon();
    let target = (eps * total) * (eps * total);

    let mut converged = n <= 1 || total.is_zero();
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        if off_diagonal_sq(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g <= eps * eps * total {
                    a[(p, q)] = C::zero();
                    a[(q, p)] = C::zero();
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (g + g);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                let e = apq / g;
                // J = [[c, s e], [-s ē, c]] on coordinates (p, q)
                let j_pp = C::new(cs, T::zero());
                let j_pq = e * sn;
                let j_qp = -(e.conj() * sn);
                let j_qq = j_pp;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * j_pp + akq * j_qp;
                    a[(k, q)] = akp * j_pq + akq * j_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
                    a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
                }
                a[(p, q)] = C::zero();
                a[(q, p)] = C::zero();
                a[(p, p)].im = T::zero();
                a[(q, q)].im = T::zero();
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * j_pp + vkq * j_qp;
                    v[(k, q)] = vkp * j_pq + vkq * j_qq;
                }
            }
        }
    }
    if !converged && off_diagonal_sq(&a) > target {
        return Err(Error::ConvergenceFailure("Hermitian Jacobi eigensolver"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite eigenvalues"));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = v.sub_matrix_cols(&order);
    Ok(HermitianEigen { eigenvalues, eigenvectors })
}
