//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.
//!
//! One-sided Jacobi resolves small singular values to high relative accuracy,
//! which the kernel computations with a 1e-8 relative rank threshold rely on.

use num_traits::Zero;

use super::matrix::{dot, norm, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

const MAX_SWEEPS: usize = 80;

/// `a = U diag(σ) V*`, singular values descending.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub singular_values: Vec<T>,
    /// m×n; columns belonging to zero singular values are zero.
    pub u: ComplexMatrix<T>,
    /// n×n unitary.
    pub v: ComplexMatrix<T>,
}

impl<T: Real> Svd<T> {
    pub fn max_singular_value(&self) -> T {
        self.singular_values.first().copied().unwrap_or_else(T::zero)
    }

    /// Number of singular values strictly above `rel_tol · σ_max`.
    pub fn rank(&self, rel_tol: T) -> usize {
        let cut = rel_tol * self.max_singular_value();
        self.singular_values.iter().filter(|&&s| s > cut).count()
    }

    /// Right singular vectors spanning the numerical kernel.
    pub fn kernel_basis(&self, rel_tol: T) -> Vec<Vec<C<T>>> {
        let r = self.rank(rel_tol);
        (r..self.v.cols()).map(|j| self.v.col(j)).collect()
    }

    /// Left singular vectors spanning the numerical range.
    pub fn range_basis(&self, rel_tol: T) -> Vec<Vec<C<T>>> {
        (0..self.rank(rel_tol)).map(|j| self.u.col(j)).collect()
    }
}

pub fn svd<T: Real>(a: &ComplexMatrix<T>) -> Result<Svd<T>> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        // pad with zero rows; the extra rows of U are discarded
        let padded = ComplexMatrix::from_fn(n, n, |i, j| if i < m { a[(i, j)] } else { C::zero() });
        let full = svd(&padded)?;
        let u = ComplexMatrix::from_fn(m, n, |i, j| full.u[(i, j)]);
        return Ok(Svd { singular_values: full.singular_values, u, v: full.v });
    }

    let mut cols: Vec<Vec<C<T>>> = (0..n).map(|j| a.col(j)).collect();
    let mut v = ComplexMatrix::<T>::identity(n);
    let eps = T::epsilon();
    let negligible = {
        let f = a.frobenius_norm() * eps;
        f * f
    };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = dot(&cols[p], &cols[p]).re;
                let beta = dot(&cols[q], &cols[q]).re;
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g.is_zero() || g <= eps * (alpha * beta).sqrt() || alpha.min(beta) <= negligible {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (g + g);
                let t = if zeta >= T::zero() {
                    T::one() / (zeta + (T::one() + zeta * zeta).sqrt())
                } else {
                    -T::one() / (-zeta + (T::one() + zeta * zeta).sqrt())
                };
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                let e = gamma / g;
                let j_pp = C::new(cs, T::zero());
                let j_pq = e * sn;
                let j_qp = -(e.conj() * sn);
                for k in 0..m {
                    let xp = cols[p][k];
                    let xq = cols[q][k];
                    cols[p][k] = xp * j_pp + xq * j_qp;
                    cols[q][k] = xp * j_pq + xq * j_pp;
                }
                for k in 0..n {
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = vp * j_pp + vq * j_qp;
                    v[(k, q)] = vp * j_pq + vq * j_pp;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure("one-sided Jacobi SVD"));
    }

    let sigma: Vec<T> = cols.iter().map(|c| norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).expect("finite singular values"));
    let smax = order.first().map(|&i| sigma[i]).unwrap_or_else(T::zero);
    let mut u = ComplexMatrix::zeros(m, n);
    for (jj, &j) in order.iter().enumerate() {
        let s = sigma[j];
        if s > smax * eps * T::lit(n.max(1) as f64) && !s.is_zero() {
            let col: Vec<C<T>> = cols[j].iter().map(|&z| z / s).collect();
            u.set_col(jj, &col);
        }
    }
    Ok(Svd { singular_values: order.iter().map(|&i| sigma[i]).collect(), u, v: v.sub_matrix_cols(&order) })
}

/// Spectral norm (largest singular value).
pub fn spectral_norm<T: Real>(a: &ComplexMatrix<T>) -> Result<T> {
    Ok(svd(a)?.max_singular_value())
}
