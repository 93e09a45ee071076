use crate::error::{Error, Result};
use crate::operators::{dot, herm_eig, ComplexMatrix, HermitianEigen, Lu};
use crate::scalar::{Real, C};

/// Q_A(ξ) = ⟨ξ, Aξ⟩ for a PSD matrix A.
#[derive(Debug, Clone)]
pub struct QuadraticForm<T> {
    a: ComplexMatrix<T>,
    eig: HermitianEigen<T>,
}

impl<T: Real> QuadraticForm<T> {
    /// Accepts A with λ_min ≥ −1e-10·max(1, ‖A‖_F); the spectrum is clamped at 0.
    pub fn new(a: ComplexMatrix<T>) -> Result<Self> {
        let mut eig = herm_eig(&a)?;
        let floor = -T::default_tol() * T::one().max(a.frobenius_norm());
        if eig.min_eigenvalue() < floor {
            return Err(Error::NotPsd { min_eigenvalue: eig.min_eigenvalue().f64() });
        }
        for l in eig.eigenvalues.iter_mut() {
            *l = l.max(T::zero());
        }
        Ok(Self { a: a.hermitian_part(), eig })
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn operator(&self) -> &ComplexMatrix<T> {
        &self.a
    }

    pub fn eval(&self, xi: &[C<T>]) -> T {
        dot(xi, &self.a.matvec(xi)).re
    }

    /// Q(η) + ‖ξ − η‖²/λ.
    pub fn moreau_objective(&self, lambda: T, xi: &[C<T>], eta: &[C<T>]) -> T {
        let diff: Vec<C<T>> = xi.iter().zip(eta).map(|(a, b)| *a - *b).collect();
        self.eval(eta) + dot(&diff, &diff).re / lambda
    }

    /// A(1 + λA)^{-1}.
    pub fn resolvent_operator(&self, lambda: T) -> ComplexMatrix<T> {
        self.eig.reconstruct_with(|a| a / (T::one() + lambda * a))
    }
}

/// The Moreau envelope inf_η (Q(η) + ‖ξ − η‖²/λ), evaluated as ⟨ξ, A(1+λA)^{-1}ξ⟩.
///
/// The closed form is cross-checked against the objective at the minimizer
/// η* = (1+λA)^{-1}ξ and must agree within 1e-10 relative.
pub fn moreau_form<T: Real>(q: &QuadraticForm<T>, lambda: T, xi: &[C<T>]) -> Result<T> {
    if !(lambda > T::zero()) {
        return Err(Error::NegativeArgument(lambda.f64()));
    }
    if xi.len() != q.dim() {
        return Err(Error::DimensionMismatch(format!("vector of length {} for a {}-dimensional form", xi.len(), q.dim())));
    }
    let closed = {
        let u = &q.eig.eigenvectors;
        let mut s = T::zero();
        for (k, &a) in q.eig.eigenvalues.iter().enumerate() {
            let c = dot(&u.col(k), xi).norm_sqr();
            s = s + a / (T::one() + lambda * a) * c;
        }
        s
    };
    let n = q.dim();
    let shifted = &ComplexMatrix::identity(n) + &q.a.scale_real(lambda);
    let eta = Lu::new(&shifted)?.solve_vec(xi);
    let infimum = q.moreau_objective(lambda, xi, &eta);
    let scale = T::one().max(closed.abs());
    if (closed - infimum).abs() > T::lit(1e-10).max(T::default_tol()) * scale {
        return Err(Error::MoreauMismatch { closed_form: closed.f64(), infimum: infimum.f64() });
    }
    Ok(closed)
}
