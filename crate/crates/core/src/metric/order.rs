use crate::error::{Error, Result};
use crate::monotone::MonotoneFunction;
use crate::operators::{herm_eig, matrix_function, ComplexMatrix};
use crate::scalar::Real;

/// Margins (smallest eigenvalues of the differences) found by [`loewner_order_probe`].
#[derive(Debug, Clone, PartialEq)]
pub struct OrderReport {
    /// λ_min(B − A).
    pub order_margin: f64,
    /// (λ, λ_min(R_λ(B) − R_λ(A))) with R_λ(X) = X(1+λX)^{-1}.
    pub resolvent_margins: Vec<(f64, f64)>,
    /// (name, λ_min(f(B) − f(A))) for each built-in f.
    pub function_margins: Vec<(String, f64)>,
}

impl OrderReport {
    pub fn worst_margin(&self) -> f64 {
        self.resolvent_margins
            .iter()
            .map(|r| r.1)
            .chain(self.function_margins.iter().map(|r| r.1))
            .fold(self.order_margin, f64::min)
    }
}

/// Checks A ≤ B, then the resolvent order on `lambda_grid` and f(A) ≤ f(B) for
/// every built-in f. The floor is −1e-10·max(1, ‖·‖_F) of the matrices compared.
pub fn loewner_order_probe<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
    lambda_grid: &[T],
) -> Result<OrderReport> {
    let floor = |x: &ComplexMatrix<T>, y: &ComplexMatrix<T>| {
        -(T::default_tol() * T::one().max(x.frobenius_norm()).max(y.frobenius_norm())).f64()
    };
    let margin = |x: &ComplexMatrix<T>, y: &ComplexMatrix<T>| -> Result<f64> {
        Ok(herm_eig(&(y - x).hermitian_part())?.min_eigenvalue().f64())
    };
    let a_eig = herm_eig(a)?;
    let b_eig = herm_eig(b)?;
    for (name, e, m) in [("A", &a_eig, a), ("B", &b_eig, b)] {
        if e.min_eigenvalue().f64() < floor(m, m) {
            return Err(Error::OrderViolation { probe: format!("{name} >= 0"), min_eigenvalue: e.min_eigenvalue().f64() });
        }
    }
    let order_margin = margin(a, b)?;
    if order_margin < floor(a, b) {
        return Err(Error::OrderViolation { probe: "A <= B".into(), min_eigenvalue: order_margin });
    }

    let mut resolvent_margins = Vec::with_capacity(lambda_grid.len());
    for &l in lambda_grid {
        let r = |x: &ComplexMatrix<T>| matrix_function(x, |t| t / (T::one() + l * t));
        let (ra, rb) = (r(a)?, r(b)?);
        let m = margin(&ra, &rb)?;
        if m < floor(&ra, &rb) {
            return Err(Error::OrderViolation { probe: format!("resolvent at lambda = {}", l.f64()), min_eigenvalue: m });
        }
        resolvent_margins.push((l.f64(), m));
    }

    let mut function_margins = Vec::new();
    for f in MonotoneFunction::<T>::builtins() {
        let g = |t: T| f.eval(t).unwrap_or_else(|_| T::nan());
        let (fa, fb) = (matrix_function(a, g)?, matrix_function(b, g)?);
        let m = margin(&fa, &fb)?;
        if m < floor(&fa, &fb) {
            return Err(Error::OrderViolation { probe: f.name(), min_eigenvalue: m });
        }
        function_margins.push((f.name(), m));
    }
    Ok(OrderReport { order_margin, resolvent_margins, function_margins })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qms::random::random_psd;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const GRID: [f64; 4] = [0.01, 0.1, 1.0, 10.0];

    #[test]
    fn equal_matrices_have_zero_margins() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let a = random_psd::<f64, _>(3, 3, &mut rng);
        let r = loewner_order_probe(&a, &a, &GRID).unwrap();
        assert!(r.worst_margin().abs() < 1e-13);
    }

    #[test]
    fn scalar_case() {
        let a = ComplexMatrix::<f64>::identity(2);
        let b = a.scale_real(2.0);
        let r = loewner_order_probe(&a, &b, &GRID).unwrap();
        assert!((r.order_margin - 1.0).abs() < 1e-15);
        let kms = r.function_margins.iter().find(|m| m.0 == "kms").unwrap();
        assert!((kms.1 - (2f64.sqrt() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn perturbed_pairs_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..5 {
            let a = random_psd::<f64, _>(4, 4, &mut rng);
            let b = &a + &random_psd::<f64, _>(4, 2, &mut rng);
            assert!(loewner_order_probe(&a, &b, &GRID).unwrap().worst_margin() > -1e-10);
        }
    }

    #[test]
    fn reversed_pair_fails() {
        let a = ComplexMatrix::<f64>::identity(2);
        let b = a.scale_real(2.0);
        let err = loewner_order_probe(&b, &a, &GRID).unwrap_err();
        assert!(matches!(err, Error::OrderViolation { ref probe, .. } if probe == "A <= B"));
    }

    #[test]
    fn square_breaks_order_on_non_commuting_pair() {
        // A ≤ B but A² ≰ B² for this classic pair
        let a = ComplexMatrix::<f64>::from_vec(2, 2, vec![1.0, 1.0, 1.0, 1.0].into_iter().map(|x| crate::scalar::c(x, 0.0)).collect()).unwrap();
        let b = &a + &ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert!(loewner_order_probe(&a, &b, &GRID).is_ok());
        let a2 = &a * &a;
        let b2 = &b * &b;
        assert!(herm_eig(&(&b2 - &a2)).unwrap().min_eigenvalue() < -0.1);
    }
}
