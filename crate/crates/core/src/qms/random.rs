//! Random ensembles for models, states and test matrices.

use rand::Rng;
use rand_distr::StandardNormal;

use super::model::GKSLModel;
use super::state::{invariant_state, normalize_trace, DensityMatrix};
use crate::error::{Error, Result};
use crate::operators::{dot, herm_eig, ComplexMatrix};
use crate::scalar::{c, Real, C};

/// Draws per model before giving up.
pub const MAX_MODEL_ATTEMPTS: usize = 20;
/// Smallest invariant-state eigenvalue accepted for random models.
pub const MODEL_MIN_EIGENVALUE: f64 = 1e-4;

/// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
pub fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    c(T::lit(a * s), T::lit(b * s))
}

/// d×d matrix of independent standard complex Gaussians.
pub fn random_matrix<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix<T> {
    random_rect(d, d, rng)
}

fn random_rect<T: Real, R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> ComplexMatrix<T> {
    let data = (0..m * n).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::from_vec(m, n, data).expect("length matches")
}

/// (G + G*)/(2√d).
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix<T> {
    let g = random_matrix::<T, _>(d, rng);
    (&g + &g.adjoint()).scale_real(T::one() / (T::lit(2.0) * T::lit(d as f64).sqrt()))
}

/// Haar-distributed unitary from Gram–Schmidt on a Gaussian matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix<T> {
    let g = random_matrix::<T, _>(d, rng);
    let mut cols: Vec<Vec<C<T>>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut v = g.col(j);
        // two passes keep the columns orthogonal to working precision
        for _ in 0..2 {
            for q in &cols {
                let p = dot(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi = *vi - *qi * p;
                }
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    ComplexMatrix::from_columns(d, &cols)
}

/// Random positive semidefinite G G*/d with G of size d×rank.
pub fn random_psd<T: Real, R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> ComplexMatrix<T> {
    let g = random_rect::<T, _>(d, rank, rng);
    (&g * &g.adjoint()).scale_real(T::one() / T::lit(d as f64)).hermitian_part()
}

/// Wishart state with λ_min > `min_eigenvalue`; after 50 draws the last one is
/// mixed with I/d just enough to meet the bound.
pub fn random_density_matrix<T: Real, R: Rng + ?Sized>(
    d: usize,
    min_eigenvalue: T,
    rng: &mut R,
) -> Result<DensityMatrix<T>> {
    let mut last = None;
    for _ in 0..50 {
        let w = normalize_trace(&random_psd::<T, _>(d, 2 * d, rng));
        let lmin = herm_eig(&w)?.min_eigenvalue();
        if lmin > min_eigenvalue {
            return DensityMatrix::new(w);
        }
        last = Some((w, lmin));
    }
    let (w, lmin) = last.expect("at least one draw");
    let target = T::lit(2.0) * min_eigenvalue;
    let uniform = T::one() / T::lit(d as f64);
    let s = ((target - lmin) / (uniform - lmin)).min(T::one());
    let mixed = &w.scale_real(T::one() - s) + &ComplexMatrix::identity(d).scale_real(s * uniform);
    DensityMatrix::new(mixed)
}

/// An accepted random model with its invariant state.
#[derive(Debug, Clone)]
pub struct RandomModel<T> {
    pub model: GKSLModel<T>,
    pub state: DensityMatrix<T>,
    /// Draws discarded before this one was accepted.
    pub rejected: usize,
}

/// H = (G + G*)/(2√d) and 2–3 jumps with entries drawn as G/√d, redrawn until
/// the invariant state is unique with λ_min > 1e-4.
///
/// A single jump V always has zero GNS gap (x = V − φ(V) commutes with V and
/// so does not dissipate), which is why at least two are drawn.
pub fn random_model<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<RandomModel<T>> {
    let mut last_err = None;
    for attempt in 0..MAX_MODEL_ATTEMPTS {
        let h = random_hermitian(d, rng);
        let n_jumps = rng.random_range(2..=3);
        let scale = T::one() / T::lit(d as f64).sqrt();
        let jumps = (0..n_jumps).map(|_| random_matrix(d, rng).scale_real(scale)).collect();
        let model = GKSLModel::new(h, jumps)?;
        match invariant_state(&model) {
            Ok(state) if state.min_eigenvalue() > T::lit(MODEL_MIN_EIGENVALUE) => {
                return Ok(RandomModel { model, state, rejected: attempt });
            }
            Ok(state) => {
                last_err = Some(Error::NoFaithfulInvariantState { min_eigenvalue: state.min_eigenvalue().f64() })
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = random_unitary::<f64, _>(5, &mut rng);
        assert!((&u.adjoint() * &u).dist(&ComplexMatrix::identity(5)) < 1e-13);
    }

    #[test]
    fn random_states_are_faithful() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in 2..=8 {
            let rho = random_density_matrix::<f64, _>(d, 1e-3, &mut rng).unwrap();
            assert!(rho.min_eigenvalue() > 1e-3);
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_models_have_well_conditioned_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in 2..=4 {
            let r = random_model::<f64, _>(d, &mut rng).unwrap();
            assert!(r.state.min_eigenvalue() > MODEL_MIN_EIGENVALUE);
            assert!(crate::qms::check_invariance(&r.model, &r.state) < 1e-9);
        }
    }

    #[test]
    fn same_seed_same_model() {
        let a = random_model::<f64, _>(3, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let b = random_model::<f64, _>(3, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(a.model, b.model);
    }
}
