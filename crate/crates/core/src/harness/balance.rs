use rand::Rng;

use crate::error::{Error, Result};
use crate::monotone::MonotoneFunction;
use crate::metric::FMetric;
use crate::operators::{matrix_unit, ComplexMatrix};
use crate::qms::{DensityMatrix, GKSLModel};

/// Transition rates for [`detailed_balance_model`].
#[derive(Debug, Clone, PartialEq)]
pub struct RateSpec {
    /// `rates[i][j]` is the rate of the jump |i⟩⟨j|, i.e. of j → i; the diagonal is ignored.
    pub rates: Vec<Vec<f64>>,
    /// Diagonal of H; zero when absent.
    pub energies: Option<Vec<f64>>,
}

/// Residual bound for GNS self-adjointness of the constructed generator.
pub const SELF_ADJOINT_TOL: f64 = 1e-9;

/// V_ij = √γ_ij |i⟩⟨j| with γ_ij p_j = γ_ji p_i and H diagonal, for ρ = diag(p).
///
/// The dissipative part is GNS self-adjoint, asserted through its GNS
/// adjoint; the Hamiltonian part commutes with the modular operator.
pub fn detailed_balance_model(rho: &DensityMatrix<f64>, spec: &RateSpec) -> Result<GKSLModel<f64>> {
    let d = rho.dim();
    let m = rho.matrix();
    let off_diag = (0..d).flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m[(i, j)].norm());
    if off_diag.fold(0.0, f64::max) > 1e-12 {
        return Err(Error::InvalidState("detailed-balance construction needs a diagonal state".into()));
    }
    rho.require_faithful()?;
    if spec.rates.len() != d || spec.rates.iter().any(|r| r.len() != d) {
        return Err(Error::DimensionMismatch(format!("rate table must be {d}x{d}")));
    }
    let p: Vec<f64> = (0..d).map(|i| m[(i, i)].re).collect();
    let mut jumps = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            let g = spec.rates[i][j];
            if !(g.is_finite() && g >= 0.0) {
                return Err(Error::Config(format!("rate ({i}, {j}) must be nonnegative, got {g}")));
            }
            if j > i {
                let flow = g * p[j];
                let back = spec.rates[j][i] * p[i];
                let defect = (flow - back).abs();
                if defect > 1e-10 * flow.abs().max(back.abs()).max(1.0) {
                    return Err(Error::RateMismatch { i, j, defect });
                }
            }
            if g > 0.0 {
                jumps.push(matrix_unit::<f64>(d, i, j).scale_real(g.sqrt()));
            }
        }
    }
    let h = match &spec.energies {
        Some(e) if e.len() != d => return Err(Error::DimensionMismatch(format!("{} energies for dimension {d}", e.len()))),
        Some(e) => ComplexMatrix::from_real_diagonal(e),
        None => ComplexMatrix::zeros(d, d),
    };
    // i[H,·] is GNS skew-adjoint for diagonal H, so only the dissipator is checked
    let dissipator = GKSLModel::new(ComplexMatrix::zeros(d, d), jumps.clone())?.generator();
    let adj = FMetric::new(rho, MonotoneFunction::gns())?.f_adjoint(&dissipator);
    let residual = dissipator.dist(&adj) / dissipator.matrix().frobenius_norm().max(1.0);
    if residual > SELF_ADJOINT_TOL {
        return Err(Error::StructureCheck { check: "gns self-adjointness", residual });
    }
    let model = GKSLModel::new(h, jumps)?;
    Ok(model)
}

/// Random diagonal ρ with spread-out eigenvalues, symmetric κ_ij and
/// γ_ij = κ_ij √(p_i/p_j), plus random energies.
pub fn random_balanced<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<(GKSLModel<f64>, DensityMatrix<f64>)> {
    let w: Vec<f64> = (0..d).map(|_| rng.random_range(0.2..2.0f64).powi(2)).collect();
    let total: f64 = w.iter().sum();
    let p: Vec<f64> = w.iter().map(|x| x / total).collect();
    let mut rates = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in i + 1..d {
            let k: f64 = rng.random_range(0.1..1.0);
            rates[i][j] = k * (p[i] / p[j]).sqrt();
            rates[j][i] = k * (p[j] / p[i]).sqrt();
        }
    }
    let energies = Some((0..d).map(|_| rng.random_range(-1.0..1.0)).collect());
    let rho = DensityMatrix::diagonal(&p)?;
    let model = detailed_balance_model(&rho, &RateSpec { rates, energies })?;
    Ok((model, rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::Superoperator;

    #[test]
    fn thermal_rates_balance_for_every_f() {
        let (gp, gm) = (0.3, 0.9);
        let rho = DensityMatrix::diagonal(&[gp / (gp + gm), gm / (gp + gm)]).unwrap();
        let spec = RateSpec { rates: vec![vec![0.0, gp], vec![gm, 0.0]], energies: Some(vec![0.5, -0.5]) };
        let model = detailed_balance_model(&rho, &spec).unwrap();
        let l = model.generator();
        let mut d = GKSLModel::new(ComplexMatrix::zeros(2, 2), model.jumps().to_vec()).unwrap().generator();
        for f in MonotoneFunction::builtins() {
            let m = FMetric::new(&rho, f).unwrap();
            assert!(m.f_adjoint(&d).dist(&d) < 1e-12);
            // L† = D − i[H,·] = 2D − L
            let expected = d.scale(crate::scalar::c(2.0, 0.0)).sub(&l);
            assert!(m.f_adjoint(&l).dist(&expected) < 1e-12);
        }
        d = d.sub(&l);
        assert!(d.dist(&Superoperator::zero(2)) > 0.1);
    }

    #[test]
    fn uniform_state_with_symmetric_rates() {
        let rho = DensityMatrix::maximally_mixed(3);
        let rates = vec![vec![0.0, 0.2, 0.5], vec![0.2, 0.0, 0.1], vec![0.5, 0.1, 0.0]];
        assert!(detailed_balance_model(&rho, &RateSpec { rates, energies: None }).is_ok());
    }

    #[test]
    fn broken_rates_are_rejected() {
        let rho = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
        let spec = RateSpec { rates: vec![vec![0.0, 0.4], vec![0.4, 0.0]], energies: None };
        assert!(matches!(detailed_balance_model(&rho, &spec), Err(Error::RateMismatch { i: 0, j: 1, .. })));
    }
}
