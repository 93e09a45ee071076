use rayon::prelude::*;

use super::problem::{GapProblem, GapReport};
use crate::error::{Error, Result};
use crate::monotone::MonotoneFunction;
use crate::scalar::Real;

/// λ_α = λ_f for f = t^α on a grid of exponents, with structure defects.
#[derive(Debug, Clone)]
pub struct GapCurve {
    /// (α, λ_α) in the order requested.
    pub points: Vec<(f64, f64)>,
    /// max |λ_α − λ_{1−α}| over the grid.
    pub symmetry_defect: f64,
    /// Largest decrease of λ_α between consecutive grid points in [0, 1/2].
    pub monotonicity_defect: f64,
    /// 1e-7·max(1, λ_{1/2}).
    pub tolerance: f64,
}

impl GapCurve {
    pub fn symmetric(&self) -> bool {
        self.symmetry_defect <= self.tolerance
    }

    pub fn monotone(&self) -> bool {
        self.monotonicity_defect <= self.tolerance
    }
}

impl<T: Real> GapProblem<T> {
    pub fn power_gap(&self, alpha: f64) -> Result<GapReport<T>> {
        let m = self.metric(MonotoneFunction::power(T::lit(alpha))?)?;
        self.spectral_gap(&m)
    }

    /// Evaluates the curve in parallel; λ_{1−α} and λ_{1/2} are computed as
    /// needed for the defects. Infinite gaps (nothing decays) give zero defects.
    pub fn gap_curve(&self, alphas: &[f64]) -> Result<GapCurve> {
        for &a in alphas {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::InvalidPower(a));
            }
        }
        let mut needed: Vec<f64> = alphas.iter().flat_map(|&a| [a, 1.0 - a]).chain([0.5]).collect();
        needed.sort_by(f64::total_cmp);
        needed.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let values: Vec<f64> =
            needed.par_iter().map(|&a| self.power_gap(a).map(|r| r.lambda.to_f64())).collect::<Result<_>>()?;
        let lookup = |a: f64| -> f64 {
            let k = needed.iter().position(|&x| (x - a).abs() < 1e-12).expect("evaluated");
            values[k]
        };
        let points: Vec<(f64, f64)> = alphas.iter().map(|&a| (a, lookup(a))).collect();
        let finite = |v: f64| if v.is_finite() { v } else { 0.0 };
        let tolerance = 1e-7 * finite(lookup(0.5)).max(1.0);
        let symmetry_defect =
            alphas.iter().map(|&a| finite((lookup(a) - lookup(1.0 - a)).abs())).fold(0.0, f64::max);
        let mut left: Vec<f64> = alphas.iter().copied().filter(|&a| a <= 0.5 + 1e-12).collect();
        left.sort_by(f64::total_cmp);
        let monotonicity_defect = left
            .windows(2)
            .map(|w| finite((lookup(w[0]) - lookup(w[1])).max(0.0)))
            .fold(0.0, f64::max);
        Ok(GapCurve { points, symmetry_defect, monotonicity_defect, tolerance })
    }
}

/// Convenience wrapper building the problem from a model and state.
pub fn gap_curve<T: Real>(
    model: &crate::qms::GKSLModel<T>,
    rho: &crate::qms::DensityMatrix<T>,
    alphas: &[f64],
) -> Result<GapCurve> {
    GapProblem::new(model.clone(), rho.clone())?.gap_curve(alphas)
}
