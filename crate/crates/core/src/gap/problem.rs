use std::fmt;

use crate::error::{Error, Result};
use crate::metric::FMetric;
use crate::operators::{herm_eig, svd, unvec, vec, ComplexMatrix, Superoperator};
use crate::qms::{fixed_point_structure, invariant_state, DensityMatrix, FixedPointStructure, GKSLModel};
use crate::scalar::{Real, C};

/// Relative singular value cut used when orthonormalizing the decaying subspace.
pub const DROP_TOLERANCE: f64 = 1e-10;

/// λ_f, or +∞ when nothing decays.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GapValue<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> GapValue<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Self::Finite(v) => Some(v),
            Self::Infinite => None,
        }
    }

    /// +∞ maps to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        self.finite().map_or(f64::INFINITY, |v| v.f64())
    }
}

impl<T: Real> fmt::Display for GapValue<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(v) => write!(f, "{:.16e}", v.f64()),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GapWarning {
    /// λ_f < −1e-8: the symmetrized generator is not dissipative.
    NegativeGap(f64),
    /// cond(G_f) above the reporting threshold.
    IllConditioned(f64),
    /// The decaying subspace is empty; λ_f = +∞.
    EmptySubspace,
}

/// Numerical diagnostics of one gap computation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GapResiduals {
    /// ‖BᴴG_f B − I‖_F for the f-orthonormal basis B.
    pub orthonormality: f64,
    /// max_k ‖E(b_k)‖_F.
    pub kernel: f64,
    /// max_k |⟨b_k, 1⟩_f|.
    pub unit_pairing: f64,
    /// ‖(I − P)L P‖ in f-orthonormal coordinates, P the projection onto the subspace.
    pub invariance: f64,
    /// Difference between the symmetrized restriction and the restriction of (L + L^†)/2.
    pub adjoint: f64,
}

impl GapResiduals {
    pub fn max(&self) -> f64 {
        [self.orthonormality, self.kernel, self.unit_pairing, self.invariance, self.adjoint]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct GapReport<T> {
    pub f_name: String,
    /// Exponent when f is a power (GNS 0, KMS 1/2, anti-GNS 1).
    pub alpha: Option<f64>,
    pub lambda: GapValue<T>,
    /// dim N.
    pub kernel_dim: usize,
    /// Eigenvalues of −(M + Mᴴ)/2 on the decaying subspace, ascending.
    pub spectrum: Vec<T>,
    pub residuals: GapResiduals,
    /// f-normalized eigenvector belonging to λ_f.
    pub slowest_mode: Option<ComplexMatrix<T>>,
    pub warnings: Vec<GapWarning>,
}

/// f-orthonormal basis of ker E, stored in whitened coordinates.
#[derive(Debug, Clone)]
pub struct DecayingSubspace<T> {
    /// Columns b_k with ⟨b_j, b_k⟩_f = δ_jk (as vec(x)).
    pub basis: Vec<Vec<C<T>>>,
    /// The same basis in coordinates where ⟨·,·⟩_f is Euclidean.
    pub whitened: Vec<Vec<C<T>>>,
}

impl<T: Real> DecayingSubspace<T> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn matrices(&self) -> Result<Vec<ComplexMatrix<T>>> {
        self.basis.iter().map(|b| unvec(b)).collect()
    }
}

/// A model with its invariant state, generator and fixed-point structure,
/// shared across gap computations for different f.
#[derive(Debug, Clone)]
pub struct GapProblem<T> {
    model: GKSLModel<T>,
    state: DensityMatrix<T>,
    generator: Superoperator<T>,
    fps: FixedPointStructure<T>,
    /// Euclidean-orthonormal basis of ker E.
    kernel_e: Vec<Vec<C<T>>>,
}

impl<T: Real> GapProblem<T> {
    /// Uses the unique invariant state of the model.
    pub fn from_model(model: GKSLModel<T>) -> Result<Self> {
        let state = invariant_state(&model)?;
        Self::new(model, state)
    }

    /// `state` must be faithful and invariant; degenerate fixed-point spaces are allowed.
    pub fn new(model: GKSLModel<T>, state: DensityMatrix<T>) -> Result<Self> {
        let residual = crate::qms::check_invariance(&model, &state);
        if residual.f64() > 1e-9 {
            return Err(Error::InvalidState(format!("state is not invariant (residual {:.3e})", residual.f64())));
        }
        let fps = fixed_point_structure(&model, &state)?;
        let generator = model.generator();
        let expected = model.dim() * model.dim() - fps.dim();
        let kernel_e = if expected == 0 { Vec::new() } else { svd(fps.projector().matrix())?.kernel_basis(T::rank_tol()) };
        if kernel_e.len() != expected {
            return Err(Error::RankDeficiency { found: kernel_e.len(), expected });
        }
        Ok(Self { model, state, generator, fps, kernel_e })
    }

    pub fn model(&self) -> &GKSLModel<T> {
        &self.model
    }

    pub fn state(&self) -> &DensityMatrix<T> {
        &self.state
    }

    pub fn generator(&self) -> &Superoperator<T> {
        &self.generator
    }

    pub fn fixed_points(&self) -> &FixedPointStructure<T> {
        &self.fps
    }

    pub fn metric(&self, f: crate::monotone::MonotoneFunction<T>) -> Result<FMetric<T>> {
        FMetric::new(&self.state, f)
    }

    /// f-orthonormal basis of ker E (= ker φ when N = ℂ1).
    pub fn decaying_subspace(&self, metric: &FMetric<T>) -> Result<DecayingSubspace<T>> {
        let n = self.model.dim() * self.model.dim();
        let expected = self.kernel_e.len();
        if expected == 0 {
            return Ok(DecayingSubspace { basis: Vec::new(), whitened: Vec::new() });
        }
        let z = metric.whitening();
        let y = ComplexMatrix::from_columns(n, &self.kernel_e.iter().map(|b| z.matvec(b)).collect::<Vec<_>>());
        let s = svd(&y)?;
        let found = s.rank(T::lit(DROP_TOLERANCE));
        if found < expected {
            return Err(Error::RankDeficiency { found, expected });
        }
        let unwhiten = metric.unwhitening();
        let whitened: Vec<Vec<C<T>>> = (0..expected).map(|k| s.u.col(k)).collect();
        let basis = whitened.iter().map(|q| unwhiten.matvec(q)).collect();
        Ok(DecayingSubspace { basis, whitened })
    }

    /// λ_f as the smallest eigenvalue of the symmetrized negative generator on
    /// the f-orthonormalized decaying subspace.
    pub fn spectral_gap(&self, metric: &FMetric<T>) -> Result<GapReport<T>> {
        let f = metric.function();
        let mut warnings = Vec::new();
        let cond = metric.condition_number().f64();
        if cond > crate::metric::CONDITION_WARNING {
            log::warn!("f-Gram condition number {cond:.3e} for {}", f.name());
            warnings.push(GapWarning::IllConditioned(cond));
        }
        let sub = self.decaying_subspace(metric)?;
        let base = GapReport {
            f_name: f.name(),
            alpha: f.alpha().map(|a| a.f64()),
            lambda: GapValue::Infinite,
            kernel_dim: self.fps.dim(),
            spectrum: Vec::new(),
            residuals: GapResiduals::default(),
            slowest_mode: None,
            warnings,
        };
        let m = sub.dim();
        if m == 0 {
            let mut r = base;
            r.warnings.push(GapWarning::EmptySubspace);
            return Ok(r);
        }
        let n = self.model.dim() * self.model.dim();
        let z = metric.whitening();
        let zinv = metric.unwhitening();
        // L in f-orthonormal coordinates
        let lw = &(&z * self.generator.matrix()) * &zinv;
        let q = ComplexMatrix::from_columns(n, &sub.whitened);
        let lq = &lw * &q;
        let restricted = &q.adjoint() * &lq;
        let sym = (&restricted + &restricted.adjoint()).scale_real(T::lit(-0.5));
        let eig = herm_eig(&sym)?;
        let lambda = eig.min_eigenvalue();
        let mut report = base;
        if lambda.f64() < -1e-8 {
            log::warn!("negative gap {:.3e} for {}", lambda.f64(), f.name());
            report.warnings.push(GapWarning::NegativeGap(lambda.f64()));
        }

        let residuals = {
            let gram_defect = (&q.adjoint() * &q).dist(&ComplexMatrix::identity(m)).f64();
            let e = self.fps.projector();
            let kernel = sub.basis.iter().map(|b| crate::operators::norm(&e.apply_vec(b)).f64()).fold(0.0, f64::max);
            let unit_pairing = sub
                .basis
                .iter()
                .map(|b| metric.unit_pairing(&unvec(b).expect("square")).norm().f64())
                .fold(0.0, f64::max);
            let leak = &lq - &(&q * &restricted);
            let adj = metric.f_adjoint(&self.generator);
            let half = self.generator.add(&adj).scale(crate::scalar::re(T::lit(-0.5)));
            let via_adjoint = &(&q.adjoint() * &(&(&z * half.matrix()) * &zinv)) * &q;
            let scale = T::one().max(sym.frobenius_norm());
            GapResiduals {
                orthonormality: gram_defect,
                kernel,
                unit_pairing,
                invariance: (leak.frobenius_norm() / scale).f64(),
                adjoint: (via_adjoint.dist(&sym) / scale).f64(),
            }
        };
        let v = eig.eigenvectors.col(0);
        let mode_vec = zinv.matvec(&q.matvec(&v));
        report.lambda = GapValue::Finite(lambda);
        report.spectrum = eig.eigenvalues;
        report.residuals = residuals;
        report.slowest_mode = Some(unvec(&mode_vec)?);
        Ok(report)
    }

    /// f-operator norm of Φ_t on all of M for each t; fails with
    /// [`Error::ContractionViolation`] above 1 + 1e-8.
    pub fn check_f_contractivity(&self, metric: &FMetric<T>, t_grid: &[T]) -> Result<Vec<(T, T)>> {
        let mut out = Vec::with_capacity(t_grid.len());
        for &t in t_grid {
            let norm = self.f_operator_norm(metric, t)?;
            if norm.f64() > 1.0 + 1e-8 {
                return Err(Error::ContractionViolation { t: t.f64(), norm: norm.f64() });
            }
            out.push((t, norm));
        }
        Ok(out)
    }

    /// ‖Φ_t‖ on (M, ‖·‖_f).
    pub fn f_operator_norm(&self, metric: &FMetric<T>, t: T) -> Result<T> {
        metric.operator_norm(&self.semigroup(t)?)
    }

    pub fn semigroup(&self, t: T) -> Result<Superoperator<T>> {
        if t < T::zero() || !t.is_finite() {
            return Err(Error::NegativeArgument(t.f64()));
        }
        self.generator.exp(t)
    }

    /// min over t in the grid of −log(‖Φ_t x‖_f / ‖x‖_f)/t, the largest rate
    /// λ with ‖Φ_t x‖_f ≤ e^{−λt}‖x‖_f on the grid.
    pub fn empirical_decay_rate(&self, metric: &FMetric<T>, x: &ComplexMatrix<T>, semigroups: &[(T, Superoperator<T>)]) -> T {
        let v = vec(x);
        let n0 = metric.f_norm(x);
        let mut worst = T::infinity();
        for (t, phi) in semigroups {
            let y = unvec(&phi.apply_vec(&v)).expect("square");
            let ratio = metric.f_norm(&y) / n0;
            worst = worst.min(-ratio.ln() / *t);
        }
        worst
    }
}

/// One-shot gap computation for a model with a given faithful invariant state.
pub fn spectral_gap_f<T: Real>(model: &GKSLModel<T>, rho: &DensityMatrix<T>, metric: &FMetric<T>) -> Result<GapReport<T>> {
    GapProblem::new(model.clone(), rho.clone())?.spectral_gap(metric)
}

/// One-shot contractivity check.
pub fn check_f_contractivity<T: Real>(
    model: &GKSLModel<T>,
    rho: &DensityMatrix<T>,
    metric: &FMetric<T>,
    t_grid: &[T],
) -> Result<T> {
    let norms = GapProblem::new(model.clone(), rho.clone())?.check_f_contractivity(metric, t_grid)?;
    Ok(norms.into_iter().map(|(_, n)| n).fold(T::zero(), T::max))
}
