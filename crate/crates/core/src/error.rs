use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Numerical payloads are reported as `f64` regardless of the scalar type
/// the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e}, tolerance {tol:.3e})")]
    NotHermitian { asymmetry: f64, tol: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("{0} did not converge")]
    ConvergenceFailure(&'static str),
    #[error("function value is not finite at {at}")]
    DomainError { at: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("map is not linear (defect {defect:.3e})")]
    NotLinear { defect: f64 },
    #[error("non-finite entry")]
    NonFinite,

    #[error("negative argument {0}")]
    NegativeArgument(f64),
    #[error("power exponent {0} outside [0, 1] is not operator monotone")]
    InvalidPower(f64),
    #[error("Loewner measure invalid: {0}")]
    InvalidMeasure(String),
    #[error("f(1) = {value} is not normalized to 1")]
    NotNormalized { value: f64 },
    #[error("Loewner fit sup relative error {error:.3e} exceeds {tolerance:.1e}")]
    FitTolerance { error: f64, tolerance: f64 },
    #[error("OM1 bound violated at t = {t}: {reason}")]
    BoundViolation { t: f64, reason: String },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("invariant state is not unique (kernel dimension {kernel_dim})")]
    NonUniqueInvariantState { kernel_dim: usize },
    #[error("invariant state is not faithful (min eigenvalue {min_eigenvalue:.3e})")]
    NoFaithfulInvariantState { min_eigenvalue: f64 },
    #[error("state is not faithful (min eigenvalue {min_eigenvalue:.3e})")]
    NotFaithful { min_eigenvalue: f64 },
    #[error("conditional expectation check `{check}` failed (residual {residual:.3e})")]
    StructureCheck { check: &'static str, residual: f64 },

    #[error("quadratic form evaluations disagree: closed form {closed_form}, infimum {infimum}")]
    MoreauMismatch { closed_form: f64, infimum: f64 },
    #[error("Loewner order violated for {probe} (min eigenvalue {min_eigenvalue:.3e})")]
    OrderViolation { probe: String, min_eigenvalue: f64 },

    #[error("decaying subspace rank {found} below expected {expected}")]
    RankDeficiency { found: usize, expected: usize },
    #[error("f-operator norm {norm} exceeds 1 at t = {t}")]
    ContractionViolation { t: f64, norm: f64 },

    #[error("rates violate detailed balance at ({i}, {j}): defect {defect:.3e}")]
    RateMismatch { i: usize, j: usize, defect: f64 },
    #[error("strict gap search exhausted: best relative margin {best_relative_margin:.3e}")]
    SearchExhausted { best_relative_margin: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
