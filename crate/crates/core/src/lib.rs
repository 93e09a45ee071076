//! Spectral gaps of quantum Markov semigroups on M_d(ℂ) in the family of
//! state-induced inner products ⟨x, y⟩_f = ⟨x, f(Δ_ρ) y⟩_GNS indexed by
//! operator monotone functions f.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`). The aliases
//! below fix `f64`; [`single`] has the same set for `f32`.
//!
//! ```
//! use qmsgap_core::{Model, Monotone, Problem};
//!
//! let problem = Problem::from_model(Model::thermal_qubit(0.3, 0.9, 1.0)).unwrap();
//! let gns = problem.spectral_gap(&problem.metric(Monotone::gns()).unwrap()).unwrap();
//! let kms = problem.spectral_gap(&problem.metric(Monotone::kms()).unwrap()).unwrap();
//! assert!(kms.lambda.to_f64() >= gns.lambda.to_f64() - 1e-12);
//! ```

pub mod config;
pub mod error;
pub mod gap;
pub mod harness;
pub mod metric;
pub mod monotone;
pub mod operators;
pub mod qms;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Real, C};

pub type Matrix = operators::ComplexMatrix<f64>;
pub type Superop = operators::Superoperator<f64>;
pub type Model = qms::GKSLModel<f64>;
pub type State = qms::DensityMatrix<f64>;
pub type Monotone = monotone::MonotoneFunction<f64>;
pub type Metric = metric::FMetric<f64>;
pub type Problem = gap::GapProblem<f64>;
pub type Report = gap::GapReport<f64>;

/// `f32` versions of the crate-root aliases.
pub mod single {
    pub type Matrix = crate::operators::ComplexMatrix<f32>;
    pub type Superop = crate::operators::Superoperator<f32>;
    pub type Model = crate::qms::GKSLModel<f32>;
    pub type State = crate::qms::DensityMatrix<f32>;
    pub type Monotone = crate::monotone::MonotoneFunction<f32>;
    pub type Metric = crate::metric::FMetric<f32>;
    pub type Problem = crate::gap::GapProblem<f32>;
    pub type Report = crate::gap::GapReport<f32>;
}
