//! f-spectral gaps of GKSL generators, computed from the symmetrized
//! generator on the decaying subspace and checked against the semigroup.

mod curve;
mod problem;

pub use curve::{gap_curve, GapCurve};
pub use problem::{
    check_f_contractivity, spectral_gap_f, DecayingSubspace, GapProblem, GapReport, GapResiduals, GapValue, GapWarning,
    DROP_TOLERANCE,
};
