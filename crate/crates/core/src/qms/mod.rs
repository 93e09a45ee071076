//! Lindblad models in the Heisenberg picture, their semigroups, invariant
//! states and fixed-point algebras.

mod fixed_point;
mod model;
mod probes;
pub mod random;
mod state;

pub use fixed_point::{
    fixed_point_structure, gns_pairing_with_unit, state_projection, ExpectationChecks, FixedPointStructure,
};
pub use model::{paulis, GKSLModel};
pub use probes::{choi_min_eigenvalue, kadison_schwarz_gap, kadison_schwarz_probe, unitality_defect};
pub use random::{random_model, RandomModel};
pub use state::{check_invariance, invariant_state, DensityMatrix, FAITHFUL_THRESHOLD};
