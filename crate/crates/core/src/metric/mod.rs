//! State-induced inner products ⟨·,·⟩_f, the modular operator and quadratic
//! forms with their Moreau envelopes.

mod fmetric;
mod modular;
mod order;
mod quadratic;

pub use fmetric::{gram_form, FMetric, CONDITION_WARNING};
pub use modular::{modular_flow, modular_superop};
pub use order::{loewner_order_probe, OrderReport};
pub use quadratic::{moreau_form, QuadraticForm};
