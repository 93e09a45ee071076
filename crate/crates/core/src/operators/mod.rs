//! Dense complex matrices, Hermitian spectral calculus and superoperators.

mod eigen;
mod expm;
mod funcs;
mod lu;
mod matrix;
mod superop;
mod svd;

pub use eigen::{herm_eig, herm_eig_with_tol, HermitianEigen};
pub use expm::expm;
pub use funcs::{apply_to_spectrum, hermitian_function, matrix_function, matrix_function_with_tol, psd_eig};
pub use lu::{inverse, solve, Lu};
pub use matrix::{dot, norm, ComplexMatrix};
pub use superop::{matrix_unit, superop_from_map, unvec, vec, vec_residual, Superoperator};
pub use svd::{spectral_norm, svd, Svd};
