//! Exact rational matrices and a floating symmetric eigensolver.

mod eigen;
mod exact;

pub use eigen::{spectral_apply, sym_eigen, sym_eigenvalues, SymEigen};
pub use exact::{eval_poly, int, is_unit, ratio, ExactMatrix};
