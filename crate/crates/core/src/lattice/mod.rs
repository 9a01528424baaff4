//! Exact integer and rational linear algebra: Smith and Hermite forms, saturated
//! lattice kernels, and sign-constrained feasibility with certificates.
//!
//! Nothing in here touches floating point.

mod cone;
mod matrix;
mod rational;
mod simplex;
mod snf;

use thiserror::Error;

pub use cone::{
    combine_columns, cone_member, exists_sign_relation, ConeFeasibility, ConeMembership, FeasibilityStatus,
    SignRegime,
};
pub use matrix::{
    content, dot, hermite_rows, lattice_contains, lattice_equal, primitive, primitive_from_rational,
    IntMatrix,
};
pub use rational::{parse_rational, rational_to_f64, solve_rational, ParseRationalError, RationalVector};
pub use simplex::find_nonnegative_solution;
pub use snf::{lattice_kernel, lattice_kernel_rows, smith_normal_form, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty input: {0}")]
    Empty(&'static str),
}
