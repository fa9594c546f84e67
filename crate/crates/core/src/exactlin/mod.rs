//! Exact rational arithmetic and dense linear algebra.
//!
//! All elimination runs fraction-free on integer rows (Bareiss), which keeps
//! intermediate entries bounded by minors of the input. Results never depend
//! on that choice.

mod elim;
mod matrix;
mod rational;

pub use elim::{invert, kernel_basis, kernel_matrix, pivot_columns, rank};
pub use matrix::Matrix;
pub use rational::{format_rational, frac, parse_rational, rat, ParsedRational, Rational};
