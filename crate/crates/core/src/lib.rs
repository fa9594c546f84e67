//! Exact-arithmetic models of categorical complexes at the linear level.
//!
//! Everything here works over the rationals with arbitrary precision, so
//! every identity (d² = 0, invertibility, chain-map and homotopy equations)
//! is checked exactly rather than up to a tolerance.
//!
//! Module map:
//!
//! * [`exactlin`] - rationals, dense matrices, fraction-free elimination.
//! * [`chain`] - bounded chain complexes, cones, shifts, tensor and Hom complexes.
//! * [`multicplx`] - multicomplexes, cubes of complexes and their totalizations.
//! * [`koszul`] - Koszul complexes over finite-dimensional commutative algebras.
//! * [`perverse`] - disk, flag, cube and local-star models of perverse sheaves.
//! * [`laxmat`] - zeta/Möbius calculus on finite posets and chain-level Δ¹ matrices.
//! * [`simplex`] - simplicial cochains of Δⁿ and the categorified 2-simplex.
//! * [`doldkan`] - normalization and Γ for truncated simplicial vector spaces.
//! * [`doc`] - the JSON document format shared with the command-line tool.
//! * [`sweep`] - seeded batch evaluation, parallel when the `parallel` feature is on.

pub mod chain;
pub mod doc;
pub mod doldkan;
mod error;
pub mod exactlin;
pub mod koszul;
pub mod laxmat;
pub mod multicplx;
pub mod perverse;
pub mod random;
mod report;
pub mod simplex;
pub mod sweep;

pub use error::{Error, Result};
pub use exactlin::{Matrix, Rational};
pub use report::{Report, Violation};
