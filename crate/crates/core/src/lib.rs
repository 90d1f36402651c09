//! Numerical toolkit for the overdetermined eigenvalue problem in
//! half-cylinders: an eigenfunction of the mixed Dirichlet/Neumann Laplacian
//! whose normal derivative is constant along the free top boundary.
//!
//! Straight cylinders solve the problem at every height; this crate computes
//! the closed-form dispersion relation of the linearized problem, locates
//! the heights where nontrivial domains branch off, solves the eigenproblem
//! on perturbed domains through a pulled-back metric on the reference
//! cylinder, and traces the bifurcating branches by a constrained Newton
//! continuation.
//!
//! Entry points:
//! - [`cross_section`]: Neumann spectra of the base domain.
//! - [`dispersion`]: closed-form linearized eigenvalues and their crossings.
//! - [`operator`]: finite-difference eigensolver on the reference cylinder.
//! - [`overdetermined`]: the normal-derivative operator and its
//!   linearization.
//! - [`continuation`]: bifurcation detection and branch tracing.
//! - [`run`]: batch subcommands behind the `halfcyl` binary.
//!
//! The `examples/` directory exercises every capability end to end.

// validation guards use negated comparisons so NaN fails them; indexed loops
// mirror the stencil and factorization formulas
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod continuation;
pub mod cross_section;
pub mod dispersion;
pub mod error;
pub mod grid;
pub mod linalg;
pub mod metric;
pub mod operator;
pub mod output;
pub mod overdetermined;
pub mod profile;
pub mod run;

pub use error::{Error, Result};
