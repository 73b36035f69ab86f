//! Preconditioned splitting iterations for multilinear systems
//! `A x^{m-1} = b` with strong M-tensor coefficients.
//!
//! The pipeline is: rescale `A` to a unit diagonal ([`precond::normalize`]),
//! build a banded preconditioner `P` ([`precond::build_preconditioner`]),
//! split `P·A = E·I_m − F` ([`splitting::make_splitting`]) and iterate
//! ([`solver::solve`]). [`spectral`] estimates the radius of the iteration
//! tensor `M(E)^{-1} F`, which governs the convergence rate.

#![allow(clippy::needless_range_loop)]

pub mod bench;
pub mod error;
pub mod io;
pub mod precond;
pub mod solver;
pub mod spectral;
pub mod splitting;
pub mod tensor;

pub use error::{Error, Result};
pub use precond::{PrecondKind, PreconditionerSpec};
pub use solver::{solve, solve_system, SolveOptions, SolveReport, Status};
pub use splitting::{make_splitting, SplitPair, SplittingVariant};
pub use tensor::{DenseTensor, SquareMatrix};
