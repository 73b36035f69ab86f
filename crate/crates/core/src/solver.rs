//! Fixed-point iteration `x ← (M(E)^{-1}(F x^{m-1} + b'))^{[1/(m-1)]}`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precond::{normalize, PreconditionerSpec};
use crate::splitting::{make_splitting, SplitPair, SplittingVariant};
use crate::tensor::{contract, elementwise_root, DenseTensor};

/// Growth factor of the residual over its initial value treated as divergence.
pub const DIVERGENCE_FACTOR: f64 = 1e8;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Starting vector; zeros when absent.
    #[serde(default)]
    pub x0: Option<Vec<f64>>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 2000,
            x0: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxIterations,
    Diverged,
    /// An update produced a negative radicand under an even root.
    NegativeRadicand,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::MaxIterations => "max_iterations",
            Status::Diverged => "diverged",
            Status::NegativeRadicand => "negative_radicand",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub status: Status,
    /// Completed updates.
    pub iterations: usize,
    /// `‖b − A x_j^{m-1}‖₂` for `j = 0..=iterations`, on the original system.
    pub residual_history: Vec<f64>,
    pub elapsed_seconds: f64,
}

impl SolveReport {
    pub fn final_residual(&self) -> f64 {
        *self.residual_history.last().unwrap_or(&f64::NAN)
    }
}

fn residual(a: &DenseTensor, b: &[f64], x: &[f64]) -> Result<f64> {
    let ax = contract(a, x)?;
    Ok(b.iter()
        .zip(&ax)
        .map(|(bi, yi)| (bi - yi).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// Runs the splitting iteration with right-hand side `rhs` (already
/// preconditioned and scaled to match `split`), measuring residuals against
/// the original system `a_orig x^{m-1} = b_orig`.
pub fn solve(
    split: &SplitPair,
    a_orig: &DenseTensor,
    b_orig: &[f64],
    rhs: &[f64],
    opts: &SolveOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    let n = split.f_tensor.dim();
    let order = split.f_tensor.order();
    if a_orig.dim() != n || b_orig.len() != n || rhs.len() != n {
        return Err(Error::Dimension(format!(
            "splitting dim {n}, tensor dim {}, rhs lengths {} and {}",
            a_orig.dim(),
            b_orig.len(),
            rhs.len()
        )));
    }
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::Config(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let mut x = match &opts.x0 {
        Some(x0) if x0.len() != n => {
            return Err(Error::Dimension(format!(
                "x0 has length {}, expected {n}",
                x0.len()
            )))
        }
        Some(x0) => x0.clone(),
        None => vec![0.0; n],
    };
    let start = Instant::now();
    let lu = split.e_matrix.lu()?;
    let r0 = residual(a_orig, b_orig, &x)?;
    let mut history = vec![r0];
    let finish = |status, history: Vec<f64>| SolveReport {
        status,
        iterations: history.len() - 1,
        residual_history: history,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };
    if r0 < opts.tol {
        return Ok((x, finish(Status::Converged, history)));
    }
    let mut status = Status::MaxIterations;
    for _ in 0..opts.max_iter {
        let mut z = contract(&split.f_tensor, &x)?;
        z.iter_mut().zip(rhs).for_each(|(zi, bi)| *zi += bi);
        lu.solve_in_place(&mut z);
        match elementwise_root(&z, order) {
            Ok(next) => x = next,
            Err(Error::NegativeRadicand { .. }) => {
                status = Status::NegativeRadicand;
                break;
            }
            Err(e) => return Err(e),
        }
        let r = residual(a_orig, b_orig, &x)?;
        history.push(r);
        if r < opts.tol {
            status = Status::Converged;
            break;
        }
        if !r.is_finite() || r > DIVERGENCE_FACTOR * r0 {
            status = Status::Diverged;
            break;
        }
    }
    Ok((x, finish(status, history)))
}

/// A splitting of the system as the solver sees it, together with the
/// matching right-hand side.
#[derive(Debug, Clone)]
pub struct PreparedSystem {
    pub split: SplitPair,
    pub rhs: Vec<f64>,
}

/// Builds the splitting for `(a, b)`: banded variants run on the
/// unit-diagonal rescaling, the diagonal-based ones on the raw system.
pub fn prepare(
    a: &DenseTensor,
    b: &[f64],
    spec: &PreconditionerSpec,
    variant: SplittingVariant,
) -> Result<PreparedSystem> {
    let (tensor, base_rhs) = if variant.is_diagonal_based() {
        if b.len() != a.dim() {
            return Err(Error::Dimension(format!(
                "tensor dim {} vs rhs length {}",
                a.dim(),
                b.len()
            )));
        }
        (a.clone(), b.to_vec())
    } else {
        let norm = normalize(a, b)?;
        (norm.tensor, norm.rhs)
    };
    let split = make_splitting(&tensor, spec, variant)?;
    let rhs = split.preconditioner.mul_vec(&base_rhs)?;
    Ok(PreparedSystem { split, rhs })
}

/// Prepares and solves `a x^{m-1} = b` in one call.
pub fn solve_system(
    a: &DenseTensor,
    b: &[f64],
    spec: &PreconditionerSpec,
    variant: SplittingVariant,
    opts: &SolveOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    let prepared = prepare(a, b, spec, variant)?;
    solve(&prepared.split, a, b, &prepared.rhs, opts)
}
