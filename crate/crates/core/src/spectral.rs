//! Perron spectral radius of nonnegative tensors.
//!
//! The estimator is the power-type iteration for H-eigenvalues: starting from
//! the all-ones vector it repeatedly forms `y = T x^{m-1}`, brackets the Perron
//! root between `min y_i / x_i^{m-1}` and `max y_i / x_i^{m-1}`
//! (Collatz–Wielandt bounds), then sets `x = y^{[1/(m-1)]}` normalized to unit
//! max-norm.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::splitting::{iteration_tensor, SplitPair};
use crate::tensor::{contract, elementwise_root, majorization, DenseTensor};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Relative size of the all-ones shift applied to tensors with an empty slice.
const REDUCIBILITY_SHIFT: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct SpectralEstimate {
    pub rho: f64,
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Entry-wise shift added before iterating; bounds refer to the shifted tensor.
    pub shift: f64,
    /// Perron vector estimate, max-norm normalized.
    pub vector: Vec<f64>,
}

impl SpectralEstimate {
    pub fn relative_width(&self) -> f64 {
        (self.upper - self.lower) / self.upper.max(f64::MIN_POSITIVE)
    }
}

pub fn spectral_radius(t: &DenseTensor, tol: f64, max_iter: usize) -> Result<SpectralEstimate> {
    if let Some((index, &value)) = t.as_slice().iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(Error::NotNonnegative { index, value });
    }
    let n = t.dim();
    let max_entry = t.as_slice().iter().copied().fold(0.0, f64::max);
    if max_entry == 0.0 {
        return Ok(SpectralEstimate {
            rho: 0.0,
            lower: 0.0,
            upper: 0.0,
            iterations: 0,
            converged: true,
            shift: 0.0,
            vector: vec![1.0; n],
        });
    }
    if !has_empty_slice(t) {
        if let Some(est) = power_iterate(t, tol, max_iter, 0.0)? {
            return Ok(est);
        }
    }
    let shift = REDUCIBILITY_SHIFT * max_entry;
    let shifted = DenseTensor::new(
        t.order(),
        n,
        t.as_slice().iter().map(|v| v + shift).collect(),
    )?;
    power_iterate(&shifted, tol, max_iter, shift)?
        .ok_or_else(|| Error::Config("power iteration lost positivity on a positive tensor".into()))
}

/// Returns `None` if some component of `T x^{m-1}` vanishes, in which case
/// the Collatz–Wielandt bounds are not valid and the caller shifts.
fn power_iterate(
    t: &DenseTensor,
    tol: f64,
    max_iter: usize,
    shift: f64,
) -> Result<Option<SpectralEstimate>> {
    let order = t.order();
    let mut x = vec![1.0; t.dim()];
    let mut lower = 0.0;
    let mut upper = f64::INFINITY;
    for it in 1..=max_iter.max(1) {
        let y = contract(t, &x)?;
        if y.iter().any(|&v| v <= 0.0) {
            return Ok(None);
        }
        lower = f64::INFINITY;
        upper = 0.0;
        for (yi, xi) in y.iter().zip(&x) {
            let ratio = yi / xi.powi(order as i32 - 1);
            lower = f64::min(lower, ratio);
            upper = f64::max(upper, ratio);
        }
        let next = elementwise_root(&y, order)?;
        let scale = next.iter().copied().fold(0.0, f64::max);
        let next: Vec<f64> = next.iter().map(|v| v / scale).collect();
        if (upper - lower) / upper < tol {
            return Ok(Some(SpectralEstimate {
                rho: 0.5 * (lower + upper),
                lower,
                upper,
                iterations: it,
                converged: true,
                shift,
                vector: x,
            }));
        }
        x = next;
    }
    Ok(Some(SpectralEstimate {
        rho: 0.5 * (lower + upper),
        lower,
        upper,
        iterations: max_iter.max(1),
        converged: false,
        shift,
        vector: x,
    }))
}

fn has_empty_slice(t: &DenseTensor) -> bool {
    (0..t.dim()).any(|i| t.slice(i).iter().all(|&v| v == 0.0))
}

/// Sufficient irreducibility test: `T` is irreducible whenever its
/// majorization matrix is.
pub fn majorization_irreducible(t: &DenseTensor) -> bool {
    let m = majorization(t);
    let n = m.dim();
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let edge = if forward { m.get(i, j) } else { m.get(j, i) };
                if i != j && edge != 0.0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    n == 1 || (reach(true) && reach(false))
}

/// Zeroes entries that are negative only through rounding (magnitude below
/// `rel * max|t|`); anything more negative is an error.
pub fn clamp_roundoff(t: &DenseTensor, rel: f64) -> Result<DenseTensor> {
    let floor = -rel * t.max_abs();
    let mut data = t.as_slice().to_vec();
    for (index, v) in data.iter_mut().enumerate() {
        if *v < 0.0 {
            if *v < floor {
                return Err(Error::NotNonnegative { index, value: *v });
            }
            *v = 0.0;
        }
    }
    DenseTensor::new(t.order(), t.dim(), data)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RhoOrdering {
    LessOrEqual,
    GreaterOrEqual,
    Indistinguishable,
}

#[derive(Debug, Clone, Serialize)]
pub struct RhoComparison {
    pub ordering: RhoOrdering,
    pub first: SpectralEstimate,
    pub second: SpectralEstimate,
}

/// Radius of a splitting's iteration tensor `M(E)^{-1} F`.
pub fn iteration_radius(split: &SplitPair, tol: f64, max_iter: usize) -> Result<SpectralEstimate> {
    let t = clamp_roundoff(&iteration_tensor(split)?, 1e-12)?;
    spectral_radius(&t, tol, max_iter)
}

/// Orders the iteration-tensor radii of two splittings; differences below
/// `tol` are reported as indistinguishable.
pub fn compare_rho(a: &SplitPair, b: &SplitPair, tol: f64) -> Result<RhoComparison> {
    let first = iteration_radius(a, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    let second = iteration_radius(b, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    let ordering = if (first.rho - second.rho).abs() < tol {
        RhoOrdering::Indistinguishable
    } else if first.rho < second.rho {
        RhoOrdering::LessOrEqual
    } else {
        RhoOrdering::GreaterOrEqual
    };
    Ok(RhoComparison {
        ordering,
        first,
        second,
    })
}
