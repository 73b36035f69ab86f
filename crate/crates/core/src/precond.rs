//! Banded preconditioners `P = I + S + K`, the preconditioned system
//! `(P·A) x^{m-1} = P·b`, convergence-condition checks and M-tensor
//! classification.
//!
//! `S` carries the `s`-th superdiagonal `S_{i,i+s} = -α_i a_{i,(i+s)...(i+s)}`
//! and `K` the `k`-th subdiagonal `K_{i,i-k} = -β_i a_{i,(i-k)...(i-k)}`. The
//! banded variants assume a unit-diagonal tensor; see [`normalize`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::{solve, SolveOptions, Status};
use crate::spectral::{spectral_radius, SpectralEstimate, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::splitting::{make_splitting, SplittingVariant};
use crate::tensor::{contract, majorization, matrix_tensor_product, DenseTensor, SquareMatrix};

/// Largest deviation from 1 accepted for a "unit" diagonal entry.
pub const UNIT_DIAGONAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrecondKind {
    /// `I + S_α^s + K_β^k`
    FullBand,
    /// `I + S_α^s`
    UpperOnly,
    /// `I + K_β^k`
    LowerOnly,
    /// `I + S_α` on the first superdiagonal; comparison baseline.
    BaselineRow,
    /// `I + C_β`, first column below the diagonal; comparison baseline.
    BaselineColumn,
}

impl PrecondKind {
    pub fn is_baseline(self) -> bool {
        matches!(self, PrecondKind::BaselineRow | PrecondKind::BaselineColumn)
    }

    fn has_upper(self) -> bool {
        matches!(
            self,
            PrecondKind::FullBand | PrecondKind::UpperOnly | PrecondKind::BaselineRow
        )
    }

    fn has_lower(self) -> bool {
        matches!(
            self,
            PrecondKind::FullBand | PrecondKind::LowerOnly | PrecondKind::BaselineColumn
        )
    }
}

/// A preconditioner parameter vector; a scalar broadcasts to every index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Scalar(f64),
    Values(Vec<f64>),
}

impl Default for Param {
    fn default() -> Self {
        Param::Scalar(0.0)
    }
}

impl Param {
    fn resolve(&self, name: &str, len: usize) -> Result<Vec<f64>> {
        let values = match self {
            Param::Scalar(v) => vec![*v; len],
            Param::Values(v) if v.len() == len => v.clone(),
            Param::Values(v) => {
                return Err(Error::Config(format!(
                    "{name} needs {len} entries, got {}",
                    v.len()
                )))
            }
        };
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::Config(format!(
                "{name} entries must be finite and >= 0, got {bad}"
            )));
        }
        Ok(values)
    }

    fn within_unit_interval(&self) -> bool {
        match self {
            Param::Scalar(v) => (0.0..=1.0).contains(v),
            Param::Values(v) => v.iter().all(|x| (0.0..=1.0).contains(x)),
        }
    }
}

fn default_band() -> usize {
    1
}

/// Parameters `(α, β, s, k)` and the preconditioner family.
///
/// `alpha` has `n - s` entries (rows `1..n-s`), `beta` has `n - k` entries
/// (rows `k+1..n`). The baselines fix their own band positions: `BaselineRow`
/// uses `s = 1`, `BaselineColumn` uses column 1 with `beta` indexed by rows
/// `2..n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreconditionerSpec {
    #[serde(rename = "variant")]
    pub kind: PrecondKind,
    #[serde(default)]
    pub alpha: Param,
    #[serde(default)]
    pub beta: Param,
    #[serde(default = "default_band")]
    pub s: usize,
    #[serde(default = "default_band")]
    pub k: usize,
}

impl Default for PreconditionerSpec {
    fn default() -> Self {
        Self::full_band(0.0, 0.0, 1, 1)
    }
}

impl PreconditionerSpec {
    pub fn full_band(alpha: f64, beta: f64, s: usize, k: usize) -> Self {
        Self {
            kind: PrecondKind::FullBand,
            alpha: Param::Scalar(alpha),
            beta: Param::Scalar(beta),
            s,
            k,
        }
    }

    pub fn upper_only(alpha: f64, s: usize) -> Self {
        Self {
            kind: PrecondKind::UpperOnly,
            ..Self::full_band(alpha, 0.0, s, 1)
        }
    }

    pub fn lower_only(beta: f64, k: usize) -> Self {
        Self {
            kind: PrecondKind::LowerOnly,
            ..Self::full_band(0.0, beta, 1, k)
        }
    }

    pub fn baseline_row(alpha: f64) -> Self {
        Self {
            kind: PrecondKind::BaselineRow,
            ..Self::full_band(alpha, 0.0, 1, 1)
        }
    }

    pub fn baseline_column(beta: f64) -> Self {
        Self {
            kind: PrecondKind::BaselineColumn,
            ..Self::full_band(0.0, beta, 1, 1)
        }
    }

    /// Superdiagonal offset actually used by this family.
    pub fn effective_s(&self) -> usize {
        match self.kind {
            PrecondKind::BaselineRow | PrecondKind::BaselineColumn => 1,
            _ => self.s,
        }
    }

    /// Subdiagonal offset actually used by this family.
    pub fn effective_k(&self) -> usize {
        match self.kind {
            PrecondKind::BaselineRow | PrecondKind::BaselineColumn => 1,
            _ => self.k,
        }
    }

    /// True when every α and β lies in `[0, 1]`, the range where the
    /// comparison theory applies.
    pub fn theory_range(&self) -> bool {
        self.alpha.within_unit_interval() && self.beta.within_unit_interval()
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if n >= 2 {
            for (name, band) in [("s", self.effective_s()), ("k", self.effective_k())] {
                if !(1..n).contains(&band) {
                    return Err(Error::Config(format!(
                        "{name} = {band} outside 1..={}",
                        n - 1
                    )));
                }
            }
        }
        self.alpha_values(n)?;
        self.beta_values(n)?;
        Ok(())
    }

    /// α indexed by row `i = 1..n-s` (stored 0-based); empty without an upper band.
    pub fn alpha_values(&self, n: usize) -> Result<Vec<f64>> {
        if !self.kind.has_upper() || n < 2 {
            return Ok(Vec::new());
        }
        self.alpha
            .resolve("alpha", n.saturating_sub(self.effective_s()))
    }

    /// β indexed by row `j = k+1..n` (stored 0-based); empty without a lower band.
    pub fn beta_values(&self, n: usize) -> Result<Vec<f64>> {
        if !self.kind.has_lower() || n < 2 {
            return Ok(Vec::new());
        }
        self.beta
            .resolve("beta", n.saturating_sub(self.effective_k()))
    }

    /// `α_i` for 1-based row `i`, zero outside the band.
    fn alpha_at(alpha: &[f64], i: usize) -> f64 {
        if i >= 1 && i <= alpha.len() {
            alpha[i - 1]
        } else {
            0.0
        }
    }

    /// `β_i` for 1-based row `i`, zero outside the band.
    fn beta_at(&self, beta: &[f64], i: usize) -> f64 {
        let k = self.effective_k();
        if i > k && i - k <= beta.len() {
            beta[i - k - 1]
        } else {
            0.0
        }
    }
}

pub(crate) fn require_unit_diagonal(a: &DenseTensor) -> Result<()> {
    for i in 0..a.dim() {
        let d = a.diagonal(i);
        if (d - 1.0).abs() > UNIT_DIAGONAL_TOL {
            return Err(Error::Normalization {
                index: i + 1,
                value: d,
            });
        }
    }
    Ok(())
}

/// Builds the preconditioner matrix for `a`.
///
/// The banded families require a unit diagonal. The baselines read the
/// entries of `a` as given, without normalization.
pub fn build_preconditioner(spec: &PreconditionerSpec, a: &DenseTensor) -> Result<SquareMatrix> {
    let n = a.dim();
    spec.validate(n)?;
    if !spec.kind.is_baseline() {
        require_unit_diagonal(a)?;
    }
    let maj = majorization(a);
    let mut p = SquareMatrix::identity(n);
    if n < 2 {
        return Ok(p);
    }
    let alpha = spec.alpha_values(n)?;
    let beta = spec.beta_values(n)?;
    match spec.kind {
        PrecondKind::BaselineColumn => {
            for i in 1..n {
                p.set(i, 0, -beta[i - 1] * maj.get(i, 0));
            }
        }
        _ => {
            let s = spec.effective_s();
            let k = spec.effective_k();
            for (i, a_i) in alpha.iter().enumerate() {
                p.set(i, i + s, -a_i * maj.get(i, i + s));
            }
            for (j, b_j) in beta.iter().enumerate() {
                let row = j + k;
                p.set(row, row - k, -b_j * maj.get(row, row - k));
            }
        }
    }
    Ok(p)
}

/// The preconditioned system `(P·A, P·b)`.
pub fn precondition(
    p: &SquareMatrix,
    a: &DenseTensor,
    b: &[f64],
) -> Result<(DenseTensor, Vec<f64>)> {
    let pa = matrix_tensor_product(p, a)?;
    let pb = p.mul_vec(b)?;
    Ok((pa, pb))
}

/// A system rescaled so that every `a_{i...i} = 1`.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub tensor: DenseTensor,
    pub rhs: Vec<f64>,
    /// Original diagonal entries `a_{i...i}`.
    pub scale: Vec<f64>,
}

/// Divides the `i`-th mode-1 slice of `a` and `b_i` by `a_{i...i}`.
pub fn normalize(a: &DenseTensor, b: &[f64]) -> Result<Normalized> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::Dimension(format!(
            "tensor dim {n} vs rhs length {}",
            b.len()
        )));
    }
    let scale: Vec<f64> = (0..n).map(|i| a.diagonal(i)).collect();
    if let Some((i, &d)) = scale.iter().enumerate().find(|(_, d)| **d <= 0.0) {
        return Err(Error::Normalization {
            index: i + 1,
            value: d,
        });
    }
    let len = a.slice_len();
    let mut data = a.as_slice().to_vec();
    for (i, chunk) in data.chunks_exact_mut(len).enumerate() {
        chunk.iter_mut().for_each(|v| *v /= scale[i]);
    }
    for i in 0..n {
        // exact 1 on the diagonal regardless of rounding
        data[a.majorization_offset(i, i)] = 1.0;
    }
    let tensor = DenseTensor::new(a.order(), n, data)?;
    debug_assert!((0..n).all(|i| tensor.diagonal(i) == 1.0));
    let rhs = b.iter().zip(&scale).map(|(bi, d)| bi / d).collect();
    Ok(Normalized { tensor, rhs, scale })
}

/// Which convergence-condition family applies, by the relation of `s` and `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionKind {
    /// `s = k = 1`: adjacent bands on both sides.
    Adjacent,
    /// `s = k > 1`.
    EqualBands,
    /// `k < s`.
    UpperWider,
    /// `k > s`.
    LowerWider,
}

/// Which row the upper-band term pairs with when `k ≠ s`: `Literal` uses
/// `a_{i,(n-i)...(n-i)} a_{(n-i),i...i}`, `Banded` the band partner `i + s`.
/// Both agree when `k = s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionReading {
    #[default]
    Literal,
    Banded,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub kind: ConditionKind,
    pub reading: ConditionReading,
    /// Per-row products, row `i` at position `i - 1`.
    pub values: Vec<f64>,
    pub satisfied: bool,
}

/// Evaluates the per-row products `α_i a_{i,p..p} a_{p,i..i} + β_i a_{i,q..q} a_{q,i..i}`
/// whose membership in `(0, 1)` guarantees the E5/M2-type splittings are
/// convergent. `p = i + s` and `q = i - k` in the banded reading; the literal
/// reading of the `k ≠ s` cases uses `p = n - i`.
pub fn check_conditions(
    a: &DenseTensor,
    spec: &PreconditionerSpec,
    reading: ConditionReading,
) -> Result<ConditionReport> {
    let n = a.dim();
    spec.validate(n)?;
    let maj = majorization(a);
    // 1-based accessor
    let m = |i: usize, j: usize| maj.get(i - 1, j - 1);
    let alpha = spec.alpha_values(n)?;
    let beta = spec.beta_values(n)?;
    let (s, k) = (spec.effective_s(), spec.effective_k());
    let kind = match (s, k) {
        (1, 1) => ConditionKind::Adjacent,
        _ if s == k => ConditionKind::EqualBands,
        _ if k < s => ConditionKind::UpperWider,
        _ => ConditionKind::LowerWider,
    };
    let literal_cross = reading == ConditionReading::Literal
        && matches!(kind, ConditionKind::UpperWider | ConditionKind::LowerWider);

    let upper_term = |i: usize| {
        let a_i = PreconditionerSpec::alpha_at(&alpha, i);
        if a_i == 0.0 {
            return 0.0;
        }
        let partner = if literal_cross { n - i } else { i + s };
        if partner < 1 || partner > n {
            return 0.0;
        }
        a_i * m(i, partner) * m(partner, i)
    };
    let lower_term = |i: usize| {
        let b_i = spec.beta_at(&beta, i);
        if b_i == 0.0 || i <= k {
            return 0.0;
        }
        b_i * m(i, i - k) * m(i - k, i)
    };

    let values: Vec<f64> = (1..=n)
        .map(|i| {
            if literal_cross {
                let (lo, hi) = (s.min(k), s.max(k));
                // rows 1..lo: upper only; lo+1..hi: both; hi+1..n: lower only
                if i <= lo {
                    upper_term(i)
                } else if i <= hi {
                    upper_term(i) + lower_term(i)
                } else {
                    lower_term(i)
                }
            } else {
                upper_term(i) + lower_term(i)
            }
        })
        .collect();
    let satisfied = values.iter().all(|&v| v > 0.0 && v < 1.0);
    Ok(ConditionReport {
        kind,
        reading,
        values,
        satisfied,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub is_z: bool,
    pub is_strong_m: bool,
    /// `max_i a_{i...i}`.
    pub eta: f64,
    /// Perron radius of `B = η·I − A` (present for Z-tensors).
    pub rho_b: Option<SpectralEstimate>,
    pub reason: Option<String>,
}

/// Z-tensor and strong M-tensor test via `A = η·I − B` with
/// `η = max_i a_{i...i}`: strong iff `ρ(B) < η`.
pub fn classify(a: &DenseTensor) -> Result<Classification> {
    let eta = (0..a.dim())
        .map(|i| a.diagonal(i))
        .fold(f64::NEG_INFINITY, f64::max);
    if let Some((flat, &v)) = a
        .as_slice()
        .iter()
        .enumerate()
        .find(|(k, v)| **v > 0.0 && !a.is_diagonal_offset(*k))
    {
        let idx: Vec<usize> = a.multi_index(flat).into_iter().map(|i| i + 1).collect();
        return Ok(Classification {
            is_z: false,
            is_strong_m: false,
            eta,
            rho_b: None,
            reason: Some(format!("positive off-diagonal entry {v} at {idx:?}")),
        });
    }
    if eta <= 0.0 {
        return Ok(Classification {
            is_z: true,
            is_strong_m: false,
            eta,
            rho_b: None,
            reason: Some("no positive diagonal entry".into()),
        });
    }
    let mut data = (-a).into_vec();
    for i in 0..a.dim() {
        let off = a.majorization_offset(i, i);
        data[off] += eta;
        // exact zeros where a_{i..i} == eta
        if data[off].abs() < 1e-15 * eta {
            data[off] = 0.0;
        }
    }
    let b = DenseTensor::new(a.order(), a.dim(), data)?;
    let est = spectral_radius(&b, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    let (is_strong_m, reason) = if est.upper < eta {
        (true, None)
    } else if est.lower >= eta {
        (false, Some(format!("rho(B) = {} >= eta = {eta}", est.rho)))
    } else {
        (
            false,
            Some(format!(
                "inconclusive: eta = {eta} inside [{}, {}]",
                est.lower, est.upper
            )),
        )
    };
    Ok(Classification {
        is_z: true,
        is_strong_m,
        eta,
        rho_b: Some(est),
        reason,
    })
}

/// Positive certificate for a strong M-tensor: the solution `x > 0` of
/// `A x^{m-1} = 1`, computed by the Jacobi splitting. `None` when the solve
/// does not converge to a positive vector with `A x^{m-1} > 0`.
pub fn m_certificate(a: &DenseTensor) -> Result<Option<Vec<f64>>> {
    let ones = vec![1.0; a.dim()];
    let norm = match normalize(a, &ones) {
        Ok(norm) => norm,
        Err(Error::Normalization { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let split = make_splitting(
        &norm.tensor,
        &PreconditionerSpec::default(),
        SplittingVariant::JacobiE2,
    )?;
    let (x, report) = solve(&split, a, &ones, &norm.rhs, &SolveOptions::default())?;
    if report.status != Status::Converged || x.iter().any(|&v| v <= 0.0) {
        return Ok(None);
    }
    let ax = contract(a, &x)?;
    Ok(ax.iter().all(|&v| v > 0.0).then_some(x))
}
