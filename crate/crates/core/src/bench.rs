//! Test systems and parameter sweeps comparing splitting methods.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precond::{PrecondKind, PreconditionerSpec};
use crate::solver::{solve_system, SolveOptions, Status};
use crate::splitting::SplittingVariant;
use crate::tensor::DenseTensor;

/// Built-in test systems, all of order 3 with `b = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleSpec {
    /// A fixed 3-dimensional Z-tensor with unit diagonal.
    One,
    /// `A = n²·I − 0.01·B`, `B` a sparse nonnegative tensor with a
    /// Hilbert-like majorization.
    Two { n: usize },
    /// `A = 2000·I − B` with `b_{ijk} = |tan(i + j + k)|`, `n = 10`.
    Three,
}

/// Mode-1/mode-2 slices `A(:, :, k)` of the first example, rows `i`, columns `j`.
const EXAMPLE_ONE_SLICES: [[[f64; 3]; 3]; 3] = [
    [
        [1.00, -0.01, -0.02],
        [-0.02, -0.03, -0.04],
        [-0.04, -0.05, -0.06],
    ],
    [
        [-0.06, -0.07, -0.08],
        [-0.08, 1.00, -0.09],
        [-0.01, -0.02, -0.03],
    ],
    [
        [-0.03, -0.04, -0.05],
        [-0.05, -0.06, -0.07],
        [-0.07, -0.08, 1.00],
    ],
];

/// Returns the raw system `(A, b)`; no normalization is applied.
pub fn generate_example(spec: ExampleSpec) -> Result<(DenseTensor, Vec<f64>)> {
    let a = match spec {
        ExampleSpec::One => {
            DenseTensor::from_fn(3, 3, |idx| EXAMPLE_ONE_SLICES[idx[2]][idx[0]][idx[1]])?
        }
        ExampleSpec::Two { n } => {
            if n < 2 {
                return Err(Error::Config(format!("example two needs n >= 2, got {n}")));
            }
            let mut b = DenseTensor::zeros(3, n)?;
            for i in 0..n {
                for j in 0..n {
                    b.set(&[i, j, j], 1.0 / (i + j + 1) as f64);
                }
            }
            for i in 1..n {
                for (p, q) in [(i - 1, i), (i, i - 1), (i + 1, i), (i, i + 1)] {
                    if p < n && q < n {
                        if p == q {
                            return Err(Error::Config(format!(
                                "special entry ({}, {p1}, {p1}) overlaps the majorization",
                                i + 1,
                                p1 = p + 1
                            )));
                        }
                        b.set(&[i, p, q], 1.0 / 3.0);
                    }
                }
            }
            let n2 = (n * n) as f64;
            DenseTensor::from_fn(3, n, |idx| {
                let diag = if idx[0] == idx[1] && idx[1] == idx[2] {
                    n2
                } else {
                    0.0
                };
                diag - 0.01 * b.get(idx)
            })?
        }
        ExampleSpec::Three => DenseTensor::from_fn(3, 10, |idx| {
            // 1-based indices sum to (i + j + k) + 3
            let sum = (idx[0] + idx[1] + idx[2] + 3) as f64;
            let diag = if idx[0] == idx[1] && idx[1] == idx[2] {
                2000.0
            } else {
                0.0
            };
            diag - sum.tan().abs()
        })?,
    };
    let n = a.dim();
    Ok((a, vec![1.0; n]))
}

/// A benchmarked method: splitting variant plus the preconditioner family
/// it is paired with.
#[derive(Debug, Clone, PartialEq)]
pub struct Method {
    pub name: String,
    pub variant: SplittingVariant,
    /// `None` for the unpreconditioned classical methods.
    pub kind: Option<PrecondKind>,
}

impl Method {
    pub const NAMES: [&'static str; 17] = [
        "jacobi",
        "gs",
        "sor",
        "e1",
        "e2",
        "e3",
        "e4",
        "e5",
        "m1",
        "m2",
        "m3",
        "m4",
        "m5",
        "psor",
        "pj-baseline",
        "pgs-baseline",
        "psor-baseline",
    ];

    /// Parses a method name. Banded methods (`e1`..`e5`, `m1`..`m5`,
    /// `psor`) use `kind`; `omega` only matters to SOR-type methods.
    pub fn from_name(name: &str, kind: PrecondKind, omega: f64) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        let (variant, kind) = match lower.as_str() {
            "jacobi" => (SplittingVariant::JacobiE2, None),
            "gs" => (SplittingVariant::GaussSeidelM2, None),
            "sor" => (SplittingVariant::Sor { omega }, None),
            "psor" => (SplittingVariant::PrecondSor { omega }, Some(kind)),
            "pj-baseline" => (
                SplittingVariant::DiagonalJacobi,
                Some(PrecondKind::BaselineRow),
            ),
            "pgs-baseline" => (
                SplittingVariant::DiagonalGaussSeidel,
                Some(PrecondKind::BaselineRow),
            ),
            "psor-baseline" => (
                SplittingVariant::DiagonalSor { omega },
                Some(PrecondKind::BaselineColumn),
            ),
            other => {
                let full = match other {
                    "e1" | "e2" | "e3" | "e4" | "e5" => format!("{other}f{}", &other[1..]),
                    "m1" | "m2" | "m3" | "m4" | "m5" => format!("{other}n{}", &other[1..]),
                    _ => other.to_string(),
                };
                let variant = SplittingVariant::from_name(&full, omega).map_err(|_| {
                    Error::Config(format!(
                        "unknown method '{name}', expected one of {}",
                        Self::NAMES.join(", ")
                    ))
                })?;
                if variant.is_diagonal_based() || matches!(variant, SplittingVariant::Sor { .. }) {
                    return Err(Error::Config(format!("unknown method '{name}'")));
                }
                (variant, Some(kind))
            }
        };
        variant.validate()?;
        Ok(Self {
            name: lower,
            variant,
            kind,
        })
    }

    pub fn uses_omega(&self) -> bool {
        self.variant.omega().is_some()
    }

    /// The preconditioner for parameters `(α, β, s, k)`.
    pub fn preconditioner(&self, alpha: f64, beta: f64, s: usize, k: usize) -> PreconditionerSpec {
        match self.kind {
            None => PreconditionerSpec::default(),
            Some(PrecondKind::BaselineRow) => PreconditionerSpec::baseline_row(alpha),
            Some(PrecondKind::BaselineColumn) => PreconditionerSpec::baseline_column(beta),
            Some(kind) => PreconditionerSpec {
                kind,
                ..PreconditionerSpec::full_band(alpha, beta, s, k)
            },
        }
    }
}

fn default_omega() -> Vec<f64> {
    vec![1.2]
}

fn default_band() -> usize {
    1
}

/// Parameter grid for [`run_benchmark`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sweep {
    pub alpha: Vec<f64>,
    /// Independent β values; when absent β is tied to α.
    #[serde(default)]
    pub beta: Option<Vec<f64>>,
    #[serde(default = "default_band")]
    pub s: usize,
    #[serde(default = "default_band")]
    pub k: usize,
    /// Relaxation factors, applied only to SOR-type methods.
    #[serde(default = "default_omega")]
    pub omega: Vec<f64>,
}

impl Default for Sweep {
    fn default() -> Self {
        Self {
            alpha: vec![0.0],
            beta: None,
            s: 1,
            k: 1,
            omega: default_omega(),
        }
    }
}

impl Sweep {
    fn pairs(&self) -> Vec<(f64, f64)> {
        match &self.beta {
            None => self.alpha.iter().map(|&a| (a, a)).collect(),
            Some(betas) => self
                .alpha
                .iter()
                .flat_map(|&a| betas.iter().map(move |&b| (a, b)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub method: String,
    pub alpha: f64,
    pub beta: f64,
    pub s: usize,
    pub k: usize,
    pub omega: Option<f64>,
    pub iterations: usize,
    pub time_s: f64,
    /// A solver status, or `error: ...` when the method could not be set up.
    pub status: String,
}

impl BenchmarkRow {
    pub fn converged(&self) -> bool {
        self.status == Status::Converged.as_str()
    }
}

/// Solves `a x^{m-1} = b` with every method over the sweep grid. Setup
/// failures (bad band offsets, undefined variants) are recorded in the
/// row's status instead of aborting the run.
pub fn run_benchmark(
    a: &DenseTensor,
    b: &[f64],
    methods: &[Method],
    sweep: &Sweep,
    opts: &SolveOptions,
) -> Result<Vec<BenchmarkRow>> {
    if sweep.alpha.is_empty() || sweep.omega.is_empty() {
        return Err(Error::Config(
            "sweep needs at least one alpha and one omega".into(),
        ));
    }
    let mut rows = Vec::new();
    for method in methods {
        let omegas: Vec<Option<f64>> = if method.uses_omega() {
            sweep.omega.iter().map(|&w| Some(w)).collect()
        } else {
            vec![None]
        };
        for (alpha, beta) in sweep.pairs() {
            for &omega in &omegas {
                let variant = match (method.variant, omega) {
                    (SplittingVariant::Sor { .. }, Some(w)) => SplittingVariant::Sor { omega: w },
                    (SplittingVariant::PrecondSor { .. }, Some(w)) => {
                        SplittingVariant::PrecondSor { omega: w }
                    }
                    (SplittingVariant::DiagonalSor { .. }, Some(w)) => {
                        SplittingVariant::DiagonalSor { omega: w }
                    }
                    (v, _) => v,
                };
                let spec = method.preconditioner(alpha, beta, sweep.s, sweep.k);
                let (iterations, time_s, status) = match solve_system(a, b, &spec, variant, opts) {
                    Ok((_, rep)) => (
                        rep.iterations,
                        rep.elapsed_seconds,
                        rep.status.as_str().to_string(),
                    ),
                    Err(e) => (0, 0.0, format!("error: {e}")),
                };
                rows.push(BenchmarkRow {
                    method: method.name.clone(),
                    alpha,
                    beta,
                    s: sweep.s,
                    k: sweep.k,
                    omega,
                    iterations,
                    time_s,
                    status,
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[BenchmarkRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Format(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[BenchmarkRow], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, rows).map_err(|e| Error::Format(e.to_string()))
}

/// Markdown table; non-converged runs show `†` in place of an iteration count.
pub fn render_markdown(rows: &[BenchmarkRow]) -> String {
    let mut s = String::from(
        "| method | alpha | beta | s | k | omega | iterations | time (s) | status |\n",
    );
    s.push_str("|---|---|---|---|---|---|---|---|---|\n");
    for r in rows {
        let omega = r.omega.map(|w| w.to_string()).unwrap_or_else(|| "-".into());
        let iters = if r.converged() {
            r.iterations.to_string()
        } else {
            "†".into()
        };
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} | {} | {:.4} | {} |",
            r.method, r.alpha, r.beta, r.s, r.k, omega, iters, r.time_s, r.status
        );
    }
    s
}
