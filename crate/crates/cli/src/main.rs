use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use msplit_core::bench::{self, generate_example, ExampleSpec, Method, Sweep};
use msplit_core::io::{load_tensor, load_vector};
use msplit_core::precond::{check_conditions, classify, ConditionReading, Param};
use msplit_core::solver::{solve_system, SolveOptions, Status};
use msplit_core::spectral::spectral_radius;
use msplit_core::{PrecondKind, PreconditionerSpec};
use serde_json::json;

/// Preconditioned splitting solvers for multilinear systems A x^(m-1) = b.
#[derive(Parser)]
#[command(name = "msplit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a system read from JSON files.
    Solve(SolveArgs),
    /// Run a method/parameter sweep on a built-in example.
    Bench(BenchArgs),
    /// Estimate the spectral radius of a nonnegative tensor.
    Rho(RhoArgs),
    /// Classify a tensor and evaluate the convergence conditions.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    FullBand,
    UpperOnly,
    LowerOnly,
}

impl From<Kind> for PrecondKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::FullBand => PrecondKind::FullBand,
            Kind::UpperOnly => PrecondKind::UpperOnly,
            Kind::LowerOnly => PrecondKind::LowerOnly,
        }
    }
}

#[derive(clap::Args)]
struct SolveArgs {
    /// Tensor file (dense or COO JSON).
    #[arg(long)]
    tensor: PathBuf,
    /// Right-hand side as a JSON array; all ones when omitted.
    #[arg(long)]
    rhs: Option<PathBuf>,
    /// Method name, e.g. e2, m2, psor, sor, jacobi, pj-baseline.
    #[arg(long, default_value = "e2")]
    method: String,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Defaults to alpha.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 1)]
    s: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 1.2)]
    omega: f64,
    #[arg(long, value_enum, default_value = "full-band")]
    kind: Kind,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Md,
    Json,
}

#[derive(clap::Args)]
struct BenchArgs {
    /// Built-in example: 1, 2 or 3.
    #[arg(long)]
    example: u8,
    /// Dimension for example 2.
    #[arg(long, default_value_t = 30)]
    n: usize,
    /// Comma-separated method names.
    #[arg(long, default_value = "jacobi,gs,sor,e2,m2,psor")]
    methods: String,
    /// LO:STEP:HI, a single value, or a comma list.
    #[arg(long, default_value = "0")]
    alpha_sweep: String,
    /// Independent beta values; beta follows alpha when omitted.
    #[arg(long)]
    beta_sweep: Option<String>,
    #[arg(long, default_value = "1.2")]
    omega_sweep: String,
    #[arg(long, default_value_t = 1)]
    s: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, value_enum, default_value = "full-band")]
    kind: Kind,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
}

#[derive(clap::Args)]
struct RhoArgs {
    #[arg(long)]
    tensor: PathBuf,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reading {
    Literal,
    Banded,
}

#[derive(clap::Args)]
struct CheckArgs {
    #[arg(long)]
    tensor: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Defaults to alpha.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 1)]
    s: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, value_enum, default_value = "literal")]
    reading: Reading,
}

/// Parses `LO:STEP:HI`, `a,b,c` or a single number.
fn parse_sweep(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [lo, step, hi] => {
            let (lo, step, hi): (f64, f64, f64) =
                (lo.trim().parse()?, step.trim().parse()?, hi.trim().parse()?);
            if step.is_nan() || step <= 0.0 || hi < lo {
                bail!("sweep '{text}' needs STEP > 0 and HI >= LO");
            }
            let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
            // round away accumulated binary error, e.g. 0.1 * 3
            Ok((0..count)
                .map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12)
                .collect())
        }
        [single] => single
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .with_context(|| format!("bad number '{v}' in '{text}'"))
            })
            .collect(),
        _ => bail!("sweep '{text}' must be LO:STEP:HI or a comma list"),
    }
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.write_all(b"\n")?;
            Ok(())
        }
    }
}

fn run_solve(args: SolveArgs) -> Result<ExitCode> {
    let a =
        load_tensor(&args.tensor).with_context(|| format!("loading {}", args.tensor.display()))?;
    let b = match &args.rhs {
        Some(p) => load_vector(p).with_context(|| format!("loading {}", p.display()))?,
        None => vec![1.0; a.dim()],
    };
    let method = Method::from_name(&args.method, args.kind.into(), args.omega)?;
    let spec = method.preconditioner(args.alpha, args.beta.unwrap_or(args.alpha), args.s, args.k);
    let opts = SolveOptions {
        tol: args.tol,
        max_iter: args.max_iter,
        x0: None,
    };
    let (x, report) = solve_system(&a, &b, &spec, method.variant, &opts)?;
    let doc = json!({
        "method": method.name,
        "variant": method.variant,
        "preconditioner": spec,
        "solution": x,
        "final_residual": report.final_residual(),
        "report": report,
    });
    write_output(args.out.as_ref(), &serde_json::to_string_pretty(&doc)?)?;
    if report.status == Status::Converged {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "msplit: no convergence ({}) after {} iterations",
            report.status.as_str(),
            report.iterations
        );
        Ok(ExitCode::from(2))
    }
}

fn run_bench(args: BenchArgs) -> Result<ExitCode> {
    let example = match args.example {
        1 => ExampleSpec::One,
        2 => ExampleSpec::Two { n: args.n },
        3 => ExampleSpec::Three,
        other => bail!("unknown example {other}; expected 1, 2 or 3"),
    };
    let (a, b) = generate_example(example)?;
    let omega = parse_sweep(&args.omega_sweep)?;
    let methods = args
        .methods
        .split(',')
        .map(|m| Method::from_name(m.trim(), args.kind.into(), omega[0]))
        .collect::<msplit_core::Result<Vec<_>>>()?;
    let sweep = Sweep {
        alpha: parse_sweep(&args.alpha_sweep)?,
        beta: args.beta_sweep.as_deref().map(parse_sweep).transpose()?,
        s: args.s,
        k: args.k,
        omega,
    };
    let opts = SolveOptions {
        tol: args.tol,
        max_iter: args.max_iter,
        x0: None,
    };
    let rows = bench::run_benchmark(&a, &b, &methods, &sweep, &opts)?;
    let stdout = io::stdout().lock();
    match args.format {
        Format::Csv => bench::write_csv(&rows, stdout)?,
        Format::Json => {
            bench::write_json(&rows, stdout)?;
            println!();
        }
        Format::Md => print!("{}", bench::render_markdown(&rows)),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_rho(args: RhoArgs) -> Result<ExitCode> {
    let t =
        load_tensor(&args.tensor).with_context(|| format!("loading {}", args.tensor.display()))?;
    let est = spectral_radius(&t, args.tol, args.max_iter)?;
    write_output(None, &serde_json::to_string_pretty(&est)?)?;
    Ok(if est.converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn run_check(args: CheckArgs) -> Result<ExitCode> {
    let a =
        load_tensor(&args.tensor).with_context(|| format!("loading {}", args.tensor.display()))?;
    let class = classify(&a)?;
    let spec = PreconditionerSpec {
        kind: PrecondKind::FullBand,
        alpha: Param::Scalar(args.alpha),
        beta: Param::Scalar(args.beta.unwrap_or(args.alpha)),
        s: args.s,
        k: args.k,
    };
    let reading = match args.reading {
        Reading::Literal => ConditionReading::Literal,
        Reading::Banded => ConditionReading::Banded,
    };
    // conditions are stated for the unit-diagonal form
    let unit = msplit_core::precond::normalize(&a, &vec![1.0; a.dim()]).map(|n| n.tensor);
    let conditions = match &unit {
        Ok(t) => Some(check_conditions(t, &spec, reading)?),
        Err(_) => None,
    };
    let doc = json!({
        "is_z_tensor": class.is_z,
        "is_strong_m_tensor": class.is_strong_m,
        "eta": class.eta,
        "rho_b": class.rho_b.as_ref().map(|e| e.rho),
        "reason": class.reason,
        "preconditioner": spec,
        "theory_range": spec.theory_range(),
        "conditions": conditions,
    });
    write_output(None, &serde_json::to_string_pretty(&doc)?)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => run_solve(a),
        Command::Bench(a) => run_bench(a),
        Command::Rho(a) => run_rho(a),
        Command::Check(a) => run_check(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("msplit: {e:#}");
            ExitCode::from(1)
        }
    }
}
