mod compute;
mod params;
mod sweep;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperpf::suites::{run_suite, Suite, CSV_HEADER};

use crate::params::{Params, ParamsError};

/// Environment variable holding the default worker thread count.
const THREADS_ENV: &str = "HYPERPF_THREADS";

const EXIT_SPEC: u8 = 2;
const EXIT_DISAGREE: u8 = 3;

#[derive(Parser)]
#[command(name = "hyperpf", version, about = "Partition functions of beta = L^2, L^2+1 ensembles as hyperpfaffians")]
struct Cli {
    /// Worker threads (default: $HYPERPF_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one partition function and print it as JSON.
    Compute(ComputeArgs),
    /// Run a verification suite and print CSV.
    Verify(VerifyArgs),
    /// Compute Z_N over a range of N and write CSV.
    Sweep(SweepArgs),
}

#[derive(Args, Clone, Default)]
pub struct SpecArgs {
    #[arg(long)]
    pub beta: Option<u32>,
    /// line or circle
    #[arg(long)]
    pub geometry: Option<String>,
    /// gaussian, jacobi, uniform or circular
    #[arg(long)]
    pub weight: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub hi: Option<f64>,
    /// monomial, hermite, legendre or random
    #[arg(long)]
    pub family: Option<String>,
    /// Seed for the random family and for Monte Carlo.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub quad_order: Option<usize>,
    /// auto, none or all
    #[arg(long)]
    pub oracle: Option<String>,
    /// Relative tolerance for oracle agreement.
    #[arg(long)]
    pub tol: Option<f64>,
    /// JSON file with the same keys as the flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    spec: SpecArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args)]
struct SweepArgs {
    /// Inclusive range `A..B`; empty when B < A.
    #[arg(long)]
    n_range: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    spec: SpecArgs,
}

fn init_threads(flag: Option<usize>) -> Result<(), String> {
    let threads = match flag {
        Some(t) => Some(t),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| format!("{THREADS_ENV}={v} is not a count"))?),
            Err(_) => None,
        },
    };
    if let Some(t) = threads {
        if t == 0 {
            return Err("thread count must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn verify(args: &VerifyArgs) -> ExitCode {
    let suite: Suite = match args.suite.parse() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_SPEC);
        }
    };
    let rows = run_suite(suite, args.tol);
    let mut out = std::io::stdout().lock();
    let mut failed = 0;
    let _ = writeln!(out, "{CSV_HEADER}");
    for r in &rows {
        let _ = writeln!(out, "{}", r.to_csv());
        failed += usize::from(!r.pass);
    }
    if failed > 0 {
        eprintln!("{failed} of {} checks failed", rows.len());
        return ExitCode::from(EXIT_DISAGREE);
    }
    ExitCode::SUCCESS
}

fn spec_error(e: ParamsError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_SPEC)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let resolved = match &cli.command {
        Command::Verify(_) => None,
        Command::Compute(args) => Some(Params::resolve(&args.spec, args.n)),
        Command::Sweep(args) => Some(Params::resolve(&args.spec, None)),
    };
    let params = match resolved.transpose() {
        Ok(p) => p,
        Err(e) => return spec_error(e),
    };
    if let Err(e) = init_threads(cli.threads.or(params.as_ref().and_then(|p| p.threads))) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_SPEC);
    }
    match (&cli.command, params) {
        (Command::Verify(args), _) => verify(args),
        (Command::Compute(_), Some(p)) => compute::run(&p),
        (Command::Sweep(args), Some(p)) => sweep::run(&p, &args.n_range, args.out.as_deref()),
        _ => unreachable!("parameters resolved for compute and sweep"),
    }
}
