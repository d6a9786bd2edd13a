use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use irs_ee::exec::{configure_threads, Execution};
use irs_ee::experiment::{
    parse_values, run_sweep, solve_single, verify, write_csv, Algorithm, Axis, ExperimentConfig, Mode, Scenario, Suite,
};
use irs_ee::Error;

const EXIT_CONFIG: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Parser)]
#[command(name = "irs-ee", version, about = "Worst-case energy-efficient IRS element activation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo sweep over one parameter, written as CSV.
    Sweep(SweepArgs),
    /// Solve one random instance and print a report.
    Solve(SolveArgs),
    /// Run the oracle cross-checks.
    Verify(VerifyArgs),
}

/// Flags shared by `sweep` and `solve`.
#[derive(Args)]
struct Common {
    /// TOML file with defaults; flags override its values.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Uncertainty radius as a fraction of the weakest estimated coefficient.
    #[arg(long, value_name = "F")]
    tau: Option<f64>,
    /// Minimum-SNR level as a fraction of the all-on worst case.
    #[arg(long, value_name = "F")]
    nu: Option<f64>,
    /// Phase shifts: c (continuous) or d (quantized).
    #[arg(long, value_name = "c|d")]
    mode: Option<String>,
    /// Phase quantization bits in mode d.
    #[arg(long, value_name = "N")]
    bits: Option<u32>,
    /// Comma-separated algorithms: dp, crbm, exhaustive, all_on.
    #[arg(long, value_name = "LIST")]
    algos: Option<String>,
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core, 1 = run sequentially).
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
    /// Number of IRS elements when it is not the swept parameter.
    #[arg(long, short = 'L', value_name = "N")]
    elements: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Swept parameter.
    #[arg(long, value_name = "L|power|nu|b|tau")]
    axis: Option<String>,
    /// Comma-separated axis values.
    #[arg(long, value_name = "CSV-list", allow_hyphen_values = true)]
    values: Option<String>,
    #[arg(long, value_name = "N")]
    trials: Option<u64>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    /// quantizer, worstcase, dp, crbm or all.
    #[arg(default_value = "all")]
    suite: String,
    /// Random instances per check.
    #[arg(long, value_name = "N", default_value_t = 100)]
    trials: u64,
    #[arg(long, value_name = "N", default_value_t = 1)]
    seed: u64,
    #[arg(long, value_name = "N", default_value_t = 0)]
    threads: usize,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

enum Failure {
    Config(String),
    Verify,
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::InvalidParameter(_) | Error::Io(_) => Failure::Config(e.to_string()),
            other => Failure::Solver(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Sweep(args) => sweep(args),
        Command::Solve(args) => solve(args),
        Command::Verify(args) => run_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY),
        Err(Failure::Solver(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_SOLVER)
        }
    }
}

fn base_config(common: &Common) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(v) = common.tau {
        cfg.tau = v;
    }
    if let Some(v) = common.nu {
        cfg.nu = v;
    }
    if let Some(m) = &common.mode {
        cfg.mode = m.parse()?;
    }
    if let Some(v) = common.bits {
        cfg.bits = v;
    }
    if let Some(list) = &common.algos {
        cfg.algorithms = Algorithm::parse_list(list)?;
    }
    if let Some(v) = common.seed {
        cfg.seed = v;
    }
    if common.out.is_some() {
        cfg.out = common.out.clone();
    }
    if let Some(v) = common.threads {
        cfg.threads = v;
    }
    if let Some(v) = common.elements {
        cfg.elements = v;
    }
    Ok(cfg)
}

fn execution(threads: usize) -> Result<Execution, Failure> {
    configure_threads(threads).map_err(Failure::Config)?;
    Ok(if threads == 1 { Execution::Sequential } else { Execution::Parallel })
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| Failure::Config(format!("cannot create {}: {e}", p.display())))?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let mut cfg = base_config(&args.common)?;
    if let Some(a) = &args.axis {
        cfg.axis = a.parse()?;
    }
    if let Some(v) = &args.values {
        cfg.values = parse_values(v)?;
    }
    if let Some(v) = args.trials {
        cfg.trials = v;
    }
    cfg.validate()?;
    let exec = execution(cfg.threads)?;
    let records = run_sweep(&cfg, exec)?;
    write_csv(&records, output(&cfg.out)?)?;
    let failed: Vec<_> = records.iter().filter(|r| r.errors > 0).collect();
    if failed.is_empty() {
        return Ok(());
    }
    for r in &failed {
        eprintln!(
            "{}={} {}: {} of {} trials failed: {}",
            r.axis,
            r.axis_value,
            r.algorithm,
            r.errors,
            r.trials,
            r.first_error.as_deref().unwrap_or("")
        );
    }
    Err(Failure::Solver("some trials returned errors".into()))
}

fn solve(args: SolveArgs) -> Result<(), Failure> {
    let mut cfg = base_config(&args.common)?;
    if args.common.algos.is_none() && cfg.algorithms.len() != 1 {
        cfg.algorithms = vec![match cfg.mode {
            Mode::Continuous => Algorithm::Dp,
            Mode::Discrete => Algorithm::Crbm,
        }];
    }
    let [algorithm] = cfg.algorithms[..] else {
        return Err(Failure::Config("solve takes exactly one algorithm".into()));
    };
    cfg.axis = Axis::Elements;
    cfg.values = vec![cfg.elements as f64];
    cfg.trials = 1;
    cfg.validate()?;
    let exec = execution(cfg.threads)?;
    let scenario = Scenario::new(cfg.system)?;
    let spec = cfg.spec_at(cfg.elements as f64);
    let report = solve_single(&scenario, &spec, cfg.seed, algorithm, exec)?;
    let mut out = output(&cfg.out)?;
    write!(out, "{report}").and_then(|_| out.flush()).map_err(|e| Failure::Config(e.to_string()))
}

fn run_verify(args: VerifyArgs) -> Result<(), Failure> {
    let suite: Suite = args.suite.parse()?;
    if args.trials == 0 {
        return Err(Failure::Config("trials must be at least 1".into()));
    }
    let exec = execution(args.threads)?;
    let report = verify(suite, args.seed, args.trials, exec)?;
    let mut out = output(&args.out)?;
    write!(out, "{report}").and_then(|_| out.flush()).map_err(|e| Failure::Config(e.to_string()))?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}
