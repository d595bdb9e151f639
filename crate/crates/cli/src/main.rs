//! `liegyro`: simulate, compare and verify free symmetric-top solutions.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification or comparison
//! failure, 3 numerical failure.

mod commands;
mod config;
mod error;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Args, Parser, Subcommand};
use liegyro::verify::{seed_from_env, Suite};

use commands::Format;
use config::ConfigFile;
use error::CliError;
use spec::{Method, RawRun, RunSpec};

#[derive(Parser, Debug)]
#[command(name = "liegyro", version, about = "Free symmetric top: closed form, Lie series and RK4")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a trajectory computed by one method (or all three)
    Simulate(SimulateArgs),
    /// Per-sample differences between the three methods
    Compare(CompareArgs),
    /// Run the built-in verification suites
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// Flat key = value file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Principal moments I1,I2,I3
    #[arg(long, allow_hyphen_values = true)]
    inertia: Option<String>,
    /// Angular momentum m1,m2,m3 (rigid mode: R0 = identity, Ω0 = m/I)
    #[arg(long, allow_hyphen_values = true)]
    momentum: Option<String>,
    /// Initial body angular velocity
    #[arg(long, allow_hyphen_values = true)]
    omega0: Option<String>,
    /// Initial rotation, nine values row-major (default identity)
    #[arg(long, allow_hyphen_values = true)]
    r0: Option<String>,
    #[arg(long)]
    t_end: Option<String>,
    /// Number of equally spaced samples on [0, t_end], at least 2
    #[arg(long)]
    samples: Option<String>,
    /// Lie-series order
    #[arg(long)]
    order: Option<String>,
    /// Lie-series per-step tolerance
    #[arg(long)]
    abs_tol: Option<String>,
    #[arg(long)]
    step_safety: Option<String>,
    /// RK4 step
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// closed, lie, rk4 or all
    #[arg(long)]
    method: Option<String>,
    /// Add a generation timestamp to the metadata
    #[arg(long)]
    timestamp: bool,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// kernel, lemma1, coeffs, flow, geometry or all
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Prepared {
    spec: RunSpec,
    out: Option<PathBuf>,
    format: Format,
}

fn load(path: &Option<PathBuf>) -> Result<ConfigFile, CliError> {
    match path {
        Some(p) => ConfigFile::load(&p.to_string_lossy()),
        None => Ok(ConfigFile::default()),
    }
}

fn prepare(args: RunArgs, method: Option<String>, default: Method) -> Result<Prepared, CliError> {
    let file = load(&args.config)?;
    let out = args.out.or_else(|| file.get("out").map(PathBuf::from));
    let format = match file.pick(args.format, "format") {
        Some(f) => Format::parse(&f)?,
        None => match out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            _ => Format::Csv,
        },
    };
    let raw = RawRun {
        method,
        inertia: args.inertia,
        momentum: args.momentum,
        omega0: args.omega0,
        r0: args.r0,
        t_end: args.t_end,
        samples: args.samples,
        order: args.order,
        abs_tol: args.abs_tol,
        step_safety: args.step_safety,
        dt: args.dt,
    };
    Ok(Prepared { spec: RunSpec::build(raw, &file, default)?, out, format })
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(a) => {
            let p = prepare(a.run, a.method, Method::Closed)?;
            let text = commands::simulate(&p.spec, p.out.as_deref(), p.format, a.timestamp)?;
            print!("{text}");
            Ok(())
        }
        Command::Compare(a) => {
            let mut p = prepare(a.run, None, Method::All)?;
            p.spec.method = Method::All;
            if p.spec.diag().is_none() {
                return Err(CliError::Usage("compare needs the closed form, which requires i1 = i2".into()));
            }
            let c = commands::compare(&p.spec)?;
            let text = match p.format {
                Format::Csv => c.to_csv(),
                Format::Json => c.to_json(),
            };
            emit(&text, p.out.as_ref())?;
            let (lie, rk4) = (c.closed_lie(), c.closed_rk4());
            if lie > commands::LIE_THRESHOLD || rk4 > commands::RK4_THRESHOLD {
                return Err(CliError::Verification(format!(
                    "closed-vs-lie {lie:.3e} (limit {:.0e}), closed-vs-rk4 {rk4:.3e} (limit {:.0e})",
                    commands::LIE_THRESHOLD,
                    commands::RK4_THRESHOLD
                )));
            }
            Ok(())
        }
        Command::Verify(a) => {
            let file = load(&a.config)?;
            let suite: Suite = file
                .pick(a.suite, "suite")
                .unwrap_or_else(|| "all".into())
                .parse()
                .map_err(CliError::Usage)?;
            let seed = seed_from_env().map_err(CliError::Usage)?;
            let out = a.out.or_else(|| file.get("out").map(PathBuf::from));
            let (text, ok) = commands::verify(suite, seed);
            emit(&text, out.as_ref())?;
            if ok {
                Ok(())
            } else {
                Err(CliError::Verification("one or more checks failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("liegyro: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
