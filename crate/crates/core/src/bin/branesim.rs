use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use branesim::adequacy::{run_cases, TermGenerator};
use branesim::sim::{self, SimConfig, SimError};

#[derive(Parser)]
#[command(
    name = "branesim",
    version,
    about = "Stochastic Brane Calculus simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a system.
    Run {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        rates: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_time: Option<f64>,
        #[arg(long)]
        max_steps: Option<u64>,
        #[arg(long, default_value_t = 1)]
        runs: u32,
        /// Trace CSV; standard output when absent.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, requires = "census_every")]
        census: Option<PathBuf>,
        #[arg(long, requires = "census")]
        census_every: Option<u64>,
        #[arg(long)]
        normalize: bool,
        /// Verify every stored propensity after each step.
        #[arg(long)]
        check: bool,
    },
    /// Print the measure of a system.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        rates: Option<PathBuf>,
    },
    /// Parse a system and print its canonical form.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    /// Compare machine and oracle on generated systems.
    Adequacy {
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
    },
}

fn read(path: &Path) -> Result<String, SimError> {
    fs::read_to_string(path)
        .map_err(|e| SimError::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load(
    input: &Path,
    rates: Option<&Path>,
) -> Result<(branesim::syntax::System, branesim::rates::RateMap), SimError> {
    let system = read(input)?;
    let rates = rates.map(read).transpose()?;
    sim::load(&system, rates.as_deref())
}

fn execute(command: Command) -> Result<ExitCode, SimError> {
    let stdout = io::stdout();
    match command {
        Command::Run {
            input,
            rates,
            seed,
            max_time,
            max_steps,
            runs,
            trace,
            census,
            census_every,
            normalize,
            check,
        } => {
            let (p, r) = load(&input, rates.as_deref())?;
            let config = SimConfig {
                seed,
                max_time,
                max_steps,
                runs,
                normalize,
                census_every,
                check,
            };
            let outputs = sim::run_simulation(&p, &r, &config)?;
            match trace {
                Some(path) => sim::write_trace(&mut BufWriter::new(File::create(path)?), &outputs)?,
                None => sim::write_trace(&mut stdout.lock(), &outputs)?,
            }
            if let Some(path) = census {
                let mut w = BufWriter::new(File::create(path)?);
                sim::write_census(&mut w, &outputs)?;
                w.flush()?;
            }
        }
        Command::Oracle { input, rates } => {
            let (p, r) = load(&input, rates.as_deref())?;
            write!(stdout.lock(), "{}", sim::run_oracle(&p, &r))?;
        }
        Command::Check { input } => {
            let (p, _) = load(&input, None)?;
            write!(stdout.lock(), "{}", sim::check(&p))?;
        }
        Command::Adequacy {
            cases,
            seed,
            max_depth,
        } => {
            let report = run_cases(&TermGenerator::with_depth(max_depth), cases, seed);
            let mut out = stdout.lock();
            for failure in &report.failures {
                write!(out, "{failure}")?;
            }
            writeln!(
                out,
                "{} cases, {} transition classes, {} failures",
                report.cases,
                report.transitions,
                report.failures.len()
            )?;
            if !report.failures.is_empty() {
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("branesim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
