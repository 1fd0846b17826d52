//! Seeded simulation runs, CSV output and the inspection commands behind
//! the `branesim` binary.

use std::io::{self, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::encoding::{decode_machine, machine_init, Brane, ReactionKind};
use crate::gsam::{Located, Machine, NodeName};
use crate::oracle::measure;
use crate::rates::{RateMap, RatesError};
use crate::syntax::{canonicalize_system, parse_system, ActionName, CanonSys, ParseError, System};

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub max_time: Option<f64>,
    pub max_steps: Option<u64>,
    pub runs: u32,
    pub normalize: bool,
    /// Take a census at the start and after every `k` steps.
    pub census_every: Option<u64>,
    /// Recompute every propensity after each step.
    pub check: bool,
}

impl SimConfig {
    pub fn steps(seed: u64, max_steps: u64) -> Self {
        SimConfig {
            seed,
            max_time: None,
            max_steps: Some(max_steps),
            runs: 1,
            normalize: false,
            census_every: None,
            check: false,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.max_time.is_none() && self.max_steps.is_none() {
            return Err(SimError::Config("set a time or step limit".into()));
        }
        if self.runs == 0 {
            return Err(SimError::Config("at least one run is required".into()));
        }
        if self.max_time.is_some_and(|t| t.is_nan() || t < 0.0) {
            return Err(SimError::Config("time limit must be nonnegative".into()));
        }
        if self.census_every == Some(0) {
            return Err(SimError::Config("census interval must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub run: u32,
    pub step: u64,
    pub time: f64,
    pub kind: ReactionKind,
    pub name: ActionName,
    pub propensity: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CensusRecord {
    pub run: u32,
    pub time: f64,
    pub outer: NodeName,
    pub complex: String,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stop {
    Deadlock,
    StepLimit,
    TimeLimit,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub run: u32,
    pub trace: Vec<TraceRecord>,
    pub census: Vec<CensusRecord>,
    pub final_state: CanonSys,
    pub final_time: f64,
    pub stop: Stop,
    pub peak_species: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("rates error: {0}")]
    Rates(#[from] RatesError),
    #[error("run {run}, step {step}: {message}\n{state}")]
    Invariant {
        run: u32,
        step: u64,
        message: String,
        state: String,
    },
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl SimError {
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Parse(_) => 1,
            SimError::Rates(_) => 2,
            SimError::Invariant { .. } => 3,
            SimError::Config(_) | SimError::Io(_) => 4,
        }
    }
}

/// SplitMix64 finaliser, used to derive independent per-run seeds.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn run_rng(seed: u64, run: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed.wrapping_add(run as u64)))
}

pub fn load(system: &str, rates: Option<&str>) -> Result<(System, RateMap), SimError> {
    let p = parse_system(system)?;
    let r = match rates {
        Some(text) => RateMap::parse(text)?,
        None => RateMap::default(),
    };
    Ok((p, r))
}

fn dump(machine: &Machine<Brane>) -> String {
    let mut out = format!("time {}\n", machine.time());
    for (s, n) in machine.population().entries() {
        out.push_str(&format!("  {n} x {s}\n"));
    }
    out
}

fn census(machine: &Machine<Brane>, run: u32, out: &mut Vec<CensusRecord>) {
    for (s, n) in machine.population().positive() {
        out.push(CensusRecord {
            run,
            time: machine.time(),
            outer: s.outer(),
            complex: s.complex().to_string(),
            count: n,
        });
    }
}

/// One run with the seed derived from `config.seed` and `run`.
pub fn simulate_run(
    p: &System,
    rates: &RateMap,
    config: &SimConfig,
    run: u32,
) -> Result<RunOutput, SimError> {
    let mut rng = run_rng(config.seed, run);
    let mut machine = machine_init(p, rates, &mut rng, config.normalize);
    let mut trace = Vec::new();
    let mut snapshots = Vec::new();
    let mut peak = machine.population().species_count();
    if config.census_every.is_some() {
        census(&machine, run, &mut snapshots);
    }
    let invariant = |step: u64, message: String, machine: &Machine<Brane>| SimError::Invariant {
        run,
        step,
        message,
        state: dump(machine),
    };
    let mut step = 0u64;
    let stop = loop {
        if config.max_steps.is_some_and(|n| step >= n) {
            break Stop::StepLimit;
        }
        let Some((_, _, t)) = machine.next() else {
            break Stop::Deadlock;
        };
        if config.max_time.is_some_and(|limit| t > limit) {
            break Stop::TimeLimit;
        }
        let firing = match machine.step(&mut rng) {
            Ok(Some(f)) => f,
            Ok(None) => break Stop::Deadlock,
            Err(e) => {
                return Err(invariant(step + 1, e.to_string(), &machine));
            }
        };
        step += 1;
        let label = firing.reaction.label();
        trace.push(TraceRecord {
            run,
            step,
            time: firing.time,
            kind: label.kind,
            name: label.name.clone(),
            propensity: firing.propensity,
        });
        if config.check {
            machine
                .check_invariants()
                .map_err(|m| invariant(step, m, &machine))?;
        }
        peak = peak.max(machine.population().species_count());
        if config.census_every.is_some_and(|k| step.is_multiple_of(k)) {
            census(&machine, run, &mut snapshots);
        }
    };
    let final_state =
        decode_machine(&machine).map_err(|e| invariant(step, e.to_string(), &machine))?;
    Ok(RunOutput {
        run,
        trace,
        census: snapshots,
        final_state,
        final_time: machine.time(),
        stop,
        peak_species: peak,
    })
}

/// All runs, computed in parallel and returned in run order.
pub fn run_simulation(
    p: &System,
    rates: &RateMap,
    config: &SimConfig,
) -> Result<Vec<RunOutput>, SimError> {
    config.validate()?;
    (0..config.runs)
        .into_par_iter()
        .map(|run| simulate_run(p, rates, config, run))
        .collect()
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

pub const TRACE_HEADER: &str = "run,step,time,kind,name,propensity";
pub const CENSUS_HEADER: &str = "run,time,outer,complex,count";

pub fn write_trace<W: Write>(out: &mut W, runs: &[RunOutput]) -> io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for r in runs {
        for t in &r.trace {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                t.run,
                t.step,
                t.time,
                t.kind,
                csv_field(t.name.as_str()),
                t.propensity
            )?;
        }
    }
    Ok(())
}

pub fn write_census<W: Write>(out: &mut W, runs: &[RunOutput]) -> io::Result<()> {
    writeln!(out, "{CENSUS_HEADER}")?;
    for r in runs {
        for c in &r.census {
            writeln!(
                out,
                "{},{},{},{},{}",
                c.run,
                c.time,
                c.outer,
                csv_field(&c.complex),
                c.count
            )?;
        }
    }
    Ok(())
}

/// Every nonzero entry of the measure of `p`, one per line.
pub fn run_oracle(p: &System, rates: &RateMap) -> String {
    measure::<num_rational::BigRational>(p, rates).to_string()
}

/// Canonical form and basic statistics of a parsed system.
pub fn check(p: &System) -> String {
    let canon = canonicalize_system(p);
    format!(
        "canonical: {canon}\ncells: {}\nsize: {}\n",
        canon.cell_count(),
        p.size()
    )
}
