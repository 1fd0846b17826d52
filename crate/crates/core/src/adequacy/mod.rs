//! Executable adequacy checks between the machine and the reference
//! semantics, on single systems or on generated batches.
//!
//! Every live reaction of the initial machine state is fired once from a
//! fresh copy of that state. Transitions are grouped by the congruence
//! class of the decoded result and their propensities summed; the sums are
//! compared with the `id` rates of the measure.

mod generate;
mod shrink;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::encoding::{decode_machine, machine_init, Brane};
use crate::gsam::Machine;
use crate::oracle::{measure, reduce_all};
use crate::rates::RateMap;
use crate::syntax::{CanonSys, System};

pub use generate::{shuffle, TermGenerator};
pub use shrink::{shrink, shrink_candidates};

/// Exact rational arithmetic, or floats compared with a relative tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    Exact,
    Float { tolerance: f64 },
}

impl Mode {
    pub const FLOAT: Mode = Mode::Float { tolerance: 1e-9 };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Property {
    Soundness,
    Progress,
    Completeness,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Soundness => "soundness",
            Property::Progress => "progress",
            Property::Completeness => "completeness",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub property: Property,
    pub system: System,
    pub target: Option<CanonSys>,
    pub machine_rate: String,
    pub oracle_rate: String,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} fails for {}", self.property, self.system)?;
        if let Some(t) = &self.target {
            writeln!(f, "  target  {t}")?;
        }
        writeln!(f, "  machine {}", self.machine_rate)?;
        writeln!(f, "  oracle  {}", self.oracle_rate)?;
        if !self.detail.is_empty() {
            writeln!(f, "  {}", self.detail)?;
        }
        Ok(())
    }
}

/// One machine transition out of the initial state.
#[derive(Clone, Debug)]
pub struct Transition {
    pub label: String,
    pub target: CanonSys,
    pub exact: BigRational,
    pub float: f64,
}

fn exact_propensity(
    machine: &Machine<Brane>,
    reaction: &crate::encoding::BraneReaction,
) -> BigRational {
    let combos = BigRational::from_integer(BigInt::from(machine.combinations(reaction)));
    machine.calculus().exact_rate(reaction.label()) * combos
}

/// Fires each live reaction of `machine` once, each from its own copy.
pub fn transitions(machine: &Machine<Brane>) -> Result<Vec<Transition>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut out = Vec::new();
    for reaction in machine.live_reactions() {
        let mut copy = machine.clone();
        let firing = copy.fire(&reaction, &mut rng).map_err(|e| e.to_string())?;
        copy.check_invariants()?;
        let target = decode_machine(&copy).map_err(|e| e.to_string())?;
        let label = reaction.label();
        out.push(Transition {
            label: format!("{}<{}> x{}", label.kind, label.name, label.factor),
            target,
            exact: exact_propensity(machine, &reaction),
            float: firing.propensity,
        });
    }
    Ok(out)
}

/// Machine and oracle rates per successor class, for one system.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub system: System,
    pub machine_exact: BTreeMap<CanonSys, BigRational>,
    pub machine_float: BTreeMap<CanonSys, f64>,
    pub oracle_exact: BTreeMap<CanonSys, BigRational>,
    pub oracle_float: BTreeMap<CanonSys, f64>,
    pub reductions: BTreeSet<CanonSys>,
}

impl Comparison {
    pub fn new(p: &System, rates: &RateMap) -> Result<Self, Box<Counterexample>> {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let machine = machine_init(p, rates, &mut rng, false);
        let fail = |detail: String| {
            Box::new(Counterexample {
                property: Property::Soundness,
                system: p.clone(),
                target: None,
                machine_rate: String::new(),
                oracle_rate: String::new(),
                detail,
            })
        };
        if let Err(e) = machine.check_invariants() {
            return Err(fail(e));
        }
        let mut machine_exact: BTreeMap<CanonSys, BigRational> = BTreeMap::new();
        let mut machine_float: BTreeMap<CanonSys, f64> = BTreeMap::new();
        for t in transitions(&machine).map_err(fail)? {
            *machine_exact
                .entry(t.target.clone())
                .or_insert_with(BigRational::zero) += t.exact;
            *machine_float.entry(t.target).or_insert(0.0) += t.float;
        }
        Ok(Comparison {
            system: p.clone(),
            machine_exact,
            machine_float,
            oracle_exact: measure::<BigRational>(p, rates).id_entries(),
            oracle_float: measure::<f64>(p, rates).id_entries(),
            reductions: reduce_all(p),
        })
    }

    fn counterexample(
        &self,
        property: Property,
        target: &CanonSys,
        mode: Mode,
        detail: &str,
    ) -> Box<Counterexample> {
        let show = |exact: Option<&BigRational>, float: Option<&f64>| match mode {
            Mode::Exact => exact.map_or("none".to_string(), |r| r.to_string()),
            Mode::Float { .. } => float.map_or("none".to_string(), |r| r.to_string()),
        };
        Box::new(Counterexample {
            property,
            system: self.system.clone(),
            target: Some(target.clone()),
            machine_rate: show(
                self.machine_exact.get(target),
                self.machine_float.get(target),
            ),
            oracle_rate: show(self.oracle_exact.get(target), self.oracle_float.get(target)),
            detail: detail.to_string(),
        })
    }

    fn rates_agree(&self, target: &CanonSys, mode: Mode) -> bool {
        match mode {
            Mode::Exact => self.machine_exact.get(target) == self.oracle_exact.get(target),
            Mode::Float { tolerance } => match (
                self.machine_float.get(target),
                self.oracle_float.get(target),
            ) {
                (Some(a), Some(b)) => (a - b).abs() <= tolerance * a.abs().max(b.abs()),
                _ => false,
            },
        }
    }

    /// Every machine transition class has the oracle's rate.
    pub fn soundness(&self, mode: Mode) -> Result<(), Box<Counterexample>> {
        for target in self.machine_exact.keys() {
            if !self.rates_agree(target, mode) {
                return Err(self.counterexample(Property::Soundness, target, mode, ""));
            }
        }
        Ok(())
    }

    /// Every reduct is reached by some machine transition.
    pub fn progress(&self, mode: Mode) -> Result<(), Box<Counterexample>> {
        for target in &self.reductions {
            if !self.machine_exact.contains_key(target) {
                return Err(self.counterexample(
                    Property::Progress,
                    target,
                    mode,
                    "no machine transition",
                ));
            }
        }
        Ok(())
    }

    /// Every successor with positive oracle rate is reached with that rate.
    pub fn completeness(&self, mode: Mode) -> Result<(), Box<Counterexample>> {
        for target in self.oracle_exact.keys() {
            if !self.machine_exact.contains_key(target) {
                return Err(self.counterexample(
                    Property::Completeness,
                    target,
                    mode,
                    "no machine transition",
                ));
            }
            if !self.rates_agree(target, mode) {
                return Err(self.counterexample(Property::Completeness, target, mode, ""));
            }
        }
        Ok(())
    }

    pub fn all(&self, mode: Mode) -> Result<(), Box<Counterexample>> {
        self.soundness(mode)?;
        self.progress(mode)?;
        self.completeness(mode)
    }
}

pub fn check_soundness(p: &System, rates: &RateMap, mode: Mode) -> Result<(), Box<Counterexample>> {
    Comparison::new(p, rates)?.soundness(mode)
}

pub fn check_progress(p: &System, rates: &RateMap) -> Result<(), Box<Counterexample>> {
    Comparison::new(p, rates)?.progress(Mode::Exact)
}

pub fn check_completeness(
    p: &System,
    rates: &RateMap,
    mode: Mode,
) -> Result<(), Box<Counterexample>> {
    Comparison::new(p, rates)?.completeness(mode)
}

pub fn check_all(p: &System, rates: &RateMap, mode: Mode) -> Result<(), Box<Counterexample>> {
    Comparison::new(p, rates)?.all(mode)
}

#[derive(Clone, Debug)]
pub struct Report {
    pub cases: usize,
    pub transitions: usize,
    pub failures: Vec<Counterexample>,
}

/// Checks `cases` generated systems in both modes. Case `i` uses a
/// generator seeded from `seed` and `i`; failures are shrunk.
pub fn run_cases(generator: &TermGenerator, cases: usize, seed: u64) -> Report {
    let results: Vec<(usize, Option<Counterexample>)> = (0..cases)
        .into_par_iter()
        .map(|i| {
            let mut rng = crate::sim::run_rng(seed, i as u32);
            let p = generator.system(&mut rng);
            let rates = generator.rates(&mut rng);
            let verdict = Comparison::new(&p, &rates).and_then(|c| {
                c.all(Mode::Exact)?;
                c.all(Mode::FLOAT)?;
                Ok(c.machine_exact.len())
            });
            match verdict {
                Ok(n) => (n, None),
                Err(_) => {
                    let fails = |q: &System| {
                        check_all(q, &rates, Mode::Exact).is_err()
                            || check_all(q, &rates, Mode::FLOAT).is_err()
                    };
                    let small = shrink(&p, fails);
                    let cx = check_all(&small, &rates, Mode::Exact)
                        .and_then(|_| check_all(&small, &rates, Mode::FLOAT))
                        .unwrap_err();
                    (0, Some(*cx))
                }
            }
        })
        .collect();
    Report {
        cases,
        transitions: results.iter().map(|(n, _)| n).sum(),
        failures: results.into_iter().filter_map(|(_, f)| f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_system;

    fn rates() -> RateMap {
        RateMap::default()
            .with_int("n", 10)
            .with_int("m", 5)
            .with_int("k", 5)
    }

    fn both(text: &str) {
        let p = parse_system(text).unwrap();
        let c = Comparison::new(&p, &rates()).unwrap();
        c.all(Mode::Exact).unwrap_or_else(|e| panic!("{e}"));
        c.all(Mode::FLOAT).unwrap_or_else(|e| panic!("{e}"));
    }

    #[test]
    fn pino_cell() {
        let p = parse_system("pino<n>(0)[void]").unwrap();
        let c = Comparison::new(&p, &rates()).unwrap();
        let ten = BigRational::from_integer(10.into());
        assert_eq!(c.machine_exact.get(&CanonSys::void()), Some(&ten));
        assert_eq!(c.oracle_exact.get(&CanonSys::void()), Some(&ten));
        both("pino<n>(0)[void]");
    }

    #[test]
    fn exo_nest() {
        both("coexo<n>[exo<n>[void]]");
        let c =
            Comparison::new(&parse_system("coexo<n>[exo<n>[void]]").unwrap(), &rates()).unwrap();
        assert_eq!(c.machine_float.get(&CanonSys::void()), Some(&10.0));
    }

    #[test]
    fn phago_pair_and_worked_example() {
        both("cophago<n>(exo<m>)[void] o phago<n>[pino<k>(0)[void]]");
        both("2 * cophago<n>(0)|phago<n>[void] o phago<n>[void]");
        both("10000 * phago<n>.exo<m>[phago<k>[void]] o 100 * cophago<n>(coexo<m>)|coexo<m>[phago<k>[void]]");
    }

    #[test]
    fn generated_batch() {
        let report = run_cases(&TermGenerator::default(), 60, 11);
        assert!(report.failures.is_empty(), "{}", report.failures[0]);
        assert!(report.transitions > 60);
    }

    #[test]
    fn counterexamples_are_reported() {
        let p = parse_system("pino<n>(0)[void]").unwrap();
        let c = Comparison::new(&p, &rates()).unwrap();
        let mut broken = c.clone();
        broken
            .oracle_exact
            .insert(CanonSys::void(), BigRational::from_integer(11.into()));
        let e = broken.soundness(Mode::Exact).unwrap_err();
        assert_eq!(
            (e.machine_rate.as_str(), e.oracle_rate.as_str()),
            ("10", "11")
        );
        let mut missing = c;
        missing.machine_exact.clear();
        assert_eq!(
            missing.progress(Mode::Exact).unwrap_err().property,
            Property::Progress
        );
    }
}
