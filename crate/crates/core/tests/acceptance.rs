//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines appear in order; exits nonzero if any criterion
//! fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use branesim::adequacy::{run_cases, shuffle, TermGenerator};
use branesim::encoding::{decode_machine, machine_init, Brane};
use branesim::gsam::Machine;
use branesim::oracle::{measure, reduce_all};
use branesim::rates::RateMap;
use branesim::sim::{load, run_rng, run_simulation, write_census, write_trace, SimConfig};
use branesim::syntax::{canonicalize_system, parse_system, System};

const WORKED: &str =
    "10000 * phago<n>.exo<m>[phago<k>[void]] o 100 * cophago<n>(coexo<m>)|coexo<m>[phago<k>[void]]";

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn exact_propensity(m: &Machine<Brane>, r: &branesim::encoding::BraneReaction) -> BigRational {
    m.calculus().exact_rate(r.label()) * BigRational::from_integer(BigInt::from(m.combinations(r)))
}

fn worked_rates() -> RateMap {
    RateMap::default()
        .with_int("n", 10)
        .with_int("k", 5)
        .with_int("m", 5)
}

/// Live reactions of the initial state, then the reactions that appear
/// when copy-on-write gives the firing reaction private reactants.
fn criterion_1() -> Outcome {
    let limit = Duration::from_secs(1);
    let start = Instant::now();
    let p = parse_system(WORKED).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut m = machine_init(&p, &worked_rates(), &mut rng, false);
    let live = m.live_reactions();
    let initial: Vec<BigRational> = live.iter().map(|r| exact_propensity(&m, r)).collect();
    let expected_initial = vec![BigRational::from_integer(10_000_000.into())];
    let before: BTreeSet<_> = live.iter().cloned().collect();
    m.cow(live[0].reactants(), &mut rng).unwrap();
    let mut regenerated: Vec<BigUint> = m
        .live_reactions()
        .iter()
        .filter(|r| !before.contains(*r))
        .map(|r| exact_propensity(&m, r).to_integer().to_biguint().unwrap())
        .collect();
    regenerated.sort();
    let published: Vec<BigUint> = [990u32, 99_990, 989_901]
        .into_iter()
        .map(BigUint::from)
        .collect();
    let elapsed = start.elapsed();
    let shown: Vec<String> = regenerated.iter().map(|n| n.to_string()).collect();
    outcome(
        initial == expected_initial && regenerated == published && elapsed < limit,
        format!(
            "initial {:?}, regenerated [{}], expected [990, 99990, 989901], {:.3}s (limit 1s)",
            initial.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            shown.join(", "),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let gen = TermGenerator::with_depth(4);
    let failures: Vec<String> = (0..1000u32)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = run_rng(2, i);
            let p = gen.system(&mut rng);
            let m = machine_init(&p, &RateMap::default(), &mut rng, false);
            (decode_machine(&m).ok() != Some(canonicalize_system(&p))).then(|| p.to_string())
        })
        .collect();
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed < Duration::from_secs(10),
        format!(
            "1000 systems of depth <= 4, {} mismatches{}, {:.2}s (limit 10s)",
            failures.len(),
            failures
                .first()
                .map(|f| format!(" e.g. {f}"))
                .unwrap_or_default(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let report = run_cases(&TermGenerator::with_depth(3), 1000, 3);
    let elapsed = start.elapsed();
    outcome(
        report.failures.is_empty() && elapsed < Duration::from_secs(120),
        format!(
            "1000 systems of depth <= 3, {} transition classes, exact and float (rel 1e-9), {} failures{}, {:.2}s (limit 120s)",
            report.transitions,
            report.failures.len(),
            report.failures.first().map(|f| format!(": {f}")).unwrap_or_default(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_4() -> Outcome {
    let gen = TermGenerator::default();
    let support_mismatch = (0..1000u32)
        .into_par_iter()
        .filter(|i| {
            let mut rng = run_rng(4, *i);
            let p = gen.system(&mut rng);
            let rates = gen.rates(&mut rng);
            let support: BTreeSet<_> = measure::<BigRational>(&p, &rates)
                .id_entries()
                .into_keys()
                .collect();
            support != reduce_all(&p)
        })
        .count();
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut congruence_mismatch = 0;
    let mut distinct_pairs = 0;
    for _ in 0..100 {
        let p = gen.system(&mut rng);
        let q = shuffle(&p, &mut rng);
        let rates = gen.rates(&mut rng);
        distinct_pairs += usize::from(p != q);
        if measure::<BigRational>(&p, &rates) != measure::<BigRational>(&q, &rates) {
            congruence_mismatch += 1;
        }
    }
    outcome(
        support_mismatch == 0 && congruence_mismatch == 0,
        format!(
            "support = reductions: {support_mismatch}/1000 mismatches; congruent pairs: {congruence_mismatch}/100 mismatches ({distinct_pairs} syntactically distinct)"
        ),
    )
}

fn criterion_5() -> Outcome {
    let gen = TermGenerator::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut states = 0;
    let mut changed = 0;
    while states < 200 {
        let p = gen.system(&mut rng);
        let mut m = machine_init(&p, &gen.rates(&mut rng), &mut rng, false);
        for _ in 0..rng.gen_range(0..4) {
            if m.step(&mut rng).unwrap().is_none() {
                break;
            }
        }
        let Some(reaction) = m.live_reactions().choose(&mut rng).cloned() else {
            continue;
        };
        let before = decode_machine(&m).unwrap();
        let mut copy = m.clone();
        copy.cow(reaction.reactants(), &mut rng).unwrap();
        states += 1;
        if decode_machine(&copy).unwrap() != before || copy.check_invariants().is_err() {
            changed += 1;
        }
    }

    let mut steps = 0u64;
    let mut errors = Vec::new();
    let mut run = 0u32;
    while steps < 10_000 {
        let mut rng = run_rng(55, run);
        run += 1;
        let p = gen.system(&mut rng);
        let rates = gen.rates(&mut rng);
        let config = SimConfig {
            check: true,
            ..SimConfig::steps(run as u64, 200)
        };
        match run_simulation(&p, &rates, &config) {
            Ok(out) => steps += out[0].trace.len() as u64,
            Err(e) => {
                errors.push(e.to_string());
                break;
            }
        }
    }
    outcome(
        changed == 0 && errors.is_empty(),
        format!(
            "{changed}/200 states changed by cow; {steps} checked steps over {run} runs, {} errors",
            errors.len()
        ),
    )
}

fn mean_first_firing(text: &str, runs: u32) -> f64 {
    let (p, rates) = load(text, Some("n = 10")).unwrap();
    let total: f64 = (0..runs)
        .into_par_iter()
        .map(|i| {
            let mut rng = run_rng(6, i);
            let mut m = machine_init(&p, &rates, &mut rng, false);
            m.step(&mut rng).unwrap().expect("one reaction").time
        })
        .sum();
    total / runs as f64
}

fn criterion_6() -> Outcome {
    let one = mean_first_firing("pino<n>(0)[void]", 100_000);
    let two = mean_first_firing("pino<n>(0)|pino<n>(0)[void]", 100_000);
    let ok = (one - 0.1).abs() <= 0.1 * 0.02 && (two - 0.05).abs() <= 0.05 * 0.02;
    outcome(
        ok,
        format!("means over 1e5 runs: {one:.5} (0.1 +-2%), {two:.5} (0.05 +-2%)"),
    )
}

fn criterion_7() -> Outcome {
    let (p, rates) = load(
        "3 * pino<a>(phago<b>)[cophago<b>(0)[void] o 2 * coexo<c>[exo<c>[void]]] o 2 * cophago<b>(exo<c>)|phago<b>[void]",
        Some("a = 2\nb = 1/3\nc = 0.5"),
    )
    .unwrap();
    let config = SimConfig {
        runs: 4,
        census_every: Some(2),
        ..SimConfig::steps(77, 50)
    };
    let render = || {
        let runs = run_simulation(&p, &rates, &config).unwrap();
        let (mut t, mut c) = (Vec::new(), Vec::new());
        write_trace(&mut t, &runs).unwrap();
        write_census(&mut c, &runs).unwrap();
        (t, c)
    };
    let (a, b) = (render(), render());
    outcome(
        a == b,
        format!(
            "trace {} bytes, census {} bytes, identical: {}",
            a.0.len(),
            a.1.len(),
            a == b
        ),
    )
}

fn criterion_8() -> Outcome {
    let p = System::compose_all(vec![parse_system("pino<n>(0)[void]").unwrap(); 10_000]);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut m = machine_init(&p, &RateMap::default(), &mut rng, false);
    let mut worst = String::new();
    let mut peak = m.population().species_count();
    let mut ok = peak <= 2;
    for step in 1..=100u64 {
        m.step(&mut rng).unwrap().expect("live pino");
        let n = m.population().species_count();
        peak = peak.max(n);
        if peak as u64 > 2 * step + 2 {
            ok = false;
            worst = format!(", exceeded at step {step}");
        }
    }
    outcome(
        ok,
        format!("10000 cells, 100 steps, peak species {peak} (bound 202){worst}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 worked example propensities", criterion_1),
        ("2 encode/decode round trip", criterion_2),
        ("3 adequacy suite", criterion_3),
        ("4 oracle self-consistency", criterion_4),
        ("5 copy-on-write preservation", criterion_5),
        ("6 first-firing statistics", criterion_6),
        ("7 determinism", criterion_7),
        ("8 copy-on-write population size", criterion_8),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {name}: {} [{:.2}s]",
            result.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!result.pass);
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
