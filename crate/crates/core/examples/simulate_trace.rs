//! Three seeded runs with a trace and a census, written as CSV.

use branesim::sim::{load, run_simulation, write_census, write_trace, SimConfig};

pub fn run_example() -> String {
    let (p, rates) = load(
        "3 * pino<v>(phago<e>).cophago<e>(0)[void] o coexo<x>[exo<x>.phago<e>[void]]",
        Some("v = 2\ne = 1.5\ndefault = 1\n"),
    )
    .unwrap();
    let config = SimConfig {
        runs: 3,
        census_every: Some(4),
        check: true,
        ..SimConfig::steps(2024, 8)
    };
    let runs = run_simulation(&p, &rates, &config).unwrap();
    let mut trace = Vec::new();
    write_trace(&mut trace, &runs).unwrap();
    let mut census = Vec::new();
    write_census(&mut census, &runs[..1]).unwrap();
    let mut out = String::from_utf8(trace).unwrap();
    out.push_str(&String::from_utf8(census).unwrap());
    for r in &runs {
        out.push_str(&format!(
            "run {} stopped by {:?} at {:.4}: {}\n",
            r.run, r.stop, r.final_time, r.final_state
        ));
    }
    out
}

fn main() {
    print!("{}", run_example());
}
