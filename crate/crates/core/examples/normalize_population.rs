//! Sibling compartments that become congruent again can be merged back
//! into one species; compare species counts with and without merging.

use branesim::sim::{load, run_simulation, SimConfig};

pub fn run_example() -> String {
    let (p, rates) = load("200 * pino<n>(0)[void]", None).unwrap();
    let mut out = String::new();
    for normalize in [false, true] {
        let config = SimConfig {
            normalize,
            ..SimConfig::steps(5, 150)
        };
        let run = &run_simulation(&p, &rates, &config).unwrap()[0];
        out.push_str(&format!(
            "normalize={normalize}: {} steps, peak {} species, final {}\n",
            run.trace.len(),
            run.peak_species,
            run.final_state
        ));
    }
    out
}

fn main() {
    print!("{}", run_example());
}
