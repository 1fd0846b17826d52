//! Machine against oracle: per successor class rates for one system, then
//! a generated batch.

use branesim::adequacy::{run_cases, Comparison, Mode, TermGenerator};
use branesim::rates::RateMap;
use branesim::syntax::parse_system;

pub fn run_example() -> String {
    let p = parse_system(
        "2 * cophago<a>(0)|phago<a>[exo<b>[void]] o coexo<b>.pino<a>(0)[exo<b>[void]]",
    )
    .unwrap();
    let rates = RateMap::default().with_int("a", 3).with_int("b", 7);
    let c = Comparison::new(&p, &rates).unwrap();
    let mut out = String::new();
    for (target, rate) in &c.machine_exact {
        out.push_str(&format!(
            "{target}\n  machine {rate}  oracle {}\n",
            c.oracle_exact[target]
        ));
    }
    out.push_str(&format!("exact: {:?}\n", c.all(Mode::Exact).is_ok()));
    out.push_str(&format!("float: {:?}\n", c.all(Mode::FLOAT).is_ok()));
    let report = run_cases(&TermGenerator::default(), 200, 7);
    out.push_str(&format!(
        "{} generated cases, {} failures\n",
        report.cases,
        report.failures.len()
    ));
    out
}

fn main() {
    print!("{}", run_example());
}
