//! The reference semantics: the measure table of a small system and its
//! one-step successors.

use branesim::oracle::{id_successors, measure, reduce_all};
use branesim::rates::RateMap;
use branesim::syntax::parse_system;
use num_rational::BigRational;

pub fn run_example() -> String {
    let rates = RateMap::default().with_int("n", 10).with_int("m", 5);
    let p = parse_system(
        "cophago<n>(0)[void] o 2 * phago<n>.exo<m>[void] o pino<m>(0)|pino<m>(0)[void]",
    )
    .unwrap();
    let mut out = String::new();
    out.push_str(&measure::<BigRational>(&p, &rates).to_string());
    out.push_str("successors:\n");
    for s in id_successors::<BigRational>(&p, &rates) {
        out.push_str(&format!("  {} at rate {}\n", s.target, s.rate));
    }
    out.push_str(&format!("reductions: {}\n", reduce_all(&p).len()));
    out
}

fn main() {
    print!("{}", run_example());
}
