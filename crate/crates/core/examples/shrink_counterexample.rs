//! Congruent reshuffling and greedy shrinking, the two helpers used when
//! a generated case fails.

use branesim::adequacy::{shrink, shuffle, TermGenerator};
use branesim::syntax::canonicalize_system;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let generator = TermGenerator::default();
    let mut p = generator.system(&mut rng);
    while !p.to_string().contains("cophago") {
        p = generator.system(&mut rng);
    }
    let q = shuffle(&p, &mut rng);
    let mut out = String::new();
    out.push_str(&format!("generated: {p}\nshuffled:  {q}\n"));
    out.push_str(&format!(
        "congruent: {}\n",
        canonicalize_system(&p) == canonicalize_system(&q)
    ));
    let small = shrink(&p, |s| s.to_string().contains("cophago"));
    out.push_str(&format!("shrunk:    {small}\n"));
    out
}

fn main() {
    print!("{}", run_example());
}
