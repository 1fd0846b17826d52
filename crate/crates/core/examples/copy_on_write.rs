//! The copy-on-write step on the phagocytosis example: one reaction with
//! propensity 10^7 becomes four after its reactants are given private
//! instances, and the decoded system is unchanged.

use branesim::encoding::{decode_machine, machine_init};
use branesim::rates::RateMap;
use branesim::syntax::parse_system;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> String {
    let p = parse_system(
        "10000 * phago<n>.exo<m>[phago<k>[void]] o 100 * cophago<n>(coexo<m>)|coexo<m>[phago<k>[void]]",
    )
    .unwrap();
    let rates = RateMap::default()
        .with_int("n", 10)
        .with_int("k", 5)
        .with_int("m", 5);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut machine = machine_init(&p, &rates, &mut rng, false);
    let mut out = String::new();
    let show = |m: &branesim::gsam::Machine<branesim::encoding::Brane>, out: &mut String| {
        for (s, n) in m.population().positive() {
            out.push_str(&format!("  {n:>5} x {s}\n"));
        }
        for r in m.live_reactions() {
            out.push_str(&format!(
                "  {} {} propensity {}\n",
                r.label().kind,
                r.label().name,
                m.propensity(&r)
            ));
        }
    };
    out.push_str("initial:\n");
    show(&machine, &mut out);
    let before = decode_machine(&machine).unwrap();
    let reaction = machine.live_reactions()[0].clone();
    machine.cow(reaction.reactants(), &mut rng).unwrap();
    out.push_str("after cow:\n");
    show(&machine, &mut out);
    out.push_str(&format!(
        "decoded unchanged: {}\n",
        decode_machine(&machine).unwrap() == before
    ));
    out
}

fn main() {
    print!("{}", run_example());
}
