//! Parse a system, print it back, and compare two congruent spellings.

use branesim::syntax::{canonicalize_system, parse_system, to_normal_form};

pub fn run_example() -> String {
    let text = "2 * phago<n>.exo<m>[void] o cophago<n>(coexo<m>) | coexo<m>[pino<k>(0)[void]] # two eaten, one eater";
    let p = parse_system(text).expect("valid system");
    let q = parse_system("cophago<n>(coexo<m>)|coexo<m>[pino<k>(0)[void] o 0[void]] o phago<n>.exo<m>[void] o phago<n>.exo<m>[void]")
        .expect("valid system");
    let mut out = String::new();
    out.push_str(&format!("parsed:    {p}\n"));
    out.push_str(&format!("canonical: {}\n", canonicalize_system(&p)));
    out.push_str(&format!(
        "congruent: {}\n",
        canonicalize_system(&p) == canonicalize_system(&q)
    ));
    for entry in to_normal_form(&p).entries() {
        out.push_str(&format!("  {} x {}\n", entry.count, entry.membrane));
    }
    match parse_system("phago<n>(0)[void]") {
        Ok(_) => out.push_str("unexpected success\n"),
        Err(e) => out.push_str(&format!("error:     {e}\n")),
    }
    out
}

fn main() {
    print!("{}", run_example());
}
