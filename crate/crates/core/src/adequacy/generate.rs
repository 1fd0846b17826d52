use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::rates::RateMap;
use crate::syntax::{ActionKind, Membrane, Prefix, System};

const KINDS: [ActionKind; 5] = [
    ActionKind::Phago,
    ActionKind::Cophago,
    ActionKind::Exo,
    ActionKind::Coexo,
    ActionKind::Pino,
];

const NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// Random small systems over a small alphabet, so that matching actions
/// are common.
#[derive(Clone, Debug)]
pub struct TermGenerator {
    /// Maximum nesting of cells.
    pub max_depth: usize,
    /// Maximum number of cells side by side, and of actions on a membrane.
    pub max_width: usize,
    /// Number of distinct action names, at most 6.
    pub names: usize,
    /// Rates are drawn as `p/q` with `p` in `1..=max_numerator` and `q` in
    /// `1..=max_denominator`.
    pub max_numerator: i64,
    pub max_denominator: i64,
}

impl Default for TermGenerator {
    fn default() -> Self {
        TermGenerator {
            max_depth: 3,
            max_width: 3,
            names: 3,
            max_numerator: 20,
            max_denominator: 4,
        }
    }
}

impl TermGenerator {
    pub fn with_depth(max_depth: usize) -> Self {
        TermGenerator {
            max_depth,
            ..Self::default()
        }
    }

    /// At least one top-level cell when `max_depth` and `max_width` allow.
    pub fn system<R: Rng + ?Sized>(&self, rng: &mut R) -> System {
        self.system_at(self.max_depth, self.max_width.min(1), rng)
    }

    fn system_at<R: Rng + ?Sized>(&self, depth: usize, min_width: usize, rng: &mut R) -> System {
        if depth == 0 {
            return System::Void;
        }
        let width = rng.gen_range(min_width..=self.max_width);
        let mut items = Vec::with_capacity(width);
        for _ in 0..width {
            let copies = if rng.gen_bool(0.7) {
                1
            } else {
                rng.gen_range(2..=3)
            };
            let cell = System::cell(self.membrane_at(2, rng), self.system_at(depth - 1, 0, rng));
            items.extend(std::iter::repeat_n(cell, copies));
        }
        System::compose_all(items)
    }

    pub fn membrane<R: Rng + ?Sized>(&self, rng: &mut R) -> Membrane {
        self.membrane_at(2, rng)
    }

    fn membrane_at<R: Rng + ?Sized>(&self, depth: usize, rng: &mut R) -> Membrane {
        let count = match depth {
            0 => 0,
            _ if rng.gen_bool(0.2) => 0,
            _ => rng.gen_range(1..=self.max_width.clamp(1, 2)),
        };
        let actions = (0..count).map(|_| self.action(depth, rng)).collect();
        Membrane::par_all(actions)
    }

    fn action<R: Rng + ?Sized>(&self, depth: usize, rng: &mut R) -> Membrane {
        let kind = *KINDS.choose(rng).unwrap();
        let name = NAMES[rng.gen_range(0..self.names.clamp(1, NAMES.len()))];
        let arg = kind.takes_argument().then(|| {
            if rng.gen_bool(0.5) {
                Membrane::Zero
            } else {
                self.membrane_at(depth - 1, rng)
            }
        });
        let cont = if rng.gen_bool(0.3) {
            self.membrane_at(depth - 1, rng)
        } else {
            Membrane::Zero
        };
        Membrane::prefix(kind, name, arg, cont).expect("arity respected")
    }

    /// A rate for every name in the alphabet.
    pub fn rates<R: Rng + ?Sized>(&self, rng: &mut R) -> RateMap {
        let mut map = RateMap::default();
        for name in &NAMES[..self.names.clamp(1, NAMES.len())] {
            let p = rng.gen_range(1..=self.max_numerator);
            let q = rng.gen_range(1..=self.max_denominator);
            map = map.with(*name, BigRational::new(BigInt::from(p), BigInt::from(q)));
        }
        map
    }
}

/// A syntactically different system congruent to `p`: components and
/// parallel actions are permuted, regrouped, and padded with units.
pub fn shuffle<R: Rng + ?Sized>(p: &System, rng: &mut R) -> System {
    let mut items: Vec<System> = p
        .components()
        .into_iter()
        .map(|c| match c {
            System::Cell(m, content) => {
                System::cell(shuffle_membrane(m, rng), shuffle(content, rng))
            }
            other => other.clone(),
        })
        .collect();
    if rng.gen_bool(0.2) {
        items.push(System::Void);
    }
    if rng.gen_bool(0.2) {
        items.push(System::cell(Membrane::Zero, System::Void));
    }
    items.shuffle(rng);
    regroup(items, &|| System::Void, &System::comp, rng)
}

fn shuffle_membrane<R: Rng + ?Sized>(m: &Membrane, rng: &mut R) -> Membrane {
    let mut actions = Vec::new();
    flatten(m, &mut actions);
    let mut items: Vec<Membrane> = actions
        .into_iter()
        .map(|p| {
            let arg = p.arg().map(|a| shuffle_membrane(a, rng));
            let cont = shuffle_membrane(p.cont(), rng);
            Membrane::prefix(p.kind(), p.name().clone(), arg, cont).expect("arity preserved")
        })
        .collect();
    if rng.gen_bool(0.2) {
        items.push(Membrane::Zero);
    }
    items.shuffle(rng);
    regroup(items, &|| Membrane::Zero, &Membrane::par, rng)
}

fn flatten<'a>(m: &'a Membrane, out: &mut Vec<&'a Prefix>) {
    match m {
        Membrane::Zero => {}
        Membrane::Par(l, r) => {
            flatten(l, out);
            flatten(r, out);
        }
        Membrane::Prefix(p) => out.push(p),
    }
}

/// Joins `items` in order under a random binary tree.
fn regroup<T, R: Rng + ?Sized>(
    mut items: Vec<T>,
    unit: &dyn Fn() -> T,
    join: &dyn Fn(T, T) -> T,
    rng: &mut R,
) -> T {
    match items.len() {
        0 => unit(),
        1 => items.pop().unwrap(),
        n => {
            let right = items.split_off(rng.gen_range(1..n));
            let l = regroup(items, unit, join, rng);
            let r = regroup(right, unit, join, rng);
            join(l, r)
        }
    }
}
