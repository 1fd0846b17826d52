//! Copy-on-write generic stochastic abstract machine with Next Reaction
//! scheduling. The machine knows nothing about a particular calculus: a
//! [`Calculus`] supplies the species type, the reactions a species takes
//! part in, and a fingerprint used to merge congruent sibling subtrees.

mod machine;
mod population;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt::{self, Debug};
use std::hash::Hash;

use rand::Rng;

pub use machine::{Firing, Machine, ReactionRef};
pub use population::Population;

/// Compartment name. `Fresh` and `Twin` only occur inside reaction
/// templates and are resolved when the reaction fires: `Fresh(k)` becomes a
/// newly allocated name, `Twin(k)` the inner name of the k-th extra
/// instance of a reactant needed more than once.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeName {
    Root,
    Node(u64),
    Fresh(u8),
    Twin(u8),
}

impl NodeName {
    pub fn is_placeholder(self) -> bool {
        matches!(self, NodeName::Fresh(_) | NodeName::Twin(_))
    }
}

impl fmt::Display for NodeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeName::Root => f.write_str("root"),
            NodeName::Node(n) => write!(f, "x{n}"),
            NodeName::Fresh(k) => write!(f, "fresh{k}"),
            NodeName::Twin(k) => write!(f, "twin{k}"),
        }
    }
}

/// Allocated names. Names come from a monotone counter and are never
/// reused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Environment {
    names: BTreeSet<NodeName>,
    next: u64,
}

impl Default for Environment {
    fn default() -> Self {
        Environment {
            names: BTreeSet::from([NodeName::Root]),
            next: 0,
        }
    }
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self) -> NodeName {
        let name = NodeName::Node(self.next);
        self.next += 1;
        self.names.insert(name);
        name
    }

    pub fn contains(&self, name: NodeName) -> bool {
        self.names.contains(&name)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// A species together with the two names that place it in the compartment
/// tree: where it sits, and the compartment it encloses.
pub trait Located: Clone + Ord + Hash + Debug + Send + Sync {
    fn outer(&self) -> NodeName;
    fn inner(&self) -> NodeName;
    fn relocated(&self, outer: NodeName, inner: NodeName) -> Self;
}

/// Global rearrangement applied after a reaction's products are added.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rearrange {
    Identity,
    /// Rename `from` to `to` everywhere.
    Substitute {
        from: NodeName,
        to: NodeName,
    },
}

impl Rearrange {
    pub fn apply(self, name: NodeName) -> NodeName {
        match self {
            Rearrange::Substitute { from, to } if name == from => to,
            _ => name,
        }
    }
}

/// `(reactants, rate, rearrange, products)` plus a calculus-specific label.
#[derive(Clone, Debug)]
pub struct Reaction<S, L> {
    reactants: Vec<(S, u32)>,
    rate: f64,
    rearrange: Rearrange,
    products: Vec<(S, u64)>,
    label: L,
}

impl<S: Ord + Clone, L> Reaction<S, L> {
    /// Panics on a non-positive rate or a zero stoichiometry.
    pub fn new(
        reactants: Vec<(S, u32)>,
        rate: f64,
        rearrange: Rearrange,
        products: Vec<(S, u64)>,
        label: L,
    ) -> Self {
        assert!(
            rate > 0.0 && rate.is_finite(),
            "rate must be positive, got {rate}"
        );
        assert!(reactants.iter().all(|(_, j)| *j > 0));
        Reaction {
            reactants: merge(reactants),
            rate,
            rearrange,
            products: merge(products),
            label,
        }
    }

    pub fn reactants(&self) -> &[(S, u32)] {
        &self.reactants
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn rearrange(&self) -> Rearrange {
        self.rearrange
    }

    pub fn products(&self) -> &[(S, u64)] {
        &self.products
    }

    pub fn label(&self) -> &L {
        &self.label
    }

    pub fn stoichiometry(&self, species: &S) -> u32 {
        self.reactants
            .iter()
            .find(|(s, _)| s == species)
            .map_or(0, |(_, j)| *j)
    }
}

fn merge<S: Ord, N: std::ops::AddAssign + Copy>(mut items: Vec<(S, N)>) -> Vec<(S, N)> {
    items.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(S, N)> = Vec::with_capacity(items.len());
    for (s, n) in items {
        match out.last_mut() {
            Some((last, m)) if *last == s => *m += n,
            _ => out.push((s, n)),
        }
    }
    out
}

impl<S: Ord, L: Ord> Ord for Reaction<S, L> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.label
            .cmp(&other.label)
            .then_with(|| self.reactants.cmp(&other.reactants))
            .then_with(|| self.products.cmp(&other.products))
            .then_with(|| self.rearrange.cmp(&other.rearrange))
            .then_with(|| self.rate.total_cmp(&other.rate))
    }
}

impl<S: Ord, L: Ord> PartialOrd for Reaction<S, L> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Ord, L: Ord> PartialEq for Reaction<S, L> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: Ord, L: Ord> Eq for Reaction<S, L> {}

/// Scheduled firing time and current propensity of a reaction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Activity {
    pub time: f64,
    pub propensity: f64,
}

/// The calculus-specific half of the machine.
pub trait Calculus: Send + Sync {
    type Species: Located;
    type Label: Clone + Ord + Hash + Debug + Send + Sync;
    type Fingerprint: Ord + Clone;

    /// Every reaction `species` takes part in, given the current
    /// population. Partners must have positive counts.
    fn reactions(
        &self,
        species: &Self::Species,
        population: &Population<Self::Species>,
    ) -> Vec<Reaction<Self::Species, Self::Label>>;

    /// Identifies the subtree enclosed by `species` up to congruence.
    fn fingerprint(
        &self,
        species: &Self::Species,
        population: &Population<Self::Species>,
    ) -> Self::Fingerprint;
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HierarchyError {
    #[error("no species encloses compartment {0}")]
    MissingParent(NodeName),
    #[error("compartment {0} is enclosed by more than one species")]
    AmbiguousParent(NodeName),
    #[error("compartment {0} lies on a cycle")]
    Cycle(NodeName),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MachineError {
    #[error("removing {need} of {species} but only {have} present")]
    Underflow {
        species: String,
        have: u64,
        need: u64,
    },
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error("reaction is not in the reaction map")]
    UnknownReaction,
}

/// Exponential waiting time with parameter `propensity`, by inversion.
pub fn delay<R: Rng + ?Sized>(propensity: f64, rng: &mut R) -> f64 {
    if propensity <= 0.0 {
        return f64::INFINITY;
    }
    let u = 1.0 - rng.gen::<f64>();
    delay_from_uniform(u, propensity)
}

/// `-ln(u) / a` for `u` in `(0, 1]`; infinite when `a` is zero.
pub fn delay_from_uniform(u: f64, propensity: f64) -> f64 {
    if propensity <= 0.0 {
        f64::INFINITY
    } else {
        -u.ln() / propensity
    }
}

/// `C(n, k)` as a float.
pub fn binomial(n: u64, k: u32) -> f64 {
    if (k as u64) > n {
        return 0.0;
    }
    let mut acc = 1.0;
    for i in 0..k as u64 {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fresh_names_never_repeat() {
        let mut env = Environment::new();
        let a = env.fresh();
        let b = env.fresh();
        assert_ne!(a, b);
        assert!(env.contains(a) && env.contains(b) && env.contains(NodeName::Root));
        assert_eq!(env.len(), 3);
    }

    #[test]
    fn delay_law() {
        assert_eq!(delay_from_uniform(0.5, 0.0), f64::INFINITY);
        assert!((delay_from_uniform(0.5, 10.0) - 0.0693147).abs() < 1e-6);
        assert_eq!(delay_from_uniform(1.0, 3.0), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(delay(0.0, &mut rng), f64::INFINITY);
        let n = 100_000;
        let mean = (0..n).map(|_| delay(4.0, &mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 0.25).abs() < 0.25 * 0.02, "{mean}");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(0, 1), 0.0);
        assert_eq!(binomial(5, 0), 1.0);
        assert_eq!(binomial(10_000, 1), 10_000.0);
        assert_eq!(binomial(10, 2), 45.0);
        assert_eq!(binomial(1, 2), 0.0);
    }

    #[test]
    fn reactions_merge_duplicate_entries() {
        let r: Reaction<u8, ()> = Reaction::new(
            vec![(2, 1), (1, 1), (2, 1)],
            1.5,
            Rearrange::Identity,
            vec![(3, 1)],
            (),
        );
        assert_eq!(r.reactants(), &[(1, 1), (2, 2)]);
        assert_eq!(r.stoichiometry(&2), 2);
        assert_eq!(r.stoichiometry(&9), 0);
    }

    #[test]
    fn substitution() {
        let f = Rearrange::Substitute {
            from: NodeName::Node(3),
            to: NodeName::Root,
        };
        assert_eq!(f.apply(NodeName::Node(3)), NodeName::Root);
        assert_eq!(f.apply(NodeName::Node(4)), NodeName::Node(4));
        assert_eq!(
            Rearrange::Identity.apply(NodeName::Node(3)),
            NodeName::Node(3)
        );
    }
}
