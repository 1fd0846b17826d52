//! The Brane Calculus as a machine calculus. A species is one membrane's
//! multiset of top-level actions placed between two compartment names;
//! nesting is recovered from the names.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::gsam::{
    Calculus, Environment, HierarchyError, Located, Machine, NodeName, Population, Reaction,
    Rearrange,
};
use crate::rates::RateMap;
use crate::syntax::{
    canonicalize_membrane, to_normal_form, ActionKind, ActionName, CanonMem, CanonSys, Membrane,
    NormalSystem, System,
};

/// Multiset of guarded actions.
pub type Complex = CanonMem;

/// `(|complex|)` located at `outer`, enclosing compartment `inner`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BraneSpecies {
    outer: NodeName,
    inner: NodeName,
    complex: Arc<Complex>,
}

impl BraneSpecies {
    pub fn new(complex: Complex, outer: NodeName, inner: NodeName) -> Self {
        assert_ne!(outer, inner, "a species cannot enclose its own location");
        BraneSpecies {
            outer,
            inner,
            complex: Arc::new(complex),
        }
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }
}

impl Located for BraneSpecies {
    fn outer(&self) -> NodeName {
        self.outer
    }

    fn inner(&self) -> NodeName {
        self.inner
    }

    fn relocated(&self, outer: NodeName, inner: NodeName) -> Self {
        BraneSpecies {
            outer,
            inner,
            complex: Arc::clone(&self.complex),
        }
    }
}

impl fmt::Display for BraneSpecies {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(|{}|)^{}_{}", self.complex, self.outer, self.inner)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReactionKind {
    Pino,
    Exo,
    Phago,
}

impl fmt::Display for ReactionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReactionKind::Pino => "pino",
            ReactionKind::Exo => "exo",
            ReactionKind::Phago => "phago",
        })
    }
}

/// Which interaction a reaction performs. `factor` counts the occurrence
/// decompositions collapsed into it, so the rate is `factor * iota(name)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BraneLabel {
    pub kind: ReactionKind,
    pub name: ActionName,
    pub factor: u32,
}

pub type BraneReaction = Reaction<BraneSpecies, BraneLabel>;

/// The reaction generator, parameterised by the rate map.
#[derive(Clone, Debug)]
pub struct Brane {
    rates: RateMap,
}

impl Brane {
    pub fn new(rates: RateMap) -> Self {
        Brane { rates }
    }

    pub fn rates(&self) -> &RateMap {
        &self.rates
    }

    /// Exact rate constant of a reaction generated by this calculus.
    pub fn exact_rate(&self, label: &BraneLabel) -> BigRational {
        self.rates.exact(&label.name) * BigRational::from_integer(BigInt::from(label.factor))
    }
}

type Key = (
    ReactionKind,
    ActionName,
    Vec<(BraneSpecies, u32)>,
    Vec<(BraneSpecies, u64)>,
    Rearrange,
);

#[derive(Default)]
struct Collector {
    found: BTreeMap<Key, u32>,
}

impl Collector {
    fn push(
        &mut self,
        kind: ReactionKind,
        name: &ActionName,
        reactants: Vec<(BraneSpecies, u32)>,
        products: Vec<BraneSpecies>,
        rearrange: Rearrange,
        factor: u32,
    ) {
        let mut reactants = reactants;
        reactants.sort();
        let mut products: Vec<(BraneSpecies, u64)> = products.into_iter().map(|p| (p, 1)).collect();
        products.sort();
        *self
            .found
            .entry((kind, name.clone(), reactants, products, rearrange))
            .or_insert(0) += factor;
    }

    fn finish(self, rates: &RateMap) -> Vec<BraneReaction> {
        self.found
            .into_iter()
            .map(|((kind, name, reactants, products, rearrange), factor)| {
                let rate = rates.float(&name) * factor as f64;
                Reaction::new(
                    reactants,
                    rate,
                    rearrange,
                    products,
                    BraneLabel { kind, name, factor },
                )
            })
            .collect()
    }
}

fn pino(species: &BraneSpecies, out: &mut Collector) {
    let complex = species.complex();
    for (k, action) in complex.actions().iter().enumerate() {
        if action.kind() != ActionKind::Pino {
            continue;
        }
        let outer = BraneSpecies::new(
            complex.without(k).par(action.cont()),
            species.outer,
            species.inner,
        );
        let vesicle = BraneSpecies::new(
            action.arg().expect("pino carries an argument").clone(),
            species.inner,
            NodeName::Fresh(0),
        );
        out.push(
            ReactionKind::Pino,
            action.name(),
            vec![(species.clone(), 1)],
            vec![outer, vesicle],
            Rearrange::Identity,
            1,
        );
    }
}

/// `parent` offers coexo, `child` (located in `parent`) offers exo.
fn exo(parent: &BraneSpecies, child: &BraneSpecies, out: &mut Collector) {
    let (pc, cc) = (parent.complex(), child.complex());
    for (k, co) in pc.actions().iter().enumerate() {
        if co.kind() != ActionKind::Coexo {
            continue;
        }
        for (l, ex) in cc.actions().iter().enumerate() {
            if ex.kind() != ActionKind::Exo || ex.name() != co.name() {
                continue;
            }
            let merged = pc
                .without(k)
                .par(co.cont())
                .par(&cc.without(l).par(ex.cont()));
            out.push(
                ReactionKind::Exo,
                co.name(),
                vec![(parent.clone(), 1), (child.clone(), 1)],
                vec![BraneSpecies::new(merged, parent.outer, parent.inner)],
                Rearrange::Substitute {
                    from: child.inner,
                    to: parent.outer,
                },
                1,
            );
        }
    }
}

/// `eater` offers cophago, `food` (a sibling) offers phago. When both are
/// the same species two instances are consumed; the engulfed one keeps the
/// compartment of the second instance.
fn phago(eater: &BraneSpecies, food: &BraneSpecies, out: &mut Collector) {
    let same = eater == food;
    let (ec, fc) = (eater.complex(), food.complex());
    let food_inner = if same { NodeName::Twin(1) } else { food.inner };
    for (k, co) in ec.actions().iter().enumerate() {
        if co.kind() != ActionKind::Cophago {
            continue;
        }
        for (l, ph) in fc.actions().iter().enumerate() {
            if ph.kind() != ActionKind::Phago || ph.name() != co.name() {
                continue;
            }
            let products = vec![
                BraneSpecies::new(ec.without(k).par(co.cont()), eater.outer, eater.inner),
                BraneSpecies::new(
                    co.arg().expect("cophago carries an argument").clone(),
                    eater.inner,
                    NodeName::Fresh(0),
                ),
                BraneSpecies::new(fc.without(l).par(ph.cont()), NodeName::Fresh(0), food_inner),
            ];
            let (reactants, factor) = if same {
                (vec![(eater.clone(), 2)], 2)
            } else {
                (vec![(eater.clone(), 1), (food.clone(), 1)], 1)
            };
            out.push(
                ReactionKind::Phago,
                co.name(),
                reactants,
                products,
                Rearrange::Identity,
                factor,
            );
        }
    }
}

impl Calculus for Brane {
    type Species = BraneSpecies;
    type Label = BraneLabel;
    type Fingerprint = CanonSys;

    fn reactions(
        &self,
        species: &BraneSpecies,
        pop: &Population<BraneSpecies>,
    ) -> Vec<BraneReaction> {
        let mut out = Collector::default();
        pino(species, &mut out);
        if let Ok(Some(parent)) = pop.owner(species.outer) {
            exo(parent, species, &mut out);
        }
        for (child, _) in pop.children(species.inner) {
            exo(species, child, &mut out);
        }
        for (sibling, _) in pop.children(species.outer) {
            phago(species, sibling, &mut out);
            if sibling != species {
                phago(sibling, species, &mut out);
            }
        }
        out.finish(&self.rates)
    }

    fn fingerprint(&self, species: &BraneSpecies, pop: &Population<BraneSpecies>) -> CanonSys {
        decode_canon(pop, species.inner).expect("reachable states are acyclic")
    }
}

/// The top-level actions of a membrane.
pub fn encode_membrane(sigma: &Membrane) -> Complex {
    canonicalize_membrane(sigma)
}

/// One species per normal-form entry, located at `x`, each with a fresh
/// inner name, followed by the species of its content. Pre-order.
pub fn encode_species(
    env: &mut Environment,
    x: NodeName,
    q: &NormalSystem,
) -> Vec<(BraneSpecies, u64)> {
    let mut out = Vec::new();
    encode_into(env, x, q, &mut out);
    out
}

fn encode_into(
    env: &mut Environment,
    x: NodeName,
    q: &NormalSystem,
    out: &mut Vec<(BraneSpecies, u64)>,
) {
    for entry in q.entries() {
        let y = env.fresh();
        out.push((
            BraneSpecies::new(encode_membrane(&entry.membrane), x, y),
            entry.count,
        ));
        encode_into(env, y, &entry.content, out);
    }
}

/// The machine term for `p` at the root, with every reaction initialised.
pub fn machine_init<R: Rng + ?Sized>(
    p: &System,
    rates: &RateMap,
    rng: &mut R,
    normalize: bool,
) -> Machine<Brane> {
    let mut env = Environment::new();
    let species = encode_species(&mut env, NodeName::Root, &to_normal_form(p));
    let mut machine = Machine::new(Arc::new(Brane::new(rates.clone())), env);
    machine.set_normalize(normalize);
    for (s, n) in species {
        machine.add_species(&s, n, rng);
    }
    machine
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("no species present")]
    Empty,
    #[error("several root names: {0:?}")]
    Ambiguous(Vec<NodeName>),
}

/// The unique name that locates some species and encloses none.
pub fn root(pop: &Population<BraneSpecies>) -> Result<NodeName, RootError> {
    let inner: BTreeSet<NodeName> = pop.positive().map(|(s, _)| s.inner).collect();
    let roots: BTreeSet<NodeName> = pop
        .positive()
        .map(|(s, _)| s.outer)
        .filter(|x| !inner.contains(x))
        .collect();
    match roots.len() {
        0 => Err(RootError::Empty),
        1 => Ok(*roots.iter().next().unwrap()),
        _ => Err(RootError::Ambiguous(roots.into_iter().collect())),
    }
}

/// Canonical form of the system located at `x`.
pub fn decode_canon(
    pop: &Population<BraneSpecies>,
    x: NodeName,
) -> Result<CanonSys, HierarchyError> {
    let mut path = BTreeSet::new();
    decode_rec(pop, x, &mut path)
}

fn decode_rec(
    pop: &Population<BraneSpecies>,
    x: NodeName,
    path: &mut BTreeSet<NodeName>,
) -> Result<CanonSys, HierarchyError> {
    if !path.insert(x) {
        return Err(HierarchyError::Cycle(x));
    }
    let mut out = CanonSys::void();
    for (s, n) in pop.children(x) {
        let content = decode_rec(pop, s.inner, path)?;
        out = out.compose(&CanonSys::repeat(s.complex().clone(), content, n));
    }
    path.remove(&x);
    Ok(out)
}

/// The system located at `x`.
pub fn decode(pop: &Population<BraneSpecies>, x: NodeName) -> Result<System, HierarchyError> {
    let mut path = BTreeSet::new();
    decode_system(pop, x, &mut path)
}

fn decode_system(
    pop: &Population<BraneSpecies>,
    x: NodeName,
    path: &mut BTreeSet<NodeName>,
) -> Result<System, HierarchyError> {
    if !path.insert(x) {
        return Err(HierarchyError::Cycle(x));
    }
    let mut items = Vec::new();
    for (s, n) in pop.children(x) {
        let cell = System::cell(
            s.complex().to_membrane(),
            decode_system(pop, s.inner, path)?,
        );
        items.extend(std::iter::repeat_n(cell, n as usize));
    }
    path.remove(&x);
    Ok(System::compose_all(items))
}

/// Canonical form of the whole machine state.
pub fn decode_machine(machine: &Machine<Brane>) -> Result<CanonSys, HierarchyError> {
    match root(machine.population()) {
        Ok(x) => decode_canon(machine.population(), x),
        Err(_) if machine.population().species_count() == 0 => Ok(CanonSys::void()),
        Err(_) => decode_canon(machine.population(), NodeName::Root),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{canonicalize_system, parse_membrane, parse_system};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const WORKED: &str =
        "10000 * phago<n>.exo<m>[phago<k>[void]] o 100 * cophago<n>(coexo<m>)|coexo<m>[phago<k>[void]]";

    fn rates() -> RateMap {
        RateMap::default()
            .with_int("n", 10)
            .with_int("k", 5)
            .with_int("m", 5)
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(3)
    }

    fn init(text: &str) -> Machine<Brane> {
        machine_init(&parse_system(text).unwrap(), &rates(), &mut rng(), false)
    }

    fn live(m: &Machine<Brane>) -> Vec<(String, f64)> {
        let mut v: Vec<(String, f64)> = m
            .live_reactions()
            .iter()
            .map(|r| {
                (
                    format!("{}<{}>", r.label().kind, r.label().name),
                    m.propensity(r),
                )
            })
            .collect();
        v.sort_by(|a, b| a.1.total_cmp(&b.1));
        v
    }

    #[test]
    fn membranes_become_action_multisets() {
        assert!(encode_membrane(&Membrane::Zero).is_zero());
        let c = encode_membrane(&parse_membrane("cophago<n>(coexo<m>)|coexo<m>").unwrap());
        assert_eq!(c.actions().len(), 2);
        let twice = encode_membrane(&parse_membrane("pino<n>(0)|pino<n>(0)").unwrap());
        assert_eq!(twice.actions().len(), 2);
        assert_eq!(twice.actions()[0], twice.actions()[1]);
    }

    #[test]
    fn worked_example_species() {
        let mut env = Environment::new();
        let species = encode_species(
            &mut env,
            NodeName::Root,
            &to_normal_form(&parse_system(WORKED).unwrap()),
        );
        let mut counts: Vec<u64> = species.iter().map(|(_, n)| *n).collect();
        counts.sort();
        assert_eq!(counts, vec![1, 1, 100, 10000]);
        assert_eq!(env.len(), 5);
        assert!(encode_species(&mut env, NodeName::Root, &NormalSystem::empty()).is_empty());
    }

    #[test]
    fn worked_example_initial_reaction() {
        let m = init(WORKED);
        assert_eq!(live(&m), vec![("phago<n>".to_string(), 10_000_000.0)]);
        let r = &m.live_reactions()[0];
        assert_eq!(m.combinations(r), num_bigint::BigUint::from(1_000_000u32));
        assert_eq!(r.products().len(), 3);
        let fresh = r
            .products()
            .iter()
            .filter(|(p, _)| p.outer == NodeName::Fresh(0) || p.inner == NodeName::Fresh(0));
        assert_eq!(fresh.count(), 2);
    }

    #[test]
    fn worked_example_after_cow() {
        let mut m = init(WORKED);
        let reaction = m.live_reactions()[0].clone();
        m.cow(reaction.reactants(), &mut rng()).unwrap();
        assert_eq!(
            live(&m),
            vec![
                ("phago<n>".to_string(), 10.0),
                ("phago<n>".to_string(), 990.0),
                ("phago<n>".to_string(), 99_990.0),
                ("phago<n>".to_string(), 9_899_010.0),
            ]
        );
        let total: f64 = live(&m).iter().map(|(_, a)| a).sum();
        assert_eq!(total, 10_000_000.0);
        assert_eq!(
            decode_machine(&m).unwrap(),
            canonicalize_system(&parse_system(WORKED).unwrap())
        );
    }

    #[test]
    fn void_machine_is_empty() {
        let m = init("void");
        assert_eq!(m.population().species_count(), 0);
        assert_eq!(m.reaction_count(), 0);
        assert_eq!(root(m.population()), Err(RootError::Empty));
        assert_eq!(decode_machine(&m).unwrap(), CanonSys::void());
    }

    #[test]
    fn pino_fires_to_void() {
        let mut m = init("pino<n>(0)[void]");
        assert_eq!(live(&m), vec![("pino<n>".to_string(), 10.0)]);
        assert_eq!(root(m.population()), Ok(NodeName::Root));
        m.step(&mut rng()).unwrap().unwrap();
        assert_eq!(decode_machine(&m).unwrap(), CanonSys::void());
        assert_eq!(m.population().species_count(), 2);
    }

    #[test]
    fn duplicate_pino_collapses() {
        let m = init("pino<n>(0)|pino<n>(0)[void]");
        assert_eq!(live(&m), vec![("pino<n>".to_string(), 20.0)]);
        assert_eq!(m.live_reactions()[0].label().factor, 2);
    }

    #[test]
    fn exo_renames_the_expelled_content() {
        let mut m = init("coexo<n>.phago<a>[exo<n>.pino<b>(0)[cophago<c>(0)[void]]]");
        assert_eq!(live(&m), vec![("exo<n>".to_string(), 10.0)]);
        m.step(&mut rng()).unwrap().unwrap();
        assert_eq!(
            decode_machine(&m).unwrap(),
            canonicalize_system(
                &parse_system("phago<a>|pino<b>(0)[void] o cophago<c>(0)[void]").unwrap()
            )
        );
        m.check_invariants().unwrap();
        assert_eq!(live(&m), vec![("pino<b>".to_string(), 1.0)]);
    }

    #[test]
    fn self_engulfing_uses_two_instances() {
        let mut m = init("3 * cophago<n>(0)|phago<n>[pino<p>(0)[void]]");
        let phago: Vec<_> = live(&m)
            .into_iter()
            .filter(|(k, _)| k == "phago<n>")
            .collect();
        // three ordered pairs each way: C(3,2) * 2 * 10
        assert_eq!(phago, vec![("phago<n>".to_string(), 60.0)]);
        let r = m
            .live_reactions()
            .into_iter()
            .find(|r| r.label().kind == ReactionKind::Phago)
            .unwrap();
        m.fire(&r, &mut rng()).unwrap();
        m.check_invariants().unwrap();
        assert_eq!(
            decode_machine(&m).unwrap(),
            canonicalize_system(
                &parse_system(
                    "cophago<n>(0)|phago<n>[pino<p>(0)[void]] o phago<n>[0[cophago<n>(0)[pino<p>(0)[void]]] o pino<p>(0)[void]]"
                )
                .unwrap()
            )
        );
    }

    #[test]
    fn decode_round_trip() {
        for text in [
            WORKED,
            "void",
            "2 * exo<a>[3 * pino<b>(phago<c>)[void] o coexo<a>[void]]",
        ] {
            let p = parse_system(text).unwrap();
            let m = machine_init(&p, &rates(), &mut rng(), false);
            assert_eq!(decode_machine(&m).unwrap(), canonicalize_system(&p));
            let x = if p == System::Void {
                NodeName::Root
            } else {
                root(m.population()).unwrap()
            };
            assert_eq!(
                canonicalize_system(&decode(m.population(), x).unwrap()),
                canonicalize_system(&p)
            );
        }
    }

    #[test]
    fn cycles_are_reported() {
        let mut pop = Population::new();
        let a = NodeName::Node(1);
        let b = NodeName::Node(2);
        pop.set(&BraneSpecies::new(CanonMem::zero(), a, b), 1);
        pop.set(&BraneSpecies::new(CanonMem::zero(), b, a), 1);
        assert_eq!(decode_canon(&pop, a), Err(HierarchyError::Cycle(a)));
    }
}
