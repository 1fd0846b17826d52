use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;

use super::{
    binomial, delay, Activity, Calculus, Environment, HierarchyError, Located, MachineError,
    NodeName, Population, Reaction, Rearrange,
};

pub type ReactionRef<C> = Arc<Reaction<<C as Calculus>::Species, <C as Calculus>::Label>>;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Time(f64);

impl Eq for Time {}

impl PartialOrd for Time {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Time {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// What one step did.
#[derive(Debug)]
pub struct Firing<C: Calculus> {
    pub reaction: ReactionRef<C>,
    pub propensity: f64,
    pub time: f64,
}

/// Machine term: environment, clock, population and scheduled reactions.
type Groups<C> = BTreeMap<
    (<C as Calculus>::Species, <C as Calculus>::Fingerprint),
    Vec<<C as Calculus>::Species>,
>;

pub struct Machine<C: Calculus> {
    calculus: Arc<C>,
    env: Environment,
    time: f64,
    population: Population<C::Species>,
    reactions: BTreeMap<ReactionRef<C>, Activity>,
    involving: HashMap<C::Species, BTreeSet<ReactionRef<C>>>,
    queue: BTreeSet<(Time, ReactionRef<C>)>,
    zeroed: BTreeSet<C::Species>,
    normalize: bool,
}

impl<C: Calculus> Clone for Machine<C> {
    fn clone(&self) -> Self {
        Machine {
            calculus: Arc::clone(&self.calculus),
            env: self.env.clone(),
            time: self.time,
            population: self.population.clone(),
            reactions: self.reactions.clone(),
            involving: self.involving.clone(),
            queue: self.queue.clone(),
            zeroed: self.zeroed.clone(),
            normalize: self.normalize,
        }
    }
}

impl<C: Calculus> Machine<C> {
    pub fn new(calculus: Arc<C>, env: Environment) -> Self {
        Machine {
            calculus,
            env,
            time: 0.0,
            population: Population::new(),
            reactions: BTreeMap::new(),
            involving: HashMap::new(),
            queue: BTreeSet::new(),
            zeroed: BTreeSet::new(),
            normalize: false,
        }
    }

    /// Merge congruent sibling subtrees after every step.
    pub fn set_normalize(&mut self, on: bool) {
        self.normalize = on;
    }

    pub fn calculus(&self) -> &C {
        &self.calculus
    }

    pub fn env(&self) -> &Environment {
        &self.env
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn population(&self) -> &Population<C::Species> {
        &self.population
    }

    pub fn reactions(&self) -> impl Iterator<Item = (&ReactionRef<C>, &Activity)> {
        self.reactions.iter()
    }

    pub fn reaction_count(&self) -> usize {
        self.reactions.len()
    }

    pub fn activity(&self, reaction: &Reaction<C::Species, C::Label>) -> Option<Activity> {
        self.reactions.get(reaction).copied()
    }

    /// Reactions scheduled at a finite time, in firing order.
    pub fn live_reactions(&self) -> Vec<ReactionRef<C>> {
        self.queue
            .iter()
            .take_while(|(t, _)| t.0.is_finite())
            .map(|(_, r)| Arc::clone(r))
            .collect()
    }

    /// Counts entering the mass-action law: `(n, j)` for each reactant, and
    /// `(n, 1)` for each strict ancestor of some reactant that is not itself
    /// a reactant, each ancestor counted once. `None` when a reactant has
    /// lost its enclosing compartment.
    fn mass_action_terms(
        &self,
        reaction: &Reaction<C::Species, C::Label>,
    ) -> Option<Vec<(u64, u32)>> {
        let mut terms = Vec::with_capacity(reaction.reactants().len() + 2);
        let mut ancestors = BTreeSet::new();
        for (s, j) in reaction.reactants() {
            terms.push((self.population.count(s), *j));
            ancestors.extend(self.population.ancestors(s).ok()?);
        }
        for a in ancestors {
            if reaction.stoichiometry(&a) == 0 {
                terms.push((self.population.count(&a), 1));
            }
        }
        Some(terms)
    }

    /// Rate times the number of distinct ways the reactants can be picked.
    pub fn propensity(&self, reaction: &Reaction<C::Species, C::Label>) -> f64 {
        match self.mass_action_terms(reaction) {
            Some(terms) => terms
                .into_iter()
                .fold(reaction.rate(), |acc, (n, j)| acc * binomial(n, j)),
            None => 0.0,
        }
    }

    /// The propensity divided by the rate, in exact integer arithmetic.
    pub fn combinations(&self, reaction: &Reaction<C::Species, C::Label>) -> BigUint {
        let Some(terms) = self.mass_action_terms(reaction) else {
            return BigUint::from(0u32);
        };
        let mut acc = BigUint::from(1u32);
        for (n, j) in terms {
            if (j as u64) > n {
                return BigUint::from(0u32);
            }
            let mut c = BigUint::from(1u32);
            for i in 0..j as u64 {
                c = c * BigUint::from(n - i) / BigUint::from(i + 1);
            }
            acc *= c;
        }
        acc
    }

    pub fn s_star(&self, species: &C::Species) -> Result<u128, HierarchyError> {
        self.population.s_star(species)
    }

    /// The earliest scheduled reaction, ties broken by reaction order.
    pub fn next(&self) -> Option<(ReactionRef<C>, f64, f64)> {
        let (t, r) = self.queue.first()?;
        if !t.0.is_finite() {
            return None;
        }
        Some((Arc::clone(r), self.reactions[r].propensity, t.0))
    }

    fn set_activity(&mut self, reaction: &ReactionRef<C>, activity: Activity) {
        if let Some(old) = self.reactions.insert(Arc::clone(reaction), activity) {
            self.queue.remove(&(Time(old.time), Arc::clone(reaction)));
        } else {
            for (s, _) in reaction.reactants() {
                self.involving
                    .entry(s.clone())
                    .or_default()
                    .insert(Arc::clone(reaction));
            }
        }
        self.queue
            .insert((Time(activity.time), Arc::clone(reaction)));
    }

    fn drop_reaction(&mut self, reaction: &ReactionRef<C>) {
        if let Some(old) = self.reactions.remove(reaction) {
            self.queue.remove(&(Time(old.time), Arc::clone(reaction)));
            for (s, _) in reaction.reactants() {
                if let Some(set) = self.involving.get_mut(s) {
                    set.remove(reaction);
                    if set.is_empty() {
                        self.involving.remove(s);
                    }
                }
            }
        }
    }

    /// Schedules reactions that are not already present.
    fn init<R: Rng + ?Sized>(
        &mut self,
        reactions: Vec<Reaction<C::Species, C::Label>>,
        rng: &mut R,
    ) {
        for reaction in reactions {
            if self.reactions.contains_key(&reaction) {
                continue;
            }
            let propensity = self.propensity(&reaction);
            let time = self.time + delay(propensity, rng);
            self.set_activity(&Arc::new(reaction), Activity { time, propensity });
        }
    }

    /// Reactions whose propensity may change when the count of `species`
    /// changes: its own, and those of everything below it.
    fn affected(&self, species: &C::Species) -> BTreeSet<ReactionRef<C>> {
        let mut out = BTreeSet::new();
        let mut touched = self.population.descendants(species);
        touched.push(species.clone());
        for s in &touched {
            if let Some(set) = self.involving.get(s) {
                out.extend(set.iter().cloned());
            }
        }
        out
    }

    /// Next Reaction rescaling: keep the pending firing time when possible,
    /// otherwise draw a fresh delay.
    fn update<R: Rng + ?Sized>(&mut self, reactions: BTreeSet<ReactionRef<C>>, rng: &mut R) {
        for reaction in reactions {
            let Some(old) = self.reactions.get(&reaction).copied() else {
                continue;
            };
            let propensity = self.propensity(&reaction);
            let time = if propensity == 0.0 {
                f64::INFINITY
            } else if old.time.is_finite() && old.time > self.time && old.propensity > 0.0 {
                if propensity == old.propensity {
                    old.time
                } else {
                    self.time + (old.propensity / propensity) * (old.time - self.time)
                }
            } else {
                self.time + delay(propensity, rng)
            };
            if time != old.time || propensity != old.propensity {
                self.set_activity(&reaction, Activity { time, propensity });
            }
        }
    }

    fn set_count<R: Rng + ?Sized>(&mut self, species: &C::Species, count: u64, rng: &mut R) {
        self.population.set(species, count);
        if count == 0 {
            self.zeroed.insert(species.clone());
        }
        let affected = self.affected(species);
        self.update(affected, rng);
    }

    /// Adds `count` copies of `species`. A species that was absent or at
    /// zero gets its reactions generated; existing ones are rescaled.
    pub fn add_species<R: Rng + ?Sized>(&mut self, species: &C::Species, count: u64, rng: &mut R) {
        if count == 0 {
            return;
        }
        let old = self.population.count(species);
        self.population.set(species, old + count);
        if old == 0 {
            let generated = self.calculus.reactions(species, &self.population);
            self.init(generated, rng);
        }
        let affected = self.affected(species);
        self.update(affected, rng);
    }

    pub fn remove_species<R: Rng + ?Sized>(
        &mut self,
        species: &C::Species,
        count: u64,
        rng: &mut R,
    ) -> Result<(), MachineError> {
        let have = self.population.count(species);
        if have < count {
            return Err(MachineError::Underflow {
                species: format!("{species:?}"),
                have,
                need: count,
            });
        }
        self.set_count(species, have - count, rng);
        Ok(())
    }

    /// Gives each reactant a private lineage: every ancestor ends with count
    /// one, and a reactant needed `j` times ends with count `j`, split into
    /// `j` single instances when `j > 1`. Returns the inner names of the
    /// extra instances, in order.
    pub fn cow<R: Rng + ?Sized>(
        &mut self,
        reactants: &[(C::Species, u32)],
        rng: &mut R,
    ) -> Result<Vec<NodeName>, MachineError> {
        let mut ordered = Vec::with_capacity(reactants.len());
        for (s, j) in reactants {
            ordered.push((self.population.ancestors(s)?.len(), s.clone(), *j));
        }
        ordered.sort();
        let mut twins = Vec::new();
        for (_, species, j) in ordered {
            let chain = self.population.ancestors(&species)?;
            for ancestor in chain.iter().rev() {
                if self.population.count(ancestor) > 1 {
                    self.split(ancestor, 1, rng);
                }
            }
            let n = self.population.count(&species);
            if n < j as u64 {
                return Err(MachineError::Underflow {
                    species: format!("{species:?}"),
                    have: n,
                    need: j as u64,
                });
            }
            if n > j as u64 {
                self.split(&species, j as u64, rng);
            }
            for k in 1..j as u64 {
                twins.push(self.split(&species, j as u64 - k, rng));
            }
        }
        Ok(twins)
    }

    /// Leaves `keep` copies of `species` in place and moves the rest to a
    /// new species with a fresh inner name and a deep copy of the subtree.
    fn split<R: Rng + ?Sized>(&mut self, species: &C::Species, keep: u64, rng: &mut R) -> NodeName {
        let n = self.population.count(species);
        debug_assert!(keep < n);
        self.set_count(species, keep, rng);
        let fresh = self.env.fresh();
        let copy = species.relocated(species.outer(), fresh);
        self.add_species(&copy, n - keep, rng);
        self.dup(species.inner(), fresh, rng);
        fresh
    }

    /// Deep-copies the contents of compartment `from` into `to`, with fresh
    /// names for every copied compartment.
    pub fn dup<R: Rng + ?Sized>(&mut self, from: NodeName, to: NodeName, rng: &mut R) {
        let children: Vec<(C::Species, u64)> = self
            .population
            .children(from)
            .map(|(s, n)| (s.clone(), n))
            .collect();
        for (child, n) in children {
            let fresh = self.env.fresh();
            self.add_species(&child.relocated(to, fresh), n, rng);
            self.dup(child.inner(), fresh, rng);
        }
    }

    /// Runs the earliest reaction. `Ok(None)` means no reaction can fire.
    pub fn step<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
    ) -> Result<Option<Firing<C>>, MachineError> {
        let Some((reaction, propensity, time)) = self.next() else {
            return Ok(None);
        };
        self.apply(reaction, propensity, time, rng).map(Some)
    }

    /// Fires `reaction` now, whatever its scheduled time.
    pub fn fire<R: Rng + ?Sized>(
        &mut self,
        reaction: &Reaction<C::Species, C::Label>,
        rng: &mut R,
    ) -> Result<Firing<C>, MachineError> {
        let (key, activity) = self
            .reactions
            .get_key_value(reaction)
            .ok_or(MachineError::UnknownReaction)?;
        let (key, propensity) = (Arc::clone(key), activity.propensity);
        self.apply(key, propensity, self.time, rng)
    }

    fn apply<R: Rng + ?Sized>(
        &mut self,
        reaction: ReactionRef<C>,
        propensity: f64,
        time: f64,
        rng: &mut R,
    ) -> Result<Firing<C>, MachineError> {
        self.time = self.time.max(time);
        let twins = self.cow(reaction.reactants(), rng)?;
        let mut twin_iter = twins.iter();
        for (species, j) in reaction.reactants() {
            self.remove_species(species, 1, rng)?;
            for _ in 1..*j {
                let name = *twin_iter.next().expect("cow provides every instance");
                self.remove_species(&species.relocated(species.outer(), name), 1, rng)?;
            }
        }
        let mut fresh: BTreeMap<u8, NodeName> = BTreeMap::new();
        let mut resolve = |name: NodeName, env: &mut Environment| match name {
            NodeName::Fresh(k) => *fresh.entry(k).or_insert_with(|| env.fresh()),
            NodeName::Twin(k) => twins[k as usize - 1],
            other => other,
        };
        for (product, n) in reaction.products() {
            let outer = resolve(product.outer(), &mut self.env);
            let inner = resolve(product.inner(), &mut self.env);
            self.add_species(&product.relocated(outer, inner), *n, rng);
        }
        if let Rearrange::Substitute { from, to } = reaction.rearrange() {
            self.substitute(from, to, rng);
        }
        if self.normalize {
            self.normalize_now(rng);
        }
        self.sweep();
        Ok(Firing {
            reaction,
            propensity,
            time: self.time,
        })
    }

    /// Renames `from` to `to` in every species; moved species get their
    /// reactions regenerated against their new neighbours.
    fn substitute<R: Rng + ?Sized>(&mut self, from: NodeName, to: NodeName, rng: &mut R) {
        let f = Rearrange::Substitute { from, to };
        let moved: BTreeSet<C::Species> = self
            .population
            .located_at(from)
            .chain(self.population.enclosing(from))
            .cloned()
            .collect();
        let mut readd = Vec::new();
        for species in moved {
            if let Some(set) = self.involving.get(&species).cloned() {
                for r in &set {
                    self.drop_reaction(r);
                }
            }
            let n = self.population.remove(&species).unwrap_or(0);
            self.zeroed.remove(&species);
            if n > 0 {
                readd.push((
                    species.relocated(f.apply(species.outer()), f.apply(species.inner())),
                    n,
                ));
            }
        }
        for (species, n) in readd {
            self.add_species(&species, n, rng);
        }
    }

    /// Drops zero-count species and every reaction that needs them.
    fn sweep(&mut self) {
        for species in std::mem::take(&mut self.zeroed) {
            if self.population.count(&species) > 0 {
                continue;
            }
            if let Some(set) = self.involving.get(&species).cloned() {
                for r in &set {
                    self.drop_reaction(r);
                }
            }
            self.population.remove(&species);
        }
    }

    /// Merges sibling species with equal content and congruent subtrees,
    /// top-down from the root.
    pub fn normalize_now<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let mut frontier = vec![NodeName::Root];
        while let Some(x) = frontier.pop() {
            let mut groups: Groups<C> = BTreeMap::new();
            for (s, _) in self.population.children(x) {
                let key = (
                    s.relocated(x, NodeName::Root),
                    self.calculus.fingerprint(s, &self.population),
                );
                groups.entry(key).or_default().push(s.clone());
            }
            for (_, members) in groups {
                let keep = members[0].clone();
                if members.len() > 1 {
                    let mut total = self.population.count(&keep);
                    for other in &members[1..] {
                        total += self.population.count(other);
                        self.delete_subtree(other);
                    }
                    self.set_count(&keep, total, rng);
                }
                frontier.push(keep.inner());
            }
        }
    }

    fn delete_subtree(&mut self, species: &C::Species) {
        let mut doomed = self.population.descendants(species);
        doomed.push(species.clone());
        for s in doomed {
            if let Some(set) = self.involving.get(&s).cloned() {
                for r in &set {
                    self.drop_reaction(r);
                }
            }
            self.population.remove(&s);
            self.zeroed.remove(&s);
        }
    }

    /// Recomputes every propensity from scratch and checks the stored
    /// activities and name bookkeeping against it.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (reaction, activity) in &self.reactions {
            let a = self.propensity(reaction);
            if a != activity.propensity {
                return Err(format!(
                    "stored propensity {} differs from recomputed {a} for {reaction:?}",
                    activity.propensity
                ));
            }
            if (a == 0.0) != activity.time.is_infinite() {
                return Err(format!(
                    "propensity {a} scheduled at {} for {reaction:?}",
                    activity.time
                ));
            }
            if activity.time.is_finite() && activity.time < self.time {
                return Err(format!("reaction scheduled in the past: {reaction:?}"));
            }
        }
        if self.queue.len() != self.reactions.len() {
            return Err("queue and reaction map disagree".to_string());
        }
        for (species, _) in self.population.entries() {
            for name in [species.outer(), species.inner()] {
                if !self.env.contains(name) {
                    return Err(format!("{name} is used but not allocated"));
                }
            }
            if species.outer() == species.inner() {
                return Err(format!("{species:?} encloses itself"));
            }
        }
        Ok(())
    }
}
