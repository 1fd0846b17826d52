use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{HierarchyError, Located, NodeName};

/// Species multiplicities, indexed by both names of each species. Entries
/// may transiently hold a zero count; they are ignored by every query that
/// talks about positive species.
#[derive(Clone, Debug)]
pub struct Population<S> {
    counts: BTreeMap<S, u64>,
    by_outer: HashMap<NodeName, BTreeSet<S>>,
    by_inner: HashMap<NodeName, BTreeSet<S>>,
}

impl<S> Default for Population<S> {
    fn default() -> Self {
        Population {
            counts: BTreeMap::new(),
            by_outer: HashMap::new(),
            by_inner: HashMap::new(),
        }
    }
}

impl<S: Located> Population<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self, species: &S) -> u64 {
        self.counts.get(species).copied().unwrap_or(0)
    }

    pub fn contains(&self, species: &S) -> bool {
        self.counts.contains_key(species)
    }

    /// Sets the count, inserting the key when absent.
    pub fn set(&mut self, species: &S, count: u64) {
        if let Some(c) = self.counts.get_mut(species) {
            *c = count;
            return;
        }
        self.counts.insert(species.clone(), count);
        self.by_outer
            .entry(species.outer())
            .or_default()
            .insert(species.clone());
        self.by_inner
            .entry(species.inner())
            .or_default()
            .insert(species.clone());
    }

    /// Drops the key entirely, returning its count.
    pub fn remove(&mut self, species: &S) -> Option<u64> {
        let count = self.counts.remove(species)?;
        for (index, name) in [
            (&mut self.by_outer, species.outer()),
            (&mut self.by_inner, species.inner()),
        ] {
            if let Some(set) = index.get_mut(&name) {
                set.remove(species);
                if set.is_empty() {
                    index.remove(&name);
                }
            }
        }
        Some(count)
    }

    /// All entries, including zero counts, in species order.
    pub fn entries(&self) -> impl Iterator<Item = (&S, u64)> {
        self.counts.iter().map(|(s, n)| (s, *n))
    }

    pub fn positive(&self) -> impl Iterator<Item = (&S, u64)> {
        self.entries().filter(|(_, n)| *n > 0)
    }

    /// Number of species with a positive count.
    pub fn species_count(&self) -> usize {
        self.positive().count()
    }

    /// Number of stored entries, zero counts included.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> u128 {
        self.counts.values().map(|n| *n as u128).sum()
    }

    /// Every stored species located at `name`, zero counts included.
    pub fn located_at(&self, name: NodeName) -> impl Iterator<Item = &S> {
        self.by_outer.get(&name).into_iter().flatten()
    }

    /// Species with positive count located at `name`, in species order.
    pub fn children(&self, name: NodeName) -> impl Iterator<Item = (&S, u64)> {
        self.located_at(name)
            .map(|s| (s, self.count(s)))
            .filter(|(_, n)| *n > 0)
    }

    /// Every stored species whose own compartment is `name`.
    pub fn enclosing(&self, name: NodeName) -> impl Iterator<Item = &S> {
        self.by_inner.get(&name).into_iter().flatten()
    }

    /// The positive species whose own compartment is `name`.
    pub fn owner(&self, name: NodeName) -> Result<Option<&S>, HierarchyError> {
        let mut owners = self.enclosing(name).filter(|s| self.count(s) > 0);
        let first = owners.next();
        if owners.next().is_some() {
            return Err(HierarchyError::AmbiguousParent(name));
        }
        Ok(first)
    }

    /// Strict ancestors, nearest first.
    pub fn ancestors(&self, species: &S) -> Result<Vec<S>, HierarchyError> {
        let mut out = Vec::new();
        let mut current = species.outer();
        while current != NodeName::Root {
            let parent = self
                .owner(current)?
                .ok_or(HierarchyError::MissingParent(current))?;
            if out.len() > self.counts.len() {
                return Err(HierarchyError::Cycle(current));
            }
            out.push(parent.clone());
            current = parent.outer();
        }
        Ok(out)
    }

    /// Every stored species below `species` in the compartment tree,
    /// zero counts included, in breadth-first order.
    pub fn descendants(&self, species: &S) -> Vec<S> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let mut frontier = vec![species.inner()];
        while let Some(name) = frontier.pop() {
            if !seen.insert(name) {
                continue;
            }
            for child in self.located_at(name) {
                out.push(child.clone());
                frontier.push(child.inner());
            }
        }
        out
    }

    /// Cumulative multiplicity: the count times the counts of every
    /// ancestor up to the root.
    pub fn s_star(&self, species: &S) -> Result<u128, HierarchyError> {
        let mut acc = self.count(species) as u128;
        for a in self.ancestors(species)? {
            acc = acc.saturating_mul(self.count(&a) as u128);
        }
        Ok(acc)
    }

    /// Names that locate a positive species but are enclosed by none.
    pub fn roots(&self) -> BTreeSet<NodeName> {
        self.positive()
            .map(|(s, _)| s.outer())
            .filter(|x| matches!(self.owner(*x), Ok(None)))
            .collect()
    }
}
