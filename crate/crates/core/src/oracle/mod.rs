//! Reference semantics. Every term is mapped to a finite table of
//! `(label, targets) -> rate` entries, built compositionally from the
//! measures of its parts; `id` entries give the one-step successors with
//! their total rates. [`reduce_all`] independently enumerates the
//! successors of the plain reduction relation.

mod reduce;

use std::collections::BTreeMap;
use std::fmt;

use crate::rates::{RateMap, Weight};
use crate::syntax::{
    ActionKind, ActionName, CanonAction, CanonMem, CanonSys, CanonicalForm, Membrane, System,
};

pub use reduce::reduce_all;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionLabel {
    /// Internal step; one system target.
    Id,
    /// A cell willing to be engulfed: the cell after its phago fired, and the
    /// remaining siblings.
    Ph(ActionName),
    /// A cell willing to engulf: residual membrane, wrapper membrane, the
    /// cell's content and the remaining siblings.
    PhBot(ActionName),
    /// A cell whose membrane offers exo: residual membrane, the cell's
    /// content and the remaining siblings.
    Ex(ActionName),
    /// A membrane action: residual membrane, plus the argument for cophago
    /// and pino.
    Mem(ActionKind, ActionName),
}

impl ActionLabel {
    /// Expected target sorts, `true` for system and `false` for membrane.
    pub fn arity(&self) -> &'static [bool] {
        match self {
            ActionLabel::Id => &[true],
            ActionLabel::Ph(_) => &[true, true],
            ActionLabel::PhBot(_) => &[false, false, true, true],
            ActionLabel::Ex(_) => &[false, true, true],
            ActionLabel::Mem(kind, _) if kind.takes_argument() => &[false, false],
            ActionLabel::Mem(_, _) => &[false],
        }
    }
}

impl fmt::Display for ActionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionLabel::Id => f.write_str("id"),
            ActionLabel::Ph(n) => write!(f, "ph({n})"),
            ActionLabel::PhBot(n) => write!(f, "ph_bot({n})"),
            ActionLabel::Ex(n) => write!(f, "ex({n})"),
            ActionLabel::Mem(kind, n) => write!(f, "{kind}({n})"),
        }
    }
}

pub type TableKey = (ActionLabel, Vec<CanonicalForm>);

/// Finite-support family of measures. Zero entries are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureTable<W> {
    entries: BTreeMap<TableKey, W>,
}

impl<W: Weight> Default for MeasureTable<W> {
    fn default() -> Self {
        MeasureTable {
            entries: BTreeMap::new(),
        }
    }
}

impl<W: Weight> MeasureTable<W> {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ActionLabel, &[CanonicalForm], &W)> {
        self.entries.iter().map(|((l, t), w)| (l, t.as_slice(), w))
    }

    pub fn get(&self, label: &ActionLabel, targets: &[CanonicalForm]) -> W {
        self.entries
            .get(&(label.clone(), targets.to_vec()))
            .cloned()
            .unwrap_or_else(W::zero)
    }

    /// Adds `rate` to the entry, summing with whatever is already there.
    pub fn add(&mut self, label: ActionLabel, targets: Vec<CanonicalForm>, rate: W) {
        debug_assert_eq!(
            label.arity(),
            targets
                .iter()
                .map(|t| matches!(t, CanonicalForm::Sys(_)))
                .collect::<Vec<_>>()
                .as_slice()
        );
        if rate.is_zero() {
            return;
        }
        match self.entries.entry((label, targets)) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(rate);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + rate;
                *o.get_mut() = sum;
            }
        }
    }

    fn with_label<'a>(
        &'a self,
        pred: impl Fn(&ActionLabel) -> bool + 'a,
    ) -> impl Iterator<Item = (&'a ActionLabel, &'a [CanonicalForm], &'a W)> + 'a {
        self.entries().filter(move |(l, _, _)| pred(l))
    }

    /// The `id` entries as successor classes.
    pub fn id_entries(&self) -> BTreeMap<CanonSys, W> {
        self.with_label(|l| *l == ActionLabel::Id)
            .map(|(_, t, w)| (sys(&t[0]).clone(), w.clone()))
            .collect()
    }

    /// Map to another weight type, e.g. exact to float.
    pub fn map<V: Weight>(&self, f: impl Fn(&W) -> V) -> MeasureTable<V> {
        MeasureTable {
            entries: self
                .entries
                .iter()
                .map(|(k, w)| (k.clone(), f(w)))
                .collect(),
        }
    }
}

impl<W: Weight> fmt::Display for MeasureTable<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, targets, rate) in self.entries() {
            let targets: Vec<String> = targets.iter().map(|t| t.to_string()).collect();
            writeln!(f, "{label} -> [{}] : {rate}", targets.join(", "))?;
        }
        Ok(())
    }
}

fn sys(c: &CanonicalForm) -> &CanonSys {
    c.as_sys().expect("system-sorted target")
}

fn mem(c: &CanonicalForm) -> &CanonMem {
    c.as_mem().expect("membrane-sorted target")
}

fn s(p: CanonSys) -> CanonicalForm {
    CanonicalForm::Sys(p)
}

fn m(p: CanonMem) -> CanonicalForm {
    CanonicalForm::Mem(p)
}

/// Measure of a single action-prefixed membrane.
pub fn prefix_measure<W: Weight>(action: &CanonAction, rates: &RateMap) -> MeasureTable<W> {
    let mut table = MeasureTable::empty();
    let mut targets = vec![m(action.cont().clone())];
    if let Some(arg) = action.arg() {
        targets.push(m(arg.clone()));
    }
    table.add(
        ActionLabel::Mem(action.kind(), action.name().clone()),
        targets,
        W::iota(rates, action.name()),
    );
    table
}

/// Measure of `sigma | tau` from the measures of `sigma` and `tau`.
pub fn measure_par<W: Weight>(
    mu1: &MeasureTable<W>,
    mu2: &MeasureTable<W>,
    sigma: &CanonMem,
    tau: &CanonMem,
) -> MeasureTable<W> {
    let mut out = MeasureTable::empty();
    for (mu, other) in [(mu1, tau), (mu2, sigma)] {
        for (label, targets, rate) in mu.entries() {
            let mut targets = targets.to_vec();
            targets[0] = m(mem(&targets[0]).par(other));
            out.add(label.clone(), targets, rate.clone());
        }
    }
    out
}

/// Measure of the cell `sigma(|p|)`, where `nu` is the measure of `sigma`
/// and `mu` the measure of `p`.
pub fn measure_nest<W: Weight>(
    mu: &MeasureTable<W>,
    nu: &MeasureTable<W>,
    sigma: &CanonMem,
    p: &CanonSys,
    rates: &RateMap,
) -> MeasureTable<W> {
    let mut out = MeasureTable::empty();
    let void = || s(CanonSys::void());
    for (label, targets, rate) in nu.entries() {
        let ActionLabel::Mem(kind, name) = label else {
            continue;
        };
        let name = name.clone();
        match kind {
            ActionKind::Phago => out.add(
                ActionLabel::Ph(name),
                vec![
                    s(CanonSys::cell(mem(&targets[0]).clone(), p.clone())),
                    void(),
                ],
                rate.clone(),
            ),
            ActionKind::Cophago => out.add(
                ActionLabel::PhBot(name),
                vec![targets[0].clone(), targets[1].clone(), s(p.clone()), void()],
                rate.clone(),
            ),
            ActionKind::Exo => out.add(
                ActionLabel::Ex(name),
                vec![targets[0].clone(), s(p.clone()), void()],
                rate.clone(),
            ),
            ActionKind::Pino => {
                let vesicle = CanonSys::cell(mem(&targets[1]).clone(), CanonSys::void());
                let target = CanonSys::cell(mem(&targets[0]).clone(), vesicle.compose(p));
                out.add(ActionLabel::Id, vec![s(target)], rate.clone());
            }
            ActionKind::Coexo => {}
        }
    }
    for (label, targets, rate) in mu.entries() {
        match label {
            ActionLabel::Id => {
                let target = CanonSys::cell(sigma.clone(), sys(&targets[0]).clone());
                out.add(ActionLabel::Id, vec![s(target)], rate.clone());
            }
            ActionLabel::Ex(name) => {
                let coexo = ActionLabel::Mem(ActionKind::Coexo, name.clone());
                for (_, co_targets, co_rate) in nu.with_label(|l| *l == coexo) {
                    let membrane = mem(&targets[0]).par(mem(&co_targets[0]));
                    let target = CanonSys::cell(membrane, sys(&targets[2]).clone())
                        .compose(sys(&targets[1]));
                    let r = rate.clone() * co_rate.clone() / W::iota(rates, name);
                    out.add(ActionLabel::Id, vec![s(target)], r);
                }
            }
            _ => {}
        }
    }
    out
}

/// Measure of `p o q`, where `mu1` is the measure of `p` and `mu2` of `q`.
pub fn measure_comp<W: Weight>(
    mu1: &MeasureTable<W>,
    mu2: &MeasureTable<W>,
    p: &CanonSys,
    q: &CanonSys,
    rates: &RateMap,
) -> MeasureTable<W> {
    let mut out = MeasureTable::empty();
    for (mu, other) in [(mu1, q), (mu2, p)] {
        for (label, targets, rate) in mu.entries() {
            let mut targets = targets.to_vec();
            let last = targets.len() - 1;
            targets[last] = s(sys(&targets[last]).compose(other));
            out.add(label.clone(), targets, rate.clone());
        }
    }
    for (ph_side, bot_side) in [(mu1, mu2), (mu2, mu1)] {
        for (label, ph, a) in ph_side.entries() {
            let ActionLabel::Ph(name) = label else {
                continue;
            };
            let bot = ActionLabel::PhBot(name.clone());
            for (_, b_targets, b) in bot_side.with_label(|l| *l == bot) {
                let [x1, x2, z1, z2] = b_targets else {
                    unreachable!("ph_bot has four targets")
                };
                let wrapper = CanonSys::cell(mem(x2).clone(), sys(&ph[0]).clone());
                let target = CanonSys::cell(mem(x1).clone(), wrapper.compose(sys(z1)))
                    .compose(sys(&ph[1]))
                    .compose(sys(z2));
                let r = a.clone() * b.clone() / W::iota(rates, name);
                out.add(ActionLabel::Id, vec![s(target)], r);
            }
        }
    }
    out
}

/// Canonical form and measure of a membrane, computed together.
pub fn measure_membrane<W: Weight>(
    sigma: &Membrane,
    rates: &RateMap,
) -> (CanonMem, MeasureTable<W>) {
    match sigma {
        Membrane::Zero => (CanonMem::zero(), MeasureTable::empty()),
        Membrane::Prefix(_) => {
            let canon = crate::syntax::canonicalize_membrane(sigma);
            let table = prefix_measure(&canon.actions()[0], rates);
            (canon, table)
        }
        Membrane::Par(l, r) => {
            let (cl, ml) = measure_membrane(l, rates);
            let (cr, mr) = measure_membrane(r, rates);
            let table = measure_par(&ml, &mr, &cl, &cr);
            (cl.par(&cr), table)
        }
    }
}

/// Canonical form and measure of a system, computed together.
pub fn measure_system<W: Weight>(p: &System, rates: &RateMap) -> (CanonSys, MeasureTable<W>) {
    match p {
        System::Void => (CanonSys::void(), MeasureTable::empty()),
        System::Cell(sigma, content) => {
            let (cs, nu) = measure_membrane(sigma, rates);
            let (cp, mu) = measure_system(content, rates);
            let table = measure_nest(&mu, &nu, &cs, &cp, rates);
            (CanonSys::cell(cs, cp), table)
        }
        System::Comp(l, r) => {
            let (cl, ml) = measure_system(l, rates);
            let (cr, mr) = measure_system(r, rates);
            let table = measure_comp(&ml, &mr, &cl, &cr, rates);
            (cl.compose(&cr), table)
        }
    }
}

pub fn measure<W: Weight>(p: &System, rates: &RateMap) -> MeasureTable<W> {
    measure_system(p, rates).1
}

/// Measure of a canonical system, built from balanced compositions.
pub fn measure_canonical<W: Weight>(p: &CanonSys, rates: &RateMap) -> MeasureTable<W> {
    measure(&p.to_system(), rates)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Successor<W> {
    pub target: CanonSys,
    pub rate: W,
}

/// One-step successors with their total rates, in canonical order.
pub fn id_successors<W: Weight>(p: &System, rates: &RateMap) -> Vec<Successor<W>> {
    measure::<W>(p, rates)
        .id_entries()
        .into_iter()
        .map(|(target, rate)| Successor { target, rate })
        .collect()
}
