//! Canonical forms deciding structural congruence.
//!
//! A canonical membrane is the sorted multiset of its top-level actions, each
//! with canonical argument and continuation. A canonical system is the sorted
//! multiset of its top-level cells, stored with multiplicities; cells that are
//! congruent to the empty system (`0[void]`) are dropped. Two terms are
//! congruent exactly when their canonical forms are equal.

use std::cmp::Ordering;
use std::fmt;

use super::{ActionKind, ActionName, Membrane, Prefix, System};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonMem {
    actions: Vec<CanonAction>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonAction {
    kind: ActionKind,
    name: ActionName,
    arg: Option<CanonMem>,
    cont: CanonMem,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonSys {
    cells: Vec<(CanonCell, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonCell {
    membrane: CanonMem,
    content: CanonSys,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CanonicalForm {
    Mem(CanonMem),
    Sys(CanonSys),
}

pub fn canonicalize_membrane(membrane: &Membrane) -> CanonMem {
    let mut actions = Vec::new();
    let mut stack = vec![membrane];
    while let Some(m) = stack.pop() {
        match m {
            Membrane::Zero => {}
            Membrane::Par(l, r) => {
                stack.push(r);
                stack.push(l);
            }
            Membrane::Prefix(p) => actions.push(CanonAction::from_prefix(p)),
        }
    }
    actions.sort();
    CanonMem { actions }
}

pub fn canonicalize_system(system: &System) -> CanonSys {
    let mut cells: Vec<CanonCell> = system
        .components()
        .into_iter()
        .filter_map(|c| match c {
            System::Cell(m, content) => {
                CanonCell::new(canonicalize_membrane(m), canonicalize_system(content))
            }
            _ => None,
        })
        .collect();
    cells.sort();
    let mut out: Vec<(CanonCell, u64)> = Vec::with_capacity(cells.len());
    for cell in cells {
        match out.last_mut() {
            Some((last, n)) if *last == cell => *n += 1,
            _ => out.push((cell, 1)),
        }
    }
    CanonSys { cells: out }
}

impl CanonicalForm {
    pub fn of_membrane(m: &Membrane) -> Self {
        CanonicalForm::Mem(canonicalize_membrane(m))
    }

    pub fn of_system(s: &System) -> Self {
        CanonicalForm::Sys(canonicalize_system(s))
    }

    pub fn as_sys(&self) -> Option<&CanonSys> {
        match self {
            CanonicalForm::Sys(s) => Some(s),
            CanonicalForm::Mem(_) => None,
        }
    }

    pub fn as_mem(&self) -> Option<&CanonMem> {
        match self {
            CanonicalForm::Mem(m) => Some(m),
            CanonicalForm::Sys(_) => None,
        }
    }
}

impl CanonAction {
    fn from_prefix(p: &Prefix) -> Self {
        CanonAction {
            kind: p.kind(),
            name: p.name().clone(),
            arg: p.arg().map(canonicalize_membrane),
            cont: canonicalize_membrane(p.cont()),
        }
    }

    /// Panics when the argument does not match the action's arity.
    pub fn new(kind: ActionKind, name: ActionName, arg: Option<CanonMem>, cont: CanonMem) -> Self {
        assert_eq!(
            kind.takes_argument(),
            arg.is_some(),
            "arity mismatch for {kind}"
        );
        CanonAction {
            kind,
            name,
            arg,
            cont,
        }
    }

    pub fn kind(&self) -> ActionKind {
        self.kind
    }

    pub fn name(&self) -> &ActionName {
        &self.name
    }

    pub fn arg(&self) -> Option<&CanonMem> {
        self.arg.as_ref()
    }

    pub fn cont(&self) -> &CanonMem {
        &self.cont
    }

    pub fn to_membrane(&self) -> Membrane {
        Membrane::prefix(
            self.kind,
            self.name.clone(),
            self.arg.as_ref().map(CanonMem::to_membrane),
            self.cont.to_membrane(),
        )
        .expect("canonical actions respect arity")
    }
}

impl CanonMem {
    pub fn zero() -> Self {
        CanonMem::default()
    }

    /// Builds a canonical membrane from an arbitrary multiset of actions.
    pub fn from_actions(mut actions: Vec<CanonAction>) -> Self {
        actions.sort();
        CanonMem { actions }
    }

    pub fn singleton(action: CanonAction) -> Self {
        CanonMem {
            actions: vec![action],
        }
    }

    pub fn actions(&self) -> &[CanonAction] {
        &self.actions
    }

    pub fn is_zero(&self) -> bool {
        self.actions.is_empty()
    }

    /// Canonical form of `self | other`.
    pub fn par(&self, other: &CanonMem) -> CanonMem {
        CanonMem {
            actions: merge_sorted(&self.actions, &other.actions),
        }
    }

    /// The membrane left after removing the action at `index` (one occurrence).
    pub fn without(&self, index: usize) -> CanonMem {
        let mut actions = self.actions.clone();
        actions.remove(index);
        CanonMem { actions }
    }

    pub fn to_membrane(&self) -> Membrane {
        Membrane::par_all(self.actions.iter().map(CanonAction::to_membrane).collect())
    }
}

impl CanonCell {
    /// `None` when the cell is congruent to the empty system.
    pub fn new(membrane: CanonMem, content: CanonSys) -> Option<Self> {
        if membrane.is_zero() && content.is_void() {
            None
        } else {
            Some(CanonCell { membrane, content })
        }
    }

    pub fn membrane(&self) -> &CanonMem {
        &self.membrane
    }

    pub fn content(&self) -> &CanonSys {
        &self.content
    }
}

impl CanonSys {
    pub fn void() -> Self {
        CanonSys::default()
    }

    pub fn is_void(&self) -> bool {
        self.cells.is_empty()
    }

    /// Canonical form of the single cell `membrane[content]`.
    pub fn cell(membrane: CanonMem, content: CanonSys) -> CanonSys {
        CanonSys::repeat(membrane, content, 1)
    }

    /// Canonical form of `count` copies of `membrane[content]`.
    pub fn repeat(membrane: CanonMem, content: CanonSys, count: u64) -> CanonSys {
        match CanonCell::new(membrane, content) {
            Some(cell) if count > 0 => CanonSys {
                cells: vec![(cell, count)],
            },
            _ => CanonSys::void(),
        }
    }

    /// Cells with their multiplicities, in canonical order.
    pub fn cells(&self) -> &[(CanonCell, u64)] {
        &self.cells
    }

    pub fn cell_count(&self) -> u64 {
        self.cells.iter().map(|(_, n)| n).sum()
    }

    /// Canonical form of `self o other`.
    pub fn compose(&self, other: &CanonSys) -> CanonSys {
        let (a, b) = (&self.cells, &other.cells);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        CanonSys { cells: out }
    }

    /// The system with one copy of the cell at `index` taken out.
    pub fn without_one(&self, index: usize) -> CanonSys {
        let mut cells = self.cells.clone();
        if cells[index].1 == 1 {
            cells.remove(index);
        } else {
            cells[index].1 -= 1;
        }
        CanonSys { cells }
    }

    pub fn to_system(&self) -> System {
        let mut items = Vec::new();
        for (cell, n) in &self.cells {
            let one = System::cell(cell.membrane.to_membrane(), cell.content.to_system());
            for _ in 0..*n {
                items.push(one.clone());
            }
        }
        System::compose_all(items)
    }
}

fn merge_sorted<T: Ord + Clone>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i].clone());
            i += 1;
        } else {
            out.push(b[j].clone());
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl fmt::Display for CanonMem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_membrane().fmt(f)
    }
}

impl fmt::Display for CanonAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_membrane().fmt(f)
    }
}

impl fmt::Display for CanonSys {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_void() {
            return f.write_str("void");
        }
        for (i, (cell, n)) in self.cells.iter().enumerate() {
            if i > 0 {
                f.write_str(" o ")?;
            }
            if *n > 1 {
                write!(f, "{n} * ")?;
            }
            write!(f, "{}[{}]", cell.membrane, cell.content)?;
        }
        Ok(())
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalForm::Mem(m) => m.fmt(f),
            CanonicalForm::Sys(s) => s.fmt(f),
        }
    }
}
