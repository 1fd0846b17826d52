//! Brane Calculus terms: membranes, systems, their concrete syntax, and the
//! canonical forms that decide structural congruence.

mod canon;
mod normal;
mod parser;
mod printer;

use std::fmt;
use std::sync::Arc;

pub use canon::{
    canonicalize_membrane, canonicalize_system, CanonAction, CanonCell, CanonMem, CanonSys,
    CanonicalForm,
};
pub use normal::{to_normal_form, unfold, NormalEntry, NormalSystem};
pub use parser::{parse_membrane, parse_system, ParseError};

/// Name attached to an action, e.g. the `n` in `phago<n>`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionName(Arc<str>);

impl ActionName {
    /// Panics on an empty label; labels come from the parser or from code.
    pub fn new(label: &str) -> Self {
        assert!(!label.is_empty(), "action names are nonempty");
        ActionName(Arc::from(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for ActionName {
    fn from(label: &str) -> Self {
        ActionName::new(label)
    }
}

impl fmt::Display for ActionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ActionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionKind {
    Phago,
    Cophago,
    Exo,
    Coexo,
    Pino,
}

impl ActionKind {
    pub const ALL: [ActionKind; 5] = [
        ActionKind::Phago,
        ActionKind::Cophago,
        ActionKind::Exo,
        ActionKind::Coexo,
        ActionKind::Pino,
    ];

    /// `cophago` and `pino` carry a membrane argument; the others do not.
    pub fn takes_argument(self) -> bool {
        matches!(self, ActionKind::Cophago | ActionKind::Pino)
    }

    pub fn keyword(self) -> &'static str {
        match self {
            ActionKind::Phago => "phago",
            ActionKind::Cophago => "cophago",
            ActionKind::Exo => "exo",
            ActionKind::Coexo => "coexo",
            ActionKind::Pino => "pino",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        ActionKind::ALL.into_iter().find(|k| k.keyword() == word)
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ArityError {
    #[error("{0} requires a membrane argument")]
    MissingArgument(ActionKind),
    #[error("{0} does not take a membrane argument")]
    UnexpectedArgument(ActionKind),
}

/// An action-prefixed membrane `kind_name(arg).cont`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Prefix {
    kind: ActionKind,
    name: ActionName,
    arg: Option<Membrane>,
    cont: Membrane,
}

impl Prefix {
    pub fn new(
        kind: ActionKind,
        name: ActionName,
        arg: Option<Membrane>,
        cont: Membrane,
    ) -> Result<Self, ArityError> {
        match (kind.takes_argument(), arg.is_some()) {
            (true, false) => Err(ArityError::MissingArgument(kind)),
            (false, true) => Err(ArityError::UnexpectedArgument(kind)),
            _ => Ok(Prefix {
                kind,
                name,
                arg,
                cont,
            }),
        }
    }

    pub fn kind(&self) -> ActionKind {
        self.kind
    }

    pub fn name(&self) -> &ActionName {
        &self.name
    }

    pub fn arg(&self) -> Option<&Membrane> {
        self.arg.as_ref()
    }

    pub fn cont(&self) -> &Membrane {
        &self.cont
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Membrane {
    Zero,
    Par(Box<Membrane>, Box<Membrane>),
    Prefix(Box<Prefix>),
}

impl Membrane {
    pub fn par(left: Membrane, right: Membrane) -> Self {
        Membrane::Par(Box::new(left), Box::new(right))
    }

    /// Balanced parallel composition; the parser builds `a | b | c` this way.
    pub fn par_all(items: Vec<Membrane>) -> Self {
        balanced(items, Membrane::Zero, &Membrane::par)
    }

    pub fn prefix(
        kind: ActionKind,
        name: impl Into<ActionName>,
        arg: Option<Membrane>,
        cont: Membrane,
    ) -> Result<Self, ArityError> {
        Prefix::new(kind, name.into(), arg, cont).map(|p| Membrane::Prefix(Box::new(p)))
    }

    pub fn phago(name: impl Into<ActionName>, cont: Membrane) -> Self {
        Self::simple(ActionKind::Phago, name, cont)
    }

    pub fn exo(name: impl Into<ActionName>, cont: Membrane) -> Self {
        Self::simple(ActionKind::Exo, name, cont)
    }

    pub fn coexo(name: impl Into<ActionName>, cont: Membrane) -> Self {
        Self::simple(ActionKind::Coexo, name, cont)
    }

    pub fn cophago(name: impl Into<ActionName>, arg: Membrane, cont: Membrane) -> Self {
        Self::with_arg(ActionKind::Cophago, name, arg, cont)
    }

    pub fn pino(name: impl Into<ActionName>, arg: Membrane, cont: Membrane) -> Self {
        Self::with_arg(ActionKind::Pino, name, arg, cont)
    }

    fn simple(kind: ActionKind, name: impl Into<ActionName>, cont: Membrane) -> Self {
        Membrane::Prefix(Box::new(Prefix {
            kind,
            name: name.into(),
            arg: None,
            cont,
        }))
    }

    fn with_arg(
        kind: ActionKind,
        name: impl Into<ActionName>,
        arg: Membrane,
        cont: Membrane,
    ) -> Self {
        Membrane::Prefix(Box::new(Prefix {
            kind,
            name: name.into(),
            arg: Some(arg),
            cont,
        }))
    }

    /// Number of action prefixes, counting those nested in arguments and continuations.
    pub fn size(&self) -> usize {
        match self {
            Membrane::Zero => 0,
            Membrane::Par(l, r) => l.size() + r.size(),
            Membrane::Prefix(p) => 1 + p.arg.as_ref().map_or(0, Membrane::size) + p.cont.size(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum System {
    Void,
    Comp(Box<System>, Box<System>),
    Cell(Membrane, Box<System>),
}

impl System {
    pub fn comp(left: System, right: System) -> Self {
        System::Comp(Box::new(left), Box::new(right))
    }

    pub fn cell(membrane: Membrane, content: System) -> Self {
        System::Cell(membrane, Box::new(content))
    }

    /// Balanced composition, so that `n * X` with a large `n` stays shallow.
    pub fn compose_all(items: Vec<System>) -> Self {
        balanced(items, System::Void, &System::comp)
    }

    /// The non-`Void` leaves of the composition tree, left to right.
    pub fn components(&self) -> Vec<&System> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(s) = stack.pop() {
            match s {
                System::Void => {}
                System::Comp(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
                cell => out.push(cell),
            }
        }
        out
    }

    /// Cells plus action prefixes.
    pub fn size(&self) -> usize {
        self.components()
            .into_iter()
            .map(|c| match c {
                System::Cell(m, p) => 1 + m.size() + p.size(),
                _ => 0,
            })
            .sum()
    }
}

fn balanced<T>(items: Vec<T>, unit: T, join: &dyn Fn(T, T) -> T) -> T {
    if items.is_empty() {
        unit
    } else {
        balanced_nonempty(items, join)
    }
}

fn balanced_nonempty<T>(mut items: Vec<T>, join: &dyn Fn(T, T) -> T) -> T {
    if items.len() == 1 {
        return items.pop().unwrap();
    }
    let right = items.split_off(items.len() / 2);
    join(
        balanced_nonempty(items, join),
        balanced_nonempty(right, join),
    )
}
