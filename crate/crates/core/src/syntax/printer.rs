//! Concrete syntax output. Terms built by the parser print back to text that
//! parses to the same tree; other trees print to a congruent term.

use std::fmt;

use super::{Membrane, Prefix, System};

fn guards(m: &Membrane) -> Vec<&Prefix> {
    let mut out = Vec::new();
    let mut stack = vec![m];
    while let Some(m) = stack.pop() {
        match m {
            Membrane::Zero => {}
            Membrane::Par(l, r) => {
                stack.push(r);
                stack.push(l);
            }
            Membrane::Prefix(p) => out.push(&**p),
        }
    }
    out
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}<{}>", self.kind(), self.name())?;
        if let Some(arg) = self.arg() {
            write!(f, "({arg})")?;
        }
        match guards(self.cont()).as_slice() {
            [] => Ok(()),
            [single] => write!(f, ".{single}"),
            _ => write!(f, ".({})", self.cont()),
        }
    }
}

impl fmt::Display for Membrane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gs = guards(self);
        if gs.is_empty() {
            return f.write_str("0");
        }
        for (i, g) in gs.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            g.fmt(f)?;
        }
        Ok(())
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items = self.components();
        if items.is_empty() {
            return f.write_str("void");
        }
        let mut i = 0;
        let mut first = true;
        while i < items.len() {
            let mut run = 1;
            while i + run < items.len() && items[i + run] == items[i] {
                run += 1;
            }
            if !first {
                f.write_str(" o ")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{run} * ")?;
            }
            if let System::Cell(m, content) = items[i] {
                write!(f, "{m}[{content}]")?;
            }
            i += run;
        }
        Ok(())
    }
}
