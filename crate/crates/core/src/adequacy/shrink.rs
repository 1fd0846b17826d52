use crate::syntax::{canonicalize_system, CanonAction, CanonMem, CanonSys, System};

/// Greedy minimisation: repeatedly replace `p` by the first strictly
/// smaller candidate on which `fails` still holds.
pub fn shrink(p: &System, fails: impl Fn(&System) -> bool) -> System {
    let mut current = canonicalize_system(p);
    'outer: loop {
        for candidate in shrink_candidates(&current) {
            if fails(&candidate.to_system()) {
                current = candidate;
                continue 'outer;
            }
        }
        return current.to_system();
    }
}

/// Systems obtained from `p` by deleting one cell, emptying one cell, or
/// deleting or emptying one action, anywhere in the term.
pub fn shrink_candidates(p: &CanonSys) -> Vec<CanonSys> {
    let mut out = Vec::new();
    for (i, (cell, _)) in p.cells().iter().enumerate() {
        let rest = p.without_one(i);
        let with = |m: CanonMem, c: CanonSys| rest.compose(&CanonSys::cell(m, c));
        out.push(rest.clone());
        if !cell.content().is_void() {
            out.push(with(cell.membrane().clone(), CanonSys::void()));
        }
        for m in membrane_candidates(cell.membrane()) {
            out.push(with(m, cell.content().clone()));
        }
        for c in shrink_candidates(cell.content()) {
            out.push(with(cell.membrane().clone(), c));
        }
    }
    out
}

fn membrane_candidates(m: &CanonMem) -> Vec<CanonMem> {
    let mut out = Vec::new();
    for (k, a) in m.actions().iter().enumerate() {
        let rest = m.without(k);
        out.push(rest.clone());
        let rebuild = |arg: Option<CanonMem>, cont: CanonMem| {
            rest.par(&CanonMem::singleton(CanonAction::new(
                a.kind(),
                a.name().clone(),
                arg,
                cont,
            )))
        };
        if let Some(arg) = a.arg() {
            if !arg.is_zero() {
                out.push(rebuild(Some(CanonMem::zero()), a.cont().clone()));
            }
            for smaller in membrane_candidates(arg) {
                out.push(rebuild(Some(smaller), a.cont().clone()));
            }
        }
        if !a.cont().is_zero() {
            out.push(rebuild(a.arg().cloned(), CanonMem::zero()));
        }
        for smaller in membrane_candidates(a.cont()) {
            out.push(rebuild(a.arg().cloned(), smaller));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_system;

    #[test]
    fn shrinks_to_a_minimal_failing_term() {
        let p =
            parse_system("exo<a>[coexo<b>[void]] o pino<c>(phago<a>).exo<b>[cophago<a>(0)[void]]")
                .unwrap();
        let has_pino = |q: &System| q.to_string().contains("pino");
        assert_eq!(shrink(&p, has_pino).to_string(), "pino<c>(0)[void]");
    }

    #[test]
    fn candidates_are_smaller() {
        let p = canonicalize_system(
            &parse_system("2 * pino<c>(phago<a>).exo<b>[cophago<a>(0)[void]]").unwrap(),
        );
        let size = p.to_system().size();
        let cands = shrink_candidates(&p);
        assert!(!cands.is_empty());
        assert!(cands.iter().all(|c| c.to_system().size() < size));
    }
}
