//! Exhaustive one-step reduction on canonical systems. Deliberately written
//! without measures so it can cross-check them.

use std::collections::BTreeSet;

use crate::syntax::{canonicalize_system, ActionKind, CanonMem, CanonSys, System};

pub fn reduce_all(p: &System) -> BTreeSet<CanonSys> {
    successors(&canonicalize_system(p))
}

/// The membrane left after firing the action at `index`: the other actions
/// in parallel with the fired action's continuation.
fn residual(membrane: &CanonMem, index: usize) -> CanonMem {
    membrane
        .without(index)
        .par(membrane.actions()[index].cont())
}

fn successors(p: &CanonSys) -> BTreeSet<CanonSys> {
    let mut out = BTreeSet::new();
    let cells = p.cells();
    for (i, (cell, count)) in cells.iter().enumerate() {
        let rest = p.without_one(i);
        let membrane = cell.membrane();
        let content = cell.content();

        for (k, action) in membrane.actions().iter().enumerate() {
            match action.kind() {
                ActionKind::Pino => {
                    let vesicle = CanonSys::cell(action.arg().unwrap().clone(), CanonSys::void());
                    let new = CanonSys::cell(residual(membrane, k), vesicle.compose(content));
                    out.insert(rest.compose(&new));
                }
                ActionKind::Coexo => {
                    for (j, (child, _)) in content.cells().iter().enumerate() {
                        for (l, exo) in child.membrane().actions().iter().enumerate() {
                            if exo.kind() != ActionKind::Exo || exo.name() != action.name() {
                                continue;
                            }
                            let merged = residual(membrane, k).par(&residual(child.membrane(), l));
                            let new = CanonSys::cell(merged, content.without_one(j))
                                .compose(child.content());
                            out.insert(rest.compose(&new));
                        }
                    }
                }
                ActionKind::Cophago => {
                    for (j, (other, _)) in cells.iter().enumerate() {
                        if j == i && *count < 2 {
                            continue;
                        }
                        let others = rest.without_one(rest_index(p, &rest, j));
                        for (l, phago) in other.membrane().actions().iter().enumerate() {
                            if phago.kind() != ActionKind::Phago || phago.name() != action.name() {
                                continue;
                            }
                            let engulfed = CanonSys::cell(
                                residual(other.membrane(), l),
                                other.content().clone(),
                            );
                            let wrapper = CanonSys::cell(action.arg().unwrap().clone(), engulfed);
                            let new =
                                CanonSys::cell(residual(membrane, k), wrapper.compose(content));
                            out.insert(others.compose(&new));
                        }
                    }
                }
                ActionKind::Phago | ActionKind::Exo => {}
            }
        }

        for inner in successors(content) {
            out.insert(rest.compose(&CanonSys::cell(membrane.clone(), inner)));
        }
    }
    out
}

/// Position in `rest` (`p` with one copy of some cell removed) of the cell
/// at position `j` in `p`, which must still be present.
fn rest_index(p: &CanonSys, rest: &CanonSys, j: usize) -> usize {
    let target = &p.cells()[j].0;
    rest.cells()
        .iter()
        .position(|(c, _)| c == target)
        .expect("cell still present")
}
