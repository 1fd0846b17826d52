use super::{canonicalize_system, CanonSys, Membrane, System};

/// A system written as `n1 * s1[Q1] o ... o nk * sk[Qk]` with pairwise
/// non-congruent cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalSystem {
    entries: Vec<NormalEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalEntry {
    pub count: u64,
    pub membrane: Membrane,
    pub content: NormalSystem,
}

impl NormalSystem {
    pub fn empty() -> Self {
        NormalSystem::default()
    }

    /// Caller guarantees counts are positive and cells pairwise non-congruent.
    pub fn from_entries(entries: Vec<NormalEntry>) -> Self {
        NormalSystem { entries }
    }

    pub fn entries(&self) -> &[NormalEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn from_canonical(canon: &CanonSys) -> Self {
        NormalSystem {
            entries: canon
                .cells()
                .iter()
                .map(|(cell, n)| NormalEntry {
                    count: *n,
                    membrane: cell.membrane().to_membrane(),
                    content: NormalSystem::from_canonical(cell.content()),
                })
                .collect(),
        }
    }
}

pub fn to_normal_form(system: &System) -> NormalSystem {
    NormalSystem::from_canonical(&canonicalize_system(system))
}

pub fn unfold(normal: &NormalSystem) -> System {
    let mut items = Vec::new();
    for entry in &normal.entries {
        let cell = System::cell(entry.membrane.clone(), unfold(&entry.content));
        for _ in 0..entry.count {
            items.push(cell.clone());
        }
    }
    System::compose_all(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{canonicalize_membrane, parse_system};

    #[test]
    fn void_has_no_entries() {
        assert!(to_normal_form(&System::Void).is_empty());
        assert_eq!(unfold(&NormalSystem::empty()), System::Void);
    }

    #[test]
    fn congruent_siblings_are_counted() {
        let sigma = Membrane::phago("n", Membrane::Zero);
        let one = System::cell(sigma.clone(), System::Void);
        let nf = to_normal_form(&System::comp(one.clone(), one.clone()));
        assert_eq!(nf.entries().len(), 1);
        assert_eq!(nf.entries()[0].count, 2);
        assert!(nf.entries()[0].content.is_empty());
        assert_eq!(unfold(&nf), System::comp(one.clone(), one));
    }

    #[test]
    fn worked_example_counts() {
        let p = parse_system(
            "10000 * phago<n>.exo<m>[phago<k>[void]] o 100 * cophago<n>(coexo<m>)|coexo<m>[phago<k>[void]]",
        )
        .unwrap();
        let nf = to_normal_form(&p);
        let mut counts: Vec<(u64, String)> = nf
            .entries()
            .iter()
            .map(|e| (e.count, canonicalize_membrane(&e.membrane).to_string()))
            .collect();
        counts.sort();
        assert_eq!(
            counts,
            vec![
                (100, "cophago<n>(coexo<m>) | coexo<m>".to_string()),
                (10000, "phago<n>.exo<m>".to_string())
            ]
        );
        for e in nf.entries() {
            assert_eq!(e.content.entries().len(), 1);
        }
    }
}
