//! Hitting sets (transversals) of families of world sets.

use crate::worldset::WorldSet;

/// Inclusion-minimal sets meeting every member of `family`, sorted.
///
/// Berge's incremental construction: extend each current transversal that
/// misses the next member by one element of it, then drop non-minimal
/// results. An empty family has the single transversal `∅`; a family with
/// an empty member has none.
pub fn minimal_transversals(family: &[WorldSet]) -> Vec<WorldSet> {
    let mut current = vec![WorldSet::EMPTY];
    for &edge in family {
        let mut next: Vec<WorldSet> = Vec::new();
        for &t in &current {
            if t.intersects(edge) {
                next.push(t);
            } else {
                next.extend(edge.iter().map(|e| t.with(e)));
            }
        }
        current = minimize(next);
    }
    current.sort();
    current
}

fn minimize(mut sets: Vec<WorldSet>) -> Vec<WorldSet> {
    sets.sort_by_key(|s| s.len());
    sets.dedup();
    let mut out: Vec<WorldSet> = Vec::with_capacity(sets.len());
    for s in sets {
        if !out.iter().any(|m| m.is_subset(s)) {
            out.push(s);
        }
    }
    out
}

/// Every transversal of `family` contained in the union of its members.
pub fn all_transversals(family: &[WorldSet]) -> Vec<WorldSet> {
    let universe = family.iter().fold(WorldSet::EMPTY, |acc, &s| acc | s);
    universe
        .subsets()
        .into_iter()
        .filter(|g| family.iter().all(|x| x.intersects(*g)))
        .collect()
}
