//! Definable algebras and forcing of logics over them.
//!
//! In a fixed model, a formula built from the model's atoms can only denote
//! a set in the definable algebra. Quantifying schema metavariables over
//! that algebra therefore decides whether every instantiation of a schema
//! is forced, which is what model-based (rather than frame-based) soundness
//! arguments need.

use std::collections::BTreeMap;
use std::fmt;

use crate::formula::Formula;
use crate::schema::SchemaId;
use crate::semantics::{Compiled, Semantics};
use crate::verdict::Verdict;
use crate::worldset::{World, WorldSet};

/// The definable sets of a model, each with a formula defining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinableAlgebra {
    members: BTreeMap<WorldSet, Formula>,
}

impl DefinableAlgebra {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, set: WorldSet) -> bool {
        self.members.contains_key(&set)
    }

    /// Members in ascending set order.
    pub fn sets(&self) -> Vec<WorldSet> {
        self.members.keys().copied().collect()
    }

    pub fn definition(&self, set: WorldSet) -> Option<&Formula> {
        self.members.get(&set)
    }
}

pub(crate) fn close<S: Semantics + ?Sized>(
    sem: &S,
    generators: Vec<(Formula, WorldSet)>,
) -> DefinableAlgebra {
    let n = sem.world_count();
    let mut members: BTreeMap<WorldSet, Formula> = BTreeMap::new();
    let mut order: Vec<WorldSet> = Vec::new();
    let add = |set: WorldSet, f: Formula, members: &mut BTreeMap<_, _>, order: &mut Vec<_>| {
        if let std::collections::btree_map::Entry::Vacant(e) = members.entry(set) {
            e.insert(f);
            order.push(set);
        }
    };
    add(WorldSet::EMPTY, Formula::Bottom, &mut members, &mut order);
    for (f, set) in generators {
        add(set, f, &mut members, &mut order);
    }
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        let fx = members[&x].clone();
        add(x.complement(n), Formula::not(fx.clone()), &mut members, &mut order);
        add(sem.box_set(x), Formula::boxed(fx.clone()), &mut members, &mut order);
        for j in 0..=i {
            let y = order[j];
            let fy = members[&y].clone();
            add(x & y, Formula::and(fx.clone(), fy.clone()), &mut members, &mut order);
            add(sem.rhd_set(x, y), Formula::rhd(fx.clone(), fy.clone()), &mut members, &mut order);
            add(sem.rhd_set(y, x), Formula::rhd(fy, fx.clone()), &mut members, &mut order);
        }
        i += 1;
    }
    DefinableAlgebra { members }
}

/// An instance of a schema, with metavariables replaced by definable
/// formulas, that is false at `world`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailingInstance {
    pub schema: SchemaId,
    pub assignment: Vec<(&'static str, WorldSet)>,
    pub instance: Formula,
    pub world: World,
}

impl FailingInstance {
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayFailing { f: self, names }
    }
}

struct DisplayFailing<'a> {
    f: &'a FailingInstance,
    names: &'a [String],
}

impl fmt::Display for DisplayFailing<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} instance fails at {}: {}",
            self.f.schema, self.names[self.f.world], self.f.instance
        )
    }
}

/// First instance (in schema order, then assignment order) of a schema in
/// `logic` that is false somewhere in `required`.
pub(crate) fn forces_logic<S: Semantics + ?Sized>(
    sem: &S,
    alg: &DefinableAlgebra,
    logic: &[SchemaId],
    required: WorldSet,
) -> Verdict<FailingInstance> {
    let sets = alg.sets();
    for &id in logic {
        let schema = id.schema();
        let vars = schema.metavariables();
        let compiled = Compiled::new(&schema.body, &vars, &|_| None)
            .expect("schema bodies only use metavariables");
        let domains: Vec<&[WorldSet]> = vars.iter().map(|_| sets.as_slice()).collect();
        if let Some((idx, world)) = compiled.first_failure(sem, &domains, required) {
            let assignment: Vec<(&'static str, WorldSet)> =
                vars.iter().zip(&idx).map(|(m, &i)| (*m, sets[i])).collect();
            let subst: BTreeMap<String, Formula> = assignment
                .iter()
                .map(|(m, set)| (m.to_string(), alg.members[set].clone()))
                .collect();
            let instance = schema.instantiate(&subst).expect("all metavariables are bound");
            return Verdict::Fails(FailingInstance { schema: id, assignment, instance, world });
        }
    }
    Verdict::Holds
}

/// Whether some assignment of members of `sets` to the metavariables of
/// `id` yields an instance false somewhere in `required`.
pub(crate) fn schema_fails_over<S: Semantics + ?Sized>(
    sem: &S,
    sets: &[WorldSet],
    id: SchemaId,
    required: WorldSet,
) -> bool {
    let schema = id.schema();
    let vars = schema.metavariables();
    let compiled =
        Compiled::new(&schema.body, &vars, &|_| None).expect("schema bodies only use metavariables");
    let domains: Vec<&[WorldSet]> = vars.iter().map(|_| sets).collect();
    compiled.first_failure(sem, &domains, required).is_some()
}
