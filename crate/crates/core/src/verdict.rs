use std::fmt;

use crate::schema::{Schema, SchemaId};
use crate::semantics::{Compiled, Semantics};
use crate::worldset::{World, WorldSet};

/// Outcome of a decider: the property holds, or fails with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }

    pub fn into_witness(self) -> Option<W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }
}

/// A subset assignment to a schema's metavariables together with a world
/// where the resulting instance is false.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterAssignment {
    pub schema: SchemaId,
    pub assignment: Vec<(&'static str, WorldSet)>,
    pub world: World,
}

impl CounterAssignment {
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayCounter { c: self, names }
    }
}

struct DisplayCounter<'a> {
    c: &'a CounterAssignment,
    names: &'a [String],
}

impl fmt::Display for DisplayCounter<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at {} under", self.c.schema, self.names[self.c.world])?;
        for (m, set) in &self.c.assignment {
            write!(f, " {m}={}", set_names(*set, self.names))?;
        }
        Ok(())
    }
}

/// `{a, b}` rendering of a world set.
pub fn set_names(set: WorldSet, names: &[String]) -> String {
    let items: Vec<&str> = set.iter().map(|w| names[w].as_str()).collect();
    format!("{{{}}}", items.join(", "))
}

/// Frame validity of a schema by sweeping every subset assignment to its
/// metavariables. The first failure in assignment order is reported.
pub(crate) fn brute_force_validity<S: Semantics + ?Sized>(
    sem: &S,
    schema: &Schema,
) -> Verdict<CounterAssignment> {
    let vars = schema.metavariables();
    let compiled =
        Compiled::new(&schema.body, &vars, &|_| None).expect("schema bodies only use metavariables");
    let subsets = sem.all_worlds().subsets();
    let domains: Vec<&[WorldSet]> = vars.iter().map(|_| subsets.as_slice()).collect();
    match compiled.first_failure(sem, &domains, sem.all_worlds()) {
        None => Verdict::Holds,
        Some((idx, world)) => Verdict::Fails(CounterAssignment {
            schema: schema.id,
            assignment: vars.iter().zip(idx).map(|(m, i)| (*m, subsets[i])).collect(),
            world,
        }),
    }
}
