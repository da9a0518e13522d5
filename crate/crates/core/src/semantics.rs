//! Set-at-once evaluation shared by ordinary and generalized structures.
//!
//! A formula denotes the set of worlds forcing it. Both kinds of frame
//! agree on the boolean and `□` clauses and differ only in how `▷` reads
//! the `S` relation, so everything here is written against
//! [`Semantics`].

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::worldset::{World, WorldSet};

pub trait Semantics {
    fn world_count(&self) -> usize;

    /// R-successors of `w`.
    fn successors(&self, w: World) -> WorldSet;

    /// Worlds whose every R-successor lies in `x`.
    fn box_set(&self, x: WorldSet) -> WorldSet {
        (0..self.world_count())
            .filter(|&w| self.successors(w).is_subset(x))
            .collect()
    }

    /// Worlds forcing `a ▷ b` when `a` and `b` denote the given sets.
    fn rhd_set(&self, a: WorldSet, b: WorldSet) -> WorldSet;

    fn all_worlds(&self) -> WorldSet {
        WorldSet::full(self.world_count())
    }
}

/// Extension of `f` with atoms read through `val`.
pub fn extension<S: Semantics + ?Sized>(
    sem: &S,
    f: &Formula,
    val: &dyn Fn(&str) -> Option<WorldSet>,
) -> Result<WorldSet> {
    Ok(match f {
        Formula::Bottom => WorldSet::EMPTY,
        Formula::Atom(p) => val(p).ok_or_else(|| Error::UnknownAtom(p.clone()))?,
        Formula::Implies(a, b) => {
            let a = extension(sem, a, val)?;
            let b = extension(sem, b, val)?;
            a.complement(sem.world_count()) | b
        }
        Formula::Box(a) => sem.box_set(extension(sem, a, val)?),
        Formula::Rhd(a, b) => {
            let a = extension(sem, a, val)?;
            let b = extension(sem, b, val)?;
            sem.rhd_set(a, b)
        }
    })
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Bottom,
    Var(usize),
    Const(WorldSet),
    Implies(usize, usize),
    Box(usize),
    Rhd(usize, usize),
}

#[derive(Clone, Debug)]
struct Node {
    op: Op,
    /// Highest variable index this node depends on.
    max_var: Option<usize>,
}

/// A formula flattened into a DAG whose leaves are either fixed sets or
/// assignment variables. Used to sweep many assignments while only
/// recomputing the nodes an assignment change can affect.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    nodes: Vec<Node>,
    vars: usize,
}

impl Compiled {
    /// `vars` are the atom names bound by assignments; every other atom is
    /// looked up in `fixed`.
    pub fn new(
        f: &Formula,
        vars: &[&str],
        fixed: &dyn Fn(&str) -> Option<WorldSet>,
    ) -> Result<Self> {
        let subs = f.subformulas();
        let mut nodes: Vec<Node> = Vec::with_capacity(subs.len());
        let index = |g: &Formula, nodes_done: &[Formula]| {
            nodes_done.iter().position(|h| h == g).expect("children precede parents")
        };
        for (i, g) in subs.iter().enumerate() {
            let done = &subs[..i];
            let (op, max_var) = match g {
                Formula::Bottom => (Op::Bottom, None),
                Formula::Atom(p) => match vars.iter().position(|v| v == p) {
                    Some(k) => (Op::Var(k), Some(k)),
                    None => {
                        let set = fixed(p).ok_or_else(|| Error::UnknownAtom(p.clone()))?;
                        (Op::Const(set), None)
                    }
                },
                Formula::Implies(a, b) => {
                    let (a, b) = (index(a, done), index(b, done));
                    (Op::Implies(a, b), nodes[a].max_var.max(nodes[b].max_var))
                }
                Formula::Box(a) => {
                    let a = index(a, done);
                    (Op::Box(a), nodes[a].max_var)
                }
                Formula::Rhd(a, b) => {
                    let (a, b) = (index(a, done), index(b, done));
                    (Op::Rhd(a, b), nodes[a].max_var.max(nodes[b].max_var))
                }
            };
            nodes.push(Node { op, max_var });
        }
        Ok(Compiled { nodes, vars: vars.len() })
    }

    fn eval_node<S: Semantics + ?Sized>(
        &self,
        sem: &S,
        i: usize,
        values: &[WorldSet],
        assignment: &[WorldSet],
    ) -> WorldSet {
        match self.nodes[i].op {
            Op::Bottom => WorldSet::EMPTY,
            Op::Var(k) => assignment[k],
            Op::Const(s) => s,
            Op::Implies(a, b) => values[a].complement(sem.world_count()) | values[b],
            Op::Box(a) => sem.box_set(values[a]),
            Op::Rhd(a, b) => sem.rhd_set(values[a], values[b]),
        }
    }

    /// Walks every assignment drawing variable `k` from `domains[k]`, in
    /// lexicographic order with variable 0 outermost, and returns the first
    /// assignment (as domain indices) whose extension misses a world of
    /// `required`, together with the least such world.
    pub fn first_failure<S: Semantics + ?Sized>(
        &self,
        sem: &S,
        domains: &[&[WorldSet]],
        required: WorldSet,
    ) -> Option<(Vec<usize>, World)> {
        assert_eq!(domains.len(), self.vars);
        if domains.iter().any(|d| d.is_empty()) {
            return None;
        }
        let mut idx = vec![0usize; self.vars];
        let mut assignment: Vec<WorldSet> = domains.iter().map(|d| d[0]).collect();
        let mut values = vec![WorldSet::EMPTY; self.nodes.len()];
        for i in 0..self.nodes.len() {
            values[i] = self.eval_node(sem, i, &values, &assignment);
        }
        let root = self.nodes.len() - 1;
        loop {
            let missing = required - values[root];
            if let Some(w) = missing.first() {
                return Some((idx, w));
            }
            // Advance the odometer; `changed` is the outermost moved position.
            let mut k = self.vars;
            loop {
                if k == 0 {
                    return None;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < domains[k].len() {
                    assignment[k] = domains[k][idx[k]];
                    break;
                }
                idx[k] = 0;
                assignment[k] = domains[k][0];
            }
            let changed = k;
            for i in 0..self.nodes.len() {
                if matches!(self.nodes[i].max_var, Some(m) if m >= changed) {
                    values[i] = self.eval_node(sem, i, &values, &assignment);
                }
            }
        }
    }
}
