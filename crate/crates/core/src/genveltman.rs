//! Generalized (set-valued) Veltman frames.
//!
//! Here `S` relates a base world `w` and a source world `x` to a nonempty
//! set of worlds `Y`, written `x S_w Y`. Targets are kept per `(w, x)` as a
//! sorted list of sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::schema::{Schema, SchemaId};
use crate::semantics::{self, Semantics};
use crate::transversal;
use crate::veltman::{check_names, default_names, transitive_closure, world_index, Frame, Model};
use crate::verdict::{brute_force_validity, set_names, CounterAssignment, Verdict};
use crate::worldset::{World, WorldSet};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GenFrame {
    names: Vec<String>,
    r: Vec<WorldSet>,
    s: Vec<Vec<Vec<WorldSet>>>,
}

fn insert_sorted(v: &mut Vec<WorldSet>, t: WorldSet) -> bool {
    match v.binary_search(&t) {
        Ok(_) => false,
        Err(i) => {
            v.insert(i, t);
            true
        }
    }
}

impl GenFrame {
    pub fn new(names: Vec<String>) -> Result<Self> {
        check_names(&names)?;
        let n = names.len();
        Ok(GenFrame { names, r: vec![WorldSet::EMPTY; n], s: vec![vec![Vec::new(); n]; n] })
    }

    pub fn with_size(n: usize) -> Self {
        GenFrame::new(default_names(n)).expect("generated names are distinct")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, w: World) -> &str {
        &self.names[w]
    }

    pub fn world(&self, name: &str) -> Result<World> {
        world_index(&self.names, name)
    }

    pub fn add_r(&mut self, x: World, y: World) {
        self.r[x].insert(y);
    }

    /// Adds `from S_base to`; returns whether the triple is new.
    pub fn add_s(&mut self, base: World, from: World, to: WorldSet) -> bool {
        insert_sorted(&mut self.s[base][from], to)
    }

    pub fn r_successors(&self, x: World) -> WorldSet {
        self.r[x]
    }

    pub fn has_r(&self, x: World, y: World) -> bool {
        self.r[x].contains(y)
    }

    /// The sets `Y` with `from S_base Y`, ascending.
    pub fn targets(&self, base: World, from: World) -> &[WorldSet] {
        &self.s[base][from]
    }

    pub fn has_s(&self, base: World, from: World, to: WorldSet) -> bool {
        self.s[base][from].binary_search(&to).is_ok()
    }

    pub fn r_pairs(&self) -> Vec<(World, World)> {
        (0..self.len()).flat_map(|x| self.r[x].iter().map(move |y| (x, y))).collect()
    }

    pub fn s_triples(&self) -> Vec<(World, World, WorldSet)> {
        let n = self.len();
        let mut out = Vec::new();
        for b in 0..n {
            for f in 0..n {
                out.extend(self.s[b][f].iter().map(|&t| (b, f, t)));
            }
        }
        out
    }

    pub fn permute(&self, perm: &[World]) -> GenFrame {
        let n = self.len();
        let mut out = GenFrame {
            names: vec![String::new(); n],
            r: vec![WorldSet::EMPTY; n],
            s: vec![vec![Vec::new(); n]; n],
        };
        for w in 0..n {
            out.names[perm[w]] = self.names[w].clone();
            out.r[perm[w]] = self.r[w].permute(perm);
            for u in 0..n {
                let mut ts: Vec<WorldSet> = self.s[w][u].iter().map(|t| t.permute(perm)).collect();
                ts.sort();
                out.s[perm[w]][perm[u]] = ts;
            }
        }
        out
    }

    pub(crate) fn key(&self) -> Vec<u64> {
        let mut k: Vec<u64> = self.r.iter().map(|s| s.bits()).collect();
        for row in &self.s {
            for ts in row {
                k.push(u64::MAX);
                k.extend(ts.iter().map(|t| t.bits()));
            }
        }
        k
    }

    pub fn validate(&self) -> Vec<GenFrameViolation> {
        validate_genframe(self)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            let msgs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            Err(Error::InvalidFrame(msgs.join("; ")))
        }
    }

    pub fn close(&self) -> Result<GenFrame> {
        close_genframe(self)
    }

    fn set_str(&self, s: WorldSet) -> String {
        set_names(s, &self.names)
    }
}

impl Semantics for GenFrame {
    fn world_count(&self) -> usize {
        self.len()
    }

    fn successors(&self, w: World) -> WorldSet {
        self.r[w]
    }

    fn rhd_set(&self, a: WorldSet, b: WorldSet) -> WorldSet {
        (0..self.len())
            .filter(|&w| {
                (self.r[w] & a)
                    .iter()
                    .all(|x| self.s[w][x].iter().any(|t| t.is_subset(b)))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenFrameViolation {
    EmptyTarget { base: String, from: String },
    Cycle { world: String },
    NotTransitive { x: String, y: String, z: String },
    /// `x S_w Y` without `w R x` and `w R y` for all `y ∈ Y`.
    OutsideR { base: String, from: String, to: String },
    /// `w R x` without `x S_w {x}`.
    NotQuasiReflexive { base: String, world: String },
    /// `x S_w Y ∋ y`, `y S_w Z`, `y ∉ Z`, without `x S_w Z`.
    NotQuasiTransitive { base: String, x: String, y: String, z: String },
    /// `w R x R y` without `x S_w {y}`.
    MissingRInduced { base: String, x: String, y: String },
}

impl fmt::Display for GenFrameViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GenFrameViolation as V;
        match self {
            V::EmptyTarget { base, from } => write!(f, "empty target: {from} S_{base} {{}}"),
            V::Cycle { world } => write!(f, "R-acyclicity: {world} lies on an R-cycle"),
            V::NotTransitive { x, y, z } => {
                write!(f, "R-transitivity: {x} R {y} R {z} but not {x} R {z}")
            }
            V::OutsideR { base, from, to } => {
                write!(f, "S within R: {from} S_{base} {to} needs {base} R to every world involved")
            }
            V::NotQuasiReflexive { base, world } => {
                write!(f, "quasi-reflexivity: {base} R {world} but not {world} S_{base} {{{world}}}")
            }
            V::NotQuasiTransitive { base, x, y, z } => write!(
                f,
                "quasi-transitivity: {x} S_{base} .. {y} S_{base} {z} but not {x} S_{base} {z}"
            ),
            V::MissingRInduced { base, x, y } => {
                write!(f, "wRxRy -> xS_w{{y}}: {base} R {x} R {y} but not {x} S_{base} {{{y}}}")
            }
        }
    }
}

pub fn validate_genframe(g: &GenFrame) -> Vec<GenFrameViolation> {
    use GenFrameViolation as V;
    let n = g.len();
    let nm = |w: World| g.names[w].clone();
    let mut out = Vec::new();
    for (b, f, t) in g.s_triples() {
        if t.is_empty() {
            out.push(V::EmptyTarget { base: nm(b), from: nm(f) });
        }
    }
    let mut closed = g.r.clone();
    let _ = transitive_closure(&mut closed);
    for w in 0..n {
        if closed[w].contains(w) {
            out.push(V::Cycle { world: nm(w) });
        }
    }
    for x in 0..n {
        for y in g.r[x].iter() {
            for z in (g.r[y] - g.r[x]).iter() {
                out.push(V::NotTransitive { x: nm(x), y: nm(y), z: nm(z) });
            }
        }
    }
    for (b, f, t) in g.s_triples() {
        if !g.r[b].contains(f) || !t.is_subset(g.r[b]) {
            out.push(V::OutsideR { base: nm(b), from: nm(f), to: g.set_str(t) });
        }
    }
    for w in 0..n {
        for x in g.r[w].iter() {
            if !g.has_s(w, x, WorldSet::singleton(x)) {
                out.push(V::NotQuasiReflexive { base: nm(w), world: nm(x) });
            }
        }
    }
    for w in 0..n {
        for x in 0..n {
            for &t in &g.s[w][x] {
                for y in t.iter() {
                    for &z in &g.s[w][y] {
                        if !z.contains(y) && !g.has_s(w, x, z) {
                            out.push(V::NotQuasiTransitive {
                                base: nm(w),
                                x: nm(x),
                                y: nm(y),
                                z: g.set_str(z),
                            });
                        }
                    }
                }
            }
        }
    }
    for w in 0..n {
        for x in g.r[w].iter() {
            for y in g.r[x].iter() {
                if !g.has_s(w, x, WorldSet::singleton(y)) {
                    out.push(V::MissingRInduced { base: nm(w), x: nm(x), y: nm(y) });
                }
            }
        }
    }
    out
}

/// Least generalized frame containing `seed`. R is first extended so that
/// every triple lies inside it and closed transitively; then the
/// quasi-reflexive and R-induced singleton triples are added and the result
/// is closed under quasi-transitivity.
pub fn close_genframe(seed: &GenFrame) -> Result<GenFrame> {
    let n = seed.len();
    let mut g = seed.clone();
    for b in 0..n {
        for f in 0..n {
            for &t in &seed.s[b][f] {
                if t.is_empty() {
                    return Err(Error::Precondition(format!(
                        "empty target in {} S_{} {{}}",
                        g.names[f], g.names[b]
                    )));
                }
                let extra = t.with(f);
                g.r[b] |= extra;
            }
        }
    }
    transitive_closure(&mut g.r).map_err(|w| Error::Cycle(g.names[w].clone()))?;
    for w in 0..n {
        for x in g.r[w].iter() {
            insert_sorted(&mut g.s[w][x], WorldSet::singleton(x));
            for y in g.r[x].iter() {
                insert_sorted(&mut g.s[w][x], WorldSet::singleton(y));
            }
        }
        quasi_transitive_closure(&mut g.s[w], g.r[w]);
    }
    Ok(g)
}

fn quasi_transitive_closure(row: &mut [Vec<WorldSet>], sources: WorldSet) {
    loop {
        let mut changed = false;
        for x in sources.iter() {
            let mut i = 0;
            while i < row[x].len() {
                let t = row[x][i];
                for y in t.iter() {
                    if y == x {
                        continue;
                    }
                    let inherited: Vec<WorldSet> =
                        row[y].iter().copied().filter(|z| !z.contains(y)).collect();
                    for z in inherited {
                        if insert_sorted(&mut row[x], z) {
                            changed = true;
                        }
                    }
                }
                i += 1;
            }
        }
        if !changed {
            break;
        }
    }
}

/// A generalized frame with a valuation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenModel {
    pub frame: GenFrame,
    pub valuation: BTreeMap<String, WorldSet>,
}

impl GenModel {
    pub fn new(frame: GenFrame, valuation: BTreeMap<String, WorldSet>) -> Result<Self> {
        let full = frame.all_worlds();
        for (p, set) in &valuation {
            if !set.is_subset(full) {
                return Err(Error::Precondition(format!("valuation of `{p}` mentions unknown worlds")));
            }
        }
        Ok(GenModel { frame, valuation })
    }

    pub fn eval(&self, w: World, f: &Formula) -> Result<bool> {
        geval(self, w, f)
    }

    pub fn extension(&self, f: &Formula) -> Result<WorldSet> {
        semantics::extension(&self.frame, f, &|p| self.valuation.get(p).copied())
    }
}

/// Truth of `f` at `w`: `A ▷ B` holds when every R-successor forcing `A`
/// has some `S_w`-target all of whose members force `B`.
pub fn geval(m: &GenModel, w: World, f: &Formula) -> Result<bool> {
    if w >= m.frame.len() {
        return Err(Error::UnknownWorld(format!("#{w}")));
    }
    geval_at(m, w, f)
}

fn geval_at(m: &GenModel, w: World, f: &Formula) -> Result<bool> {
    let g = &m.frame;
    Ok(match f {
        Formula::Bottom => false,
        Formula::Atom(p) => m
            .valuation
            .get(p)
            .ok_or_else(|| Error::UnknownAtom(p.clone()))?
            .contains(w),
        Formula::Implies(a, b) => !geval_at(m, w, a)? || geval_at(m, w, b)?,
        Formula::Box(a) => {
            for v in g.r[w].iter() {
                if !geval_at(m, v, a)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Rhd(a, b) => {
            for x in g.r[w].iter() {
                if !geval_at(m, x, a)? {
                    continue;
                }
                let mut found = false;
                'targets: for t in &g.s[w][x] {
                    for y in t.iter() {
                        if !geval_at(m, y, b)? {
                            continue 'targets;
                        }
                    }
                    found = true;
                    break;
                }
                if !found {
                    return Ok(false);
                }
            }
            true
        }
    })
}

/// The generalized model with `x S'_w Y` iff `x S_w y` for every `y ∈ Y`.
pub fn lift(m: &Model) -> Result<GenModel> {
    let fr = &m.frame;
    fr.ensure_valid()?;
    Ok(GenModel { frame: lift_frame(fr), valuation: m.valuation.clone() })
}

pub fn lift_frame(fr: &Frame) -> GenFrame {
    let n = fr.len();
    let mut g = GenFrame::new(fr.names().to_vec()).expect("names already checked");
    for w in 0..n {
        g.r[w] = fr.r_successors(w);
        for x in 0..n {
            g.s[w][x] = fr.s_successors(w, x).nonempty_subsets();
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct M0Witness {
    pub w: World,
    pub x: World,
    pub y: World,
    pub big_y: WorldSet,
}

/// For all `w R x R y S_w Y` some `Y' ⊆ Y` has `x S_w Y'` and every
/// R-successor of a member of `Y'` is an R-successor of `x`.
pub fn check_m0_condition(g: &GenFrame) -> Result<Verdict<M0Witness>> {
    g.ensure_valid()?;
    Ok(m0_condition(g))
}

pub(crate) fn m0_condition(g: &GenFrame) -> Verdict<M0Witness> {
    for w in 0..g.len() {
        for x in g.r[w].iter() {
            for y in g.r[x].iter() {
                for &big_y in &g.s[w][y] {
                    let ok = g.s[w][x].iter().any(|&t| {
                        t.is_subset(big_y) && t.iter().all(|t0| g.r[t0].is_subset(g.r[x]))
                    });
                    if !ok {
                        return Verdict::Fails(M0Witness { w, x, y, big_y });
                    }
                }
            }
        }
    }
    Verdict::Holds
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P0Witness {
    pub w: World,
    pub x: World,
    pub y: World,
    pub big_y: WorldSet,
    pub z: WorldSet,
}

/// For all `w R x R y S_w Y` and every `Z` reachable in one R-step from
/// each member of `Y`, some `Z' ⊆ Z` has `y S_x Z'`.
pub fn check_p0_condition(g: &GenFrame) -> Result<Verdict<P0Witness>> {
    g.ensure_valid()?;
    Ok(p0_condition(g))
}

/// Sets picking one R-successor of every member of `ys`; empty when some
/// member has no successor.
fn successor_choices(g: &GenFrame, ys: WorldSet) -> Vec<WorldSet> {
    let mut cur: BTreeSet<WorldSet> = BTreeSet::from([WorldSet::EMPTY]);
    for y in ys.iter() {
        let succ = g.r[y];
        if succ.is_empty() {
            return Vec::new();
        }
        cur = cur.iter().flat_map(|z| succ.iter().map(move |s| z.with(s))).collect();
    }
    cur.into_iter().collect()
}

pub(crate) fn p0_condition(g: &GenFrame) -> Verdict<P0Witness> {
    for w in 0..g.len() {
        for x in g.r[w].iter() {
            for y in g.r[x].iter() {
                for &big_y in &g.s[w][y] {
                    for z in successor_choices(g, big_y) {
                        if !g.s[x][y].iter().any(|t| t.is_subset(z)) {
                            return Verdict::Fails(P0Witness { w, x, y, big_y, z });
                        }
                    }
                }
            }
        }
    }
    Verdict::Holds
}

/// A set meeting every `S_base`-target of `source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceSet {
    pub base: World,
    pub source: World,
    pub members: WorldSet,
}

/// Choice sets for `(w, x)`: the minimal ones, or all of them inside the
/// union of the targets.
pub fn choice_sets(g: &GenFrame, w: World, x: World, minimal: bool) -> Result<Vec<ChoiceSet>> {
    if w >= g.len() || x >= g.len() {
        return Err(Error::UnknownWorld(format!("#{}", w.max(x))));
    }
    if !g.r[w].contains(x) {
        return Err(Error::Precondition(format!(
            "choice sets need {} R {}",
            g.names[w], g.names[x]
        )));
    }
    let family = &g.s[w][x];
    let sets = if minimal {
        transversal::minimal_transversals(family)
    } else {
        transversal::all_transversals(family)
    };
    Ok(sets.into_iter().map(|members| ChoiceSet { base: w, source: x, members }).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RWitness {
    pub w: World,
    pub x: World,
    pub y: World,
    pub big_y: WorldSet,
    pub gamma: WorldSet,
}

/// For all `w R x R y S_w Y` and every minimal choice set `Γ` for `(x, y)`,
/// some `Y' ⊆ Y` has `x S_w Y'` and all R-successors of members of `Y'`
/// lie in `Γ`.
pub fn check_r_condition(g: &GenFrame) -> Result<Verdict<RWitness>> {
    g.ensure_valid()?;
    Ok(r_condition(g))
}

pub(crate) fn r_condition(g: &GenFrame) -> Verdict<RWitness> {
    for w in 0..g.len() {
        for x in g.r[w].iter() {
            for y in g.r[x].iter() {
                let gammas = transversal::minimal_transversals(&g.s[x][y]);
                for &big_y in &g.s[w][y] {
                    for &gamma in &gammas {
                        if !r_conclusion(g, w, x, big_y, gamma) {
                            return Verdict::Fails(RWitness { w, x, y, big_y, gamma });
                        }
                    }
                }
            }
        }
    }
    Verdict::Holds
}

/// The existential part of the R condition for one `(w, x, Y, Γ)`.
pub(crate) fn r_conclusion(g: &GenFrame, w: World, x: World, big_y: WorldSet, gamma: WorldSet) -> bool {
    g.s[w][x]
        .iter()
        .any(|&t| t.is_subset(big_y) && t.iter().all(|t0| g.r[t0].is_subset(gamma)))
}

/// A finite presentation of the Not-W configuration at base `w`.
///
/// Every `z ∈ Z` has a target inside `Q`, and every target of a `z ∈ Z`
/// inside `Q` contains a world with an R-successor in `Z`. `steps` lists,
/// for each `z ∈ Z`, the target `Y ⊆ Q` used, the member `y ∈ Y` and the
/// successor `z' ∈ Z` with `y R z'`; following it from `z0` yields the
/// infinite sequence `z_i S_w Y_i ∋ y_i R z_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotWWitness {
    pub w: World,
    pub z0: World,
    pub z: WorldSet,
    pub q: WorldSet,
    pub steps: Vec<NotWStep>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NotWStep {
    pub from: World,
    pub target: WorldSet,
    pub via: World,
    pub to: World,
}

impl NotWWitness {
    /// The `z_i` visited from `z0` until the sequence repeats.
    pub fn lasso(&self) -> Vec<World> {
        let mut seen = Vec::new();
        let mut cur = self.z0;
        while !seen.contains(&cur) {
            seen.push(cur);
            cur = self.steps.iter().find(|s| s.from == cur).map(|s| s.to).expect("step for every z");
        }
        seen.push(cur);
        seen
    }
}

/// Decides Not-W; `Some` carries the witness configuration.
///
/// For a base `w` and a candidate union `Q` of `S_w`-targets, the worlds
/// that can serve in `Z` form the greatest fixpoint of
/// `Z ↦ {z ∈ w↑ : z has a target ⊆ Q, and each target ⊆ Q meets R⁻¹[Z]}`.
/// Not-W holds iff this fixpoint is nonempty for some `w` and `Q`.
pub fn check_not_w(g: &GenFrame) -> Result<Option<NotWWitness>> {
    g.ensure_valid()?;
    Ok(not_w(g))
}

pub(crate) fn not_w(g: &GenFrame) -> Option<NotWWitness> {
    for w in 0..g.len() {
        let up = g.r[w];
        if up.is_empty() {
            continue;
        }
        for q in up.subsets() {
            let covered = up
                .iter()
                .flat_map(|x| g.s[w][x].iter())
                .filter(|t| t.is_subset(q))
                .fold(WorldSet::EMPTY, |acc, &t| acc | t);
            if covered != q {
                continue;
            }
            let z = not_w_fixpoint(g, w, q);
            if z.is_empty() {
                continue;
            }
            let steps = z
                .iter()
                .map(|from| {
                    let (target, via, to) = g.s[w][from]
                        .iter()
                        .filter(|t| t.is_subset(q))
                        .find_map(|&t| {
                            t.iter().find_map(|y| (g.r[y] & z).first().map(|to| (t, y, to)))
                        })
                        .expect("fixpoint members can step");
                    NotWStep { from, target, via, to }
                })
                .collect();
            let z0 = z.first().expect("nonempty");
            return Some(NotWWitness { w, z0, z, q, steps });
        }
    }
    None
}

fn not_w_fixpoint(g: &GenFrame, w: World, q: WorldSet) -> WorldSet {
    // Preimage of a set under R.
    let pre = |z: WorldSet| -> WorldSet {
        (0..g.len()).filter(|&y| g.r[y].intersects(z)).collect()
    };
    let mut z = g.r[w];
    loop {
        let back = pre(z);
        let next: WorldSet = z
            .iter()
            .filter(|&c| {
                let inside: Vec<WorldSet> =
                    g.s[w][c].iter().copied().filter(|t| t.is_subset(q)).collect();
                !inside.is_empty() && inside.iter().all(|t| t.intersects(back))
            })
            .collect();
        if next == z {
            return z;
        }
        z = next;
    }
}

/// Validity of `s` on `g` under every valuation of its metavariables.
pub fn genframe_valid_schema(g: &GenFrame, s: &Schema) -> Result<Verdict<CounterAssignment>> {
    g.ensure_valid()?;
    Ok(brute_force_validity(g, s))
}

/// Convenience wrapper taking a schema id.
pub fn genframe_valid(g: &GenFrame, id: SchemaId) -> Result<bool> {
    Ok(genframe_valid_schema(g, id.schema())?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(g: &GenFrame, names: &[&str]) -> WorldSet {
        names.iter().map(|n| g.world(n).unwrap()).collect()
    }

    fn f7() -> GenFrame {
        let names = ["w", "x", "y", "a0", "a1", "b0", "b1"];
        let mut g = GenFrame::new(names.iter().map(|s| s.to_string()).collect()).unwrap();
        for (a, b) in [("w", "x"), ("x", "y"), ("a0", "b0"), ("a1", "b1"), ("x", "b0"), ("x", "b1")] {
            let (a, b) = (g.world(a).unwrap(), g.world(b).unwrap());
            g.add_r(a, b);
        }
        let aa = set(&g, &["a0", "a1"]);
        let bb = set(&g, &["b0", "b1"]);
        g.add_s(0, 2, aa);
        g.add_s(1, 2, bb);
        g.close().unwrap()
    }

    #[test]
    fn closed_f7_is_valid_and_has_derived_triples() {
        let g = f7();
        assert!(g.validate().is_empty(), "{:?}", g.validate());
        assert!(g.has_s(0, 2, set(&g, &["b0"])));
        assert!(g.has_s(0, 2, set(&g, &["b1"])));
        assert!(g.has_s(0, 1, set(&g, &["a0", "a1"])));
        assert_eq!(g.close().unwrap(), g);
    }

    #[test]
    fn empty_target_and_outside_r_are_violations() {
        let mut g = GenFrame::with_size(2);
        g.add_r(0, 1);
        g.add_s(0, 1, WorldSet::singleton(1));
        g.add_s(0, 1, WorldSet::EMPTY);
        assert!(g.validate().iter().any(|v| matches!(v, GenFrameViolation::EmptyTarget { .. })));

        let mut h = GenFrame::with_size(3);
        h.add_r(0, 1);
        h.add_s(0, 1, WorldSet::singleton(1));
        h.add_s(0, 1, WorldSet::singleton(2));
        assert!(h.validate().iter().any(|v| matches!(v, GenFrameViolation::OutsideR { .. })));
    }

    #[test]
    fn closure_adds_quasi_reflexive_triple() {
        let mut g = GenFrame::with_size(2);
        g.add_r(0, 1);
        let c = g.close().unwrap();
        assert_eq!(c.s_triples(), vec![(0, 1, WorldSet::singleton(1))]);
    }

    #[test]
    fn f7_conditions() {
        let g = f7();
        assert!(check_m0_condition(&g).unwrap().holds());
        assert!(check_p0_condition(&g).unwrap().holds());
        let w = check_r_condition(&g).unwrap().into_witness().unwrap();
        assert_eq!(w.gamma, set(&g, &["y", "b1"]));
        assert_eq!(w.big_y, set(&g, &["a0", "a1"]));
    }

    #[test]
    fn f7_choice_sets() {
        let g = f7();
        let cs: Vec<WorldSet> =
            choice_sets(&g, 1, 2, true).unwrap().into_iter().map(|c| c.members).collect();
        assert_eq!(cs, vec![set(&g, &["y", "b1"]), set(&g, &["y", "b0"])]);
    }

    #[test]
    fn single_world_conditions() {
        let g = GenFrame::with_size(1);
        assert!(check_m0_condition(&g).unwrap().holds());
        assert!(check_p0_condition(&g).unwrap().holds());
        assert!(check_r_condition(&g).unwrap().holds());
        assert!(check_not_w(&g).unwrap().is_none());
    }

    #[test]
    fn g4_satisfies_not_w() {
        let mut g = GenFrame::new(["w", "z0", "y", "z1"].map(String::from).to_vec()).unwrap();
        g.add_r(0, 1);
        g.add_r(2, 3);
        g.add_s(0, 1, WorldSet::singleton(2));
        g.add_s(0, 3, WorldSet::singleton(2));
        let g = g.close().unwrap();
        let wit = check_not_w(&g).unwrap().expect("Not-W holds");
        assert_eq!(wit.w, 0);
        assert_eq!(wit.z, set(&g, &["z0", "y", "z1"]));
        assert_eq!(wit.q, set(&g, &["y"]));
        assert_eq!(wit.lasso(), vec![1, 3, 3]);
        assert!(!genframe_valid(&g, SchemaId::W).unwrap());
    }

    #[test]
    fn lifted_three_world_frame() {
        let mut f = Frame::with_size(3);
        f.add_r(0, 1);
        f.add_r(0, 2);
        f.add_s(0, 1, 2);
        let f = f.close().unwrap();
        let g = lift_frame(&f);
        assert!(g.has_s(0, 1, [1, 2].into_iter().collect()));
        assert!(g.validate().is_empty());
    }
}
