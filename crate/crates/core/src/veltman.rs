//! Finite ordinary Veltman frames and models.
//!
//! A frame is a set of worlds with a transitive, acyclic `R` and, for every
//! world `x`, a relation `S_x` on the R-successors of `x`. `S` is stored as
//! `s[x][u]` = the set of `v` with `u S_x v`.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{self, DefinableAlgebra, FailingInstance};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::schema::{Schema, SchemaId};
use crate::semantics::{self, Semantics};
use crate::verdict::{brute_force_validity, CounterAssignment, Verdict};
use crate::worldset::{World, WorldSet, MAX_WORLDS};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Frame {
    names: Vec<String>,
    r: Vec<WorldSet>,
    s: Vec<Vec<WorldSet>>,
}

pub(crate) fn check_names(names: &[String]) -> Result<()> {
    if names.len() > MAX_WORLDS {
        return Err(Error::TooManyWorlds(names.len()));
    }
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(Error::DuplicateWorld(n.clone()));
        }
    }
    Ok(())
}

pub(crate) fn world_index(names: &[String], name: &str) -> Result<World> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| Error::UnknownWorld(name.to_string()))
}

/// Transitive closure of a successor table; `Err(w)` names a world on a cycle.
pub(crate) fn transitive_closure(r: &mut [WorldSet]) -> std::result::Result<(), World> {
    let n = r.len();
    for k in 0..n {
        for i in 0..n {
            if r[i].contains(k) {
                let rk = r[k];
                r[i] |= rk;
            }
        }
    }
    match (0..n).find(|&w| r[w].contains(w)) {
        Some(w) => Err(w),
        None => Ok(()),
    }
}

/// Default world names `w0, w1, ...`.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

impl Frame {
    pub fn new(names: Vec<String>) -> Result<Self> {
        check_names(&names)?;
        let n = names.len();
        Ok(Frame { names, r: vec![WorldSet::EMPTY; n], s: vec![vec![WorldSet::EMPTY; n]; n] })
    }

    pub fn with_size(n: usize) -> Self {
        Frame::new(default_names(n)).expect("generated names are distinct")
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

    /// Adds `from S_base to`.
    pub fn add_s(&mut self, base: World, from: World, to: World) {
        self.s[base][from].insert(to);
    }

    pub fn r_successors(&self, x: World) -> WorldSet {
        self.r[x]
    }

    /// The `v` with `u S_x v`.
    pub fn s_successors(&self, x: World, u: World) -> WorldSet {
        self.s[x][u]
    }

    pub fn has_r(&self, x: World, y: World) -> bool {
        self.r[x].contains(y)
    }

    pub fn has_s(&self, base: World, from: World, to: World) -> bool {
        self.s[base][from].contains(to)
    }

    pub fn r_pairs(&self) -> Vec<(World, World)> {
        (0..self.len()).flat_map(|x| self.r[x].iter().map(move |y| (x, y))).collect()
    }

    pub fn s_triples(&self) -> Vec<(World, World, World)> {
        let n = self.len();
        let mut out = Vec::new();
        for b in 0..n {
            for f in 0..n {
                out.extend(self.s[b][f].iter().map(|t| (b, f, t)));
            }
        }
        out
    }

    /// Relabels worlds: world `w` becomes `perm[w]`. Names move with worlds.
    pub fn permute(&self, perm: &[World]) -> Frame {
        let n = self.len();
        let mut out = Frame {
            names: vec![String::new(); n],
            r: vec![WorldSet::EMPTY; n],
            s: vec![vec![WorldSet::EMPTY; n]; n],
        };
        for w in 0..n {
            out.names[perm[w]] = self.names[w].clone();
            out.r[perm[w]] = self.r[w].permute(perm);
            for u in 0..n {
                out.s[perm[w]][perm[u]] = self.s[w][u].permute(perm);
            }
        }
        out
    }

    /// Relation-only comparison key, independent of world names.
    pub(crate) fn key(&self) -> Vec<u64> {
        let mut k: Vec<u64> = self.r.iter().map(|s| s.bits()).collect();
        for row in &self.s {
            k.extend(row.iter().map(|s| s.bits()));
        }
        k
    }

    pub fn validate(&self) -> Vec<FrameViolation> {
        validate_frame(self)
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

    pub fn close(&self) -> Result<Frame> {
        close_frame(self)
    }
}

impl Semantics for Frame {
    fn world_count(&self) -> usize {
        self.len()
    }

    fn successors(&self, w: World) -> WorldSet {
        self.r[w]
    }

    fn rhd_set(&self, a: WorldSet, b: WorldSet) -> WorldSet {
        (0..self.len())
            .filter(|&w| (self.r[w] & a).iter().all(|u| self.s[w][u].intersects(b)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrameViolation {
    /// R is not conversely well-founded: the world lies on an R-cycle.
    Cycle { world: String },
    NotTransitive { x: String, y: String, z: String },
    /// `from S_base to` without `base R from` and `base R to`.
    SOutsideR { base: String, from: String, to: String },
    /// `base R world` without `world S_base world`.
    NotReflexive { base: String, world: String },
    /// `x R y R z` without `y S_x z`.
    MissingRInduced { x: String, y: String, z: String },
    /// `u S_base v S_base w` without `u S_base w`.
    SNotTransitive { base: String, u: String, v: String, w: String },
}

impl fmt::Display for FrameViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameViolation::Cycle { world } => write!(f, "R-acyclicity: {world} lies on an R-cycle"),
            FrameViolation::NotTransitive { x, y, z } => {
                write!(f, "R-transitivity: {x} R {y} R {z} but not {x} R {z}")
            }
            FrameViolation::SOutsideR { base, from, to } => {
                write!(f, "S within R: {from} S_{base} {to} needs {base} R {from} and {base} R {to}")
            }
            FrameViolation::NotReflexive { base, world } => {
                write!(f, "xRy -> yS_x y: {base} R {world} but not {world} S_{base} {world}")
            }
            FrameViolation::MissingRInduced { x, y, z } => {
                write!(f, "xRyRz -> yS_x z: {x} R {y} R {z} but not {y} S_{x} {z}")
            }
            FrameViolation::SNotTransitive { base, u, v, w } => {
                write!(f, "S_{base}-transitivity: {u} S {v} S {w} but not {u} S {w}")
            }
        }
    }
}

pub fn validate_frame(fr: &Frame) -> Vec<FrameViolation> {
    let n = fr.len();
    let nm = |w: World| fr.names[w].clone();
    let mut out = Vec::new();
    let mut closed = fr.r.clone();
    let _ = transitive_closure(&mut closed);
    for w in 0..n {
        if closed[w].contains(w) {
            out.push(FrameViolation::Cycle { world: nm(w) });
        }
    }
    for x in 0..n {
        for y in fr.r[x].iter() {
            for z in (fr.r[y] - fr.r[x]).iter() {
                out.push(FrameViolation::NotTransitive { x: nm(x), y: nm(y), z: nm(z) });
            }
        }
    }
    for (b, f, t) in fr.s_triples() {
        if !fr.r[b].contains(f) || !fr.r[b].contains(t) {
            out.push(FrameViolation::SOutsideR { base: nm(b), from: nm(f), to: nm(t) });
        }
    }
    for x in 0..n {
        for y in fr.r[x].iter() {
            if !fr.s[x][y].contains(y) {
                out.push(FrameViolation::NotReflexive { base: nm(x), world: nm(y) });
            }
        }
    }
    for x in 0..n {
        for y in fr.r[x].iter() {
            for z in (fr.r[y] - fr.s[x][y]).iter() {
                out.push(FrameViolation::MissingRInduced { x: nm(x), y: nm(y), z: nm(z) });
            }
        }
    }
    for b in 0..n {
        for u in 0..n {
            for v in fr.s[b][u].iter() {
                for w in (fr.s[b][v] - fr.s[b][u]).iter() {
                    out.push(FrameViolation::SNotTransitive {
                        base: nm(b),
                        u: nm(u),
                        v: nm(v),
                        w: nm(w),
                    });
                }
            }
        }
    }
    out
}

/// Least frame containing `seed`: R is extended to cover every S-triple
/// and closed transitively, then each `S_x` is made reflexive on the
/// successors of `x`, extended by R-induced pairs and closed transitively.
pub fn close_frame(seed: &Frame) -> Result<Frame> {
    let n = seed.len();
    let mut fr = seed.clone();
    for b in 0..n {
        for f in 0..n {
            if !fr.s[b][f].is_empty() {
                let extra = fr.s[b][f].with(f);
                fr.r[b] |= extra;
            }
        }
    }
    transitive_closure(&mut fr.r).map_err(|w| Error::Cycle(fr.names[w].clone()))?;
    for x in 0..n {
        let succ = fr.r[x];
        for y in succ.iter() {
            let add = fr.r[y].with(y);
            fr.s[x][y] |= add;
        }
        // Warshall on S_x restricted to x's successors.
        for k in succ.iter() {
            for i in succ.iter() {
                if fr.s[x][i].contains(k) {
                    let sk = fr.s[x][k];
                    fr.s[x][i] |= sk;
                }
            }
        }
    }
    Ok(fr)
}

/// A frame together with a valuation of atoms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Model {
    pub frame: Frame,
    pub valuation: BTreeMap<String, WorldSet>,
}

impl Model {
    pub fn new(frame: Frame, valuation: BTreeMap<String, WorldSet>) -> Result<Self> {
        let full = frame.all_worlds();
        for (p, set) in &valuation {
            if !set.is_subset(full) {
                return Err(Error::Precondition(format!("valuation of `{p}` mentions unknown worlds")));
            }
        }
        Ok(Model { frame, valuation })
    }

    pub fn eval(&self, w: World, f: &Formula) -> Result<bool> {
        eval(self, w, f)
    }

    pub fn extension(&self, f: &Formula) -> Result<WorldSet> {
        semantics::extension(&self.frame, f, &|p| self.valuation.get(p).copied())
    }

    pub fn definable_algebra(&self, atoms: &[&str]) -> Result<DefinableAlgebra> {
        definable_algebra(self, atoms)
    }
}

/// Truth of `f` at `w`, following the satisfaction clauses one world at a
/// time.
pub fn eval(m: &Model, w: World, f: &Formula) -> Result<bool> {
    if w >= m.frame.len() {
        return Err(Error::UnknownWorld(format!("#{w}")));
    }
    eval_at(m, w, f)
}

fn eval_at(m: &Model, w: World, f: &Formula) -> Result<bool> {
    let fr = &m.frame;
    Ok(match f {
        Formula::Bottom => false,
        Formula::Atom(p) => m
            .valuation
            .get(p)
            .ok_or_else(|| Error::UnknownAtom(p.clone()))?
            .contains(w),
        Formula::Implies(a, b) => !eval_at(m, w, a)? || eval_at(m, w, b)?,
        Formula::Box(a) => {
            for v in fr.r[w].iter() {
                if !eval_at(m, v, a)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Rhd(a, b) => {
            for u in fr.r[w].iter() {
                if !eval_at(m, u, a)? {
                    continue;
                }
                let mut found = false;
                for v in fr.s[w][u].iter() {
                    if eval_at(m, v, b)? {
                        found = true;
                        break;
                    }
                }
                if !found {
                    return Ok(false);
                }
            }
            true
        }
    })
}

/// Validity of `s` on `fr` under every valuation of its metavariables.
pub fn frame_valid_schema(fr: &Frame, s: &Schema) -> Result<Verdict<CounterAssignment>> {
    fr.ensure_valid()?;
    Ok(brute_force_validity(fr, s))
}

/// A tuple `x R y R z`, `z S_x u`, `u R v` with `z S_y v` missing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RFrameWitness {
    pub x: World,
    pub y: World,
    pub z: World,
    pub u: World,
    pub v: World,
}

/// The frame condition `xRyRz S_x uRv -> z S_y v` shared by R and P0.
pub fn check_r_frame_condition(fr: &Frame) -> Result<Verdict<RFrameWitness>> {
    fr.ensure_valid()?;
    Ok(r_frame_condition(fr))
}

pub(crate) fn r_frame_condition(fr: &Frame) -> Verdict<RFrameWitness> {
    for x in 0..fr.len() {
        for y in fr.r[x].iter() {
            for z in fr.r[y].iter() {
                for u in fr.s[x][z].iter() {
                    if let Some(v) = (fr.r[u] - fr.s[y][z]).first() {
                        return Verdict::Fails(RFrameWitness { x, y, z, u, v });
                    }
                }
            }
        }
    }
    Verdict::Holds
}

/// Least family of world sets containing `∅` and the extensions of
/// `atoms`, closed under complement, intersection, `□` and `▷`.
pub fn definable_algebra(m: &Model, atoms: &[&str]) -> Result<DefinableAlgebra> {
    let gens = atoms
        .iter()
        .map(|&p| {
            let set = *m.valuation.get(p).ok_or_else(|| Error::UnknownAtom(p.to_string()))?;
            Ok((Formula::atom(p), set))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(algebra::close(&m.frame, gens))
}

/// Every instance of every schema in `logic` whose metavariables denote
/// definable sets holds at `w`.
pub fn world_forces_logic(
    m: &Model,
    w: World,
    logic: &[SchemaId],
) -> Result<Verdict<FailingInstance>> {
    if w >= m.frame.len() {
        return Err(Error::UnknownWorld(format!("#{w}")));
    }
    let atoms: Vec<&str> = m.valuation.keys().map(String::as_str).collect();
    let alg = definable_algebra(m, &atoms)?;
    Ok(algebra::forces_logic(&m.frame, &alg, logic, WorldSet::singleton(w)))
}

/// [`world_forces_logic`] at every world at once.
pub fn model_forces_logic(m: &Model, logic: &[SchemaId]) -> Result<Verdict<FailingInstance>> {
    let atoms: Vec<&str> = m.valuation.keys().map(String::as_str).collect();
    let alg = definable_algebra(m, &atoms)?;
    Ok(algebra::forces_logic(&m.frame, &alg, logic, m.frame.all_worlds()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(n: &[&str]) -> Frame {
        Frame::new(n.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    #[test]
    fn single_world_is_valid() {
        assert!(frame(&["w"]).validate().is_empty());
    }

    #[test]
    fn two_cycle_is_reported() {
        let mut f = frame(&["w", "x"]);
        f.add_r(0, 1);
        f.add_r(1, 0);
        let v = f.validate();
        assert!(v.iter().any(|x| matches!(x, FrameViolation::Cycle { .. })));
    }

    #[test]
    fn missing_reflexive_pair_is_reported() {
        let mut f = frame(&["w", "x"]);
        f.add_r(0, 1);
        assert_eq!(
            f.validate(),
            vec![FrameViolation::NotReflexive { base: "w".into(), world: "x".into() }]
        );
    }

    #[test]
    fn duplicate_world_is_an_error() {
        assert_eq!(
            Frame::new(vec!["w".into(), "w".into()]),
            Err(Error::DuplicateWorld("w".into()))
        );
    }

    #[test]
    fn closure_of_chain() {
        let mut f = frame(&["w", "x", "y"]);
        f.add_r(0, 1);
        f.add_r(1, 2);
        let c = f.close().unwrap();
        assert!(c.has_r(0, 2));
        for (b, u, v) in [(0, 1, 1), (0, 2, 2), (1, 2, 2), (0, 1, 2)] {
            assert!(c.has_s(b, u, v), "({b},{u},{v})");
        }
        assert_eq!(c.s_triples().len(), 4);
        assert!(c.validate().is_empty());
        assert_eq!(c.close().unwrap(), c);
    }

    #[test]
    fn closure_rejects_cycles() {
        let mut f = frame(&["a", "b", "c"]);
        f.add_r(0, 1);
        f.add_r(1, 2);
        f.add_r(2, 0);
        assert!(matches!(f.close(), Err(Error::Cycle(_))));
    }

    fn three_world_model(q: &[World]) -> Model {
        let mut f = frame(&["w", "x", "y"]);
        f.add_r(0, 1);
        f.add_r(0, 2);
        f.add_s(0, 1, 2);
        let f = f.close().unwrap();
        let mut val = BTreeMap::new();
        val.insert("p".to_string(), WorldSet::singleton(1));
        val.insert("q".to_string(), q.iter().copied().collect());
        Model::new(f, val).unwrap()
    }

    #[test]
    fn eval_rhd() {
        let f = Formula::parse("p |> q").unwrap();
        assert!(three_world_model(&[2]).eval(0, &f).unwrap());
        assert!(!three_world_model(&[]).eval(0, &f).unwrap());
    }

    #[test]
    fn eval_vacuous_box_and_errors() {
        let m = Model::new(frame(&["w"]), BTreeMap::new()).unwrap();
        assert!(m.eval(0, &Formula::parse("[]false").unwrap()).unwrap());
        assert_eq!(m.eval(0, &Formula::atom("p")), Err(Error::UnknownAtom("p".into())));
        assert!(matches!(m.eval(3, &Formula::Bottom), Err(Error::UnknownWorld(_))));
    }

    #[test]
    fn algebra_of_single_world() {
        let mut val = BTreeMap::new();
        val.insert("p".to_string(), WorldSet::EMPTY);
        let m = Model::new(frame(&["w"]), val).unwrap();
        let alg = m.definable_algebra(&["p"]).unwrap();
        assert_eq!(alg.sets(), vec![WorldSet::EMPTY, WorldSet::singleton(0)]);
    }

    #[test]
    fn r_condition_vacuous_on_single_world() {
        assert!(check_r_frame_condition(&frame(&["w"])).unwrap().holds());
    }

    #[test]
    fn single_world_forces_everything() {
        let m = Model::new(frame(&["w"]), BTreeMap::new()).unwrap();
        assert!(world_forces_logic(&m, 0, &SchemaId::ALL).unwrap().holds());
    }
}
