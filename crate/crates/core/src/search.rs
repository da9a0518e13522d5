//! Bounded search for separating frames and incompleteness models.
//!
//! Candidates are point-generated: world 0 lies below every other world.
//! All conditions and schemata here are preserved under generated
//! subframes, so a frame refuting a target contains a rooted one that does.
//!
//! Frames of both kinds are visited by world count, then by the number of
//! seed triples, then by canonical R, then by the seed triples in
//! lexicographic order; each seed is closed without adding R-edges. A
//! bound is exhausted when every frame within the world and seed limits
//! has been seen.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{self, FailingInstance};
use crate::correspond::{decide, verify_correspondence, ConditionId};
use crate::enumerate::{canonical_rooted_orders, set_partitions, Order};
use crate::error::{Error, Result};
use crate::format::{Kind, Structure};
use crate::formula::Formula;
use crate::genveltman::{self, GenFrame};
use crate::schema::SchemaId;
use crate::semantics::Semantics;
use crate::veltman::{self, Frame, Model};
use crate::worldset::{World, WorldSet};

const BATCH: usize = 512;
const DEFAULT_SEEDS: usize = 3;

/// A property a structure must have or lack.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Requirement {
    /// Frame validity of a schema, decided by brute force.
    Schema(SchemaId),
    Condition(ConditionId),
}

impl Requirement {
    /// Names of conditions applicable to `kind` resolve to conditions; any
    /// other name must be a schema.
    pub fn resolve(name: &str, kind: Kind) -> Result<Requirement> {
        if let Ok(c) = ConditionId::resolve(name, kind) {
            if c.kind() == kind {
                return Ok(Requirement::Condition(c));
            }
        }
        Ok(Requirement::Schema(name.parse()?))
    }

    fn kind_ok(self, kind: Kind) -> bool {
        match self {
            Requirement::Schema(_) => true,
            Requirement::Condition(c) => c.kind() == kind,
        }
    }

    /// Whether `s` has the property.
    pub fn holds(self, s: &Structure) -> Result<bool> {
        match self {
            Requirement::Condition(c) => Ok(decide(s, c)?.0),
            Requirement::Schema(id) => Ok(match s {
                Structure::Ordinary(f) => veltman::frame_valid_schema(f, id.schema())?.holds(),
                Structure::Generalized(g) => genveltman::genframe_valid_schema(g, id.schema())?.holds(),
            }),
        }
    }

    /// Unchecked evaluation for frames known to be valid.
    fn holds_fast(self, s: &Structure) -> bool {
        match (self, s) {
            (Requirement::Condition(c), Structure::Generalized(g)) => match c {
                ConditionId::M0Set => genveltman::m0_condition(g).holds(),
                ConditionId::P0Set => genveltman::p0_condition(g).holds(),
                ConditionId::RSet => genveltman::r_condition(g).holds(),
                ConditionId::NotWSet => genveltman::not_w(g).is_some(),
                _ => unreachable!("kind checked"),
            },
            (Requirement::Condition(_), Structure::Ordinary(f)) => veltman::r_frame_condition(f).holds(),
            (Requirement::Schema(id), Structure::Ordinary(f)) => {
                crate::verdict::brute_force_validity(f, id.schema()).holds()
            }
            (Requirement::Schema(id), Structure::Generalized(g)) => {
                crate::verdict::brute_force_validity(g, id.schema()).holds()
            }
        }
    }
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Requirement::Schema(id) => write!(f, "{id}"),
            Requirement::Condition(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchKind {
    Frame,
    GenFrame,
    ModelLogic,
}

impl FromStr for SearchKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "frame" | "ordinary" => Ok(SearchKind::Frame),
            "genframe" | "gen" | "generalized" => Ok(SearchKind::GenFrame),
            "model-logic" | "model" => Ok(SearchKind::ModelLogic),
            _ => Err(Error::Precondition(format!("unknown search kind `{s}`"))),
        }
    }
}

/// Knobs shared by both searches.
#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Most seed triples per candidate frame; `None` means 3.
    pub max_seeds: Option<usize>,
    /// Wall-clock limit, checked between candidate batches.
    pub budget: Option<Duration>,
    /// Shuffles R-orders and seed items within each layer.
    pub shuffle: Option<u64>,
    pub workers: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub kind: SearchKind,
    pub max_worlds: usize,
    pub valid: Vec<Requirement>,
    pub invalid: Option<Requirement>,
    /// Model-logic search only.
    pub logic: Vec<SchemaId>,
    pub target: Option<SchemaId>,
    pub options: SearchOptions,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    /// Every candidate within the world bound was examined.
    BoundExhausted,
    BudgetExhausted,
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }
}

/// An ordinary model forcing a logic everywhere while refuting an instance
/// of the target somewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncompletenessModel {
    pub model: Model,
    pub failing: FailingInstance,
}

fn pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        Some(k) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Precondition(format!("cannot start workers: {e}")))?
            .install(f)),
        None => Ok(f()),
    }
}

/// Feeds candidates in batches to a parallel test and keeps the first hit
/// in candidate order.
struct Batcher<'a, C, T> {
    buf: Vec<C>,
    test: &'a (dyn Fn(&C) -> Option<T> + Sync),
    start: Instant,
    budget: Option<Duration>,
}

enum Flow<T> {
    Continue,
    Stop(SearchOutcome<T>),
}

impl<C: Send + Sync, T: Send> Batcher<'_, C, T> {
    fn push(&mut self, c: C) -> Flow<T> {
        self.buf.push(c);
        if self.buf.len() >= BATCH {
            self.flush()
        } else {
            Flow::Continue
        }
    }

    fn flush(&mut self) -> Flow<T> {
        let test = self.test;
        let hits: Vec<Option<T>> = self.buf.par_iter().map(test).collect();
        self.buf.clear();
        if let Some(t) = hits.into_iter().flatten().next() {
            return Flow::Stop(SearchOutcome::Found(t));
        }
        match self.budget {
            Some(b) if self.start.elapsed() > b => Flow::Stop(SearchOutcome::BudgetExhausted),
            _ => Flow::Continue,
        }
    }
}


fn shuffled<T>(mut v: Vec<T>, rng: &mut Option<ChaCha8Rng>) -> Vec<T> {
    if let Some(r) = rng {
        v.shuffle(r);
    }
    v
}

/// Least rooted structure within the bound that meets every `valid`
/// requirement and fails `invalid`.
pub fn find_separating_structure(spec: &SearchSpec) -> Result<SearchOutcome<Structure>> {
    let kind = match spec.kind {
        SearchKind::Frame => Kind::Ordinary,
        SearchKind::GenFrame => Kind::Generalized,
        SearchKind::ModelLogic => {
            return Err(Error::Precondition("use the model search for model-logic specs".into()))
        }
    };
    if spec.max_worlds == 0 {
        return Err(Error::Precondition("max-worlds must be at least 1".into()));
    }
    if let Some(r) = spec.valid.iter().chain(&spec.invalid).find(|r| !r.kind_ok(kind)) {
        return Err(Error::KindMismatch { condition: r.to_string(), kind: kind.name() });
    }
    if let Some(inv) = spec.invalid {
        if spec.valid.contains(&inv) {
            return Err(Error::Precondition(format!("{inv} is both required and refuted")));
        }
    }
    let test = |s: &Structure| -> Option<Structure> {
        let ok = spec.invalid.is_none_or(|r| !r.holds_fast(s)) && spec.valid.iter().all(|r| r.holds_fast(s));
        ok.then(|| s.clone())
    };
    let outcome = pool(spec.options.workers, || match kind {
        Kind::Ordinary => search_seeded::<Frame>(spec, &test, Structure::Ordinary),
        Kind::Generalized => search_seeded::<GenFrame>(spec, &test, Structure::Generalized),
    })??;
    if let SearchOutcome::Found(s) = &outcome {
        certify_structure(spec, s)?;
    }
    Ok(outcome)
}

/// Frames built from an order and a few seed triples, then closed.
trait Seeded: Clone {
    type Item: Copy;
    fn bare(r: &Order) -> Self;
    /// Triples inside `r` not already forced by closure.
    fn items(r: &Order, closed: &Self) -> Vec<Self::Item>;
    fn seed(&mut self, item: Self::Item);
    fn closed(&self) -> Self;
    fn seen_key(&self) -> Vec<u64>;
}

impl Seeded for Frame {
    type Item = (World, World, World);

    fn bare(r: &Order) -> Self {
        let mut f = Frame::with_size(r.len());
        for (x, s) in r.iter().enumerate() {
            for y in s.iter() {
                f.add_r(x, y);
            }
        }
        f
    }

    fn items(r: &Order, closed: &Self) -> Vec<Self::Item> {
        let mut items = Vec::new();
        for x in 0..r.len() {
            for u in r[x].iter() {
                for v in r[x].iter() {
                    if !closed.has_s(x, u, v) {
                        items.push((x, u, v));
                    }
                }
            }
        }
        items
    }

    fn seed(&mut self, (x, u, v): Self::Item) {
        self.add_s(x, u, v);
    }

    fn closed(&self) -> Self {
        self.close().expect("S stays inside R")
    }

    fn seen_key(&self) -> Vec<u64> {
        self.key()
    }
}

impl Seeded for GenFrame {
    type Item = (World, World, WorldSet);

    fn bare(r: &Order) -> Self {
        let mut g = GenFrame::with_size(r.len());
        for (x, s) in r.iter().enumerate() {
            for y in s.iter() {
                g.add_r(x, y);
            }
        }
        g
    }

    fn items(r: &Order, closed: &Self) -> Vec<Self::Item> {
        let mut items = Vec::new();
        for w in 0..r.len() {
            for x in r[w].iter() {
                for t in r[w].nonempty_subsets() {
                    if !closed.has_s(w, x, t) {
                        items.push((w, x, t));
                    }
                }
            }
        }
        items
    }

    fn seed(&mut self, (w, x, t): Self::Item) {
        self.add_s(w, x, t);
    }

    fn closed(&self) -> Self {
        self.close().expect("S stays inside R")
    }

    fn seen_key(&self) -> Vec<u64> {
        self.key()
    }
}

fn combinations(m: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k > m {
        return true;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return false;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] < m - k + i) else { return true };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Visits the distinct closed rooted frames on `n` worlds generated by at
/// most `max_seeds` seed triples: by seed count, then R, then seeds in
/// lexicographic order. Returns false when `visit` asks to stop.
fn visit_seeded<F: Seeded>(
    n: usize,
    max_seeds: usize,
    rng: &mut Option<ChaCha8Rng>,
    visit: &mut dyn FnMut(F) -> bool,
) -> bool {
    let orders = canonical_rooted_orders(n);
    let bases: Vec<F> = orders.iter().map(|r| F::bare(r)).collect();
    let items: Vec<Vec<F::Item>> =
        orders.iter().zip(&bases).map(|(r, b)| F::items(r, &b.closed())).collect();
    let mut seen: Vec<HashSet<Vec<u64>>> = vec![HashSet::new(); orders.len()];
    for k in 0..=max_seeds {
        for oi in shuffled((0..orders.len()).collect(), rng) {
            let its = shuffled(items[oi].clone(), rng);
            let go_on = combinations(its.len(), k, &mut |ix| {
                let mut f = bases[oi].clone();
                for &i in ix {
                    f.seed(its[i]);
                }
                let f = f.closed();
                !seen[oi].insert(f.seen_key()) || visit(f)
            });
            if !go_on {
                return false;
            }
        }
    }
    true
}

fn search_seeded<F: Seeded>(
    spec: &SearchSpec,
    test: &(dyn Fn(&Structure) -> Option<Structure> + Sync),
    wrap: fn(F) -> Structure,
) -> Result<SearchOutcome<Structure>> {
    let max_seeds = spec.options.max_seeds.unwrap_or(DEFAULT_SEEDS);
    let mut rng = spec.options.shuffle.map(ChaCha8Rng::seed_from_u64);
    let mut b = Batcher { buf: Vec::new(), test, start: Instant::now(), budget: spec.options.budget };
    let mut stop = None;
    for n in 1..=spec.max_worlds {
        let go_on = visit_seeded::<F>(n, max_seeds, &mut rng, &mut |f| match b.push(wrap(f)) {
            Flow::Continue => true,
            Flow::Stop(out) => {
                stop = Some(out);
                false
            }
        });
        if !go_on {
            break;
        }
    }
    if let Some(out) = stop {
        return Ok(out);
    }
    Ok(match b.flush() {
        Flow::Stop(out) => out,
        Flow::Continue => SearchOutcome::BoundExhausted,
    })
}

/// Re-derives every verdict of a search hit with the checked deciders and,
/// for conditions, with the schema oracle as well.
fn certify_structure(spec: &SearchSpec, s: &Structure) -> Result<()> {
    let fail = |what: String| Err(Error::Precondition(format!("search result failed certification: {what}")));
    let check = |r: Requirement, want: bool| -> Result<bool> {
        if r.holds(s)? != want {
            return Ok(false);
        }
        if let Requirement::Condition(c) = r {
            if !verify_correspondence(s, c)?.agrees() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    for &r in &spec.valid {
        if !check(r, true)? {
            return fail(format!("{r} does not hold"));
        }
    }
    if let Some(r) = spec.invalid {
        if !check(r, false)? {
            return fail(format!("{r} is not refuted"));
        }
    }
    Ok(())
}

/// Atom names for valuations built from partitions.
const ATOMS: [&str; 6] = ["p", "q", "r", "s", "t", "u"];

fn partition_valuation(blocks: &[usize]) -> BTreeMap<String, WorldSet> {
    let count = blocks.iter().max().map_or(0, |m| m + 1);
    let atoms = (usize::BITS - (count.max(1) - 1).leading_zeros()) as usize;
    (0..atoms)
        .map(|i| {
            let set = blocks.iter().enumerate().filter(|(_, &b)| b >> i & 1 == 1).map(|(w, _)| w).collect();
            (ATOMS[i].to_string(), set)
        })
        .collect()
}

/// Modal equivalence classes of the worlds of `f` under a valuation whose
/// atoms separate exactly the given blocks, as a restricted growth string.
///
/// Starting from the blocks, worlds are split until they agree on which
/// classes their R-successors meet and, per class, on the inclusion-minimal
/// class sets met by the S-images of its members. Those data decide
/// membership in every `□X` and `X ▷ Y` with `X`, `Y` unions of classes, so
/// the definable sets are exactly the unions of the final classes.
pub(crate) fn modal_classes(f: &Frame, blocks: &[usize]) -> Vec<usize> {
    let n = f.len();
    let mut class = blocks.to_vec();
    let mut count = class.iter().max().map_or(0, |m| m + 1);
    let mask = |set: WorldSet, class: &[usize]| set.iter().fold(0u64, |acc, w| acc | 1 << class[w]);
    loop {
        let mut sigs: Vec<(usize, Vec<(usize, Vec<u64>)>)> = Vec::with_capacity(n);
        for w in 0..n {
            let mut fam: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
            for u in f.r_successors(w).iter() {
                fam.entry(class[u]).or_default().push(mask(f.s_successors(w, u), &class));
            }
            let fam: Vec<(usize, Vec<u64>)> = fam
                .into_iter()
                .map(|(c, mut ds)| {
                    ds.sort_by_key(|d| (d.count_ones(), *d));
                    ds.dedup();
                    let mut min: Vec<u64> = Vec::new();
                    for d in ds {
                        if !min.iter().any(|m| m & d == *m) {
                            min.push(d);
                        }
                    }
                    min.sort();
                    (c, min)
                })
                .collect();
            sigs.push((class[w], fam));
        }
        let mut ids: Vec<&(usize, Vec<(usize, Vec<u64>)>)> = Vec::new();
        let next: Vec<usize> = sigs
            .iter()
            .map(|s| match ids.iter().position(|t| *t == s) {
                Some(i) => i,
                None => {
                    ids.push(s);
                    ids.len() - 1
                }
            })
            .collect();
        let done = ids.len() == count;
        count = ids.len();
        class = next;
        if done {
            return class;
        }
    }
}

/// Partitions refining `classes`, as restricted growth strings ordered by
/// number of blocks and then lexicographically.
fn refinements(classes: &[usize]) -> Vec<Vec<usize>> {
    let k = classes.iter().max().map_or(0, |m| m + 1);
    let members: Vec<Vec<World>> =
        (0..k).map(|c| (0..classes.len()).filter(|&w| classes[w] == c).collect()).collect();
    let mut out: Vec<Vec<usize>> = vec![vec![0; classes.len()]];
    let mut offset_free = vec![Vec::new()];
    // Each class is split independently; blocks of different classes stay
    // apart because they are numbered disjointly before normalizing.
    for ms in &members {
        let splits = set_partitions(ms.len());
        let mut next = Vec::new();
        let mut next_free = Vec::new();
        for (labels, free) in out.iter().zip(&offset_free) {
            let base: usize = free.iter().copied().max().map_or(0, |m: usize| m + 1);
            for sp in &splits {
                let mut l = labels.clone();
                let mut f = free.clone();
                for (i, &w) in ms.iter().enumerate() {
                    l[w] = base + sp[i];
                    f.push(base + sp[i]);
                }
                next.push(l);
                next_free.push(f);
            }
        }
        out = next;
        offset_free = next_free;
    }
    let mut out: Vec<Vec<usize>> = out.into_iter().map(|l| normalize(&l)).collect();
    out.sort_by_key(|p| (p.iter().max().map_or(0, |m| m + 1), p.clone()));
    out.dedup();
    out
}

fn normalize(labels: &[usize]) -> Vec<usize> {
    let mut seen: Vec<usize> = Vec::new();
    labels
        .iter()
        .map(|l| match seen.iter().position(|s| s == l) {
            Some(i) => i,
            None => {
                seen.push(*l);
                seen.len() - 1
            }
        })
        .collect()
}

/// Whether some instance of R with metavariables read as unions of
/// `classes` fails in `f`.
///
/// For a failure at `x` through `x R y R z` each metavariable has a best
/// choice: `A` the class of `z`, `C` the least union containing the
/// S_y-image of `z`, and `B` the greatest union avoiding every
/// `u ∈ S_x[y]` whose successors all lie in `C`.
fn r_instance_fails(f: &Frame, classes: &[usize]) -> bool {
    let n = f.len();
    let hull = |set: WorldSet| -> WorldSet {
        (0..n).filter(|&w| set.iter().any(|v| classes[v] == classes[w])).collect()
    };
    for x in 0..n {
        for y in f.r_successors(x).iter() {
            for z in f.r_successors(y).iter() {
                let a = hull(WorldSet::singleton(z));
                let c = hull(f.s_successors(y, z));
                let u: WorldSet =
                    f.s_successors(x, y).iter().filter(|&u| f.r_successors(u).is_subset(c)).collect();
                let b = hull(u).complement(n);
                if (f.r_successors(x) & a).iter().all(|t| f.s_successors(x, t).intersects(b)) {
                    return true;
                }
            }
        }
    }
    false
}

fn class_unions(classes: &[usize]) -> Vec<WorldSet> {
    let k = classes.iter().max().map_or(0, |m| m + 1);
    let mut out: Vec<WorldSet> = (0..1u64 << k)
        .map(|pick| classes.iter().enumerate().filter(|(_, &c)| pick >> c & 1 == 1).map(|(w, _)| w).collect())
        .collect();
    out.sort();
    out
}

/// A rooted ordinary model within the bound in which every world forces
/// every instance of `logic` while some instance of `target` fails.
/// Instances range over the model's definable algebra.
///
/// Valuations are visited as set partitions of the worlds, coarsest first,
/// and skipped when they define the same sets as an earlier one.
pub fn find_incompleteness_model(
    logic: &[SchemaId],
    target: SchemaId,
    max_worlds: usize,
    options: &SearchOptions,
) -> Result<SearchOutcome<IncompletenessModel>> {
    if logic.contains(&target) {
        return Err(Error::Precondition(format!("{target} already belongs to the logic")));
    }
    let arity = |id: &SchemaId| id.schema().metavariables().len();
    let (early, late): (Vec<SchemaId>, Vec<SchemaId>) =
        logic.iter().partition(|id| arity(id) < arity(&target));
    let target_fails = |f: &Frame, classes: &[usize], sets: &[WorldSet]| match target {
        SchemaId::R => r_instance_fails(f, classes),
        _ => algebra::schema_fails_over(f, sets, target, f.all_worlds()),
    };
    let test = |(f, blocks, classes): &(Frame, Vec<usize>, Vec<usize>)| -> Option<IncompletenessModel> {
        let sets = class_unions(classes);
        let all = f.all_worlds();
        if early.iter().any(|&id| algebra::schema_fails_over(f, &sets, id, all))
            || !target_fails(f, classes, &sets)
            || late.iter().any(|&id| algebra::schema_fails_over(f, &sets, id, all))
        {
            return None;
        }
        let valuation = partition_valuation(blocks);
        let gens = valuation.iter().map(|(p, &set)| (Formula::atom(p.clone()), set)).collect();
        let alg = algebra::close(f, gens);
        let failing = algebra::forces_logic(f, &alg, &[target], all).into_witness()?;
        Some(IncompletenessModel { model: Model { frame: f.clone(), valuation }, failing })
    };
    let outcome = pool(options.workers, || -> Result<SearchOutcome<IncompletenessModel>> {
        let mut rng = options.shuffle.map(ChaCha8Rng::seed_from_u64);
        let mut b = Batcher { buf: Vec::new(), test: &test, start: Instant::now(), budget: options.budget };
        let max_seeds = options.max_seeds.unwrap_or(DEFAULT_SEEDS);
        let mut stop = None;
        for n in 1..=max_worlds {
            let go_on = visit_seeded::<Frame>(n, max_seeds, &mut rng, &mut |f| {
                if target_valid_on_frame(&f, target) {
                    return true;
                }
                // Every valuation's classes refine those of the empty
                // valuation, so only refinements of those need a look.
                let base = modal_classes(&f, &vec![0; n]);
                let mut seen: HashSet<Vec<usize>> = HashSet::new();
                for blocks in refinements(&base) {
                    let classes = modal_classes(&f, &blocks);
                    if seen.insert(classes.clone()) {
                        if let Flow::Stop(out) = b.push((f.clone(), blocks, classes)) {
                            stop = Some(out);
                            return false;
                        }
                    }
                }
                true
            });
            if !go_on {
                break;
            }
        }
        if let Some(out) = stop {
            return Ok(out);
        }
        Ok(match b.flush() {
            Flow::Stop(out) => out,
            Flow::Continue => SearchOutcome::BoundExhausted,
        })
    })??;
    if let SearchOutcome::Found(hit) = &outcome {
        certify_model(hit, logic, target)?;
    }
    Ok(outcome)
}

/// Frames on which the target is valid cannot refute it in any model.
fn target_valid_on_frame(f: &Frame, target: SchemaId) -> bool {
    match target {
        SchemaId::R | SchemaId::P0 => veltman::r_frame_condition(f).holds(),
        _ => crate::verdict::brute_force_validity(f, target.schema()).holds(),
    }
}

fn certify_model(hit: &IncompletenessModel, logic: &[SchemaId], target: SchemaId) -> Result<()> {
    let m = &hit.model;
    m.frame.ensure_valid()?;
    let fail = |what: &str| Err(Error::Precondition(format!("search result failed certification: {what}")));
    if !veltman::model_forces_logic(m, logic)?.holds() {
        return fail("logic not forced");
    }
    if veltman::world_forces_logic(m, hit.failing.world, &[target])?.holds() {
        return fail("target not refuted");
    }
    if veltman::eval(m, hit.failing.world, &hit.failing.instance)? {
        return fail("reported instance holds");
    }
    Ok(())
}
