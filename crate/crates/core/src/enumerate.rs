//! Enumeration of structures up to isomorphism, and random generation.
//!
//! R is drawn from naturally labeled strict orders (`i R j` only when
//! `i < j`), keeping the labeling whose successor table is least among all
//! natural relabelings. For a fixed R the closed S-relations form a closure
//! system over the non-forced triples and are listed with NextClosure;
//! representatives are kept when least under the automorphisms of R.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::format::{Kind, Structure};
use crate::genveltman::GenFrame;
use crate::veltman::{transitive_closure, Frame};
use crate::worldset::{World, WorldSet};

/// Successor table of a strict order.
pub type Order = Vec<WorldSet>;

fn order_key(r: &[WorldSet]) -> Vec<u64> {
    r.iter().map(|s| s.bits()).collect()
}

fn permute_order(r: &[WorldSet], perm: &[World]) -> Order {
    let mut out = vec![WorldSet::EMPTY; r.len()];
    for (w, s) in r.iter().enumerate() {
        out[perm[w]] = s.permute(perm);
    }
    out
}

fn predecessors(r: &[WorldSet]) -> Vec<WorldSet> {
    let mut pre = vec![WorldSet::EMPTY; r.len()];
    for (x, s) in r.iter().enumerate() {
        for y in s.iter() {
            pre[y].insert(x);
        }
    }
    pre
}

/// Calls `f` with every relabeling `perm` (old world to new position) that
/// lists worlds along a linear extension of `r`.
fn for_each_linear_extension(r: &[WorldSet], f: &mut dyn FnMut(&[World])) {
    let n = r.len();
    let pre = predecessors(r);
    let mut perm = vec![0; n];
    let mut placed = WorldSet::EMPTY;
    fn go(
        pos: usize,
        n: usize,
        pre: &[WorldSet],
        placed: &mut WorldSet,
        perm: &mut Vec<World>,
        f: &mut dyn FnMut(&[World]),
    ) {
        if pos == n {
            f(perm);
            return;
        }
        for w in 0..n {
            if !placed.contains(w) && pre[w].is_subset(*placed) {
                placed.insert(w);
                perm[w] = pos;
                go(pos + 1, n, pre, placed, perm, f);
                placed.remove(w);
            }
        }
    }
    go(0, n, &pre, &mut placed, &mut perm, f);
}

fn is_canonical_order(r: &[WorldSet]) -> bool {
    let own = order_key(r);
    let mut canonical = true;
    for_each_linear_extension(r, &mut |perm| {
        if canonical && order_key(&permute_order(r, perm)) < own {
            canonical = false;
        }
    });
    canonical
}

/// Canonical naturally labeled strict orders on `n` worlds, one per
/// isomorphism class, in generation order.
pub fn canonical_orders(n: usize) -> Vec<Order> {
    let mut layer: Vec<Order> = vec![Vec::new()];
    for k in 0..n {
        let mut next = Vec::new();
        for r in &layer {
            let pre = predecessors(r);
            // Predecessor sets of the new world k are down-closed subsets.
            for p in WorldSet::full(k).subsets() {
                if p.iter().any(|a| !pre[a].is_subset(p)) {
                    continue;
                }
                let mut s = r.clone();
                for a in p.iter() {
                    s[a].insert(k);
                }
                s.push(WorldSet::EMPTY);
                next.push(s);
            }
        }
        layer = next;
    }
    layer.retain(|r| is_canonical_order(r));
    layer
}

/// Canonical orders on `n` worlds in which world 0 lies below every other.
pub fn canonical_rooted_orders(n: usize) -> Vec<Order> {
    if n == 0 {
        return Vec::new();
    }
    let shift: Vec<World> = (0..n - 1).map(|w| w + 1).collect();
    canonical_orders(n - 1)
        .into_iter()
        .map(|r| {
            let mut out = vec![WorldSet::full(n) - WorldSet::singleton(0)];
            out.extend(r.iter().map(|s| s.permute(&shift)));
            out
        })
        .collect()
}

/// Permutations of the worlds that preserve `r`.
pub fn automorphisms(r: &[WorldSet]) -> Vec<Vec<World>> {
    let n = r.len();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = WorldSet::EMPTY;
    fn go(
        i: usize,
        r: &[WorldSet],
        perm: &mut Vec<World>,
        used: &mut WorldSet,
        out: &mut Vec<Vec<World>>,
    ) {
        let n = r.len();
        if i == n {
            out.push(perm.clone());
            return;
        }
        for j in 0..n {
            if used.contains(j) || r[i].len() != r[j].len() {
                continue;
            }
            let consistent = (0..i).all(|k| {
                r[i].contains(k) == r[j].contains(perm[k]) && r[k].contains(i) == r[perm[k]].contains(j)
            });
            if consistent {
                perm[i] = j;
                used.insert(j);
                go(i + 1, r, perm, used, out);
                used.remove(j);
                perm[i] = usize::MAX;
            }
        }
    }
    go(0, r, &mut perm, &mut used, &mut out);
    out
}

/// All closed sets of a closure operator on `m ≤ 128` items, in lectic
/// order (Ganter's NextClosure).
fn next_closure(m: usize, close: &dyn Fn(u128) -> u128, emit: &mut dyn FnMut(u128)) {
    assert!(m <= 128, "at most 128 items");
    let below = |i: usize| if i == 0 { 0 } else { u128::MAX >> (128 - i) };
    let mut a = close(0);
    emit(a);
    'outer: loop {
        for i in (0..m).rev() {
            let bit = 1u128 << i;
            if a & bit != 0 {
                continue;
            }
            let b = close((a & below(i)) | bit);
            if b & below(i) == a & below(i) {
                a = b;
                emit(a);
                continue 'outer;
            }
        }
        break;
    }
}

fn frame_with_order(r: &[WorldSet]) -> Frame {
    let mut f = Frame::with_size(r.len());
    for (x, s) in r.iter().enumerate() {
        for y in s.iter() {
            f.add_r(x, y);
        }
    }
    f
}

fn genframe_with_order(r: &[WorldSet]) -> GenFrame {
    let mut g = GenFrame::with_size(r.len());
    for (x, s) in r.iter().enumerate() {
        for y in s.iter() {
            g.add_r(x, y);
        }
    }
    g
}

fn least_under(key: Vec<u64>, images: impl Iterator<Item = Vec<u64>>) -> bool {
    let mut least = true;
    for k in images {
        if k < key {
            least = false;
            break;
        }
    }
    least
}

/// Every closed ordinary frame over the strict order `r`, one per orbit of
/// the automorphisms of `r`.
pub fn frames_over(r: &[WorldSet]) -> Vec<Frame> {
    let base = frame_with_order(r).close().expect("strict orders are acyclic");
    let mut items: Vec<(World, World, World)> = Vec::new();
    for x in 0..r.len() {
        for u in r[x].iter() {
            for v in r[x].iter() {
                if !base.has_s(x, u, v) {
                    items.push((x, u, v));
                }
            }
        }
    }
    let bare = frame_with_order(r);
    let close = |set: u128| -> u128 {
        let mut f = bare.clone();
        for (i, &(x, u, v)) in items.iter().enumerate() {
            if set >> i & 1 == 1 {
                f.add_s(x, u, v);
            }
        }
        let f = f.close().expect("S stays inside R");
        items
            .iter()
            .enumerate()
            .filter(|(_, &(x, u, v))| f.has_s(x, u, v))
            .fold(0u128, |acc, (i, _)| acc | 1 << i)
    };
    let autos = automorphisms(r);
    let mut out = Vec::new();
    next_closure(items.len(), &close, &mut |set| {
        let mut f = bare.clone();
        for (i, &(x, u, v)) in items.iter().enumerate() {
            if set >> i & 1 == 1 {
                f.add_s(x, u, v);
            }
        }
        let f = f.close().expect("S stays inside R");
        if least_under(f.key(), autos.iter().map(|p| f.permute(p).key())) {
            out.push(f);
        }
    });
    out
}

/// Every closed generalized frame over the strict order `r`, one per orbit
/// of the automorphisms of `r`.
pub fn genframes_over(r: &[WorldSet]) -> Vec<GenFrame> {
    let bare = genframe_with_order(r);
    let base = bare.close().expect("strict orders are acyclic");
    let mut items: Vec<(World, World, WorldSet)> = Vec::new();
    for w in 0..r.len() {
        for x in r[w].iter() {
            for t in r[w].nonempty_subsets() {
                if !base.has_s(w, x, t) {
                    items.push((w, x, t));
                }
            }
        }
    }
    let build = |set: u128| -> GenFrame {
        let mut g = bare.clone();
        for (i, &(w, x, t)) in items.iter().enumerate() {
            if set >> i & 1 == 1 {
                g.add_s(w, x, t);
            }
        }
        g.close().expect("S stays inside R")
    };
    let close = |set: u128| -> u128 {
        let g = build(set);
        items
            .iter()
            .enumerate()
            .filter(|(_, &(w, x, t))| g.has_s(w, x, t))
            .fold(0u128, |acc, (i, _)| acc | 1 << i)
    };
    let autos = automorphisms(r);
    let mut out = Vec::new();
    next_closure(items.len(), &close, &mut |set| {
        let g = build(set);
        if least_under(g.key(), autos.iter().map(|p| g.permute(p).key())) {
            out.push(g);
        }
    });
    out
}

/// Canonical closed structures with 1 to `max_worlds` worlds, by size and
/// then by order.
pub fn enumerate_structures(kind: Kind, max_worlds: usize) -> impl Iterator<Item = Structure> {
    (1..=max_worlds).flat_map(move |n| {
        canonical_orders(n).into_iter().flat_map(move |r| -> Vec<Structure> {
            match kind {
                Kind::Ordinary => frames_over(&r).into_iter().map(Structure::Ordinary).collect(),
                Kind::Generalized => {
                    genframes_over(&r).into_iter().map(Structure::Generalized).collect()
                }
            }
        })
    })
}

/// A random strict order on `n` worlds: each pair `i < j` of a random
/// labeling is an edge with probability one half, then closed.
pub fn random_order<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Order {
    let mut labels: Vec<World> = (0..n).collect();
    labels.shuffle(rng);
    let mut r = vec![WorldSet::EMPTY; n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.5) {
                r[labels[i]].insert(labels[j]);
            }
        }
    }
    transitive_closure(&mut r).expect("edges follow a linear order");
    r
}

/// A closed ordinary frame on `n` worlds from a random order and up to `n`
/// random seed pairs.
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Frame {
    let r = random_order(rng, n);
    let mut f = frame_with_order(&r);
    let bases: Vec<World> = (0..n).filter(|&x| !r[x].is_empty()).collect();
    if !bases.is_empty() {
        for _ in 0..rng.gen_range(0..=n) {
            let x = *bases.choose(rng).expect("nonempty");
            let succ: Vec<World> = r[x].iter().collect();
            let u = *succ.choose(rng).expect("nonempty");
            let v = *succ.choose(rng).expect("nonempty");
            f.add_s(x, u, v);
        }
    }
    f.close().expect("S stays inside R")
}

/// A closed generalized frame on `n` worlds from a random order and up to
/// `n` random seed triples.
pub fn random_genframe<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GenFrame {
    let r = random_order(rng, n);
    let mut g = genframe_with_order(&r);
    let bases: Vec<World> = (0..n).filter(|&x| !r[x].is_empty()).collect();
    if !bases.is_empty() {
        for _ in 0..rng.gen_range(0..=n) {
            let w = *bases.choose(rng).expect("nonempty");
            let succ: Vec<World> = r[w].iter().collect();
            let x = *succ.choose(rng).expect("nonempty");
            let t = loop {
                let t: WorldSet = succ.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
                if !t.is_empty() {
                    break t;
                }
            };
            g.add_s(w, x, t);
        }
    }
    g.close().expect("S stays inside R")
}

pub fn random_structure<R: Rng + ?Sized>(rng: &mut R, kind: Kind, n: usize) -> Structure {
    match kind {
        Kind::Ordinary => Structure::Ordinary(random_frame(rng, n)),
        Kind::Generalized => Structure::Generalized(random_genframe(rng, n)),
    }
}

/// Set partitions of `n` worlds as restricted growth strings, by number of
/// blocks and then lexicographically.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(n: usize, cur: &mut Vec<usize>, max: usize, all: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            all.push(cur.clone());
            return;
        }
        let limit = if cur.is_empty() { 0 } else { max + 1 };
        for b in 0..=limit {
            cur.push(b);
            go(n, cur, max.max(b), all);
            cur.pop();
        }
    }
    if n > 0 {
        go(n, &mut cur, 0, &mut all);
    } else {
        all.push(Vec::new());
    }
    all.sort_by_key(|p| (p.iter().max().map_or(0, |m| m + 1), p.clone()));
    all
}
