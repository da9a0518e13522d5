//! Bitmask sets of worlds.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

/// Index of a world inside a structure.
pub type World = usize;

/// Largest number of worlds a structure may have.
pub const MAX_WORLDS: usize = 64;

/// A finite set of worlds, one bit per world index.
///
/// Sets are ordered by their characteristic vector read from world 0
/// upwards, with absence before presence. Under this order `{y, b1}` comes
/// before `{y, b0}` when `b0` is listed before `b1`, and the empty set is
/// the least element.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct WorldSet(u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        WorldSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// All worlds `0..n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_WORLDS, "at most {MAX_WORLDS} worlds are supported");
        if n == MAX_WORLDS {
            WorldSet(u64::MAX)
        } else {
            WorldSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(w: World) -> Self {
        WorldSet(1u64 << w)
    }

    pub fn contains(self, w: World) -> bool {
        w < MAX_WORLDS && self.0 & (1u64 << w) != 0
    }

    pub fn insert(&mut self, w: World) {
        self.0 |= 1u64 << w;
    }

    pub fn remove(&mut self, w: World) {
        self.0 &= !(1u64 << w);
    }

    pub fn with(self, w: World) -> Self {
        WorldSet(self.0 | (1u64 << w))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: WorldSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Complement relative to the worlds `0..n`.
    pub fn complement(self, n: usize) -> Self {
        WorldSet(!self.0 & WorldSet::full(n).0)
    }

    /// Least world index in the set.
    pub fn first(self) -> Option<World> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as World)
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// Every subset of `self`, in ascending set order.
    pub fn subsets(self) -> Vec<WorldSet> {
        let mut out = Vec::with_capacity(1usize << self.len());
        let mut sub = self.0;
        loop {
            out.push(WorldSet(sub));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & self.0;
        }
        out.sort();
        out
    }

    /// Every nonempty subset of `self`, in ascending set order.
    pub fn nonempty_subsets(self) -> Vec<WorldSet> {
        let mut out = self.subsets();
        out.retain(|s| !s.is_empty());
        out
    }

    /// Applies a world relabelling.
    pub fn permute(self, perm: &[World]) -> Self {
        self.iter().map(|w| perm[w]).collect()
    }
}

impl Ord for WorldSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.reverse_bits().cmp(&other.0.reverse_bits())
    }
}

impl PartialOrd for WorldSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BitOr for WorldSet {
    type Output = WorldSet;
    fn bitor(self, rhs: Self) -> Self {
        WorldSet(self.0 | rhs.0)
    }
}

impl BitAnd for WorldSet {
    type Output = WorldSet;
    fn bitand(self, rhs: Self) -> Self {
        WorldSet(self.0 & rhs.0)
    }
}

impl Sub for WorldSet {
    type Output = WorldSet;
    fn sub(self, rhs: Self) -> Self {
        WorldSet(self.0 & !rhs.0)
    }
}

impl std::ops::BitOrAssign for WorldSet {
    fn bitor_assign(&mut self, rhs: Self) {
        self.0 |= rhs.0;
    }
}

impl FromIterator<World> for WorldSet {
    fn from_iter<I: IntoIterator<Item = World>>(iter: I) -> Self {
        let mut s = WorldSet::EMPTY;
        for w in iter {
            s.insert(w);
        }
        s
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = World;
    fn next(&mut self) -> Option<World> {
        if self.0 == 0 {
            return None;
        }
        let w = self.0.trailing_zeros() as World;
        self.0 &= self.0 - 1;
        Some(w)
    }
}
