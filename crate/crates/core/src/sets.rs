//! Small bitset newtypes for colours and automaton states.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Index of an acceptance colour.
pub type Colour = u32;

/// Index of an automaton state.
pub type StateId = u32;

/// Maximal number of colours a [`ColourSet`] can hold.
pub const MAX_COLOURS: u32 = 64;

/// Maximal number of states a [`StateSet`] can hold.
pub const MAX_SET_STATES: usize = 64;

/// A set of colours backed by a 64-bit mask.
///
/// The ordering is the lexicographic order on the ascending sequence of
/// members, where a strict prefix is smaller: `{0,2} < {1}` and `{0} < {0,1}`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColourSet(u64);

impl ColourSet {
    pub const EMPTY: ColourSet = ColourSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ColourSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(c: Colour) -> Self {
        debug_assert!(c < MAX_COLOURS);
        ColourSet(1 << c)
    }

    /// All colours strictly below `k`.
    pub fn full(k: u32) -> Self {
        if k >= 64 {
            ColourSet(u64::MAX)
        } else {
            ColourSet((1u64 << k) - 1)
        }
    }

    pub fn contains(self, c: Colour) -> bool {
        c < MAX_COLOURS && self.0 & (1 << c) != 0
    }

    pub fn insert(&mut self, c: Colour) {
        self.0 |= 1 << c;
    }

    pub fn remove(&mut self, c: Colour) {
        self.0 &= !(1 << c);
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Self) -> Self {
        ColourSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ColourSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ColourSet(self.0 & !other.0)
    }

    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Highest member plus one, or 0 for the empty set.
    pub fn bound(self) -> u32 {
        64 - self.0.leading_zeros()
    }

    /// Shift every member up by `offset`.
    pub fn shifted(self, offset: u32) -> Self {
        if self.0 == 0 {
            self
        } else {
            debug_assert!(self.bound() + offset <= MAX_COLOURS);
            ColourSet(self.0 << offset)
        }
    }

    pub fn iter(self) -> impl Iterator<Item = Colour> {
        BitIter(self.0)
    }

    /// Every subset of `self`, in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = ColourSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(ColourSet(cur))
        })
    }
}

impl FromIterator<Colour> for ColourSet {
    fn from_iter<I: IntoIterator<Item = Colour>>(iter: I) -> Self {
        let mut s = ColourSet::EMPTY;
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl Ord for ColourSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for ColourSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ColourSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ColourSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// A set of states of a small automaton, backed by a 64-bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StateSet(u64);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub fn from_bits(bits: u64) -> Self {
        StateSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            StateSet(u64::MAX)
        } else {
            StateSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(q: StateId) -> Self {
        StateSet(1 << q)
    }

    pub fn contains(self, q: StateId) -> bool {
        (q as usize) < MAX_SET_STATES && self.0 & (1 << q) != 0
    }

    pub fn insert(&mut self, q: StateId) {
        self.0 |= 1 << q;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Self) -> Self {
        StateSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        StateSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        StateSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = StateId> {
        BitIter(self.0)
    }

    /// Every subset of `self`, in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = StateSet> {
        ColourSet(self.0).subsets().map(|c| StateSet(c.0))
    }
}

impl FromIterator<StateId> for StateSet {
    fn from_iter<I: IntoIterator<Item = StateId>>(iter: I) -> Self {
        let mut s = StateSet::EMPTY;
        for q in iter {
            s.insert(q);
        }
        s
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, q) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "}}")
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(i)
    }
}
