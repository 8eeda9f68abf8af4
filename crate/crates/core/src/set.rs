use core::fmt;

use crate::Vertex;

/// A set of vertices packed in a `u64`; bit `v` stands for vertex `v`.
///
/// Bit 0 is the depot. Precedence and outage computations ignore it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// All fault vertices `1..=n`.
    #[inline]
    pub fn faults(n: usize) -> Self {
        debug_assert!(n <= crate::MAX_VERTICES);
        if n == 0 {
            Self::EMPTY
        } else {
            VertexSet((u64::MAX >> (63 - n)) & !1)
        }
    }

    #[inline]
    pub fn singleton(v: Vertex) -> Self {
        VertexSet(1 << v)
    }

    #[inline]
    pub fn contains(self, v: Vertex) -> bool {
        self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn with(self, v: Vertex) -> Self {
        VertexSet(self.0 | 1 << v)
    }

    #[inline]
    pub fn without(self, v: Vertex) -> Self {
        VertexSet(self.0 & !(1 << v))
    }

    #[inline]
    pub fn insert(&mut self, v: Vertex) {
        self.0 |= 1 << v;
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Vertex> {
        let mut bits = self.0;
        core::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut set = VertexSet::EMPTY;
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
