use crate::f2::BitVec;
use std::fmt;

/// A subset `S` of the edge set, as a bitmask over edge ids.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSubset {
    bits: BitVec,
}

impl EdgeSubset {
    pub fn empty(m: usize) -> Self {
        Self { bits: BitVec::zeros(m) }
    }

    pub fn full(m: usize) -> Self {
        Self { bits: BitVec::ones(m) }
    }

    /// Subset given by the low `m` bits of `mask` (bit `i` is edge `i`).
    pub fn from_mask(m: usize, mask: u64) -> Self {
        Self {
            bits: BitVec::from_mask(m, mask),
        }
    }

    pub fn from_edges(m: usize, edges: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(m);
        for e in edges {
            s.insert(e);
        }
        s
    }

    pub fn from_bits(bits: BitVec) -> Self {
        Self { bits }
    }

    pub fn to_mask(&self) -> Option<u64> {
        self.bits.to_mask()
    }

    /// Size of the universe, `m`.
    #[inline]
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    /// `|S|`.
    #[inline]
    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_zero()
    }

    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        self.bits.get(e)
    }

    pub fn insert(&mut self, e: usize) {
        self.bits.set(e, true);
    }

    pub fn remove(&mut self, e: usize) {
        self.bits.set(e, false);
    }

    /// `S ⊕ {e}`, in place.
    pub fn toggle(&mut self, e: usize) {
        self.bits.toggle(e);
    }

    pub fn symmetric_difference(&self, other: &EdgeSubset) -> EdgeSubset {
        let mut out = self.clone();
        out.bits.xor_assign(&other.bits);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn to_hex(&self) -> String {
        self.bits.to_hex()
    }

    pub fn from_hex(m: usize, hex: &str) -> Result<Self, String> {
        BitVec::from_hex(m, hex).map(|bits| Self { bits })
    }
}

impl fmt::Debug for EdgeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn hex_round_trip(m in 0usize..150, seed in any::<u64>()) {
            let s = EdgeSubset::from_edges(m, (0..m).filter(|i| (seed.rotate_left(*i as u32) ^ *i as u64) & 1 == 1));
            prop_assert_eq!(EdgeSubset::from_hex(m, &s.to_hex()).unwrap(), s);
        }

        #[test]
        fn symmetric_difference_is_involutive(a in any::<u64>(), b in any::<u64>()) {
            let x = EdgeSubset::from_mask(40, a);
            let y = EdgeSubset::from_mask(40, b);
            prop_assert_eq!(x.symmetric_difference(&y).symmetric_difference(&y), x);
        }
    }
}
