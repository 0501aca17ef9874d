use std::fmt;

pub(crate) const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// A dense vector over GF(2), packed into 64-bit words.
///
/// Bit `i` lives in word `i / 64` at position `i % 64`. Bits at or beyond
/// `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = u64::MAX;
        }
        v.clear_tail();
        v
    }

    /// Builds a vector from the low `len` bits of `mask`.
    ///
    /// # Panics
    /// Panics if `len > 64`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= WORD_BITS, "from_mask supports at most 64 bits, got {len}");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = mask;
            v.clear_tail();
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = Self { len, words };
        v.clear_tail();
        v
    }

    /// The low 64 bits, or `None` when the vector is longer than one word.
    pub fn to_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let bit = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= bit;
        } else {
            self.words[i / WORD_BITS] &= !bit;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len, "length mismatch");
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        BitVec { len: self.len, words }
    }

    /// Parity of the inner product with `other`.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones % 2 == 1
    }

    /// Indices of set bits in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + b)
            })
        })
    }

    /// Big-endian hexadecimal rendering with `ceil(len/4)` digits (at least one).
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4).max(1);
        let mut s = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let bit = d * 4;
            let word = bit / WORD_BITS;
            let nibble = if word < self.words.len() {
                (self.words[word] >> (bit % WORD_BITS)) & 0xf
            } else {
                0
            };
            s.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        s
    }

    /// Inverse of [`BitVec::to_hex`]; accepts an optional `0x` prefix.
    pub fn from_hex(len: usize, hex: &str) -> Result<Self, String> {
        let h = hex.trim().trim_start_matches("0x");
        let mut v = Self::zeros(len);
        for (d, c) in h.chars().rev().enumerate() {
            let nib = c.to_digit(16).ok_or_else(|| format!("invalid hex digit '{c}'"))? as u64;
            for b in 0..4 {
                if (nib >> b) & 1 == 1 {
                    let i = d * 4 + b;
                    if i >= len {
                        return Err(format!("hex value has bit {i} set beyond length {len}"));
                    }
                    v.set(i, true);
                }
            }
        }
        Ok(v)
    }

    fn clear_tail(&mut self) {
        let r = self.len % WORD_BITS;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip_and_tail() {
        let mut v = BitVec::zeros(70);
        v.set(0, true);
        v.set(65, true);
        let h = v.to_hex();
        assert_eq!(h.len(), 18);
        assert_eq!(BitVec::from_hex(70, &h).unwrap(), v);
        assert!(BitVec::from_hex(3, "f").is_err());
        assert_eq!(BitVec::ones(70).count_ones(), 70);
        assert_eq!(BitVec::from_mask(3, 0xff).count_ones(), 3);
    }

    #[test]
    fn iter_ones_across_words() {
        let mut v = BitVec::zeros(130);
        for i in [1, 63, 64, 129] {
            v.set(i, true);
        }
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![1, 63, 64, 129]);
    }
}
