//! Dense linear algebra over GF(2).
//!
//! [`F2Matrix`] is a row-major bit-packed matrix. [`RankProfile`] keeps a
//! fully reduced row basis of a mutable matrix together with the row
//! operations that produced it, so that the rank and the left null space stay
//! available while single entries are flipped.

mod bitvec;

pub use bitvec::BitVec;
pub(crate) use bitvec::{words_for, WORD_BITS};

use crate::graph::{BipartiteGraph, EdgeSubset, Graph};
use rand::Rng;
use std::fmt;

/// Row-major bit-packed matrix over GF(2). Bits past `cols` in each row are zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// # Panics
    /// Panics if the rows have different lengths from `cols`.
    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has length {} but cols = {cols}", r.len());
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    /// Builds a matrix from row strings of `0`/`1` characters (whitespace ignored).
    pub fn parse(rows: &[&str]) -> Self {
        let bits: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| r.chars().filter(|c| !c.is_whitespace()).map(|c| c == '1').collect())
            .collect();
        let cols = bits.first().map_or(0, Vec::len);
        let rows: Vec<BitVec> = bits.iter().map(|b| BitVec::from_bools(b)).collect();
        Self::from_rows(cols, &rows)
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if rng.gen::<bool>() {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) out of range");
        self.data[i * self.stride + j / WORD_BITS] >> (j % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) out of range");
        let w = &mut self.data[i * self.stride + j / WORD_BITS];
        let bit = 1u64 << (j % WORD_BITS);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize, j: usize) {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) out of range");
        self.data[i * self.stride + j / WORD_BITS] ^= 1u64 << (j % WORD_BITS);
    }

    pub fn row(&self, i: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(i).to_vec())
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.row(i).iter_ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    /// The row vector `βᵀ M`.
    pub fn left_mul(&self, beta: &BitVec) -> BitVec {
        assert_eq!(beta.len(), self.rows, "vector length must equal the row count");
        let mut acc = vec![0u64; self.stride];
        for i in beta.iter_ones() {
            for (a, w) in acc.iter_mut().zip(self.row_words(i)) {
                *a ^= w;
            }
        }
        BitVec::from_words(self.cols, acc)
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let s: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        write!(f, "]")
    }
}

/// Rank over GF(2) by Gaussian elimination on a copy of `m`.
pub fn rank(m: &F2Matrix) -> usize {
    let mut data = m.data.clone();
    let stride = m.stride;
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let (wi, bit) = (c / WORD_BITS, 1u64 << (c % WORD_BITS));
        let Some(p) = (r..m.rows).find(|&i| data[i * stride + wi] & bit != 0) else {
            continue;
        };
        if p != r {
            for k in 0..stride {
                data.swap(p * stride + k, r * stride + k);
            }
        }
        for i in r + 1..m.rows {
            if data[i * stride + wi] & bit != 0 {
                for k in wi..stride {
                    data[i * stride + k] ^= data[r * stride + k];
                }
            }
        }
        r += 1;
    }
    r
}

/// `n × n` adjacency matrix of `(V, S)`.
pub fn adjacency(g: &Graph, s: &EdgeSubset) -> F2Matrix {
    let mut m = F2Matrix::zeros(g.n(), g.n());
    for e in s.iter() {
        let (a, b) = g.edge(e);
        m.set(a, b, true);
        m.set(b, a, true);
    }
    m
}

/// `|U| × |W|` bipartite adjacency matrix of `(U ∪ W, S)`, rows and columns in
/// the order of [`BipartiteGraph::u_vertices`] and [`BipartiteGraph::w_vertices`].
pub fn bipartite_adjacency(g: &BipartiteGraph, s: &EdgeSubset) -> F2Matrix {
    let mut m = F2Matrix::zeros(g.u_count(), g.w_count());
    for e in s.iter() {
        let (r, c) = g.entry(e);
        m.set(r, c, true);
    }
    m
}

/// Basis of the left null space `{β : βᵀ M = 0}`; it has `rows − rank` vectors.
pub fn left_nullspace(m: &F2Matrix) -> Vec<BitVec> {
    RankProfile::new(m.clone()).left_nullspace()
}

/// A uniformly random element of the left null space of `m`.
pub fn sample_left_nullspace<R: Rng + ?Sized>(m: &F2Matrix, rng: &mut R) -> BitVec {
    RankProfile::new(m.clone()).sample_left_nullspace(rng)
}

/// How [`RankProfile::flip`] keeps the basis current.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpdateMode {
    /// Repair the reduced basis with a constant number of row passes.
    #[default]
    Incremental,
    /// Rebuild the elimination from scratch after every flip (reference path).
    Recompute,
}

/// Maintained Gauss–Jordan elimination of a mutable matrix `M`.
///
/// Keeps an invertible transform `T` and `R = T·M` in which every row is
/// either zero or carries a pivot column that is zero in all other rows.
/// Rows are never swapped, so `rank` is the number of pivot rows and the rows
/// of `T` belonging to zero rows of `R` form a basis of the left null space.
#[derive(Clone)]
pub struct RankProfile {
    source: F2Matrix,
    mode: UpdateMode,
    rw: usize,
    tw: usize,
    r: Vec<u64>,
    t: Vec<u64>,
    pivot: Vec<usize>,
    pivot_row: Vec<usize>,
    rank: usize,
    fault: bool,
}

const NONE: usize = usize::MAX;

impl RankProfile {
    pub fn new(source: F2Matrix) -> Self {
        Self::with_mode(source, UpdateMode::Incremental)
    }

    pub fn with_mode(source: F2Matrix, mode: UpdateMode) -> Self {
        let rows = source.rows;
        let mut p = Self {
            rw: source.stride,
            tw: words_for(rows),
            r: Vec::new(),
            t: Vec::new(),
            pivot: Vec::new(),
            pivot_row: Vec::new(),
            rank: 0,
            source,
            mode,
            fault: false,
        };
        p.rebuild();
        p
    }

    /// Profile of the all-zero `rows × cols` matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(F2Matrix::zeros(rows, cols))
    }

    pub fn mode(&self) -> UpdateMode {
        self.mode
    }

    pub fn set_mode(&mut self, mode: UpdateMode) {
        self.mode = mode;
    }

    pub fn source(&self) -> &F2Matrix {
        &self.source
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rows(&self) -> usize {
        self.source.rows
    }

    pub fn cols(&self) -> usize {
        self.source.cols
    }

    /// Makes the next incremental flip skip its basis update, leaving the
    /// profile silently inconsistent. Used by the self-test to prove that
    /// [`RankProfile::check`] catches a broken update.
    #[doc(hidden)]
    pub fn inject_fault(&mut self) {
        self.fault = true;
    }

    fn rebuild(&mut self) {
        let rows = self.source.rows;
        let cols = self.source.cols;
        let tw = self.tw;
        self.r = self.source.data.clone();
        self.t = vec![0; rows * tw];
        for i in 0..rows {
            self.t[i * tw + i / WORD_BITS] |= 1 << (i % WORD_BITS);
        }
        self.pivot = vec![NONE; rows];
        self.pivot_row = vec![NONE; cols];
        self.rank = 0;
        for i in 0..rows {
            // reduce row i against existing pivots; earlier rows are already reduced
            for c in 0..cols {
                let pr = self.pivot_row[c];
                if pr != NONE && self.bit_r(i, c) {
                    self.xor_rows(i, pr);
                }
            }
            if let Some(c) = self.lowest_bit(i) {
                self.install_pivot(i, c);
            }
        }
    }

    #[inline]
    fn bit_r(&self, i: usize, c: usize) -> bool {
        self.r[i * self.rw + c / WORD_BITS] >> (c % WORD_BITS) & 1 == 1
    }

    #[inline]
    fn bit_t(&self, i: usize, c: usize) -> bool {
        self.t[i * self.tw + c / WORD_BITS] >> (c % WORD_BITS) & 1 == 1
    }

    /// Row `dst` ^= row `src` in both `R` and `T`.
    #[inline]
    fn xor_rows(&mut self, dst: usize, src: usize) {
        let rw = self.rw;
        for k in 0..rw {
            let w = self.r[src * rw + k];
            self.r[dst * rw + k] ^= w;
        }
        let tw = self.tw;
        for k in 0..tw {
            let w = self.t[src * tw + k];
            self.t[dst * tw + k] ^= w;
        }
    }

    fn lowest_bit(&self, i: usize) -> Option<usize> {
        let row = &self.r[i * self.rw..(i + 1) * self.rw];
        row.iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// Makes `c` the pivot of row `i` and clears column `c` from all other rows.
    fn install_pivot(&mut self, i: usize, c: usize) {
        self.pivot[i] = c;
        self.pivot_row[c] = i;
        self.rank += 1;
        for r in 0..self.source.rows {
            if r != i && self.bit_r(r, c) {
                self.xor_rows(r, i);
            }
        }
    }

    /// Flips entry `(i, j)` of the source matrix and returns the new rank,
    /// which differs from the old one by at most one.
    pub fn flip(&mut self, i: usize, j: usize) -> usize {
        self.source.toggle(i, j);
        match self.mode {
            UpdateMode::Recompute => self.rebuild(),
            UpdateMode::Incremental if self.fault => self.fault = false,
            UpdateMode::Incremental => self.flip_incremental(i, j),
        }
        self.rank
    }

    fn flip_incremental(&mut self, i: usize, j: usize) {
        let rows = self.source.rows;
        // T·M' = R + T[:, i] e_jᵀ: the rows with T[r][i] = 1 gain e_j
        let (jw, jbit) = (j / WORD_BITS, 1u64 << (j % WORD_BITS));
        let mut a0 = NONE;
        for r in 0..rows {
            if self.bit_t(r, i) {
                self.r[r * self.rw + jw] ^= jbit;
                if a0 == NONE || (self.pivot[a0] != NONE && self.pivot[r] == NONE) {
                    a0 = r;
                }
            }
        }
        debug_assert!(a0 != NONE, "T is invertible, so column i is nonzero");
        for r in 0..rows {
            if r != a0 && self.bit_t(r, i) {
                self.xor_rows(r, a0);
            }
        }
        // every row but a0 is back to a reduced state w.r.t. the other pivots
        if self.pivot[a0] != NONE {
            self.pivot_row[self.pivot[a0]] = NONE;
            self.pivot[a0] = NONE;
            self.rank -= 1;
        }
        let cols = self.source.cols;
        for c in 0..cols {
            let pr = self.pivot_row[c];
            if pr != NONE && self.bit_r(a0, c) {
                self.xor_rows(a0, pr);
            }
        }
        if let Some(c) = self.lowest_bit(a0) {
            self.install_pivot(a0, c);
        }
    }

    /// Sets entry `(i, j)` to `value`, flipping only if needed.
    pub fn set(&mut self, i: usize, j: usize, value: bool) -> usize {
        if self.source.get(i, j) != value {
            self.flip(i, j);
        }
        self.rank
    }

    /// Basis of `{β : βᵀ M = 0}` (the `T` rows of the zero rows of `R`).
    pub fn left_nullspace(&self) -> Vec<BitVec> {
        let tw = self.tw;
        (0..self.source.rows)
            .filter(|&r| self.pivot[r] == NONE)
            .map(|r| BitVec::from_words(self.source.rows, self.t[r * tw..(r + 1) * tw].to_vec()))
            .collect()
    }

    /// Uniform random element of the left null space: each basis vector is
    /// included independently with probability 1/2.
    pub fn sample_left_nullspace<R: Rng + ?Sized>(&self, rng: &mut R) -> BitVec {
        let mut v = BitVec::zeros(self.source.rows);
        for b in self.left_nullspace() {
            if rng.gen::<bool>() {
                v.xor_assign(&b);
            }
        }
        v
    }

    /// Verifies every internal invariant against the source matrix:
    /// `T·M = R`, the reduced shape of `R`, pivot bookkeeping, and rank equal
    /// to a from-scratch elimination.
    pub fn check(&self) -> Result<(), String> {
        let rows = self.source.rows;
        for r in 0..rows {
            let t = BitVec::from_words(rows, self.t[r * self.tw..(r + 1) * self.tw].to_vec());
            let prod = self.source.left_mul(&t);
            if prod.words() != &self.r[r * self.rw..(r + 1) * self.rw] {
                return Err(format!("row {r}: T·M differs from the reduced row"));
            }
            match self.pivot[r] {
                NONE => {
                    if self.lowest_bit(r).is_some() {
                        return Err(format!("row {r} has no pivot but is nonzero"));
                    }
                }
                c => {
                    if self.pivot_row[c] != r || !self.bit_r(r, c) {
                        return Err(format!("row {r}: pivot column {c} bookkeeping is broken"));
                    }
                    if let Some(o) = (0..rows).find(|&o| o != r && self.bit_r(o, c)) {
                        return Err(format!("pivot column {c} of row {r} is also set in row {o}"));
                    }
                }
            }
        }
        let pivots = self.pivot.iter().filter(|&&p| p != NONE).count();
        let fresh = rank(&self.source);
        if pivots != self.rank || fresh != self.rank {
            return Err(format!(
                "tracked rank {} but {pivots} pivot rows and from-scratch rank {fresh}",
                self.rank
            ));
        }
        // T must stay invertible
        let t = F2Matrix {
            rows,
            cols: rows,
            stride: self.tw,
            data: self.t.clone(),
        };
        if rank(&t) != rows {
            return Err("row transform is singular".into());
        }
        Ok(())
    }
}

impl fmt::Debug for RankProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RankProfile")
            .field("rows", &self.source.rows)
            .field("cols", &self.source.cols)
            .field("rank", &self.rank)
            .field("mode", &self.mode)
            .finish()
    }
}
