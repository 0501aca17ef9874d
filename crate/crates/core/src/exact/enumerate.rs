//! Gray-code subset enumeration with incremental statistics.
//!
//! Consecutive subsets differ in exactly one edge (step `i` flips edge
//! `trailing_zeros(i)`), so a walker only has to absorb a single flip per
//! subset. Counts are tallied by `(statistic, |S|)`; the exact sum is formed
//! afterwards from the table.

use super::CoefficientTable;
use crate::f2::{F2Matrix, RankProfile};
use crate::graph::{BipartiteGraph, Graph, Side, UnionFind};

/// Incremental state that follows a Gray-code walk over edge subsets.
pub(crate) trait Walker {
    fn flip(&mut self, e: usize);
    fn stat(&mut self) -> usize;
}

#[inline]
fn gray(i: u64) -> u64 {
    i ^ (i >> 1)
}

/// Tallies `(stat, |S|)` over all `2^m` subsets. The index range is split
/// into `threads` contiguous blocks, each with its own walker started at the
/// block's first subset.
pub(crate) fn tally<W, F>(m: usize, max_stat: usize, threads: usize, make: F) -> CoefficientTable
where
    W: Walker,
    F: Fn(u64) -> W + Sync,
{
    assert!(m < 64, "subset enumeration needs m < 64");
    let total = 1u64 << m;
    let threads = (threads.max(1) as u64).min(total) as usize;
    let width = m + 1;
    let run = |start: u64, end: u64| -> Vec<u64> {
        let mut counts = vec![0u64; (max_stat + 1) * width];
        let mut mask = gray(start);
        let mut walker = make(mask);
        let mut size = mask.count_ones() as usize;
        counts[walker.stat() * width + size] += 1;
        for i in start + 1..end {
            let e = i.trailing_zeros() as usize;
            mask ^= 1 << e;
            if mask >> e & 1 == 1 {
                size += 1;
            } else {
                size -= 1;
            }
            walker.flip(e);
            counts[walker.stat() * width + size] += 1;
        }
        counts
    };
    let counts = if threads == 1 {
        run(0, total)
    } else {
        let chunk = total.div_ceil(threads as u64);
        let parts: Vec<Vec<u64>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads as u64)
                .map(|t| {
                    let (a, b) = (t * chunk, ((t + 1) * chunk).min(total));
                    let run = &run;
                    scope.spawn(move || if a < b { run(a, b) } else { Vec::new() })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("enumeration worker panicked")).collect()
        });
        let mut acc = vec![0u64; (max_stat + 1) * width];
        for part in parts {
            for (a, c) in acc.iter_mut().zip(part) {
                *a += c;
            }
        }
        acc
    };
    CoefficientTable::from_counts(max_stat, m, counts)
}

/// Rank of the bipartite adjacency matrix.
pub(crate) struct BipartiteRank<'a> {
    entries: &'a [(usize, usize)],
    profile: RankProfile,
}

impl<'a> BipartiteRank<'a> {
    pub(crate) fn new(g: &'a BipartiteGraph, mask: u64) -> Self {
        let mut m = F2Matrix::zeros(g.u_count(), g.w_count());
        for (e, &(r, c)) in g.entries().iter().enumerate() {
            if mask >> e & 1 == 1 {
                m.set(r, c, true);
            }
        }
        Self {
            entries: g.entries(),
            profile: RankProfile::new(m),
        }
    }
}

impl Walker for BipartiteRank<'_> {
    #[inline]
    fn flip(&mut self, e: usize) {
        let (r, c) = self.entries[e];
        self.profile.flip(r, c);
    }

    #[inline]
    fn stat(&mut self) -> usize {
        self.profile.rank()
    }
}

/// Rank of the full (symmetric) adjacency matrix; each edge flips two entries.
pub(crate) struct FullRank<'a> {
    edges: &'a [(usize, usize)],
    profile: RankProfile,
}

impl<'a> FullRank<'a> {
    pub(crate) fn new(g: &'a Graph, mask: u64) -> Self {
        let mut m = F2Matrix::zeros(g.n(), g.n());
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            if mask >> e & 1 == 1 {
                m.set(a, b, true);
                m.set(b, a, true);
            }
        }
        Self {
            edges: g.edges(),
            profile: RankProfile::new(m),
        }
    }
}

impl Walker for FullRank<'_> {
    #[inline]
    fn flip(&mut self, e: usize) {
        let (a, b) = self.edges[e];
        self.profile.flip(a, b);
        self.profile.flip(b, a);
    }

    #[inline]
    fn stat(&mut self) -> usize {
        self.profile.rank()
    }
}

/// Number of connected components `κ(S)`.
pub(crate) struct ComponentCount<'a> {
    edges: &'a [(usize, usize)],
    uf: UnionFind,
    mask: u64,
}

impl<'a> ComponentCount<'a> {
    pub(crate) fn new(g: &'a Graph, mask: u64) -> Self {
        Self {
            edges: g.edges(),
            uf: UnionFind::new(g.n()),
            mask,
        }
    }
}

impl Walker for ComponentCount<'_> {
    #[inline]
    fn flip(&mut self, e: usize) {
        self.mask ^= 1 << e;
    }

    fn stat(&mut self) -> usize {
        crate::graph::count_components_mask(&mut self.uf, self.edges, self.mask)
    }
}

/// Pure-component bookkeeping for bipartite graphs with `W`-degrees ≤ 2.
///
/// The statistic is `|U| − κ'(S)` in [`PureMode::Rank`] mode, and
/// `2κ'(S) + [root is in a pure component]` in [`PureMode::Rooted`] mode.
pub(crate) struct PureComponents<'a> {
    edges: &'a [(usize, usize)],
    is_w: Vec<bool>,
    u_count: usize,
    mode: PureMode,
    uf: UnionFind,
    degree: Vec<u8>,
    mixed: Vec<bool>,
    mask: u64,
}

#[derive(Clone, Copy)]
pub(crate) enum PureMode {
    Rank,
    Rooted(usize),
}

impl<'a> PureComponents<'a> {
    pub(crate) fn new(g: &'a BipartiteGraph, mode: PureMode, mask: u64) -> Self {
        let n = g.n();
        Self {
            edges: g.graph().edges(),
            is_w: (0..n).map(|v| g.side(v) == Side::W).collect(),
            u_count: g.u_count(),
            mode,
            uf: UnionFind::new(n),
            degree: vec![0; n],
            mixed: vec![false; n],
            mask,
        }
    }
}

impl Walker for PureComponents<'_> {
    #[inline]
    fn flip(&mut self, e: usize) {
        self.mask ^= 1 << e;
    }

    fn stat(&mut self) -> usize {
        let n = self.is_w.len();
        self.uf.reset();
        self.degree.iter_mut().for_each(|d| *d = 0);
        self.mixed.iter_mut().for_each(|x| *x = false);
        let mut rest = self.mask;
        while rest != 0 {
            let e = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (a, b) = self.edges[e];
            self.degree[a] += 1;
            self.degree[b] += 1;
            self.uf.union(a, b);
        }
        for v in 0..n {
            if self.is_w[v] && self.degree[v] != 2 {
                let r = self.uf.find(v);
                self.mixed[r] = true;
            }
        }
        let mut pure = 0;
        for v in 0..n {
            if self.uf.find(v) == v && !self.mixed[v] {
                pure += 1;
            }
        }
        match self.mode {
            PureMode::Rank => self.u_count - pure,
            PureMode::Rooted(u) => {
                let r = self.uf.find(u);
                2 * pure + usize::from(!self.mixed[r])
            }
        }
    }
}

/// The walker's statistic for every subset, indexed by bitmask.
pub(crate) fn stats_by_mask<W: Walker>(m: usize, mut walker: W) -> Vec<u16> {
    assert!(m < 32, "per-state tables need m < 32");
    let mut out = vec![0u16; 1 << m];
    let mut mask = 0u64;
    out[0] = walker.stat() as u16;
    for i in 1u64..1 << m {
        let e = i.trailing_zeros() as usize;
        mask ^= 1 << e;
        walker.flip(e);
        out[mask as usize] = walker.stat() as u16;
    }
    out
}
