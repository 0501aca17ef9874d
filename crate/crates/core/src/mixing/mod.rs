//! Linear width, canonical paths, exact congestion and exact mixing times
//! on small state spaces.

mod ordering;
mod paths;

pub use ordering::{
    dfs_tree_ordering, floor_log2, linear_width_of_ordering, natural_ordering, optimal_linear_width,
    treedec_ordering, treedec_width_bound, EdgeOrdering, OPTIMAL_WIDTH_MAX_EDGES,
};
pub use paths::{
    canonical_path, congestion, congestion_bound, encoding_is_injective, pairs_through, CanonicalPath, Congestion,
    CONGESTION_MAX_EDGES,
};

use crate::arith::{format_rational, rational_to_f64, CompensatedSum};
use crate::chains::{Chain, ChainParams, Family};
use crate::exact::enumerate::{stats_by_mask, BipartiteRank, ComponentCount};
use crate::graph::{BipartiteGraph, Graph, GraphError};
use num::{BigInt, BigRational, BigUint, One};
use serde::Serialize;
use thiserror::Error;

/// Largest `m` for building an [`ExactChain`].
pub const EXACT_CHAIN_MAX_EDGES: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MixingError {
    #[error("graph has {m} edges, over the limit of {limit} for this analysis")]
    TooManyEdges { m: usize, limit: usize },
    #[error("graph has {n} vertices, over the limit of {limit} for this analysis")]
    TooManyVertices { n: usize, limit: usize },
    #[error("ordering is not a permutation of the {m} edge ids")]
    NotAPermutation { m: usize },
    #[error("graph is not a forest")]
    NotAForest,
    #[error("the chain needs at least one edge")]
    NoEdges,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub(crate) fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

/// The full state space `2^E` of a single-bond-flip chain with exact
/// stationary weights and transition rules.
#[derive(Debug, Clone)]
pub struct ExactChain {
    m: usize,
    params: ChainParams,
    stat: Vec<u16>,
    stat_min: usize,
    stat_max: usize,
    /// Exact acceptance `½ min(1, w^{Δ} μ^{±1})`, indexed like the chain's table.
    accept: [BigRational; 6],
    accept_f64: [f64; 6],
}

#[inline]
fn accept_index(dstat: i64, adding: bool) -> usize {
    ((dstat + 1) * 2) as usize + usize::from(adding)
}

impl ExactChain {
    /// RWS chain on the bipartite adjacency matrix of `g`.
    pub fn rws(g: &BipartiteGraph, params: &ChainParams) -> Result<Self, MixingError> {
        assert_eq!(params.family, Family::Rws);
        Self::check(g.m())?;
        let stat = stats_by_mask(g.m(), BipartiteRank::new(g, 0));
        Ok(Self::assemble(g.m(), params, stat))
    }

    /// RC chain on `g`.
    pub fn rc(g: &Graph, params: &ChainParams) -> Result<Self, MixingError> {
        assert_eq!(params.family, Family::Rc);
        Self::check(g.m())?;
        let stat = stats_by_mask(g.m(), ComponentCount::new(g, 0));
        Ok(Self::assemble(g.m(), params, stat))
    }

    fn check(m: usize) -> Result<(), MixingError> {
        if m == 0 {
            return Err(MixingError::NoEdges);
        }
        if m > EXACT_CHAIN_MAX_EDGES {
            return Err(MixingError::TooManyEdges {
                m,
                limit: EXACT_CHAIN_MAX_EDGES,
            });
        }
        Ok(())
    }

    fn assemble(m: usize, params: &ChainParams, stat: Vec<u16>) -> Self {
        let stat_min = *stat.iter().min().expect("nonempty") as usize;
        let stat_max = *stat.iter().max().expect("nonempty") as usize;
        let accept: [BigRational; 6] = std::array::from_fn(|i| {
            let dstat = (i / 2) as i64 - 1;
            let dsize = if i % 2 == 1 { 1 } else { -1 };
            params.acceptance(dstat, dsize)
        });
        let accept_f64 = std::array::from_fn(|i| rational_to_f64(&accept[i]));
        Self {
            m,
            params: params.clone(),
            stat,
            stat_min,
            stat_max,
            accept,
            accept_f64,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn states(&self) -> usize {
        1 << self.m
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    /// `rk₂` or `κ` of state `h`.
    pub fn stat(&self, h: u64) -> usize {
        self.stat[h as usize] as usize
    }

    /// Unnormalized exact weight `w^{stat} μ^{|H|}`.
    pub fn weight(&self, h: u64) -> BigRational {
        num::pow(self.params.weight.clone(), self.stat(h)) * num::pow(self.params.mu.clone(), h.count_ones() as usize)
    }

    /// Integer weights proportional to `π`: with `w = a/b`, `μ = c/d`,
    /// `W(H) = a^{s−s_min} b^{s_max−s} c^{|H|} d^{m−|H|}`.
    pub fn integer_weights(&self) -> Vec<BigUint> {
        let parts = |r: &BigRational| (r.numer().magnitude().clone(), r.denom().magnitude().clone());
        let (a, b) = parts(&self.params.weight);
        let (c, d) = parts(&self.params.mu);
        let span = self.stat_max - self.stat_min;
        let ap: Vec<BigUint> = (0..=span).map(|i| num::pow(a.clone(), i)).collect();
        let bp: Vec<BigUint> = (0..=span).map(|i| num::pow(b.clone(), i)).collect();
        let cp: Vec<BigUint> = (0..=self.m).map(|i| num::pow(c.clone(), i)).collect();
        let dp: Vec<BigUint> = (0..=self.m).map(|i| num::pow(d.clone(), i)).collect();
        (0..1u64 << self.m)
            .map(|h| {
                let s = self.stat(h) - self.stat_min;
                let k = h.count_ones() as usize;
                &ap[s] * &bp[span - s] * &cp[k] * &dp[self.m - k]
            })
            .collect()
    }

    /// Exact comparison `W(h1) ≤ W(h2)`.
    pub fn weight_le(&self, h1: u64, h2: u64) -> bool {
        self.weight(h1) <= self.weight(h2)
    }

    /// Exact stationary distribution.
    pub fn pi_exact(&self) -> Vec<BigRational> {
        let w = self.integer_weights();
        let z: BigUint = w.iter().sum();
        let z = BigInt::from(z);
        w.into_iter().map(|x| BigRational::new(BigInt::from(x), z.clone())).collect()
    }

    pub fn pi(&self) -> Vec<f64> {
        self.pi_exact().iter().map(rational_to_f64).collect()
    }

    fn move_index(&self, h: u64, e: usize) -> usize {
        let h2 = h ^ (1 << e);
        let dstat = self.stat(h2) as i64 - self.stat(h) as i64;
        accept_index(dstat, h2 >> e & 1 == 1)
    }

    /// Exact `P(H, H ⊕ {e}) = acceptance / m`.
    pub fn transition(&self, h: u64, e: usize) -> BigRational {
        &self.accept[self.move_index(h, e)] / BigRational::from_integer(BigInt::from(self.m))
    }

    /// Exact holding probability `P(H, H)`.
    pub fn holding(&self, h: u64) -> BigRational {
        let mut p = BigRational::one();
        for e in 0..self.m {
            p -= self.transition(h, e);
        }
        p
    }

    /// Checks `π(H)P(H,H') = π(H')P(H',H)` for every transition, exactly.
    pub fn detailed_balance(&self) -> Result<(), String> {
        let pi = self.pi_exact();
        for h in 0..1u64 << self.m {
            for e in 0..self.m {
                let h2 = h ^ (1 << e);
                if h2 < h {
                    continue;
                }
                let lhs = &pi[h as usize] * self.transition(h, e);
                let rhs = &pi[h2 as usize] * self.transition(h2, e);
                if lhs != rhs {
                    return Err(format!(
                        "detailed balance fails on edge {e} between states {h:#x} and {h2:#x}: {} vs {}",
                        format_rational(&lhs),
                        format_rational(&rhs)
                    ));
                }
            }
            let hold = self.holding(h);
            if hold < BigRational::new(BigInt::one(), BigInt::from(2)) {
                return Err(format!("state {h:#x} holds with probability below 1/2"));
            }
        }
        Ok(())
    }

    /// One step of `x ↦ xP` in double precision.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = 1usize << self.m;
        let mf = self.m as f64;
        let mut y = vec![0.0; n];
        for h in 0..n {
            let xh = x[h];
            if xh == 0.0 {
                continue;
            }
            let mut leave = 0.0;
            for e in 0..self.m {
                let p = self.accept_f64[self.move_index(h as u64, e)] / mf;
                y[h ^ (1 << e)] += xh * p;
                leave += p;
            }
            y[h] += xh * (1.0 - leave);
        }
        y
    }

    /// Smallest stationary probability and a state attaining it.
    pub fn pi_min(&self) -> (f64, u64) {
        let pi = self.pi_exact();
        let (h, p) = pi.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)).expect("nonempty");
        (rational_to_f64(p), h as u64)
    }

    /// Starting states for τ(ε): all states when `m ≤ 12`, otherwise
    /// `∅`, `E` and a minimizer of `π`.
    pub fn default_starts(&self) -> Vec<u64> {
        if self.m <= 12 {
            return (0..1u64 << self.m).collect();
        }
        let full = (1u64 << self.m) - 1;
        let mut s = vec![0, full, self.pi_min().1];
        s.sort_unstable();
        s.dedup();
        s
    }
}

/// `½ Σ |x − y|` with compensated summation.
pub fn total_variation(x: &[f64], y: &[f64]) -> f64 {
    let mut acc = CompensatedSum::default();
    for (a, b) in x.iter().zip(y) {
        acc.add((a - b).abs());
    }
    acc.value() / 2.0
}

/// `‖P^t(start, ·) − π‖_TV` for `t = 0..=steps`.
pub fn tv_curve(chain: &ExactChain, start: u64, steps: usize) -> Vec<f64> {
    let pi = chain.pi();
    let mut x = vec![0.0; chain.states()];
    x[start as usize] = 1.0;
    let mut out = vec![total_variation(&x, &pi)];
    for _ in 0..steps {
        x = chain.apply(&x);
        out.push(total_variation(&x, &pi));
    }
    out
}

/// Result of an exact mixing-time scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingTime {
    /// `τ(ε)`, the maximum over the scanned starts; `None` if some start did
    /// not reach `ε` within the step cap.
    pub tau: Option<usize>,
    /// `(start bitmask, τ_start)` per scanned start.
    pub per_start: Vec<(u64, Option<usize>)>,
}

/// `τ_H(ε) = min{t : ‖P^t(H,·) − π‖ ≤ ε}` for one start, scanning up to `max_steps`.
pub fn mixing_time_from(chain: &ExactChain, pi: &[f64], start: u64, eps: f64, max_steps: usize) -> Option<usize> {
    let mut x = vec![0.0; chain.states()];
    x[start as usize] = 1.0;
    for t in 0..=max_steps {
        if total_variation(&x, pi) <= eps {
            return Some(t);
        }
        if t < max_steps {
            x = chain.apply(&x);
        }
    }
    None
}

/// `τ(ε)` maximized over `starts`. TV never increases along a chain, so the
/// first crossing of `ε` is the mixing time.
pub fn mixing_time_exact(chain: &ExactChain, eps: f64, starts: &[u64], max_steps: usize) -> MixingTime {
    let pi = chain.pi();
    let per_start: Vec<(u64, Option<usize>)> = starts
        .iter()
        .map(|&s| (s, mixing_time_from(chain, &pi, s, eps, max_steps)))
        .collect();
    let tau = per_start.iter().map(|(_, t)| *t).collect::<Option<Vec<_>>>().map(|v| v.into_iter().max().unwrap_or(0));
    MixingTime { tau, per_start }
}

/// `ρ (ln(1/π(H)) + ln(1/ε))`, the canonical-path bound on `τ_H(ε)`.
pub fn mixing_time_bound(rho: &BigRational, pi_start: f64, eps: f64) -> f64 {
    rational_to_f64(rho) * ((1.0 / pi_start).ln() + (1.0 / eps).ln())
}

/// `2 n^{2+|log₂ λ|} (ln(1/π_min) + ln(1/ε))`, the explicit tree bound.
pub fn tree_mixing_bound(n: usize, lambda: &BigRational, pi_min: f64, eps: f64) -> f64 {
    let l = rational_to_f64(lambda).log2().abs();
    2.0 * (n as f64).powf(2.0 + l) * ((1.0 / pi_min).ln() + (1.0 / eps).ln())
}

/// Histogram (by state bitmask) of `samples` states taken every `thin`
/// steps after `burn_in` steps of a single run.
pub fn empirical_histogram(chain: &mut Chain, burn_in: u64, thin: u64, samples: u64) -> Vec<u64> {
    let m = chain.graph().m();
    assert!(m < 32, "histograms need m < 32");
    let mut hist = vec![0u64; 1 << m];
    for _ in 0..burn_in {
        chain.step();
    }
    for _ in 0..samples {
        for _ in 0..thin {
            chain.step();
        }
        hist[chain.subset().to_mask().expect("m < 64") as usize] += 1;
    }
    hist
}

/// Histogram of the states reached after exactly `t` steps by independent
/// replicas; `build(r)` creates replica `r`.
pub fn replica_histogram<F>(m: usize, replicas: usize, t: u64, threads: usize, build: F) -> Vec<u64>
where
    F: Fn(usize) -> Chain + Sync,
{
    let finals = crate::chains::run_replicas(replicas, threads, |r| {
        let mut c = build(r);
        for _ in 0..t {
            c.step();
        }
        c.subset().to_mask().expect("m < 64")
    });
    let mut hist = vec![0u64; 1 << m];
    for s in finals {
        hist[s as usize] += 1;
    }
    hist
}

/// TV distance between an empirical histogram and `π`.
pub fn empirical_tv(hist: &[u64], pi: &[f64]) -> f64 {
    let total: u64 = hist.iter().sum();
    let freq: Vec<f64> = hist.iter().map(|&c| c as f64 / total as f64).collect();
    total_variation(&freq, pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::chain_rng;
    use crate::graph::EdgeSubset;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn k2_uniform_chain() {
        let g = BipartiteGraph::two_color(Graph::path(2)).unwrap();
        let c = ExactChain::rws(&g, &ChainParams::rws(q(1, 1), q(1, 1)).unwrap()).unwrap();
        assert_eq!(c.transition(0, 0), q(1, 2));
        assert_eq!(c.holding(0), q(1, 2));
        assert_eq!(tv_curve(&c, 0, 1), vec![0.5, 0.0]);
        let rc = ExactChain::rc(&Graph::path(2), &ChainParams::rc(q(1, 1), q(1, 1)).unwrap()).unwrap();
        assert_eq!(rc.transition(1, 0), q(1, 2));
        c.detailed_balance().unwrap();
        assert_eq!(mixing_time_exact(&c, 0.25, &c.default_starts(), 10).tau, Some(1));
    }

    #[test]
    fn detailed_balance_on_small_graphs() {
        for g in [Graph::cycle(4), Graph::star(3), Graph::grid(2, 3)] {
            let b = BipartiteGraph::two_color(g.clone()).unwrap();
            ExactChain::rws(&b, &ChainParams::rws(q(2, 3), q(5, 2)).unwrap())
                .unwrap()
                .detailed_balance()
                .unwrap();
            ExactChain::rc(&g, &ChainParams::rc(q(3, 1), q(1, 3)).unwrap())
                .unwrap()
                .detailed_balance()
                .unwrap();
        }
    }

    #[test]
    fn operator_preserves_pi() {
        let g = Graph::complete(3);
        let c = ExactChain::rc(&g, &ChainParams::rc(q(2, 1), q(1, 1)).unwrap()).unwrap();
        let pi = c.pi();
        assert!(total_variation(&c.apply(&pi), &pi) < 1e-15);
    }

    #[test]
    fn rc_samples_match_pi() {
        let g = Graph::complete(3);
        let p = ChainParams::rc(q(2, 1), q(1, 1)).unwrap();
        let exact = ExactChain::rc(&g, &p).unwrap();
        let mut chain = Chain::rc(&g, p, EdgeSubset::empty(3), chain_rng(11, 0)).unwrap();
        let hist = empirical_histogram(&mut chain, 100, 5, 40_000);
        assert!(empirical_tv(&hist, &exact.pi()) < 0.02);
    }
}
