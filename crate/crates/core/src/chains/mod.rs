//! Single-bond-flip lazy Metropolis chains.
//!
//! Both chains pick a uniform edge `e`, propose `S = X ⊕ {e}`, and accept with
//! probability `½·min(1, w^{Δ} μ^{Δ|S|})`, where `Δ` is the change in
//! `rk₂` of the bipartite adjacency matrix (RWS, weight `λ`) or in the
//! number of components `κ` (RC, weight `q`). Rejected mass stays on the
//! current state.

mod bridge;

pub use bridge::{bis_sample_bridge, bis_u_marginal, rws_sample_from_bis};

use crate::arith::rational_to_f64;
use crate::f2::{bipartite_adjacency, RankProfile};
use crate::graph::{components, BipartiteGraph, EdgeSubset, Graph};
use num::{BigInt, BigRational, One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("chain parameter {name} must be strictly positive, got {value}")]
    NonPositive { name: &'static str, value: String },
    #[error("initial subset has {got} edges in its universe but the graph has {expected}")]
    SubsetSize { expected: usize, got: usize },
    #[error("the chain needs at least one edge")]
    NoEdges,
    #[error("thinning interval must be at least 1")]
    ZeroThin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// Rank-weighted subgraphs: `π(H) ∝ λ^{rk₂(H)} μ^{|H|}`.
    #[serde(rename = "rws")]
    Rws,
    /// Random cluster: `π(H) ∝ q^{κ(H)} μ^{|H|}`.
    #[serde(rename = "rc")]
    Rc,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Rws => "rws",
            Family::Rc => "rc",
        })
    }
}

/// Exact chain parameters with `f64` shadows for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainParams {
    pub family: Family,
    /// `λ` for RWS, `q` for RC.
    pub weight: BigRational,
    pub mu: BigRational,
    pub weight_f64: f64,
    pub mu_f64: f64,
}

impl ChainParams {
    pub fn new(family: Family, weight: BigRational, mu: BigRational) -> Result<Self, ChainError> {
        let name = match family {
            Family::Rws => "lambda",
            Family::Rc => "q",
        };
        for (name, v) in [(name, &weight), ("mu", &mu)] {
            if !v.is_positive() {
                return Err(ChainError::NonPositive {
                    name,
                    value: v.to_string(),
                });
            }
        }
        Ok(Self {
            family,
            weight_f64: rational_to_f64(&weight),
            mu_f64: rational_to_f64(&mu),
            weight,
            mu,
        })
    }

    pub fn rws(lambda: BigRational, mu: BigRational) -> Result<Self, ChainError> {
        Self::new(Family::Rws, lambda, mu)
    }

    pub fn rc(q: BigRational, mu: BigRational) -> Result<Self, ChainError> {
        Self::new(Family::Rc, q, mu)
    }

    /// Acceptance probability `½·min(1, w^{dstat} μ^{dsize})`.
    pub fn acceptance(&self, dstat: i64, dsize: i64) -> BigRational {
        let ratio = crate::arith::pow_signed(&self.weight, dstat).expect("weight is positive")
            * crate::arith::pow_signed(&self.mu, dsize).expect("mu is positive");
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        if ratio >= BigRational::one() {
            half
        } else {
            half * ratio
        }
    }
}

/// Bernoulli draw at an exact rational probability `num/den`. When both fit
/// in 64 bits the draw is exact (unbiased bounded integer); otherwise it
/// compares a 64-bit draw to `⌈p·2^64⌉`, off by less than `2^-64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Threshold {
    Exact { num: u64, den: u64 },
    Dyadic(u64),
}

impl Threshold {
    fn new(p: &BigRational) -> Self {
        if let (Some(num), Some(den)) = (p.numer().to_u64(), p.denom().to_u64()) {
            return Threshold::Exact { num, den };
        }
        let scaled = p * BigRational::from_integer(BigInt::one() << 64);
        let t = scaled.ceil().to_integer();
        // p ≤ 1/2, so the threshold fits in 64 bits
        Threshold::Dyadic(t.to_u64().unwrap_or(u64::MAX))
    }

    #[inline]
    fn draw<R: Rng>(&self, rng: &mut R) -> bool {
        match *self {
            Threshold::Exact { num, den } => rng.gen_range(0..den) < num,
            Threshold::Dyadic(t) => rng.gen::<u64>() < t,
        }
    }
}

/// Deterministic generator for `(seed, stream)`; distinct streams are
/// independent replicas.
pub fn chain_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

enum Kernel {
    Rank { entries: Vec<(usize, usize)>, profile: Box<RankProfile> },
    Cluster { incidence: Vec<Vec<(usize, usize)>> },
}

/// A running chain: current subset, its cached statistic, and counters.
pub struct Chain {
    graph: Graph,
    params: ChainParams,
    kernel: Kernel,
    /// Indexed by `(dstat + 1) * 2 + (dsize > 0)`.
    accept: [Threshold; 6],
    subset: EdgeSubset,
    stat: usize,
    rng: ChaCha8Rng,
    steps: u64,
    accepted: u64,
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Chain")
            .field("family", &self.params.family)
            .field("subset", &self.subset)
            .field("stat", &self.stat)
            .field("steps", &self.steps)
            .field("accepted", &self.accepted)
            .finish()
    }
}

impl Chain {
    /// RWS chain on the bipartite adjacency matrix of `g`.
    pub fn rws(g: &BipartiteGraph, params: ChainParams, initial: EdgeSubset, rng: ChaCha8Rng) -> Result<Self, ChainError> {
        assert_eq!(params.family, Family::Rws, "rws chain needs RWS parameters");
        Self::check_initial(g.graph(), &initial)?;
        let profile = RankProfile::new(bipartite_adjacency(g, &initial));
        let stat = profile.rank();
        let kernel = Kernel::Rank {
            entries: g.entries().to_vec(),
            profile: Box::new(profile),
        };
        Ok(Self::assemble(g.graph().clone(), params, kernel, initial, stat, rng))
    }

    /// RC chain on `g`.
    pub fn rc(g: &Graph, params: ChainParams, initial: EdgeSubset, rng: ChaCha8Rng) -> Result<Self, ChainError> {
        assert_eq!(params.family, Family::Rc, "rc chain needs RC parameters");
        Self::check_initial(g, &initial)?;
        let mut incidence = vec![Vec::new(); g.n()];
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            incidence[a].push((b, e));
            incidence[b].push((a, e));
        }
        let stat = components(g, &initial).kappa;
        Ok(Self::assemble(g.clone(), params, Kernel::Cluster { incidence }, initial, stat, rng))
    }

    fn check_initial(g: &Graph, initial: &EdgeSubset) -> Result<(), ChainError> {
        if g.m() == 0 {
            return Err(ChainError::NoEdges);
        }
        if initial.universe() != g.m() {
            return Err(ChainError::SubsetSize {
                expected: g.m(),
                got: initial.universe(),
            });
        }
        Ok(())
    }

    fn assemble(graph: Graph, params: ChainParams, kernel: Kernel, subset: EdgeSubset, stat: usize, rng: ChaCha8Rng) -> Self {
        let mut accept = [Threshold::Dyadic(0); 6];
        for dstat in -1..=1i64 {
            for (k, dsize) in [-1i64, 1].into_iter().enumerate() {
                accept[((dstat + 1) * 2) as usize + k] = Threshold::new(&params.acceptance(dstat, dsize));
            }
        }
        Self {
            graph,
            params,
            kernel,
            accept,
            subset,
            stat,
            rng,
            steps: 0,
            accepted: 0,
        }
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn subset(&self) -> &EdgeSubset {
        &self.subset
    }

    /// Cached `rk₂` (RWS) or `κ` (RC) of the current subset.
    pub fn stat(&self) -> usize {
        self.stat
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.accepted as f64 / self.steps as f64
        }
    }

    /// The statistic of the current subset computed from scratch.
    pub fn recompute_stat(&self) -> usize {
        match &self.kernel {
            Kernel::Rank { profile, .. } => crate::f2::rank(profile.source()),
            Kernel::Cluster { .. } => components(&self.graph, &self.subset).kappa,
        }
    }

    /// Whether `a` and `b` are joined in `(V, X)` without using edge `skip`.
    fn connected(incidence: &[Vec<(usize, usize)>], subset: &EdgeSubset, a: usize, b: usize, skip: usize) -> bool {
        if a == b {
            return true;
        }
        let mut seen = vec![false; incidence.len()];
        let mut stack = vec![a];
        seen[a] = true;
        while let Some(v) = stack.pop() {
            for &(x, e) in &incidence[v] {
                if e != skip && !seen[x] && subset.contains(e) {
                    if x == b {
                        return true;
                    }
                    seen[x] = true;
                    stack.push(x);
                }
            }
        }
        false
    }

    /// One step; returns whether the proposal was accepted.
    pub fn step(&mut self) -> bool {
        let m = self.graph.m();
        let e = self.rng.gen_range(0..m);
        let adding = !self.subset.contains(e);
        let dsize: usize = usize::from(adding);
        let accepted = match &mut self.kernel {
            Kernel::Rank { entries, profile } => {
                let (r, c) = entries[e];
                let new_rank = profile.flip(r, c);
                let dstat = new_rank as i64 - self.stat as i64;
                let ok = self.accept[((dstat + 1) * 2) as usize + dsize].draw(&mut self.rng);
                if ok {
                    self.stat = new_rank;
                } else {
                    profile.flip(r, c);
                }
                ok
            }
            Kernel::Cluster { incidence } => {
                let (a, b) = self.graph.edge(e);
                // adding merges two components unless already joined; removing splits on a bridge
                let joined = Self::connected(incidence, &self.subset, a, b, e);
                let dstat: i64 = match (adding, joined) {
                    (true, false) => -1,
                    (false, false) => 1,
                    _ => 0,
                };
                let ok = self.accept[((dstat + 1) * 2) as usize + dsize].draw(&mut self.rng);
                if ok {
                    self.stat = (self.stat as i64 + dstat) as usize;
                }
                ok
            }
        };
        if accepted {
            self.subset.toggle(e);
            self.accepted += 1;
        }
        self.steps += 1;
        accepted
    }

    /// Runs `cfg.burn_in + cfg.steps` steps, calling `on_sample` on every
    /// `cfg.thin`-th state after burn-in.
    pub fn run(&mut self, cfg: &RunConfig, mut on_sample: impl FnMut(&EdgeSubset, usize)) -> Result<RunSummary, ChainError> {
        if cfg.thin == 0 {
            return Err(ChainError::ZeroThin);
        }
        let (steps0, acc0) = (self.steps, self.accepted);
        for _ in 0..cfg.burn_in {
            self.step();
        }
        let mut samples = 0u64;
        for t in 1..=cfg.steps {
            self.step();
            if t % cfg.thin == 0 {
                on_sample(&self.subset, self.stat);
                samples += 1;
            }
        }
        let steps = self.steps - steps0;
        let accepted = self.accepted - acc0;
        Ok(RunSummary {
            family: self.params.family,
            steps,
            accepted,
            acceptance_rate: if steps == 0 { 0.0 } else { accepted as f64 / steps as f64 },
            samples,
            final_stat: self.stat,
            final_size: self.subset.count(),
            final_subset: self.subset.to_hex(),
        })
    }
}

/// Run length, burn-in and thinning (a sample every `thin` post-burn-in steps).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub steps: u64,
    pub burn_in: u64,
    pub thin: u64,
}

impl RunConfig {
    pub fn new(steps: u64) -> Self {
        Self {
            steps,
            burn_in: 0,
            thin: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub family: Family,
    pub steps: u64,
    pub accepted: u64,
    pub acceptance_rate: f64,
    pub samples: u64,
    pub final_stat: usize,
    pub final_size: usize,
    pub final_subset: String,
}

/// Runs `replicas` independent jobs on up to `threads` workers; each job
/// receives its replica index. Results come back through a channel and are
/// returned in replica order.
pub fn run_replicas<T, F>(replicas: usize, threads: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = threads.clamp(1, replicas.max(1));
    let (tx, rx) = std::sync::mpsc::channel::<(usize, T)>();
    std::thread::scope(|scope| {
        for w in 0..threads {
            let tx = tx.clone();
            let job = &job;
            scope.spawn(move || {
                for r in (w..replicas).step_by(threads) {
                    tx.send((r, job(r))).expect("collector outlives workers");
                }
            });
        }
    });
    drop(tx);
    let mut out: Vec<(usize, T)> = rx.into_iter().collect();
    out.sort_by_key(|(r, _)| *r);
    out.into_iter().map(|(_, t)| t).collect()
}

/// Starting state for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialState {
    #[default]
    Empty,
    Full,
    /// Uniform random subset drawn from the chain's generator.
    Random,
}

impl InitialState {
    pub fn build<R: Rng>(&self, m: usize, rng: &mut R) -> EdgeSubset {
        match self {
            InitialState::Empty => EdgeSubset::empty(m),
            InitialState::Full => EdgeSubset::full(m),
            InitialState::Random => EdgeSubset::from_edges(m, (0..m).filter(|_| rng.gen::<bool>())),
        }
    }
}
