//! Exact brute-force evaluation of the rank polynomials and their relatives.
//!
//! Every evaluator walks all `2^m` edge subsets in Gray-code order, tallies a
//! `(statistic, |S|)` table of exact counts, and forms the exact rational sum
//! from it. `0^0 = 1` throughout.

mod counts;
pub(crate) mod enumerate;
mod gadget;

pub use counts::{
    count_bis, count_bis_oracle, count_matchings, count_matchings_oracle, count_pbis, count_pbis_oracle,
    count_pbis_twins, count_perfect_matchings, count_perfect_matchings_oracle, BIS_ORACLE_MAX_VERTICES,
    PBIS_ORACLE_MAX_VERTICES,
};
pub use gadget::{eval_zp_zm, upsilon1_closed_form, upsilon2_closed_form};

use crate::arith::powers;
use crate::graph::{BipartiteGraph, Graph};
use enumerate::{tally, BipartiteRank, ComponentCount, FullRank, PureComponents, PureMode};
use num::{BigInt, BigRational, One, Zero};
use thiserror::Error;

/// Default cap on `m` for exhaustive enumeration.
pub const DEFAULT_EDGE_LIMIT: usize = 26;
/// Coefficient tables are kept in [`EvalResult`] only up to this many edges.
pub const TABLE_EDGE_LIMIT: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("graph has {m} edges, over the enumeration limit of {limit}")]
    TooManyEdges { m: usize, limit: usize },
    #[error("{what} is limited to {limit} vertices, graph has {n}")]
    TooManyVertices { what: &'static str, n: usize, limit: usize },
    #[error("W vertex {vertex} has degree {degree}; pure-component counting needs W-degrees at most 2")]
    WDegreeTooLarge { vertex: usize, degree: usize },
    #[error("vertex {0} is not on the U side")]
    NotOnUSide(usize),
    #[error("expected an integer but the exact value is {0}")]
    NonInteger(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Enumeration settings shared by all evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    /// Largest `m` accepted.
    pub limit: usize,
    /// Worker threads; results are identical for every value.
    pub threads: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        Self {
            limit: DEFAULT_EDGE_LIMIT,
            threads: 1,
        }
    }
}

impl EnumOptions {
    pub fn with_threads(threads: usize) -> Self {
        Self {
            threads: threads.max(1),
            ..Self::default()
        }
    }

    fn check(&self, m: usize) -> Result<(), ExactError> {
        if m > self.limit || m >= 64 {
            return Err(ExactError::TooManyEdges {
                m,
                limit: self.limit.min(63),
            });
        }
        Ok(())
    }
}

/// Number of subsets with each `(statistic, size)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    max_stat: usize,
    m: usize,
    counts: Vec<u64>,
}

impl CoefficientTable {
    pub(crate) fn from_counts(max_stat: usize, m: usize, counts: Vec<u64>) -> Self {
        debug_assert_eq!(counts.len(), (max_stat + 1) * (m + 1));
        Self { max_stat, m, counts }
    }

    pub fn max_stat(&self) -> usize {
        self.max_stat
    }

    pub fn edges(&self) -> usize {
        self.m
    }

    /// Number of subsets `S` with statistic `stat` and `|S| = size`.
    pub fn get(&self, stat: usize, size: usize) -> u64 {
        if stat > self.max_stat || size > self.m {
            return 0;
        }
        self.counts[stat * (self.m + 1) + size]
    }

    /// Nonzero entries as `(stat, size, count)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        let w = self.m + 1;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (i / w, i % w, c))
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `Σ count · x^stat · y^size`.
    pub fn evaluate(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let xp = powers(x, self.max_stat);
        let yp = powers(y, self.m);
        self.evaluate_with(|s| xp[s].clone(), |k| yp[k].clone())
    }

    /// `Σ count · f(stat) · g(size)`.
    pub fn evaluate_with(
        &self,
        f: impl Fn(usize) -> BigRational,
        g: impl Fn(usize) -> BigRational,
    ) -> BigRational {
        let mut acc = BigRational::zero();
        for (s, k, c) in self.entries() {
            acc += f(s) * g(k) * BigRational::from_integer(BigInt::from(c));
        }
        acc
    }
}

/// An exact value together with the table it was computed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalResult {
    pub value: BigRational,
    /// `(rank or κ, |S|)` counts; present only when `m ≤ TABLE_EDGE_LIMIT`.
    pub terms: Option<CoefficientTable>,
}

impl EvalResult {
    fn from_table(table: CoefficientTable, value: BigRational) -> Self {
        let keep = table.edges() <= TABLE_EDGE_LIMIT;
        Self {
            value,
            terms: keep.then_some(table),
        }
    }
}

/// `(rk₂(B_S), |S|)` table over the bipartite adjacency matrix.
pub fn bipartite_rank_table(g: &BipartiteGraph, opts: EnumOptions) -> Result<CoefficientTable, ExactError> {
    opts.check(g.m())?;
    let max = g.u_count().min(g.w_count());
    Ok(tally(g.m(), max, opts.threads, |mask| BipartiteRank::new(g, mask)))
}

/// `(rk₂(A_S), |S|)` table over the full adjacency matrix.
pub fn rank_table(g: &Graph, opts: EnumOptions) -> Result<CoefficientTable, ExactError> {
    opts.check(g.m())?;
    Ok(tally(g.m(), g.n(), opts.threads, |mask| FullRank::new(g, mask)))
}

/// `(κ(S), |S|)` table.
pub fn component_table(g: &Graph, opts: EnumOptions) -> Result<CoefficientTable, ExactError> {
    opts.check(g.m())?;
    Ok(tally(g.m(), g.n(), opts.threads, |mask| ComponentCount::new(g, mask)))
}

/// `(|U| − κ'(S), |S|)` table; requires `W`-degrees ≤ 2.
pub fn pure_rank_table(g: &BipartiteGraph, opts: EnumOptions) -> Result<CoefficientTable, ExactError> {
    check_w_degrees(g)?;
    opts.check(g.m())?;
    Ok(tally(g.m(), g.u_count(), opts.threads, |mask| {
        PureComponents::new(g, PureMode::Rank, mask)
    }))
}

fn check_w_degrees(g: &BipartiteGraph) -> Result<(), ExactError> {
    match g.w_degree_violation(2) {
        Some((vertex, degree)) => Err(ExactError::WDegreeTooLarge { vertex, degree }),
        None => Ok(()),
    }
}

/// `R'_2(G; λ, μ) = Σ_S λ^{rk₂(B_S)} μ^{|S|}` over the bipartite adjacency matrix.
pub fn eval_r2_prime(
    g: &BipartiteGraph,
    lambda: &BigRational,
    mu: &BigRational,
    opts: EnumOptions,
) -> Result<EvalResult, ExactError> {
    let table = bipartite_rank_table(g, opts)?;
    let value = table.evaluate(lambda, mu);
    Ok(EvalResult::from_table(table, value))
}

/// `R_2(G; λ, μ) = Σ_S λ^{rk₂(A_S)} μ^{|S|}` over the full adjacency matrix.
pub fn eval_r2(g: &Graph, lambda: &BigRational, mu: &BigRational, opts: EnumOptions) -> Result<EvalResult, ExactError> {
    let table = rank_table(g, opts)?;
    let value = table.evaluate(lambda, mu);
    Ok(EvalResult::from_table(table, value))
}

/// `R'_2` through pure-component counting, `rk₂(S) = |U| − κ'(S)`.
pub fn eval_r2_prime_pure(
    g: &BipartiteGraph,
    lambda: &BigRational,
    mu: &BigRational,
    opts: EnumOptions,
) -> Result<EvalResult, ExactError> {
    let table = pure_rank_table(g, opts)?;
    let value = table.evaluate(lambda, mu);
    Ok(EvalResult::from_table(table, value))
}

/// Random cluster partition function `Z(G; q, μ) = Σ_S q^{κ(S)} μ^{|S|}`.
pub fn eval_z_rc(g: &Graph, q: &BigRational, mu: &BigRational, opts: EnumOptions) -> Result<EvalResult, ExactError> {
    let table = component_table(g, opts)?;
    let value = table.evaluate(q, mu);
    Ok(EvalResult::from_table(table, value))
}

/// Tutte polynomial `T(G; x, y) = Σ_S (x−1)^{κ(S)−κ(E)} (y−1)^{|S|−|V|+κ(S)}`.
pub fn eval_tutte(g: &Graph, x: &BigRational, y: &BigRational, opts: EnumOptions) -> Result<BigRational, ExactError> {
    let table = component_table(g, opts)?;
    let kappa_e = g.component_count();
    let n = g.n();
    let one = BigRational::one();
    let xp = powers(&(x - &one), n);
    let yp = powers(&(y - &one), g.m());
    let mut acc = BigRational::zero();
    for (k, s, c) in table.entries() {
        // both exponents are nonnegative: κ(S) ≥ κ(E), and |S| + κ(S) ≥ |V|
        acc += &xp[k - kappa_e] * &yp[s + k - n] * BigRational::from_integer(BigInt::from(c));
    }
    Ok(acc)
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
