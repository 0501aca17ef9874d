//! Executable modular reductions.
//!
//! Both pipelines work the same way: pick primes `p` (and a gadget parameter
//! `k` per prime) for which a congruence collapses the oracle answer on a
//! blown-up graph onto the quantity of interest, query the exact evaluator
//! on each blown-up graph, keep only the residue mod `p`, and rebuild the
//! integer by signed CRT.
//!
//! * [`tutte_via_oracle`]: the Tutte polynomial of `H` at `(x, y)` from
//!   values of `R'_2` on stretch-sums of `H` with a gadget.
//! * [`bis_via_pbis_oracle`]: the number of independent sets of `G` from
//!   `#PBIS(·; η)` on vertex/edge cloud blow-ups of `G`.

mod bis;
mod modp;
mod tutte;

pub use bis::{
    bis_via_pbis_oracle, cloud_collapse_check, find_pbis_params, pbis_condition_holds, psi, BisOptions,
    CLOUD_MAX_STATES,
};
pub use modp::{rational_mod_p, ModP};
pub use tutte::{
    find_gadget_params, gadget_condition, tutte_via_oracle, verify_zz_congruence, GadgetKind, RootChoice,
    TutteOptions, TutteParameters,
};

use crate::arith::format_rational;
use crate::exact::ExactError;
use crate::graph::GraphError;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use thiserror::Error;

/// Default upper limit for the prime search.
pub const DEFAULT_PRIME_CAP: u64 = 2000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("{value} has no image mod {p}: its denominator is divisible by {p}")]
    NotInvertible { value: String, p: u64 },
    #[error("modulus {0} appears more than once")]
    DuplicateModulus(u64),
    #[error("product of moduli {product} does not exceed twice the bound {bound}")]
    ProductTooSmall { product: String, bound: String },
    #[error("reconstructed value {value} exceeds the bound {bound}; residues are inconsistent")]
    OutOfBound { value: String, bound: String },
    #[error("excluded parameter: {0}")]
    ExcludedPoint(String),
    #[error("y - 1 = {0} is not the square of a rational")]
    NotASquare(String),
    #[error("only {found} usable primes up to {cap}, {needed} required")]
    NotEnoughPrimes { found: usize, needed: String, cap: u64 },
    #[error("gadget condition fails for p = {p}, k = {k}: {reason}")]
    ConditionViolated { p: u64, k: usize, reason: String },
    #[error("cloud graph for p = {p}, k = {k} is too large: {what}")]
    CloudTooLarge { p: u64, k: usize, what: String },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Signed CRT: the unique `L` with `|L| ≤ bound` and `L ≡ r_i (mod p_i)`.
///
/// Requires distinct prime moduli whose product exceeds `2·bound`; the
/// result is decoded into `(−∏p/2, ∏p/2]`.
pub fn crt_reconstruct(residues: &[ModP], bound: &BigInt) -> Result<BigInt, ReductionError> {
    let mut moduli: Vec<u64> = residues.iter().map(ModP::p).collect();
    moduli.sort_unstable();
    if let Some(w) = moduli.windows(2).find(|w| w[0] == w[1]) {
        return Err(ReductionError::DuplicateModulus(w[0]));
    }
    let product: BigInt = moduli.iter().map(|&p| BigInt::from(p)).product();
    if product <= BigInt::from(2) * bound {
        return Err(ReductionError::ProductTooSmall {
            product: product.to_string(),
            bound: bound.to_string(),
        });
    }
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for r in residues {
        let p = r.p();
        let m_mod = ModP::from_bigint(&m, p);
        let diff = *r - ModP::from_bigint(&x, p);
        let t = diff * m_mod.inv().expect("moduli are distinct primes");
        x += &m * BigInt::from(t.value());
        m *= BigInt::from(p);
    }
    x = x.mod_floor(&m);
    if BigInt::from(2) * &x > m {
        x -= &m;
    }
    if x.abs() > *bound {
        return Err(ReductionError::OutOfBound {
            value: x.to_string(),
            bound: bound.to_string(),
        });
    }
    Ok(x)
}

fn ser_display<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Tutte,
    Bis,
}

/// One oracle query of a reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeQuery {
    pub p: u64,
    pub k: usize,
    /// Size of the graph handed to the oracle.
    pub vertices: usize,
    pub edges: usize,
    /// The oracle answer reduced mod `p`.
    pub oracle_residue: u64,
    /// `L mod p` derived from it.
    pub residue: u64,
}

/// Everything needed to audit a reduction run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionCert {
    pub problem: Problem,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gadget: Option<GadgetKind>,
    pub parameters: BTreeMap<String, String>,
    pub queries: Vec<PrimeQuery>,
    #[serde(serialize_with = "ser_display")]
    pub bound: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub product: BigInt,
    #[serde(rename = "L", serialize_with = "ser_display")]
    pub l: BigInt,
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
}

impl ReductionCert {
    pub fn residues(&self) -> Vec<ModP> {
        self.queries.iter().map(|q| ModP::raw(q.residue, q.p)).collect()
    }

    /// `|L| ≤ bound`, `∏p > 2·bound`, and `L ≡ residue` for every query.
    pub fn verify(&self) -> bool {
        let product: BigInt = self.queries.iter().map(|q| BigInt::from(q.p)).product();
        self.l.abs() <= self.bound
            && product == self.product
            && product > BigInt::from(2) * &self.bound
            && self
                .residues()
                .iter()
                .all(|r| ModP::from_bigint(&self.l, r.p()) == *r)
    }
}

/// Runs `job(i)` for `i in 0..n` on up to `threads` workers, in index order.
fn parallel_map<T: Send>(n: usize, threads: usize, job: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let threads = threads.clamp(1, n.max(1));
    if threads == 1 {
        return (0..n).map(job).collect();
    }
    let job = &job;
    let mut out: Vec<Option<T>> = (0..n).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| scope.spawn(move || (t..n).step_by(threads).map(|i| (i, job(i))).collect::<Vec<_>>()))
            .collect();
        for h in handles {
            for (i, v) in h.join().expect("reduction worker panicked") {
                out[i] = Some(v);
            }
        }
    });
    out.into_iter().map(|v| v.expect("every index computed")).collect()
}

/// Primes `2 ≤ p ≤ cap` in increasing order.
fn primes_up_to(cap: u64) -> impl Iterator<Item = u64> {
    (2..=cap).filter(|&p| crate::arith::is_prime(p))
}
