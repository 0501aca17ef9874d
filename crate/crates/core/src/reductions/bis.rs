//! Independent sets from `#PBIS(·; η)` on cloud blow-ups.

use super::modp::{divides, rational_mod_p, ModP};
use super::{crt_reconstruct, parallel_map, primes_up_to, PrimeQuery, Problem, ReductionCert, ReductionError};
use crate::arith::format_rational;
use crate::exact::{count_pbis_twins, PBIS_ORACLE_MAX_VERTICES};
use crate::graph::{cloud_blowup, Graph};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;

/// Cap on the number of outer states of the twin-class evaluator per query.
pub const CLOUD_MAX_STATES: f64 = 5e6;

fn check_eta(eta: &BigRational) -> Result<(), ReductionError> {
    if eta.is_zero() || eta.abs().is_one() {
        return Err(ReductionError::ExcludedPoint(format!("η = {}", format_rational(eta))));
    }
    Ok(())
}

/// `η ∈ Z_p^*`, `η ≢ 1` and `((1+η)/(1−η))^{2k} ≡ −1 (mod p)`.
pub fn pbis_condition_holds(eta: &BigRational, p: u64, k: usize) -> Result<bool, ReductionError> {
    let e = rational_mod_p(eta, p)?;
    let one = ModP::one(p);
    if e.is_zero() || e == one {
        return Ok(false);
    }
    let r = (one + e) * (one - e).inv().expect("η ≢ 1");
    Ok((r.pow(2 * k as u64) + one).is_zero())
}

fn admissible(eta: &BigRational, p: u64) -> bool {
    p > 2 && !divides(p, eta.numer()) && !divides(p, eta.denom())
}

fn smallest_k(eta: &BigRational, p: u64) -> Result<Option<usize>, ReductionError> {
    for k in 1..p as usize {
        if pbis_condition_holds(eta, p, k)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// The first `count` odd primes `p ≤ cap` with `η ∈ Z_p^*` for which the
/// cloud condition has a solution, each with its smallest `k ∈ [1, p−1]`.
pub fn find_pbis_params(eta: &BigRational, count: usize, cap: u64) -> Result<Vec<(u64, usize)>, ReductionError> {
    check_eta(eta)?;
    let mut out = Vec::with_capacity(count);
    for p in primes_up_to(cap) {
        if out.len() == count {
            break;
        }
        if !admissible(eta, p) {
            continue;
        }
        if let Some(k) = smallest_k(eta, p)? {
            out.push((p, k));
        }
    }
    if out.len() < count {
        return Err(ReductionError::NotEnoughPrimes {
            found: out.len(),
            needed: count.to_string(),
            cap,
        });
    }
    Ok(out)
}

/// `Ψ(x, y) = [(1+ηχ(x,0))^{kp}(1+ηχ(y,0))^{kp} + (1+ηχ(x,1))^{kp}(1+ηχ(y,1))^{kp}]^{p−1} mod p`,
/// with `χ(a, b) = 1` if `a = b = 1` and `−1` otherwise: the weight of an
/// edge cloud between two uniformly labelled vertex clouds.
pub fn psi(x: bool, y: bool, eta: &BigRational, p: u64, k: usize) -> Result<ModP, ReductionError> {
    let e = rational_mod_p(eta, p)?;
    let one = ModP::one(p);
    let factor = |a: bool, z: bool| if a && z { one + e } else { one - e };
    let kp = k as u64 * p;
    let side = |z: bool| factor(x, z).pow(kp) * factor(y, z).pow(kp);
    Ok((side(false) + side(true)).pow(p - 1))
}

/// Brute-force `#PBIS(G'; η) mod p` on the cloud graph `G'`, together with
/// the same sum restricted to labellings that are constant on every vertex
/// cloud. The two agree whenever the non-uniform labellings cancel mod `p`.
pub fn cloud_collapse_check(
    g: &Graph,
    eta: &BigRational,
    p: u64,
    k: usize,
) -> Result<(ModP, ModP), ReductionError> {
    let cloud = cloud_blowup(g, p, k)?;
    let n = cloud.n();
    if n > PBIS_ORACLE_MAX_VERTICES {
        return Err(ReductionError::CloudTooLarge {
            p,
            k,
            what: format!("{n} vertices, brute force is limited to {PBIS_ORACLE_MAX_VERTICES}"),
        });
    }
    let e = rational_mod_p(eta, p)?;
    let one = ModP::one(p);
    let m = cloud.m();
    let (up, down) = (one + e, one - e);
    let weight: Vec<ModP> = (0..=m).map(|w| up.pow(w as u64) * down.pow((m - w) as u64)).collect();
    let vc = k * p as usize;
    let cloud_masks: Vec<u64> = (0..g.n()).map(|v| ((1u64 << vc) - 1) << (v * vc)).collect();
    let edges = cloud.graph().edges();
    let (mut full, mut uniform) = (ModP::zero(p), ModP::zero(p));
    for sigma in 0u64..1 << n {
        let w = edges.iter().filter(|&&(a, b)| sigma >> a & 1 == 1 && sigma >> b & 1 == 1).count();
        full = full + weight[w];
        if cloud_masks.iter().all(|&c| sigma & c == 0 || sigma & c == c) {
            uniform = uniform + weight[w];
        }
    }
    Ok((full, uniform))
}

/// Settings for [`bis_via_pbis_oracle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisOptions {
    pub prime_cap: u64,
    /// Primes queried concurrently.
    pub threads: usize,
    /// Also use primes whose smallest solution has `k ≥ 2`.
    ///
    /// A vertex cloud of `kp` vertices only collapses mod `p` when `k = 1`:
    /// for `k ≥ 2` the labellings with exactly `p` ones in a cloud number
    /// `C(kp, p) ≡ k (mod p)` and do not cancel, so such queries return
    /// wrong residues. Off by default; exists to demonstrate the failure.
    pub allow_k_above_one: bool,
}

impl Default for BisOptions {
    fn default() -> Self {
        Self {
            prime_cap: super::DEFAULT_PRIME_CAP,
            threads: 1,
            allow_k_above_one: false,
        }
    }
}

/// Outer-loop size of the twin-class evaluator on the cloud graph.
fn cloud_states(g: &Graph, p: u64, k: usize) -> f64 {
    let vertex_side = ((k as u64 * p + 1) as f64).powi(g.n() as i32);
    let edge_side = (p as f64).powi(g.m() as i32);
    vertex_side.min(edge_side)
}

/// `#BIS(g)` rebuilt by CRT from `#PBIS(G'_p; η) mod p` on cloud blow-ups.
///
/// `#BIS(g) ≤ 2^n`, so primes are added in increasing order until their
/// product exceeds `2^{n+1}`. The oracle is the exact twin-class evaluator.
pub fn bis_via_pbis_oracle(g: &Graph, eta: &BigRational, opts: &BisOptions) -> Result<ReductionCert, ReductionError> {
    check_eta(eta)?;
    let bound = num::pow(BigInt::from(2), g.n());
    let target = BigInt::from(2) * &bound;
    let mut chosen = Vec::new();
    let mut product = BigInt::one();
    let mut oversized = None;
    for p in primes_up_to(opts.prime_cap) {
        if product > target {
            break;
        }
        if !admissible(eta, p) {
            continue;
        }
        let k = if opts.allow_k_above_one {
            smallest_k(eta, p)?
        } else {
            pbis_condition_holds(eta, p, 1)?.then_some(1)
        };
        let Some(k) = k else { continue };
        if cloud_states(g, p, k) > CLOUD_MAX_STATES {
            oversized.get_or_insert((p, k));
            continue;
        }
        chosen.push((p, k));
        product *= BigInt::from(p);
    }
    if product <= target {
        if let Some((p, k)) = oversized {
            return Err(ReductionError::CloudTooLarge {
                p,
                k,
                what: "twin-class enumeration over the state cap".into(),
            });
        }
        return Err(ReductionError::NotEnoughPrimes {
            found: chosen.len(),
            needed: format!("a product above {target}"),
            cap: opts.prime_cap,
        });
    }

    let queries = parallel_map(chosen.len(), opts.threads, |i| -> Result<PrimeQuery, ReductionError> {
        let (p, k) = chosen[i];
        let cloud = cloud_blowup(g, p, k)?;
        let r = rational_mod_p(&count_pbis_twins(&cloud, eta), p)?;
        Ok(PrimeQuery {
            p,
            k,
            vertices: cloud.n(),
            edges: cloud.m(),
            oracle_residue: r.value(),
            residue: r.value(),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;

    let residues: Vec<ModP> = queries.iter().map(|q| ModP::raw(q.residue, q.p)).collect();
    let l = crt_reconstruct(&residues, &bound)?;
    Ok(ReductionCert {
        problem: Problem::Bis,
        gadget: None,
        parameters: BTreeMap::from([("eta".to_string(), format_rational(eta))]),
        queries,
        bound,
        product,
        value: BigRational::from_integer(l.clone()),
        l,
    })
}
