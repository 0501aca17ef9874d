//! Tutte polynomial from `R'_2` on stretch-sums with a gadget.

use super::modp::{divides, rational_mod_p, ModP};
use super::{crt_reconstruct, parallel_map, primes_up_to, PrimeQuery, Problem, ReductionCert, ReductionError};
use crate::arith::{format_rational, pow_signed, rational_sqrt};
use crate::exact::{eval_r2_prime, eval_z_rc, eval_zp_zm, EnumOptions};
use crate::graph::{gadget_upsilon1, gadget_upsilon2, stretch_sum, Gadget, Graph};
use num::{BigInt, BigRational, One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// Which gadget is glued onto every vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GadgetKind {
    /// `Υ₁`, used for every `μ ≠ −2`.
    Upsilon1,
    /// `Υ₂`, used for `μ = −2`.
    Upsilon2,
}

impl GadgetKind {
    pub fn for_mu(mu: &BigRational) -> Self {
        if *mu == BigRational::from_integer(BigInt::from(-2)) {
            GadgetKind::Upsilon2
        } else {
            GadgetKind::Upsilon1
        }
    }

    pub fn build(self, k: usize) -> Result<Gadget, ReductionError> {
        Ok(match self {
            GadgetKind::Upsilon1 => gadget_upsilon1(k),
            GadgetKind::Upsilon2 => gadget_upsilon2(k)?,
        })
    }

    pub fn edges(self, k: usize) -> usize {
        match self {
            GadgetKind::Upsilon1 => k + 2,
            GadgetKind::Upsilon2 => 4 * k + 2,
        }
    }

    /// Size of the gadget's `U` side.
    pub fn u_count(self) -> usize {
        match self {
            GadgetKind::Upsilon1 => 2,
            GadgetKind::Upsilon2 => 3,
        }
    }

    /// Closed forms of `(X, Y)` reduced mod `p`, given `λ⁻¹` and `μ` mod `p`.
    fn xy_mod(self, k: usize, linv: ModP, mu: ModP) -> (ModP, ModP) {
        let p = linv.p();
        let one = ModP::one(p);
        let c = |v: i64| ModP::from_i64(v, p);
        match self {
            GadgetKind::Upsilon1 => {
                let t = (mu + one).pow(k as u64 + 1);
                (t + mu * mu + linv - one, (mu + one) * (t + linv - one))
            }
            GadgetKind::Upsilon2 => {
                let t = c(25).pow(k as u64);
                let l2 = linv * linv;
                (
                    l2 + t * linv - c(3) + c(3) * t + linv,
                    -l2 - t * linv - one + t + c(3) * linv,
                )
            }
        }
    }
}

/// Sign of `μ` when `y − 1` has two rational square roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RootChoice {
    /// `μ = −1` when `y = 2` (every `k` works there), otherwise the positive root.
    #[default]
    Auto,
    Positive,
    Negative,
}

/// The gadget parameters `λ = 1/((x−1)(y−1)+1)` and `μ² = y − 1` of a Tutte point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TutteParameters {
    pub lambda: BigRational,
    pub mu: BigRational,
    pub gadget: GadgetKind,
}

impl TutteParameters {
    pub fn new(x: &BigRational, y: &BigRational, root: RootChoice) -> Result<Self, ReductionError> {
        let one = BigRational::one();
        let q = (x - &one) * (y - &one);
        let q1 = &q + &one;
        if q1.is_zero() {
            return Err(ReductionError::ExcludedPoint("(x−1)(y−1) = −1 leaves λ undefined".into()));
        }
        let lambda = q1.recip();
        if lambda == one {
            return Err(ReductionError::ExcludedPoint(
                "λ = 1 (x = 1 or y = 1), where the rank weight is trivial".into(),
            ));
        }
        if lambda == BigRational::new(BigInt::one(), BigInt::from(2)) {
            return Err(ReductionError::ExcludedPoint(
                "λ = 1/2 ((x−1)(y−1) = 1) is not covered by the reduction".into(),
            ));
        }
        let root_value =
            rational_sqrt(&(y - &one)).ok_or_else(|| ReductionError::NotASquare(format_rational(&(y - &one))))?;
        let mu = match root {
            RootChoice::Positive => root_value,
            RootChoice::Negative => -root_value,
            RootChoice::Auto if root_value.is_one() => -root_value,
            RootChoice::Auto => root_value,
        };
        let gadget = GadgetKind::for_mu(&mu);
        Ok(Self { lambda, mu, gadget })
    }
}

fn check_lambda_mu(lambda: &BigRational, mu: &BigRational) -> Result<(), ReductionError> {
    if lambda.is_zero() || lambda.is_one() {
        return Err(ReductionError::ExcludedPoint(format!("λ = {}", format_rational(lambda))));
    }
    if mu.is_zero() {
        return Err(ReductionError::ExcludedPoint("μ = 0".into()));
    }
    Ok(())
}

/// `p ∤ a, b, c, d, a + b` for `λ = a/b`, `μ = c/d`.
fn admissible(p: u64, lambda: &BigRational, mu: &BigRational) -> bool {
    let (a, b) = (lambda.numer(), lambda.denom());
    [a, b, mu.numer(), mu.denom(), &(a + b)].iter().all(|x| !divides(p, x))
}

/// Whether `(p, k)` makes the gadget's `X ≢ 0` and `Y ≡ 0 (mod p)`, using the
/// closed forms. `p` must be admissible for `λ`, `μ`.
pub fn gadget_condition(
    kind: GadgetKind,
    k: usize,
    lambda: &BigRational,
    mu: &BigRational,
    p: u64,
) -> Result<bool, ReductionError> {
    let linv = rational_mod_p(&lambda.recip(), p)?;
    let mu_p = rational_mod_p(mu, p)?;
    let (x, y) = kind.xy_mod(k, linv, mu_p);
    Ok(!x.is_zero() && y.is_zero())
}

fn smallest_k(kind: GadgetKind, lambda: &BigRational, mu: &BigRational, p: u64) -> Result<Option<usize>, ReductionError> {
    for k in 1..p.max(2) as usize {
        if gadget_condition(kind, k, lambda, mu, p)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// The first `count` admissible primes `p ≤ cap` (in increasing order), each
/// with the smallest `k ∈ [1, p−1]` satisfying the gadget condition.
pub fn find_gadget_params(
    lambda: &BigRational,
    mu: &BigRational,
    count: usize,
    cap: u64,
) -> Result<Vec<(u64, usize)>, ReductionError> {
    check_lambda_mu(lambda, mu)?;
    let kind = GadgetKind::for_mu(mu);
    let mut out = Vec::with_capacity(count);
    for p in primes_up_to(cap) {
        if out.len() == count {
            break;
        }
        if !admissible(p, lambda, mu) {
            continue;
        }
        if let Some(k) = smallest_k(kind, lambda, mu, p)? {
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

/// `(X, Y) mod p` from the exact pure/mixed split of the gadget, failing with
/// [`ReductionError::ConditionViolated`] unless `X ≢ 0` and `Y ≡ 0`.
fn checked_xy(
    gadget: &Gadget,
    lambda: &BigRational,
    mu: &BigRational,
    p: u64,
    k: usize,
    opts: EnumOptions,
) -> Result<ModP, ReductionError> {
    let violated = |reason: String| ReductionError::ConditionViolated { p, k, reason };
    let lam = rational_mod_p(lambda, p)?;
    if lam.is_zero() {
        return Err(violated("λ ≡ 0".into()));
    }
    let (zp, zm) = eval_zp_zm(&gadget.graph, gadget.root, lambda, mu, opts)?;
    let x = lambda * zp;
    let y = &x + zm;
    let xp = rational_mod_p(&x, p)?;
    let yp = rational_mod_p(&y, p)?;
    if xp.is_zero() {
        return Err(violated("X ≡ 0".into()));
    }
    if !yp.is_zero() {
        return Err(violated(format!("Y ≡ {} ≢ 0", yp.value())));
    }
    Ok(xp)
}

/// Checks `R'_2(G; λ, μ) ≡ λ^{|V_H|·|U|} X^{|V_H|} Z(H; 1/λ−1, μ²) (mod p)` on
/// the stretch-sum `G` of `h` with the gadget for `μ` at parameter `k`.
///
/// The gadget condition is checked first from the exact `(Z'_p, Z'_m)` and
/// reported as [`ReductionError::ConditionViolated`], separately from a
/// failing congruence (`Ok(false)`).
pub fn verify_zz_congruence(
    h: &Graph,
    lambda: &BigRational,
    mu: &BigRational,
    p: u64,
    k: usize,
    opts: EnumOptions,
) -> Result<bool, ReductionError> {
    check_lambda_mu(lambda, mu)?;
    let kind = GadgetKind::for_mu(mu);
    let gadget = kind.build(k)?;
    let x = checked_xy(&gadget, lambda, mu, p, k, opts)?;
    let g = stretch_sum(h, &gadget.graph, gadget.root)?;
    let lhs = rational_mod_p(&eval_r2_prime(&g, lambda, mu, opts)?.value, p)?;
    let one = BigRational::one();
    let z = eval_z_rc(h, &(lambda.recip() - &one), &(mu * mu), opts)?.value;
    let n = h.n() as u64;
    let rhs = rational_mod_p(lambda, p)?.pow(n * kind.u_count() as u64) * x.pow(n) * rational_mod_p(&z, p)?;
    Ok(lhs == rhs)
}

/// Settings for [`tutte_via_oracle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TutteOptions {
    pub prime_cap: u64,
    pub root: RootChoice,
    /// Limits and threads of every oracle query.
    pub enumeration: EnumOptions,
    /// Primes queried concurrently.
    pub threads: usize,
}

impl Default for TutteOptions {
    fn default() -> Self {
        Self {
            prime_cap: super::DEFAULT_PRIME_CAP,
            root: RootChoice::Auto,
            enumeration: EnumOptions::default(),
            threads: 1,
        }
    }
}

/// `T(h; x, y)` computed only from residues of `R'_2` on stretch-sums.
///
/// With `λ = a/b`, `μ = c/d` the integer
/// `L = Σ_S (b−a)^{κ(S)} a^{n−κ(S)} c^{2|S|} d^{2m−2|S|} = a^n d^{2m} Z(h; 1/λ−1, μ²)`
/// satisfies `|L| ≤ 2^m |b−a|^n |a|^n |c|^{2m} |d|^{2m}`. For each chosen
/// prime, `L ≡ a^n d^{2m} λ^{−n|U|} X^{−n} R'_2(G_p) (mod p)`; CRT gives `L`,
/// and the random cluster form gives `T = (x−1)^{−κ(E)} (y−1)^{−n} Z`.
///
/// Primes are taken in order of increasing `k` (then `p`) so that the
/// stretch-sums stay as small as possible, until their product exceeds
/// `2·bound`. Primes whose stretch-sum would exceed the enumeration limit are
/// skipped.
pub fn tutte_via_oracle(
    h: &Graph,
    x: &BigRational,
    y: &BigRational,
    opts: &TutteOptions,
) -> Result<ReductionCert, ReductionError> {
    let params = TutteParameters::new(x, y, opts.root)?;
    let TutteParameters { lambda, mu, gadget: kind } = &params;
    let kind = *kind;
    let (n, m) = (h.n(), h.m());
    let (a, b) = (lambda.numer().clone(), lambda.denom().clone());
    let (c, d) = (mu.numer().clone(), mu.denom().clone());
    let bound = num::pow(BigInt::from(2), m)
        * num::pow((&b - &a).abs(), n)
        * num::pow(a.abs(), n)
        * num::pow(c.abs(), 2 * m)
        * num::pow(d.abs(), 2 * m);
    let target = BigInt::from(2) * &bound;

    let mut candidates = Vec::new();
    for p in primes_up_to(opts.prime_cap) {
        if !admissible(p, lambda, mu) {
            continue;
        }
        if let Some(k) = smallest_k(kind, lambda, mu, p)? {
            if 2 * m + n * kind.edges(k) <= opts.enumeration.limit {
                candidates.push((k, p));
            }
        }
    }
    candidates.sort_unstable();
    let mut chosen = Vec::new();
    let mut product = BigInt::one();
    for &(k, p) in &candidates {
        if product > target {
            break;
        }
        chosen.push((p, k));
        product *= BigInt::from(p);
    }
    if product <= target {
        return Err(ReductionError::NotEnoughPrimes {
            found: chosen.len(),
            needed: format!("a product above {target}"),
            cap: opts.prime_cap,
        });
    }

    let scale_int = num::pow(a.clone(), n) * num::pow(d.clone(), 2 * m);
    let queries = parallel_map(chosen.len(), opts.threads, |i| -> Result<PrimeQuery, ReductionError> {
        let (p, k) = chosen[i];
        let gadget = kind.build(k)?;
        let xp = checked_xy(&gadget, lambda, mu, p, k, opts.enumeration)?;
        let g = stretch_sum(h, &gadget.graph, gadget.root)?;
        let r = rational_mod_p(&eval_r2_prime(&g, lambda, mu, opts.enumeration)?.value, p)?;
        let lam = rational_mod_p(lambda, p)?;
        let exp = -((n * kind.u_count()) as i64);
        let residue = ModP::from_bigint(&scale_int, p)
            * lam.pow_signed(exp).expect("λ is a unit mod p")
            * xp.pow_signed(-(n as i64)).expect("X is a unit mod p")
            * r;
        Ok(PrimeQuery {
            p,
            k,
            vertices: g.n(),
            edges: g.m(),
            oracle_residue: r.value(),
            residue: residue.value(),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;

    let residues: Vec<ModP> = queries.iter().map(|q| ModP::raw(q.residue, q.p)).collect();
    let l = crt_reconstruct(&residues, &bound)?;
    let one = BigRational::one();
    let z = BigRational::new(l.clone(), scale_int);
    let value = pow_signed(&(x - &one), -(h.component_count() as i64)).expect("x ≠ 1")
        * pow_signed(&(y - &one), -(n as i64)).expect("y ≠ 1")
        * z;

    let parameters = BTreeMap::from([
        ("x".to_string(), format_rational(x)),
        ("y".to_string(), format_rational(y)),
        ("lambda".to_string(), format_rational(lambda)),
        ("mu".to_string(), format_rational(mu)),
        ("q".to_string(), format_rational(&(lambda.recip() - &one))),
    ]);
    Ok(ReductionCert {
        problem: Problem::Tutte,
        gadget: Some(kind),
        parameters,
        queries,
        bound,
        product,
        l,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{eval_tutte, rat};

    #[test]
    fn parameter_search_matches_direct_check() {
        let found = find_gadget_params(&rat(1, 3), &rat(1, 1), 3, 100).unwrap();
        assert_eq!(found[0], (5, 2));
        for &(p, k) in &found {
            // 2^{k+1} + 3 − 1 ≡ 0 (mod p)
            let v = (ModP::from_i64(2, p).pow(k as u64 + 1) + ModP::from_i64(2, p)).value();
            assert_eq!(v, 0, "p = {p}, k = {k}");
        }
        // μ = −1: every k works, so k = 1 for every admissible prime
        let any = find_gadget_params(&rat(1, 3), &rat(-1, 1), 4, 100).unwrap();
        assert_eq!(any, vec![(5, 1), (7, 1), (11, 1), (13, 1)]);
        assert!(matches!(
            find_gadget_params(&rat(1, 3), &rat(1, 1), 50, 30),
            Err(ReductionError::NotEnoughPrimes { .. })
        ));
        assert!(find_gadget_params(&rat(1, 1), &rat(1, 1), 1, 100).is_err());
    }

    #[test]
    fn zz_congruence_on_a_path_and_wrong_k() {
        let h = Graph::path(3);
        let opts = EnumOptions::default();
        assert!(verify_zz_congruence(&h, &rat(1, 3), &rat(1, 1), 5, 2, opts).unwrap());
        assert!(matches!(
            verify_zz_congruence(&h, &rat(1, 3), &rat(1, 1), 5, 1, opts),
            Err(ReductionError::ConditionViolated { p: 5, k: 1, .. })
        ));
    }

    #[test]
    fn tutte_of_small_graphs() {
        let opts = TutteOptions::default();
        for (h, x, y) in [
            (Graph::path(2), rat(4, 1), rat(2, 1)),
            (Graph::path(3), rat(4, 1), rat(2, 1)),
            (Graph::path(3), rat(3, 1), rat(2, 1)),
            (Graph::empty(2), rat(3, 1), rat(5, 1)),
        ] {
            let cert = tutte_via_oracle(&h, &x, &y, &opts).unwrap();
            assert!(cert.verify());
            assert_eq!(cert.value, eval_tutte(&h, &x, &y, EnumOptions::default()).unwrap());
        }
    }

    #[test]
    fn excluded_points() {
        let h = Graph::path(2);
        let opts = TutteOptions::default();
        // y − 1 = 3
        assert!(matches!(
            tutte_via_oracle(&h, &rat(2, 1), &rat(4, 1), &opts),
            Err(ReductionError::NotASquare(_))
        ));
        // (x−1)(y−1) = 1
        assert!(matches!(
            tutte_via_oracle(&h, &rat(2, 1), &rat(2, 1), &opts),
            Err(ReductionError::ExcludedPoint(_))
        ));
        assert!(matches!(
            tutte_via_oracle(&h, &rat(1, 1), &rat(5, 1), &opts),
            Err(ReductionError::ExcludedPoint(_))
        ));
    }
}
