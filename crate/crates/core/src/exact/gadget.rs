//! The rooted pure/mixed split `Z'_p`, `Z'_m` and the gadget closed forms.

use super::enumerate::{tally, PureComponents, PureMode};
use super::{check_w_degrees, int, EnumOptions, ExactError};
use crate::arith::{pow_signed, powers};
use crate::graph::{BipartiteGraph, Side};
use num::{BigInt, BigRational, One, Zero};

/// `(Z'_p, Z'_m)`: the sums of `λ^{−κ'(S)} μ^{|S|}` over subsets in which the
/// root `u` lies in a pure, respectively mixed, component.
pub fn eval_zp_zm(
    upsilon: &BipartiteGraph,
    u: usize,
    lambda: &BigRational,
    mu: &BigRational,
    opts: EnumOptions,
) -> Result<(BigRational, BigRational), ExactError> {
    if u >= upsilon.n() || upsilon.side(u) != Side::U {
        return Err(ExactError::NotOnUSide(u));
    }
    if lambda.is_zero() {
        return Err(ExactError::InvalidParameter("λ must be nonzero for λ^{-κ'}".into()));
    }
    check_w_degrees(upsilon)?;
    opts.check(upsilon.m())?;
    let n = upsilon.n();
    let table = tally(upsilon.m(), 2 * n + 1, opts.threads, |mask| {
        PureComponents::new(upsilon, PureMode::Rooted(u), mask)
    });
    let inv = lambda.recip();
    let ip = powers(&inv, n);
    let mp = powers(mu, upsilon.m());
    let (mut zp, mut zm) = (BigRational::zero(), BigRational::zero());
    for (stat, size, count) in table.entries() {
        let term = &ip[stat / 2] * &mp[size] * BigRational::from_integer(BigInt::from(count));
        if stat % 2 == 1 {
            zp += term;
        } else {
            zm += term;
        }
    }
    Ok((zp, zm))
}

/// `(X, Y) = (λ Z'_p, λ Z'_p + Z'_m)` for `Υ₁` with parameter `k`:
/// `X = (μ+1)^{k+1} + μ² + λ⁻¹ − 1` and `Y = (μ+1)((μ+1)^{k+1} + λ⁻¹ − 1)`.
pub fn upsilon1_closed_form(k: usize, lambda: &BigRational, mu: &BigRational) -> (BigRational, BigRational) {
    let one = BigRational::one();
    let inv = lambda.recip();
    let p = pow_signed(&(mu + &one), k as i64 + 1).expect("nonnegative exponent");
    let x = &p + mu * mu + &inv - &one;
    let y = (mu + &one) * (&p + &inv - &one);
    (x, y)
}

/// `(X, Y)` for `Υ₂` with parameter `k` at `μ = −2`:
/// `X = λ⁻² + 25^k λ⁻¹ − 3 + 3·25^k + λ⁻¹` and
/// `Y = −λ⁻² − 25^k λ⁻¹ − 1 + 25^k + 3λ⁻¹`.
pub fn upsilon2_closed_form(k: usize, lambda: &BigRational) -> (BigRational, BigRational) {
    let inv = lambda.recip();
    let inv2 = &inv * &inv;
    let t = pow_signed(&int(25), k as i64).expect("nonnegative exponent");
    let x = &inv2 + &t * &inv - int(3) + int(3) * &t + &inv;
    let y = -&inv2 - &t * &inv - int(1) + &t + int(3) * &inv;
    (x, y)
}
