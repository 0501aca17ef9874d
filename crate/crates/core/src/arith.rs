//! Small exact-arithmetic helpers shared across modules.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

/// Deterministic primality test by trial division. Only used for the small
/// primes that drive the reductions.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// `base^exp` for a possibly negative exponent. Returns `None` for `0^negative`.
pub fn pow_signed(base: &BigRational, exp: i64) -> Option<BigRational> {
    if exp >= 0 {
        Some(num::pow(base.clone(), exp as usize))
    } else if base.is_zero() {
        None
    } else {
        Some(num::pow(base.recip(), exp.unsigned_abs() as usize))
    }
}

/// Powers `base^0, ..., base^max` (with `0^0 = 1`).
pub fn powers(base: &BigRational, max: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(max + 1);
    let mut acc = BigRational::one();
    for _ in 0..=max {
        out.push(acc.clone());
        acc *= base;
    }
    out
}

/// Parses `"a/b"`, `"a"` or a plain decimal like `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty fraction".into());
    }
    if let Some((num, den)) = t.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| format!("malformed fraction '{t}'"))?;
        let d = BigInt::from_str(den.trim()).map_err(|_| format!("malformed fraction '{t}'"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in '{t}'"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_part = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(int).map_err(|_| format!("malformed number '{t}'"))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("malformed number '{t}'"));
        }
        let scale = num::pow(BigInt::from(10), frac.len());
        let f = BigInt::from_str(frac).map_err(|_| format!("malformed number '{t}'"))?;
        let mag = int_part.abs() * &scale + f;
        let n = if neg { -mag } else { mag };
        return Ok(BigRational::new(n, scale));
    }
    BigInt::from_str(t)
        .map(BigRational::from_integer)
        .map_err(|_| format!("malformed fraction '{t}'"))
}

/// Canonical `num/den` form; integers print without a denominator.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Floating approximation that stays finite for huge numerators and denominators.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db;
    // scale so both parts fit comfortably in f64 before dividing
    let (n, d) = if shift >= 0 {
        (r.numer().clone(), r.denom() << (shift as usize))
    } else {
        (r.numer() << ((-shift) as usize), r.denom().clone())
    };
    let keep = 60usize;
    let cut = (d.bits() as usize).saturating_sub(keep);
    let nf = (n >> cut).to_f64().unwrap_or(f64::NAN);
    let df = (d >> cut).to_f64().unwrap_or(f64::NAN);
    let mant = nf / df;
    mant * 2f64.powi(shift.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

/// Exact square root of a rational, if it has one. Returns the non-negative root.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// `2^e` for a possibly negative exponent.
pub fn pow2(e: i64) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    pow_signed(&two, e).expect("2 is nonzero")
}

/// Integer value of a rational that must be an integer.
pub fn as_integer(r: &BigRational) -> Option<BigInt> {
    r.is_integer().then(|| r.numer().clone())
}

/// Sign-aware absolute value of a `BigInt` as an unsigned magnitude.
pub fn magnitude(x: &BigInt) -> BigInt {
    match x.sign() {
        Sign::Minus => -x,
        _ => x.clone(),
    }
}

/// Kahan–Babuška (Neumaier) compensated sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(!is_prime(221));
    }

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/2", "-2/7", "7", "0", "-1"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), q(-3, 2));
        assert_eq!(parse_rational("4/6").unwrap(), q(2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn signed_powers() {
        assert_eq!(pow_signed(&q(2, 3), -2), Some(q(9, 4)));
        assert_eq!(pow_signed(&q(0, 1), 0), Some(q(1, 1)));
        assert_eq!(pow_signed(&q(0, 1), -1), None);
    }

    #[test]
    fn sqrt_of_rationals() {
        assert_eq!(rational_sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(rational_sqrt(&q(3, 1)), None);
        assert_eq!(rational_sqrt(&q(-4, 1)), None);
    }

    #[test]
    fn f64_of_huge_rationals() {
        let big = BigRational::new(num::pow(BigInt::from(10), 400), num::pow(BigInt::from(10), 399));
        assert!((rational_to_f64(&big) - 10.0).abs() < 1e-9);
        assert!((rational_to_f64(&q(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
    }
}
