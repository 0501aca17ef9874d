use super::ReductionError;
use crate::arith::{format_rational, is_prime};
use num::{BigInt, BigRational, Integer, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A residue modulo a prime `p`, kept in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ModP {
    p: u64,
    value: u64,
}

impl ModP {
    pub fn new(value: u64, p: u64) -> Result<Self, ReductionError> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(ReductionError::NotPrime(p));
        }
        Ok(Self::raw(value % p, p))
    }

    #[inline]
    pub(crate) fn raw(value: u64, p: u64) -> Self {
        Self { p, value }
    }

    pub(crate) fn from_i64(x: i64, p: u64) -> Self {
        Self::raw(x.rem_euclid(p as i64) as u64, p)
    }

    pub(crate) fn from_bigint(x: &BigInt, p: u64) -> Self {
        let r = x.mod_floor(&BigInt::from(p));
        Self::raw(r.to_u64().expect("residue below p"), p)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn zero(p: u64) -> Self {
        Self::raw(0, p)
    }

    pub fn one(p: u64) -> Self {
        Self::raw(1 % p, p)
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat, `None` for zero.
    pub fn inv(self) -> Option<Self> {
        (!self.is_zero()).then(|| self.pow(self.p - 2))
    }

    /// `self^e` for a signed exponent; `None` for a negative power of zero.
    pub fn pow_signed(self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inv().map(|i| i.pow(e.unsigned_abs()))
        }
    }

    /// Signed representative in `(−p/2, p/2]`.
    pub fn signed(&self) -> i64 {
        if self.value > self.p / 2 {
            self.value as i64 - self.p as i64
        } else {
            self.value as i64
        }
    }
}

impl fmt::Display for ModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl Add for ModP {
    type Output = ModP;
    fn add(self, o: ModP) -> ModP {
        assert_eq!(self.p, o.p, "modulus mismatch");
        ModP::raw((self.value + o.value) % self.p, self.p)
    }
}

impl Sub for ModP {
    type Output = ModP;
    fn sub(self, o: ModP) -> ModP {
        assert_eq!(self.p, o.p, "modulus mismatch");
        ModP::raw((self.value + self.p - o.value) % self.p, self.p)
    }
}

impl Mul for ModP {
    type Output = ModP;
    fn mul(self, o: ModP) -> ModP {
        assert_eq!(self.p, o.p, "modulus mismatch");
        ModP::raw(((self.value as u128 * o.value as u128) % self.p as u128) as u64, self.p)
    }
}

impl Neg for ModP {
    type Output = ModP;
    fn neg(self) -> ModP {
        ModP::raw((self.p - self.value) % self.p, self.p)
    }
}

/// `numerator · denominator⁻¹ mod p`.
pub fn rational_mod_p(r: &BigRational, p: u64) -> Result<ModP, ReductionError> {
    ModP::new(0, p)?;
    let den = ModP::from_bigint(r.denom(), p);
    let inv = den.inv().ok_or_else(|| ReductionError::NotInvertible {
        value: format_rational(r),
        p,
    })?;
    Ok(ModP::from_bigint(r.numer(), p) * inv)
}

/// Whether `p` divides the integer `x`.
pub(crate) fn divides(p: u64, x: &BigInt) -> bool {
    (x % BigInt::from(p)).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn embedding_of_fractions() {
        assert_eq!(rational_mod_p(&rat(1, 2), 5).unwrap().value(), 3);
        assert!(matches!(
            rational_mod_p(&rat(1, 3), 3),
            Err(ReductionError::NotInvertible { p: 3, .. })
        ));
        assert!(matches!(rational_mod_p(&rat(1, 2), 9), Err(ReductionError::NotPrime(9))));
        assert_eq!(rational_mod_p(&rat(-4, 1), 7).unwrap().value(), 3);
    }

    #[test]
    fn field_operations() {
        let a = ModP::new(4, 7).unwrap();
        assert_eq!((a * a.inv().unwrap()).value(), 1);
        assert_eq!((-a).value(), 3);
        assert_eq!((a - ModP::new(6, 7).unwrap()).value(), 5);
        assert_eq!(a.pow(6).value(), 1);
        assert_eq!(a.pow_signed(-1), a.inv());
        assert_eq!(ModP::zero(7).inv(), None);
        assert_eq!(ModP::new(6, 7).unwrap().signed(), -1);
    }
}
