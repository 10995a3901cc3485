//! Coefficient rings: arbitrary-precision integers and word-sized prime fields.
//!
//! All prime-field arithmetic uses canonical representatives in `[0, p)`.
//! The default prime is the Mersenne prime 2^61 - 1.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Default prime field modulus: 2^61 - 1.
pub const DEFAULT_PRIME: u64 = (1u64 << 61) - 1;

/// The coefficient ring a polynomial lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoefficientRing {
    /// Exact arbitrary-precision integers.
    ExactInteger,
    /// Integers modulo a word-sized prime.
    PrimeField(u64),
}

impl CoefficientRing {
    pub fn prime_field(p: u64) -> Result<Self, RingError> {
        if !is_prime_u64(p) {
            return Err(RingError::NotPrime(p));
        }
        if p >= 1 << 62 {
            return Err(RingError::ModulusTooLarge(p));
        }
        Ok(CoefficientRing::PrimeField(p))
    }

    pub fn default_prime_field() -> Self {
        CoefficientRing::PrimeField(DEFAULT_PRIME)
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            CoefficientRing::ExactInteger => None,
            CoefficientRing::PrimeField(p) => Some(*p),
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::ExactInteger => write!(f, "ZZ"),
            CoefficientRing::PrimeField(p) => write!(f, "Z/{p}"),
        }
    }
}

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum RingError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} does not fit the supported word range (< 2^62)")]
    ModulusTooLarge(u64),
    #[error("coefficient ring mismatch: {0} vs {1}")]
    Mismatch(CoefficientRing, CoefficientRing),
}

/// A coefficient in one of the two supported rings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coef {
    Int(BigInt),
    Mod(u64),
}

impl Coef {
    pub fn is_zero(&self) -> bool {
        match self {
            Coef::Int(v) => v.is_zero(),
            Coef::Mod(v) => *v == 0,
        }
    }

    pub fn as_mod(&self) -> u64 {
        match self {
            Coef::Mod(v) => *v,
            Coef::Int(_) => panic!("expected prime-field coefficient"),
        }
    }

    pub fn as_int(&self) -> &BigInt {
        match self {
            Coef::Int(v) => v,
            Coef::Mod(_) => panic!("expected integer coefficient"),
        }
    }
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coef::Int(v) => write!(f, "{v}"),
            Coef::Mod(v) => write!(f, "{v}"),
        }
    }
}

/// Ring operations dispatched over [`CoefficientRing`].
impl CoefficientRing {
    pub fn zero(&self) -> Coef {
        match self {
            CoefficientRing::ExactInteger => Coef::Int(BigInt::zero()),
            CoefficientRing::PrimeField(_) => Coef::Mod(0),
        }
    }

    pub fn one(&self) -> Coef {
        match self {
            CoefficientRing::ExactInteger => Coef::Int(BigInt::one()),
            CoefficientRing::PrimeField(_) => Coef::Mod(1),
        }
    }

    /// Canonical embedding of a signed machine integer.
    pub fn from_i64(&self, v: i64) -> Coef {
        match self {
            CoefficientRing::ExactInteger => Coef::Int(BigInt::from(v)),
            CoefficientRing::PrimeField(p) => {
                let r = v.rem_euclid(*p as i64 as i64);
                // rem_euclid is fine for p < 2^62 and any i64
                Coef::Mod(r as u64 % p)
            }
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Coef {
        match self {
            CoefficientRing::ExactInteger => Coef::Int(v.clone()),
            CoefficientRing::PrimeField(p) => {
                let m = BigInt::from(*p);
                let mut r = v % &m;
                if r.is_negative() {
                    r += &m;
                }
                let digits = r.to_u64_digits().1;
                Coef::Mod(digits.first().copied().unwrap_or(0))
            }
        }
    }

    pub fn add(&self, a: &Coef, b: &Coef) -> Coef {
        match (self, a, b) {
            (CoefficientRing::ExactInteger, Coef::Int(x), Coef::Int(y)) => Coef::Int(x + y),
            (CoefficientRing::PrimeField(p), Coef::Mod(x), Coef::Mod(y)) => {
                Coef::Mod(add_mod(*x, *y, *p))
            }
            _ => panic!("coefficient/ring mismatch"),
        }
    }

    pub fn sub(&self, a: &Coef, b: &Coef) -> Coef {
        match (self, a, b) {
            (CoefficientRing::ExactInteger, Coef::Int(x), Coef::Int(y)) => Coef::Int(x - y),
            (CoefficientRing::PrimeField(p), Coef::Mod(x), Coef::Mod(y)) => {
                Coef::Mod(sub_mod(*x, *y, *p))
            }
            _ => panic!("coefficient/ring mismatch"),
        }
    }

    pub fn mul(&self, a: &Coef, b: &Coef) -> Coef {
        match (self, a, b) {
            (CoefficientRing::ExactInteger, Coef::Int(x), Coef::Int(y)) => Coef::Int(x * y),
            (CoefficientRing::PrimeField(p), Coef::Mod(x), Coef::Mod(y)) => {
                Coef::Mod(mul_mod(*x, *y, *p))
            }
            _ => panic!("coefficient/ring mismatch"),
        }
    }

    pub fn neg(&self, a: &Coef) -> Coef {
        match (self, a) {
            (CoefficientRing::ExactInteger, Coef::Int(x)) => Coef::Int(-x),
            (CoefficientRing::PrimeField(p), Coef::Mod(x)) => {
                Coef::Mod(if *x == 0 { 0 } else { p - x })
            }
            _ => panic!("coefficient/ring mismatch"),
        }
    }

    /// Multiplicative inverse. Only defined over a prime field or for units of ZZ.
    pub fn inv(&self, a: &Coef) -> Option<Coef> {
        match (self, a) {
            (CoefficientRing::ExactInteger, Coef::Int(x)) => {
                if x.magnitude().is_one() {
                    Some(Coef::Int(x.clone()))
                } else {
                    None
                }
            }
            (CoefficientRing::PrimeField(p), Coef::Mod(x)) => {
                if *x == 0 {
                    None
                } else {
                    Some(Coef::Mod(inv_mod(*x, *p)))
                }
            }
            _ => panic!("coefficient/ring mismatch"),
        }
    }

    /// Exact division; `None` if `b` does not divide `a` in the ring.
    pub fn div_exact(&self, a: &Coef, b: &Coef) -> Option<Coef> {
        match (self, a, b) {
            (CoefficientRing::ExactInteger, Coef::Int(x), Coef::Int(y)) => {
                if y.is_zero() {
                    return None;
                }
                let (q, r) = num_integer::Integer::div_rem(x, y);
                if r.is_zero() {
                    Some(Coef::Int(q))
                } else {
                    None
                }
            }
            (CoefficientRing::PrimeField(p), Coef::Mod(x), Coef::Mod(y)) => {
                if *y == 0 {
                    None
                } else {
                    Some(Coef::Mod(mul_mod(*x, inv_mod(*y, *p), *p)))
                }
            }
            _ => panic!("coefficient/ring mismatch"),
        }
    }
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b; // p < 2^62 so no overflow
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for u64 (the usual 12-witness set).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_prime_is_prime() {
        assert!(is_prime_u64(DEFAULT_PRIME));
        assert_eq!(DEFAULT_PRIME, 2305843009213693951);
    }

    #[test]
    fn miller_rabin_basics() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(10007));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(561)); // Carmichael
        assert!(!is_prime_u64(DEFAULT_PRIME - 1));
    }

    #[test]
    fn modular_field_ops() {
        let p = 5;
        assert_eq!(add_mod(3, 4, p), 2);
        assert_eq!(mul_mod(3, 4, p), 2);
        assert_eq!(inv_mod(3, p), 2);
        let ring = CoefficientRing::PrimeField(7);
        // x^3 at x=2 over Z/7 -> 1
        let two = ring.from_i64(2);
        let eight = ring.mul(&ring.mul(&two, &two), &two);
        assert_eq!(eight, Coef::Mod(1));
    }

    #[test]
    fn from_i64_negative() {
        let ring = CoefficientRing::PrimeField(11);
        assert_eq!(ring.from_i64(-1), Coef::Mod(10));
        assert_eq!(ring.from_i64(-22), Coef::Mod(0));
    }
}
