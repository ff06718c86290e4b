//! Exact scalar arithmetic over the rationals or a prime field.
//!
//! Every scalar operation goes through a [`FieldSpec`] acting as the arithmetic
//! context. Scalars never carry their modulus; mixing fields is a caller bug and
//! is caught by debug assertions in the matrix layer.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use std::fmt;

use crate::error::{DgError, Result};

/// The ground field: arbitrary-precision rationals or integers mod a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime { p: u64 },
}

/// A scalar value. Arithmetic is only meaningful through a [`FieldSpec`].
/// The rational variant is boxed to keep the enum two words wide; matrices
/// store scalars by the million.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Box<BigRational>),
    Fp(u64),
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    /// Prime field of order `p`. Fails if `p` is not prime.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(DgError::NotPrime(p));
        }
        Ok(FieldSpec::Prime { p })
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(Box::new(BigRational::zero())),
            FieldSpec::Prime { .. } => Scalar::Fp(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(Box::new(BigRational::one())),
            FieldSpec::Prime { .. } => Scalar::Fp(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(Box::new(BigRational::from(BigInt::from(n)))),
            FieldSpec::Prime { p } => {
                let m = n.rem_euclid(*p as i64) as u64;
                Scalar::Fp(m % p)
            }
        }
    }

    /// Rational `num/den`; for prime fields den must be invertible.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(DgError::DivisionByZero);
        }
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rational(Box::new(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            )))),
            FieldSpec::Prime { .. } => {
                let d = self.from_i64(den);
                let inv = self.inv(&d)?;
                Ok(self.mul(&self.from_i64(num), &inv))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Fp(v) => *v == 0,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(Box::new(x.as_ref() + y.as_ref()))
            }
            (FieldSpec::Prime { p }, Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + y) % p),
            _ => panic!("scalar kind does not match field"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(x)) => {
                Scalar::Rational(Box::new(-x.as_ref()))
            }
            (FieldSpec::Prime { p }, Scalar::Fp(x)) => Scalar::Fp(if *x == 0 { 0 } else { p - x }),
            _ => panic!("scalar kind does not match field"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(Box::new(x.as_ref() * y.as_ref()))
            }
            (FieldSpec::Prime { p }, Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar kind does not match field"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(DgError::DivisionByZero);
        }
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(x)) => Ok(Scalar::Rational(Box::new(x.recip()))),
            (FieldSpec::Prime { p }, Scalar::Fp(x)) => Ok(Scalar::Fp(mod_inverse(*x, *p))),
            _ => panic!("scalar kind does not match field"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Parses "n", "-n" or "n/d"; for prime fields an integer mod p.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<i64> {
            t.parse::<i64>()
                .map_err(|_| DgError::ScalarParse(s.to_string()))
        };
        match s.split_once('/') {
            Some((n, d)) => self.from_ratio(parse_int(n)?, parse_int(d)?),
            None => Ok(self.from_i64(parse_int(s)?)),
        }
    }

    pub fn render(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp(v) => v.to_string(),
        }
    }

    /// True when the enum variant of `a` belongs to this field.
    pub fn admits(&self, a: &Scalar) -> bool {
        matches!(
            (self, a),
            (FieldSpec::Rationals, Scalar::Rational(_)) | (FieldSpec::Prime { .. }, Scalar::Fp(_))
        )
    }

    /// Field order as usize for bounded enumerations; None for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime { p } => Some(*p),
        }
    }

    /// The i-th element of a finite field (for exhaustive searches).
    pub fn element(&self, i: u64) -> Scalar {
        match self {
            FieldSpec::Rationals => panic!("cannot enumerate the rationals"),
            FieldSpec::Prime { p } => Scalar::Fp(i % p),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime { p } => write!(f, "F{}", p),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map(|s| s <= p).unwrap_or(false) {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p), p prime and a != 0 mod p
    let (mut r0, mut r1) = (a as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "input not invertible");
    s0.rem_euclid(p as i128) as u64
}
