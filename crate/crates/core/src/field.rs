//! Exact base fields.
//!
//! Every dimension reported by this crate is a dimension over one of these
//! fields. Arithmetic goes through a field *context* (`&F`) so the prime can
//! be chosen at runtime.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("malformed field descriptor {0:?} (expected \"F_<prime>\" or \"Q\")")]
    BadDescriptor(String),
    #[error("cannot read a field element from {0}")]
    BadElement(String),
}

pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// Uniform-ish random element; for the rationals, small numerators and
    /// denominators.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn descriptor(&self) -> FieldSpec;

    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem, FieldError>;
}

/// The prime field `F_q`, elements stored as residues in `0..q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    pub fn new(modulus: u64) -> Result<Self, FieldError> {
        if !is_prime(modulus) {
            return Err(FieldError::NotPrime(modulus));
        }
        // products must fit in u64
        if modulus >= 1 << 32 {
            return Err(FieldError::BadDescriptor(format!("F_{modulus}")));
        }
        Ok(Self { modulus })
    }

    /// `F_101`, the default base field.
    pub fn f101() -> Self {
        Self { modulus: 101 }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.modulus;
            }
            base = base * base % self.modulus;
            exp >>= 1;
        }
        acc
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        Self::f101()
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.modulus as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.modulus
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.modulus - a) % self.modulus
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.modulus
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.modulus - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.modulus)
    }
    fn descriptor(&self) -> FieldSpec {
        FieldSpec::Prime(self.modulus)
    }
    fn elem_to_json(&self, a: &u64) -> Value {
        Value::from(*a)
    }
    fn elem_from_json(&self, v: &Value) -> Result<u64, FieldError> {
        v.as_i64()
            .map(|n| self.from_i64(n))
            .ok_or_else(|| FieldError::BadElement(v.to_string()))
    }
}

/// The rationals, with arbitrary-precision numerators and denominators.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let num: i64 = rng.gen_range(-9..=9);
        let den: i64 = rng.gen_range(1..=4);
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn descriptor(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn elem_to_json(&self, a: &BigRational) -> Value {
        if a.denom().is_one() {
            if let Ok(n) = i64::try_from(a.numer()) {
                return Value::from(n);
            }
        }
        Value::from(a.to_string())
    }
    fn elem_from_json(&self, v: &Value) -> Result<BigRational, FieldError> {
        let bad = || FieldError::BadElement(v.to_string());
        match v {
            Value::Number(n) => n.as_i64().map(|n| self.from_i64(n)).ok_or_else(bad),
            Value::String(s) => {
                let (num, den) = match s.split_once('/') {
                    Some((a, b)) => (a.trim(), b.trim()),
                    None => (s.trim(), "1"),
                };
                let num: BigInt = num.parse().map_err(|_| bad())?;
                let den: BigInt = den.parse().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(num, den))
            }
            _ => Err(bad()),
        }
    }
}

/// Serializable name of a base field: `"F_101"`, `"Q"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FieldSpec {
    Prime(u64),
    Rationals,
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Prime(101)
    }
}

impl FieldSpec {
    pub fn parse(s: &str) -> Result<Self, FieldError> {
        let t = s.trim();
        if t == "Q" || t == "QQ" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix("F_")
            .or_else(|| t.strip_prefix("GF_"))
            .or_else(|| t.strip_prefix('F'))
            .ok_or_else(|| FieldError::BadDescriptor(s.to_string()))?;
        let q: u64 = digits
            .parse()
            .map_err(|_| FieldError::BadDescriptor(s.to_string()))?;
        PrimeField::new(q)?;
        Ok(FieldSpec::Prime(q))
    }

    /// Reduces an integer coordinate into this field; used for the
    /// distinctness test of marked points.
    pub fn reduce(&self, n: i64) -> BigInt {
        match self {
            FieldSpec::Prime(q) => BigInt::from(n.rem_euclid(*q as i64)),
            FieldSpec::Rationals => BigInt::from(n),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(q) => write!(f, "F_{q}"),
            FieldSpec::Rationals => write!(f, "Q"),
        }
    }
}

impl TryFrom<String> for FieldSpec {
    type Error = FieldError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        FieldSpec::parse(&s)
    }
}

impl From<FieldSpec> for String {
    fn from(f: FieldSpec) -> String {
        f.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverses() {
        let f = PrimeField::f101();
        for a in 1..101u64 {
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), 1);
        }
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.from_i64(-1), 100);
    }

    #[test]
    fn descriptors() {
        assert_eq!(FieldSpec::parse("F_101").unwrap(), FieldSpec::Prime(101));
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Rationals);
        assert!(matches!(FieldSpec::parse("F_100"), Err(FieldError::NotPrime(100))));
        assert!(FieldSpec::parse("R").is_err());
        assert_eq!(FieldSpec::Prime(7).to_string(), "F_7");
    }

    #[test]
    fn rational_json() {
        let q = Rationals;
        let half = q.elem_from_json(&Value::from("1/2")).unwrap();
        assert_eq!(q.mul(&half, &q.from_i64(2)), q.one());
        assert_eq!(q.elem_to_json(&half), Value::from("1/2"));
        assert_eq!(q.elem_to_json(&q.from_i64(-3)), Value::from(-3));
        assert!(q.elem_from_json(&Value::from("1/0")).is_err());
    }
}
