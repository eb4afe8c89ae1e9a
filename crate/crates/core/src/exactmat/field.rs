use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Largest modulus accepted by [`PrimeField`]; products of two residues must fit in a `u64`.
pub const MAX_PRIME: u64 = (1 << 32) - 1;

/// Default field for genericity sampling.
pub const GENERIC_PRIME: u64 = 32003;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported bound {MAX_PRIME}")]
    TooLarge(u64),
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
    #[error("{0} is not invertible in {1}")]
    NotInvertible(String, FieldSpec),
}

/// Runtime description of a coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Prime { p: u64 },
    Rationals { kind: RationalsTag },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RationalsTag {
    Rationals,
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        PrimeField::new(p).map(|f| f.spec())
    }

    pub fn rationals() -> Self {
        FieldSpec::Rationals { kind: RationalsTag::Rationals }
    }

    pub fn generic() -> Self {
        FieldSpec::Prime { p: GENERIC_PRIME }
    }

    /// Checks the invariants that serde cannot enforce.
    pub fn validate(self) -> Result<Self, FieldError> {
        match self {
            FieldSpec::Prime { p } => PrimeField::new(p).map(|f| f.spec()),
            r => Ok(r),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime { p } => write!(f, "F_{p}"),
            FieldSpec::Rationals { .. } => write!(f, "Q"),
        }
    }
}

/// A field of coefficients. Elements are plain values; all arithmetic goes
/// through the field so that elements need not carry their modulus.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError>;

    /// Canonical JSON form: a number when the value is a small integer, else a string.
    fn to_json(&self, a: &Self::Elem) -> Value;

    fn from_json(&self, v: &Value) -> Result<Self::Elem, FieldError> {
        match v {
            Value::Number(n) => match n.as_i64() {
                Some(i) => Ok(self.from_i64(i)),
                None => self.parse(&n.to_string()),
            },
            Value::String(s) => self.parse(s),
            other => Err(FieldError::Parse(other.to_string())),
        }
    }

    fn mul_add(&self, acc: &Self::Elem, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(acc, &self.mul(a, b))
    }
}

/// The prime field F_p for an odd prime p < 2^32.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::CharacteristicTwo);
        }
        if p > MAX_PRIME {
            return Err(FieldError::TooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn generic() -> Self {
        PrimeField { p: GENERIC_PRIME }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime { p: self.p }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64, FieldError> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let n = self.parse(num)?;
            let d = self.parse(den)?;
            let inv = self
                .inv(&d)
                .ok_or_else(|| FieldError::NotInvertible(den.to_string(), self.spec()))?;
            return Ok(self.mul(&n, &inv));
        }
        let v = BigInt::from_str(s).map_err(|_| FieldError::Parse(s.to_string()))?;
        let r = v.mod_floor_u64(self.p);
        Ok(r)
    }
    fn to_json(&self, a: &u64) -> Value {
        Value::from(*a)
    }
    fn mul_add(&self, acc: &u64, a: &u64, b: &u64) -> u64 {
        (acc + a * b) % self.p
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let m = BigInt::from(p);
        let r = ((self % &m) + &m) % &m;
        r.to_u64().expect("residue fits in u64")
    }
}

/// The rational numbers, with arbitrary precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

/// Integer entries drawn by [`Rationals::random`] lie in `-RATIONAL_SAMPLE_BOUND..=RATIONAL_SAMPLE_BOUND`.
pub const RATIONAL_SAMPLE_BOUND: i64 = 50;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::rationals()
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
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
        self.from_i64(rng.gen_range(-RATIONAL_SAMPLE_BOUND..=RATIONAL_SAMPLE_BOUND))
    }
    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<BigRational, FieldError> {
        let s = s.trim();
        let err = || FieldError::Parse(s.to_string());
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(BigRational::new(n, d))
            }
            None => BigInt::from_str(s).map(BigRational::from_integer).map_err(|_| err()),
        }
    }
    fn to_json(&self, a: &BigRational) -> Value {
        if a.is_integer() {
            if let Some(i) = a.numer().to_i64() {
                if i.abs() < (1 << 53) {
                    return Value::from(i);
                }
            }
        }
        Value::String(a.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_characteristic_two_and_composites() {
        assert_eq!(PrimeField::new(2), Err(FieldError::CharacteristicTwo));
        assert_eq!(PrimeField::new(9), Err(FieldError::NotPrime(9)));
        assert_eq!(PrimeField::new(1), Err(FieldError::NotPrime(1)));
        assert!(PrimeField::new(3).is_ok());
        assert!(PrimeField::new(32003).is_ok());
        assert!(matches!(PrimeField::new(1 << 33), Err(FieldError::TooLarge(_))));
    }

    #[test]
    fn prime_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.parse("1/2").unwrap(), 4);
        assert_eq!(f.parse("-3").unwrap(), 4);
        assert!(f.parse("1/7").is_err());
    }

    #[test]
    fn rational_json_is_canonical() {
        let q = Rationals;
        let half = q.parse("2/4").unwrap();
        assert_eq!(q.to_json(&half), Value::String("1/2".into()));
        assert_eq!(q.to_json(&q.from_i64(-3)), Value::from(-3));
        assert_eq!(q.from_json(&Value::from(5)).unwrap(), q.from_i64(5));
        assert_eq!(q.from_json(&Value::String("-6/4".into())).unwrap(), q.parse("-3/2").unwrap());
    }

    #[test]
    fn field_spec_json() {
        let p: FieldSpec = serde_json::from_str(r#"{"p":32003}"#).unwrap();
        assert_eq!(p, FieldSpec::generic());
        let q: FieldSpec = serde_json::from_str(r#"{"kind":"rationals"}"#).unwrap();
        assert_eq!(q, FieldSpec::rationals());
        let bad: FieldSpec = serde_json::from_str(r#"{"p":2}"#).unwrap();
        assert_eq!(bad.validate(), Err(FieldError::CharacteristicTwo));
    }
}
