//! Coefficient fields: prime fields `Z_p` and the rationals.
//!
//! All arithmetic is exact. Rings are generic over [`Field`] so that the
//! same analysis code runs over `Z_p` (residues stored as `u32`) and over
//! `Q` (arbitrary-precision fractions).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;
use std::fmt::Debug;
use std::hash::Hash;

use crate::steenrod::Prime;

pub trait Field: Clone + Debug + PartialEq + Eq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Ord + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// `Some(p)` for `Z_p`, `None` for `Q`.
    fn prime(&self) -> Option<Prime>;

    /// Short human-readable name, e.g. `Z_3` or `Q`.
    fn name(&self) -> String;

    /// JSON form of a coefficient: an integer, or a `"num/den"` string.
    fn to_json(&self, a: &Self::Elem) -> Value;
    fn from_json(&self, v: &Value) -> Result<Self::Elem, String>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// All elements in a fixed order, when the field is finite.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }
}

/// The prime field `Z_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField(pub Prime);

impl PrimeField {
    pub fn new(p: Prime) -> Self {
        PrimeField(p)
    }

    pub fn p(&self) -> Prime {
        self.0
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    fn from_i64(&self, v: i64) -> u32 {
        self.0.reduce(v)
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.0.add(*a, *b)
    }

    fn neg(&self, a: &u32) -> u32 {
        self.0.neg(*a)
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.0.mul(*a, *b)
    }

    fn inv(&self, a: &u32) -> Option<u32> {
        self.0.inv(*a)
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a % self.0.get() == 0
    }

    fn prime(&self) -> Option<Prime> {
        Some(self.0)
    }

    fn name(&self) -> String {
        format!("Z_{}", self.0)
    }

    fn to_json(&self, a: &u32) -> Value {
        Value::from(*a)
    }

    fn from_json(&self, v: &Value) -> Result<u32, String> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(|x| self.0.reduce(x))
                .ok_or_else(|| format!("coefficient {n} is not an integer")),
            Value::String(s) => {
                let q = parse_rational(s)?;
                let num = self.0.reduce(bigint_mod(q.numer(), self.0) as i64);
                let den = self.0.reduce(bigint_mod(q.denom(), self.0) as i64);
                let inv = self
                    .0
                    .inv(den)
                    .ok_or_else(|| format!("denominator of {s} vanishes mod {}", self.0))?;
                Ok(self.0.mul(num, inv))
            }
            other => Err(format!("expected a coefficient, found {other}")),
        }
    }

    fn elements(&self) -> Option<Vec<u32>> {
        Some((0..self.0.get()).collect())
    }
}

/// The rational numbers with exact big-integer fractions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

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

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn prime(&self) -> Option<Prime> {
        None
    }

    fn name(&self) -> String {
        "Q".to_string()
    }

    fn to_json(&self, a: &BigRational) -> Value {
        if a.is_integer() {
            if let Ok(v) = i64::try_from(a.numer().clone()) {
                return Value::from(v);
            }
        }
        Value::String(format!("{}/{}", a.numer(), a.denom()))
    }

    fn from_json(&self, v: &Value) -> Result<BigRational, String> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(|x| self.from_i64(x))
                .ok_or_else(|| format!("coefficient {n} is not an integer")),
            Value::String(s) => parse_rational(s),
            other => Err(format!("expected a coefficient, found {other}")),
        }
    }
}

/// Parses `"num/den"` or a bare integer string.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("bad rational numerator in {s:?}"))?;
    let den: BigInt = den.parse().map_err(|_| format!("bad rational denominator in {s:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(num, den))
}

fn bigint_mod(v: &BigInt, p: Prime) -> u64 {
    let m = BigInt::from(p.get());
    let r = ((v % &m) + &m) % &m;
    u64::try_from(r.abs()).unwrap_or(0)
}
