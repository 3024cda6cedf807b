use serde::{Deserialize, Serialize};
use std::fmt;

use super::SteenrodError;

/// Largest prime accepted; keeps every product of two residues inside `u64`.
pub const MAX_PRIME: u32 = 1 << 16;

/// A prime `p`, checked at construction.
///
/// `p = 2` selects the `Sq^i` regime, odd primes the reduced powers `P^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub const TWO: Prime = Prime(2);
    pub const THREE: Prime = Prime(3);
    pub const FIVE: Prime = Prime(5);

    pub fn new(p: u32) -> Result<Self, SteenrodError> {
        if p < 2 || p > MAX_PRIME || !is_prime(p) {
            return Err(SteenrodError::NotPrime(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_two(self) -> bool {
        self.0 == 2
    }

    /// Reduces a signed integer into `0..p`.
    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64 % self.0 as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        let a = a % self.0;
        (a != 0).then(|| self.pow(a, self.0 as u64 - 2))
    }

    /// `(-1)^e` as a residue.
    #[inline]
    pub fn sign(self, e: u64) -> u32 {
        if e % 2 == 0 {
            1 % self.0
        } else {
            self.0 - 1
        }
    }
}

impl TryFrom<u32> for Prime {
    type Error = SteenrodError;

    fn try_from(p: u32) -> Result<Self, Self::Error> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites_and_small_values() {
        for bad in [0, 1, 4, 9, 15, 91] {
            assert!(Prime::new(bad).is_err(), "{bad}");
        }
        for good in [2, 3, 5, 7, 97] {
            assert_eq!(Prime::new(good).unwrap().get(), good);
        }
    }

    #[test]
    fn inverse_round_trips() {
        let p = Prime::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(p.mul(a, p.inv(a).unwrap()), 1);
        }
        assert_eq!(p.inv(0), None);
    }
}
