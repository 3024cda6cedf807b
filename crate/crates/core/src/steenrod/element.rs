use std::collections::BTreeMap;

use super::{Monomial, Prime, SteenrodError};

/// A `Z_p`-linear combination of composition monomials.
///
/// Coefficients are reduced mod `p` on every update and zero terms are
/// removed, so two elements are equal exactly when their term maps are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteenrodElement {
    prime: Prime,
    terms: BTreeMap<Monomial, u32>,
}

impl SteenrodElement {
    pub fn zero(prime: Prime) -> Self {
        SteenrodElement { prime, terms: BTreeMap::new() }
    }

    pub fn identity(prime: Prime) -> Self {
        Self::from_monomial(prime, Monomial::identity())
    }

    pub fn from_monomial(prime: Prime, m: Monomial) -> Self {
        Self::from_terms(prime, [(m, 1)])
    }

    /// The single operation `P^i` (`Sq^i` at `p = 2`).
    pub fn power(prime: Prime, i: u64) -> Self {
        Self::from_monomial(prime, Monomial::new([i]))
    }

    /// The composite monomial `P^{i_1} ∘ … ∘ P^{i_s}`.
    pub fn composite(prime: Prime, exponents: impl IntoIterator<Item = u64>) -> Self {
        Self::from_monomial(prime, Monomial::new(exponents))
    }

    pub fn from_terms(prime: Prime, terms: impl IntoIterator<Item = (Monomial, u32)>) -> Self {
        let mut e = Self::zero(prime);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: u32) {
        let c = c % self.prime.get();
        if c == 0 {
            return;
        }
        let p = self.prime;
        let entry = self.terms.entry(m).or_insert(0);
        *entry = p.add(*entry, c);
        if *entry == 0 {
            // re-borrow to remove the cancelled term
            self.terms.retain(|_, v| *v != 0);
        }
    }

    fn check_prime(&self, other: &Self) -> Result<(), SteenrodError> {
        if self.prime != other.prime {
            return Err(SteenrodError::PrimeMismatch(self.prime.get(), other.prime.get()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SteenrodError> {
        self.check_prime(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, alpha: u32) -> Self {
        let p = self.prime;
        Self::from_terms(p, self.terms().map(|(m, c)| (m.clone(), p.mul(c, alpha % p.get()))))
    }

    pub fn neg(&self) -> Self {
        self.scale(self.prime.get() - 1)
    }

    /// The formal composite `self ∘ other` (concatenation, not reduced).
    pub fn compose(&self, other: &Self) -> Result<Self, SteenrodError> {
        self.check_prime(other)?;
        let p = self.prime;
        let mut out = Self::zero(p);
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                out.add_term(m1.compose(m2), p.mul(c1, c2));
            }
        }
        Ok(out)
    }

    /// Common degree of all terms; `None` for zero or inhomogeneous elements.
    pub fn degree(&self) -> Option<u64> {
        let mut degrees = self.terms.keys().map(|m| m.degree(self.prime));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    /// Whether every term is admissible.
    pub fn is_canonical(&self) -> bool {
        self.terms.keys().all(|m| m.is_admissible(self.prime))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficients_cancel_mod_p() {
        let p = Prime::THREE;
        let a = SteenrodElement::power(p, 2).scale(2);
        let b = SteenrodElement::power(p, 2);
        assert!(a.add(&b).unwrap().is_zero());
        assert_eq!(a.neg(), b);
    }

    #[test]
    fn composition_concatenates() {
        let p = Prime::TWO;
        let x = SteenrodElement::power(p, 2);
        let y = SteenrodElement::power(p, 4);
        let xy = x.compose(&y).unwrap();
        assert_eq!(xy, SteenrodElement::composite(p, [2, 4]));
        assert_eq!(xy.degree(), Some(6));
        assert!(!xy.is_canonical());
    }

    #[test]
    fn mixing_primes_is_an_error() {
        let a = SteenrodElement::power(Prime::TWO, 1);
        let b = SteenrodElement::power(Prime::THREE, 1);
        assert_eq!(a.add(&b), Err(SteenrodError::PrimeMismatch(2, 3)));
    }

    #[test]
    fn identity_is_degree_zero() {
        let e = SteenrodElement::identity(Prime::FIVE);
        assert_eq!(e.degree(), Some(0));
        assert!(e.is_canonical());
        assert!(SteenrodElement::zero(Prime::FIVE).is_homogeneous());
    }
}
