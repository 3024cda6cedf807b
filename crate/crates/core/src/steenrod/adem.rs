use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::binom_mod_p;
use super::{Monomial, Prime, SteenrodElement};

/// Coefficients of an Adem relation: `(a + b - j, j, c_j)` triples.
type Relation = Arc<Vec<(u64, u64, u32)>>;
type Reduced = Arc<Vec<(Monomial, u32)>>;

/// Right-hand side of the Adem relation for the inadmissible pair `P^a P^b`.
///
/// At `p = 2`: `Sq^a Sq^b = Σ_{j ≤ a/2} C(b-1-j, a-2j) Sq^{a+b-j} Sq^j` for `a < 2b`.
/// At odd `p`: `P^a P^b = Σ_{j ≤ a/p} (-1)^{a+j} C((p-1)(b-j)-1, a-pj) P^{a+b-j} P^j`
/// for `a < pb`. Zero coefficients are dropped.
pub fn adem_relation(p: Prime, a: u64, b: u64) -> Vec<(u64, u64, u32)> {
    let pp = p.get() as u64;
    let factor = if p.is_two() { 2 } else { pp };
    assert!(a < factor * b, "Adem relation needs an inadmissible pair");
    let mut out = Vec::new();
    for j in 0..=a / factor {
        let c = if p.is_two() {
            binom_mod_p(b - 1 - j, a - 2 * j, p)
        } else {
            let top = (pp - 1) * (b - j) - 1;
            p.mul(p.sign(a + j), binom_mod_p(top, a - pp * j, p))
        };
        if c != 0 {
            out.push((a + b - j, j, c));
        }
    }
    out
}

/// Rewriting engine for one prime, with memo tables for relations and for
/// fully reduced monomials.
///
/// Strategy: rewrite the leftmost inadmissible adjacent pair, then reduce
/// every resulting monomial recursively. Replacing `(a, b)` at positions
/// `(t, t+1)` by `(a+b-j, j)` changes the moment `Σ s·i_s` by `j - b < 0`,
/// and the `j = 0` term shortens the sequence, which lowers it further.
/// Degree is fixed, so the moment is bounded below and rewriting stops.
#[derive(Debug)]
pub struct AdemAlgebra {
    prime: Prime,
    relations: Mutex<HashMap<(u64, u64), Relation>>,
    reduced: Mutex<HashMap<Monomial, Reduced>>,
}

impl AdemAlgebra {
    pub fn new(prime: Prime) -> Self {
        AdemAlgebra {
            prime,
            relations: Mutex::new(HashMap::new()),
            reduced: Mutex::new(HashMap::new()),
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    fn relation(&self, a: u64, b: u64) -> Relation {
        if let Some(r) = self.relations.lock().unwrap().get(&(a, b)) {
            return r.clone();
        }
        let r = Arc::new(adem_relation(self.prime, a, b));
        self.relations.lock().unwrap().insert((a, b), r.clone());
        r
    }

    /// Admissible normal form of a single monomial.
    pub fn reduce_monomial(&self, m: &Monomial) -> Reduced {
        let Some(t) = m.first_inadmissible(self.prime) else {
            return Arc::new(vec![(m.clone(), 1)]);
        };
        if let Some(r) = self.reduced.lock().unwrap().get(m) {
            return r.clone();
        }
        let p = self.prime;
        let e = m.exponents();
        let mut acc = SteenrodElement::zero(p);
        for &(hi, lo, c) in self.relation(e[t], e[t + 1]).iter() {
            let next = m.splice(t, &[hi, lo]);
            debug_assert!(next.moment() < m.moment(), "Adem rewrite must lower the moment");
            for (n, d) in self.reduce_monomial(&next).iter() {
                acc.add_term(n.clone(), p.mul(c, *d));
            }
        }
        let r: Reduced = Arc::new(acc.terms().map(|(m, c)| (m.clone(), c)).collect());
        self.reduced.lock().unwrap().insert(m.clone(), r.clone());
        r
    }

    pub fn reduce(&self, e: &SteenrodElement) -> SteenrodElement {
        assert_eq!(e.prime(), self.prime, "element over a different prime");
        let p = self.prime;
        let mut out = SteenrodElement::zero(p);
        for (m, c) in e.terms() {
            for (n, d) in self.reduce_monomial(m).iter() {
                out.add_term(n.clone(), p.mul(c, *d));
            }
        }
        out
    }

    /// Reduced composite `x ∘ y`.
    pub fn multiply(&self, x: &SteenrodElement, y: &SteenrodElement) -> SteenrodElement {
        self.reduce(&x.compose(y).expect("same prime"))
    }
}

/// Shared per-prime engine.
pub fn algebra(p: Prime) -> Arc<AdemAlgebra> {
    static ENGINES: OnceLock<Mutex<HashMap<Prime, Arc<AdemAlgebra>>>> = OnceLock::new();
    ENGINES
        .get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .unwrap()
        .entry(p)
        .or_insert_with(|| Arc::new(AdemAlgebra::new(p)))
        .clone()
}

/// Canonical admissible form of `e`.
///
/// Every monomial is reduced on its own, so the result is linear in `e`
/// and inhomogeneous input reduces degree by degree.
pub fn adem_reduce(e: &SteenrodElement) -> SteenrodElement {
    algebra(e.prime()).reduce(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(p: Prime, ops: &[u64]) -> SteenrodElement {
        SteenrodElement::composite(p, ops.iter().copied())
    }

    #[test]
    fn documented_reductions() {
        let two = Prime::TWO;
        assert!(adem_reduce(&el(two, &[1, 1])).is_zero());
        assert_eq!(adem_reduce(&el(two, &[2, 2])), el(two, &[3, 1]));
        assert_eq!(adem_reduce(&el(two, &[4, 2])), el(two, &[4, 2]));
        let three = Prime::THREE;
        assert_eq!(adem_reduce(&el(three, &[1, 1])), el(three, &[2]).scale(2));
    }

    #[test]
    fn sq2_sq4_expands() {
        let two = Prime::TWO;
        let expected = el(two, &[6]).add(&el(two, &[5, 1])).unwrap();
        assert_eq!(adem_reduce(&el(two, &[2, 4])), expected);
    }

    #[test]
    fn long_words_reduce_to_admissible_forms() {
        let two = Prime::TWO;
        let r = adem_reduce(&el(two, &[1, 2, 1, 2, 1, 2]));
        assert!(r.is_canonical());
        assert_eq!(adem_reduce(&r), r);
        let three = Prime::THREE;
        let r = adem_reduce(&el(three, &[1, 2, 3, 1, 1]));
        assert!(r.is_canonical());
        assert!(r.is_zero() || r.degree() == Some(4 * 8));
    }

    #[test]
    fn relation_skips_zero_coefficients() {
        // Sq1 Sq2 = Sq3 only
        assert_eq!(adem_relation(Prime::TWO, 1, 2), vec![(3, 0, 1)]);
        assert!(adem_relation(Prime::TWO, 1, 1).is_empty());
    }
}
