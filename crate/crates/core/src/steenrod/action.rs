use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use super::binom_mod_p;
use super::{Monomial, Prime, SteenrodElement};

/// A polynomial over `Z_p` in `g` variables: exponent vector ↦ coefficient.
pub type Polynomial = BTreeMap<Vec<u32>, u32>;

/// Action of the Steenrod algebra on `Z_p[t_1, …, t_g]`.
///
/// At `p = 2` the generators sit in degree 1 with `Sq^i(t^e) = C(e, i) t^{e+i}`;
/// at odd `p` in degree 2 with `P^i(y^e) = C(e, i) y^{e + i(p-1)}`. Products
/// follow the Cartan formula. Images of single operations on monomials are
/// cached.
#[derive(Debug)]
pub struct PolyAction {
    prime: Prime,
    vars: usize,
    cache: Mutex<HashMap<(u64, Vec<u32>), Vec<(Vec<u32>, u32)>>>,
}

impl PolyAction {
    pub fn new(prime: Prime, vars: usize) -> Self {
        PolyAction { prime, vars, cache: Mutex::new(HashMap::new()) }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Topological degree of a monomial.
    pub fn degree(&self, exps: &[u32]) -> u64 {
        let s: u64 = exps.iter().map(|&e| e as u64).sum();
        if self.prime.is_two() {
            s
        } else {
            2 * s
        }
    }

    /// Every exponent vector of topological degree at most `max_degree`.
    /// With `sorted_only`, only non-increasing vectors, which suffices for
    /// checks invariant under permuting the variables.
    pub fn monomials_up_to(&self, max_degree: u64, sorted_only: bool) -> Vec<Vec<u32>> {
        let unit = if self.prime.is_two() { 1 } else { 2 };
        let total = (max_degree / unit) as u32;
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.vars);
        fn rec(
            vars: usize,
            left: u32,
            cap: u32,
            sorted: bool,
            cur: &mut Vec<u32>,
            out: &mut Vec<Vec<u32>>,
        ) {
            if cur.len() == vars {
                out.push(cur.clone());
                return;
            }
            let hi = if sorted { left.min(cap) } else { left };
            for e in 0..=hi {
                cur.push(e);
                rec(vars, left - e, e, sorted, cur, out);
                cur.pop();
            }
        }
        rec(self.vars, total, total, sorted_only, &mut cur, &mut out);
        out
    }

    fn step(&self) -> u32 {
        if self.prime.is_two() {
            1
        } else {
            self.prime.get() - 1
        }
    }

    /// `P^i` (or `Sq^i`) of a monomial, by the Cartan formula.
    pub fn op_on_monomial(&self, i: u64, exps: &[u32]) -> Vec<(Vec<u32>, u32)> {
        let key = (i, exps.to_vec());
        if let Some(v) = self.cache.lock().unwrap().get(&key) {
            return v.clone();
        }
        let p = self.prime;
        let step = self.step();
        let mut out: Polynomial = BTreeMap::new();
        // distribute i over the variables, i_k ≤ e_k
        let mut cur = vec![0u32; exps.len()];
        fn rec(
            k: usize,
            left: u64,
            exps: &[u32],
            cur: &mut Vec<u32>,
            coeff: u32,
            p: Prime,
            step: u32,
            out: &mut Polynomial,
        ) {
            if k == exps.len() {
                if left == 0 {
                    let target: Vec<u32> = exps.iter().zip(cur.iter()).map(|(&e, &c)| e + c * step).collect();
                    let slot = out.entry(target).or_insert(0);
                    *slot = p.add(*slot, coeff);
                }
                return;
            }
            let hi = (exps[k] as u64).min(left);
            for ik in 0..=hi {
                let c = binom_mod_p(exps[k] as u64, ik, p);
                if c == 0 {
                    continue;
                }
                cur[k] = ik as u32;
                rec(k + 1, left - ik, exps, cur, p.mul(coeff, c), p, step, out);
            }
            cur[k] = 0;
        }
        rec(0, i, exps, &mut cur, 1, p, step, &mut out);
        let v: Vec<(Vec<u32>, u32)> = out.into_iter().filter(|(_, c)| *c != 0).collect();
        self.cache.lock().unwrap().insert(key, v.clone());
        v
    }

    pub fn apply_op(&self, i: u64, f: &Polynomial) -> Polynomial {
        let p = self.prime;
        let mut out = Polynomial::new();
        for (e, &c) in f {
            for (t, d) in self.op_on_monomial(i, e) {
                let slot = out.entry(t).or_insert(0);
                *slot = p.add(*slot, p.mul(c, d));
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    /// A composite monomial; the rightmost operation acts first.
    pub fn apply_monomial(&self, m: &Monomial, f: &Polynomial) -> Polynomial {
        m.exponents().iter().rev().fold(f.clone(), |acc, &i| self.apply_op(i, &acc))
    }

    pub fn apply(&self, e: &SteenrodElement, f: &Polynomial) -> Polynomial {
        assert_eq!(e.prime(), self.prime);
        let p = self.prime;
        let mut out = Polynomial::new();
        for (m, c) in e.terms() {
            for (t, d) in self.apply_monomial(m, f) {
                let slot = out.entry(t).or_insert(0);
                *slot = p.add(*slot, p.mul(c, d));
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    pub fn monomial_poly(exps: Vec<u32>) -> Polynomial {
        BTreeMap::from([(exps, 1)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_square_on_a_generator() {
        let act = PolyAction::new(Prime::TWO, 1);
        let t = PolyAction::monomial_poly(vec![1]);
        assert_eq!(act.apply_op(1, &t), PolyAction::monomial_poly(vec![2]));
        assert!(act.apply_op(2, &t).is_empty());
        // Sq^2(t^3) = C(3,2) t^5 = t^5
        let t3 = PolyAction::monomial_poly(vec![3]);
        assert_eq!(act.apply_op(2, &t3), PolyAction::monomial_poly(vec![5]));
    }

    #[test]
    fn cartan_on_two_variables() {
        let act = PolyAction::new(Prime::TWO, 2);
        // Sq^1(t1 t2) = t1^2 t2 + t1 t2^2
        let f = PolyAction::monomial_poly(vec![1, 1]);
        let expected = Polynomial::from([(vec![1, 2], 1), (vec![2, 1], 1)]);
        assert_eq!(act.apply_op(1, &f), expected);
    }

    #[test]
    fn top_power_at_odd_prime() {
        let p = Prime::THREE;
        let act = PolyAction::new(p, 1);
        // P^1(y) = y^3
        let y = PolyAction::monomial_poly(vec![1]);
        assert_eq!(act.apply_op(1, &y), PolyAction::monomial_poly(vec![3]));
        assert_eq!(act.monomials_up_to(6, false).len(), 4);
    }
}
