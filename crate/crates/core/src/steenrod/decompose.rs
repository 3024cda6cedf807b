use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use super::adem::algebra;
use super::{adem_relation, binom_mod_p, Monomial, Prime, SteenrodElement, SteenrodError};

/// Relation for `Sq^l` in terms of products `Sq^i Sq^{l-i}` with `0 < i < l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SqDecomposition {
    /// `l` is a power of two; no such relation exists.
    PowerOfTwo,
    /// Pairs `(i, a_i)` with `Sq^l = Σ a_i Sq^i Sq^{l-i}`, sorted by `i`.
    Relation(Vec<(u64, u32)>),
}

impl SqDecomposition {
    /// The right-hand side as an (unreduced) element.
    pub fn element(&self, l: u64) -> Option<SteenrodElement> {
        let SqDecomposition::Relation(pairs) = self else {
            return None;
        };
        Some(SteenrodElement::from_terms(
            Prime::TWO,
            pairs.iter().map(|&(i, a)| (Monomial::new([i, l - i]), a)),
        ))
    }

    /// Whether the right-hand side reduces to `Sq^l`.
    pub fn verify(&self, l: u64) -> bool {
        match self.element(l) {
            Some(e) => algebra(Prime::TWO).reduce(&e) == SteenrodElement::power(Prime::TWO, l),
            None => l.is_power_of_two(),
        }
    }
}

/// Writes `l = 2^c + d` with `2^c` the lowest set bit, so `d ≡ 0 mod 2^{c+1}`,
/// and solves the Adem relation for `Sq^{2^c} Sq^d` for its `j = 0` term
/// `C(d-1, 2^c) Sq^l`, whose coefficient is 1 because `d - 1` ends in `c + 1`
/// one bits.
pub fn sq_power_of_two_decomposition(l: u64) -> SqDecomposition {
    assert!(l >= 1, "l must be positive");
    if l.is_power_of_two() {
        return SqDecomposition::PowerOfTwo;
    }
    let a = 1u64 << l.trailing_zeros();
    let d = l - a;
    let rel = adem_relation(Prime::TWO, a, d);
    debug_assert_eq!(rel.first(), Some(&(l, 0, 1)));
    let mut pairs = vec![(a, 1)];
    pairs.extend(rel.iter().filter(|t| t.1 > 0).map(|&(hi, _, c)| (hi, c)));
    pairs.sort_unstable();
    SqDecomposition::Relation(pairs)
}

/// `k = λ p^a + μ` with `0 < λ < p` and `μ ≡ 0 mod p^{a+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PadicSplit {
    pub lambda: u64,
    pub a: u32,
    pub mu: u64,
}

pub fn p_adic_split(p: Prime, k: u64) -> Result<PadicSplit, SteenrodError> {
    if k == 0 {
        return Err(SteenrodError::ZeroDegree);
    }
    let pp = p.get() as u64;
    let mut a = 0;
    let mut q = k;
    while q % pp == 0 {
        q /= pp;
        a += 1;
    }
    let lambda = q % pp;
    let mu = k - lambda * pp.pow(a);
    Ok(PadicSplit { lambda, a, mu })
}

/// `P^k = P^{m p^a} ∘ Q_a + Σ_{i<a} P^{p^i} ∘ Q_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitDecomposition {
    pub prime: Prime,
    pub k: u64,
    pub m: u64,
    pub split: PadicSplit,
    /// `Q_a`.
    pub leading: SteenrodElement,
    /// `p^i ↦ Q_i` for `i < a`; zero entries are omitted.
    pub lower: BTreeMap<u64, SteenrodElement>,
}

impl HitDecomposition {
    pub fn leading_exponent(&self) -> u64 {
        self.m * (self.prime.get() as u64).pow(self.split.a)
    }

    /// The right-hand side, composed but not reduced.
    pub fn assemble(&self) -> SteenrodElement {
        let p = self.prime;
        let mut rhs = SteenrodElement::power(p, self.leading_exponent())
            .compose(&self.leading)
            .expect("same prime");
        for (&e, q) in &self.lower {
            let t = SteenrodElement::power(p, e).compose(q).expect("same prime");
            rhs = rhs.add(&t).expect("same prime");
        }
        rhs
    }

    /// Whether the right-hand side reduces to `P^k`.
    pub fn verify(&self) -> bool {
        let p = self.prime;
        let pp = p.get() as u64;
        self.lower.keys().all(|&e| (0..self.split.a).any(|i| pp.pow(i) == e))
            && algebra(p).reduce(&self.assemble()) == SteenrodElement::power(p, self.k)
    }
}

fn check_args(p: Prime, k: u64, m: u64) -> Result<PadicSplit, SteenrodError> {
    if p.is_two() {
        return Err(SteenrodError::NotOddPrime(p.get()));
    }
    let split = p_adic_split(p, k)?;
    if m == 0 || m > split.lambda {
        return Err(SteenrodError::InvalidM { m, lambda: split.lambda });
    }
    Ok(split)
}

type HitMemo = Mutex<HashMap<(Prime, u64, u64), Arc<HitDecomposition>>>;

/// Builds the decomposition by induction on `k`.
///
/// Outside the base case `μ = 0, m = λ`, put `A = m p^a`, `B = k - A`; then
/// `A < pB` and the Adem relation gives
/// `c_0 P^k = P^A P^B - Σ_{0<j≤A/p} c_j P^{k-j} P^j`.
/// Each `k - j` has `p`-adic valuation below `a`, so its own decomposition
/// (with `m = 1`) only involves `P^{p^i}` with `i < a`.
pub fn hit_decompose(p: Prime, k: u64, m: u64) -> Result<HitDecomposition, SteenrodError> {
    check_args(p, k, m)?;
    Ok((*hit_decompose_memo(p, k, m)).clone())
}

fn hit_decompose_memo(p: Prime, k: u64, m: u64) -> Arc<HitDecomposition> {
    static MEMO: OnceLock<HitMemo> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(d) = memo.lock().unwrap().get(&(p, k, m)) {
        return d.clone();
    }
    let d = Arc::new(build_hit(p, k, m));
    memo.lock().unwrap().insert((p, k, m), d.clone());
    d
}

fn build_hit(p: Prime, k: u64, m: u64) -> HitDecomposition {
    let split = p_adic_split(p, k).expect("k >= 1");
    let pp = p.get() as u64;
    let big_a = m * pp.pow(split.a);
    if split.mu == 0 && m == split.lambda {
        return HitDecomposition {
            prime: p,
            k,
            m,
            split,
            leading: SteenrodElement::identity(p),
            lower: BTreeMap::new(),
        };
    }
    let big_b = k - big_a;
    let rel = adem_relation(p, big_a, big_b);
    let c0 = rel
        .iter()
        .find(|t| t.1 == 0)
        .map(|t| t.2)
        .expect("leading coefficient is a unit");
    let inv = p.inv(c0).expect("leading coefficient is a unit");

    let leading = SteenrodElement::power(p, big_b).scale(inv);
    let mut lower: BTreeMap<u64, SteenrodElement> = BTreeMap::new();
    for &(hi, j, cj) in rel.iter().filter(|t| t.1 > 0) {
        debug_assert_eq!(hi, k - j);
        let coeff = p.neg(p.mul(inv, cj));
        let sub = hit_decompose_memo(p, hi, 1);
        let pj = SteenrodElement::power(p, j);
        // P^{k-j} = P^{p^{a'}} Q'_{a'} + Σ_{i<a'} P^{p^i} Q'_i, all below p^a
        let mut parts: Vec<(u64, &SteenrodElement)> = vec![(sub.leading_exponent(), &sub.leading)];
        parts.extend(sub.lower.iter().map(|(&e, q)| (e, q)));
        for (e, q) in parts {
            debug_assert!(e < pp.pow(split.a));
            let term = q.compose(&pj).expect("same prime").scale(coeff);
            let slot = lower.entry(e).or_insert_with(|| SteenrodElement::zero(p));
            *slot = slot.add(&term).expect("same prime");
        }
    }
    let alg = algebra(p);
    let lower = lower
        .into_iter()
        .map(|(e, q)| (e, alg.reduce(&q)))
        .filter(|(_, q)| !q.is_zero())
        .collect();
    HitDecomposition { prime: p, k, m, split, leading, lower }
}

/// The two computations of `c_0` in the decomposition step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LeadingCoefficient {
    /// Coefficient of `P^k P^0` in the Adem relation for `P^{mp^a} P^{k-mp^a}`.
    pub direct: u32,
    /// `(-1)^m C(p - (λ - m) - 1, m)`.
    pub closed_form: u32,
    pub split: PadicSplit,
}

impl LeadingCoefficient {
    pub fn value(&self) -> u32 {
        self.direct
    }
}

pub fn leading_coefficient_check(p: Prime, k: u64, m: u64) -> Result<LeadingCoefficient, SteenrodError> {
    let split = check_args(p, k, m)?;
    if split.mu == 0 && m == split.lambda {
        return Err(SteenrodError::BaseCase);
    }
    let pp = p.get() as u64;
    let big_a = m * pp.pow(split.a);
    let big_b = k - big_a;
    let direct = p.mul(p.sign(big_a), binom_mod_p((pp - 1) * big_b - 1, big_a, p));
    let closed_form = p.mul(p.sign(m), binom_mod_p(pp - (split.lambda - m) - 1, m, p));
    if direct != closed_form || direct == 0 {
        return Err(SteenrodError::LeadingCoefficientMismatch { direct, closed_form });
    }
    Ok(LeadingCoefficient { direct, closed_form, split })
}
