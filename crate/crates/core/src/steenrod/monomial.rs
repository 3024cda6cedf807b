use serde::{Deserialize, Serialize};

use super::Prime;

/// A composition `P^{i_1} ∘ P^{i_2} ∘ … ∘ P^{i_s}` (or `Sq^{i_j}` at `p = 2`),
/// stored as its exponent sequence. The rightmost operation acts first.
///
/// Exponents are at least 1; the empty sequence is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u64>);

impl Monomial {
    pub fn identity() -> Self {
        Monomial(Vec::new())
    }

    /// Builds a monomial, dropping `P^0` factors.
    pub fn new(exponents: impl IntoIterator<Item = u64>) -> Self {
        Monomial(exponents.into_iter().filter(|&e| e > 0).collect())
    }

    pub fn exponents(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Topological degree: `Σ i_j` at `p = 2`, `Σ 2 i_j (p-1)` otherwise.
    pub fn degree(&self, p: Prime) -> u64 {
        op_degree(self.0.iter().sum(), p)
    }

    pub fn is_admissible(&self, p: Prime) -> bool {
        self.first_inadmissible(p).is_none()
    }

    /// Index `i` of the leftmost pair with `i_j < 2 i_{j+1}` (resp. `p i_{j+1}`).
    pub fn first_inadmissible(&self, p: Prime) -> Option<usize> {
        let factor = if p.is_two() { 2 } else { p.get() as u64 };
        self.0.windows(2).position(|w| w[0] < factor * w[1])
    }

    /// `Σ j·i_j` with 1-based positions. Every Adem rewrite strictly lowers it
    /// within a fixed degree, which bounds the rewriting.
    pub fn moment(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(j, &e)| (j as u64 + 1) * e)
            .sum()
    }

    /// Concatenation `self ∘ other`.
    pub fn compose(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Monomial(v)
    }

    /// Replaces the pair at `i, i+1` by `replacement`.
    pub(crate) fn splice(&self, i: usize, replacement: &[u64]) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len());
        v.extend_from_slice(&self.0[..i]);
        v.extend(replacement.iter().copied().filter(|&e| e > 0));
        v.extend_from_slice(&self.0[i + 2..]);
        Monomial(v)
    }
}

/// Degree of `P^e` (or `Sq^e`).
pub(crate) fn op_degree(e: u64, p: Prime) -> u64 {
    if p.is_two() {
        e
    } else {
        2 * e * (p.get() as u64 - 1)
    }
}

/// All admissible monomials of the given topological degree, in ascending order.
pub fn admissible_monomials(p: Prime, degree: u64) -> Vec<Monomial> {
    let unit = op_degree(1, p);
    if degree % unit != 0 {
        return Vec::new();
    }
    let total = degree / unit;
    let factor = if p.is_two() { 2 } else { p.get() as u64 };
    let mut out = Vec::new();
    // build from the right: the last exponent is the smallest
    fn extend(remaining: u64, min_next: u64, factor: u64, tail: &mut Vec<u64>, out: &mut Vec<Monomial>) {
        if remaining == 0 {
            out.push(Monomial(tail.iter().rev().copied().collect()));
            return;
        }
        for e in min_next..=remaining {
            tail.push(e);
            extend(remaining - e, factor * e, factor, tail, out);
            tail.pop();
        }
    }
    extend(total, 1, factor, &mut Vec::new(), &mut out);
    out.sort();
    out
}
