use std::cell::RefCell;
use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::int_rank;

use super::WebError;

/// Largest torus rank handled; involutions are stored as `u32` masks.
pub const MAX_RANK: usize = 16;
/// Largest number of invariant 2-planes; plane sets are `u64` masks.
pub const MAX_PLANES: usize = 64;
const MAX_SAMPLES: usize = 100_000;

/// Isotropy representation at a fixed point: column `i` of `w` is the
/// weight of the torus on the `i`-th invariant 2-plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsotropyModel {
    pub n: usize,
    pub r: usize,
    #[serde(rename = "W")]
    pub w: Vec<Vec<i64>>,
}

impl IsotropyModel {
    /// Checks shape, that no column vanishes and that the rank over `Q` is `r`.
    pub fn new(n: usize, w: Vec<Vec<i64>>) -> Result<Self, WebError> {
        let m = IsotropyModel { n, r: w.len(), w };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), WebError> {
        let bad = |msg: String| Err(WebError::InvalidModel(msg));
        if self.n % 2 == 1 {
            return bad(format!("n = {} is odd", self.n));
        }
        let planes = self.n / 2;
        if self.w.len() != self.r {
            return bad(format!("W has {} rows, expected r = {}", self.w.len(), self.r));
        }
        if self.r > MAX_RANK || planes > MAX_PLANES {
            return bad(format!("r ≤ {MAX_RANK} and n ≤ {} are supported", 2 * MAX_PLANES));
        }
        if let Some(row) = self.w.iter().position(|row| row.len() != planes) {
            return bad(format!("row {row} of W does not have n/2 = {planes} entries"));
        }
        if let Some(i) = (0..planes).find(|&i| self.w.iter().all(|row| row[i] == 0)) {
            return bad(format!("column {i} of W is zero"));
        }
        let rank = int_rank(&self.w);
        if rank != self.r {
            return bad(format!("W has rank {rank} over Q, expected r = {}", self.r));
        }
        Ok(())
    }

    pub fn planes(&self) -> usize {
        self.n / 2
    }

    pub fn column(&self, i: usize) -> Vec<i64> {
        self.w.iter().map(|row| row[i]).collect()
    }

    /// Columns in `mask`, as an `r × |mask|` matrix.
    pub fn restrict(&self, mask: u64) -> Vec<Vec<i64>> {
        self.w
            .iter()
            .map(|row| (0..self.planes()).filter(|&i| mask >> i & 1 == 1).map(|i| row[i]).collect())
            .collect()
    }

    /// True when `2^r ≥ n²`, i.e. `r ≥ 2·log₂ n`.
    pub fn meets_rank_bound(&self) -> bool {
        rank_bound_holds(self.n, self.r)
    }
}

pub(crate) fn rank_bound_holds(n: usize, r: usize) -> bool {
    n == 0 || (r < 128 && (1u128 << r) >= (n as u128) * (n as u128))
}

/// Involution `v ∈ Z_2^r` as a bit vector; coordinate 0 is the most
/// significant bit so that numeric order is lexicographic order.
pub fn to_bits(v: u32, r: usize) -> Vec<u8> {
    (0..r).map(|j| (v >> (r - 1 - j) & 1) as u8).collect()
}

pub fn from_bits(bits: &[u8]) -> u32 {
    bits.iter().fold(0, |acc, &b| acc << 1 | u32::from(b & 1))
}

/// Fixed-point data of a subgroup `H ⊆ Z_2^r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedSetDescriptor {
    pub subgroup: Vec<Vec<u8>>,
    pub fixed_planes: Vec<usize>,
    pub codim: usize,
    pub dim: usize,
    pub dim_ker: usize,
    /// Nullity of the restricted weights mod 2.
    pub mod2_nullity: usize,
}

/// A model with sign tables and rank caches.
pub struct Web<'a> {
    pub model: &'a IsotropyModel,
    pub r: usize,
    pub full: u64,
    col_masks: Vec<u32>,
    neg: Vec<u64>,
    ranks: RefCell<HashMap<u64, usize>>,
}

impl<'a> Web<'a> {
    pub fn new(model: &'a IsotropyModel) -> Self {
        let r = model.r;
        let planes = model.planes();
        let col_masks: Vec<u32> = (0..planes)
            .map(|i| (0..r).fold(0u32, |acc, j| acc | ((model.w[j][i].rem_euclid(2) as u32) << (r - 1 - j))))
            .collect();
        let neg = (0..1u32 << r)
            .map(|v| {
                col_masks
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &c)| acc | (u64::from((v & c).count_ones() % 2) << i))
            })
            .collect();
        let full = if planes == 64 { u64::MAX } else { (1u64 << planes) - 1 };
        Web { model, r, full, col_masks, neg, ranks: RefCell::new(HashMap::new()) }
    }

    pub fn n(&self) -> usize {
        self.model.n
    }

    pub fn involutions(&self) -> impl Iterator<Item = u32> {
        1..1u32 << self.r
    }

    /// Parities of column `i` as an involution mask.
    pub fn col_mask(&self, i: usize) -> u32 {
        self.col_masks[i]
    }

    /// Planes on which `v` acts by `−1`.
    pub fn neg(&self, v: u32) -> u64 {
        self.neg[v as usize]
    }

    pub fn sign(&self, v: u32, plane: usize) -> i8 {
        if self.neg(v) >> plane & 1 == 1 {
            -1
        } else {
            1
        }
    }

    /// Planes fixed by every element of `⟨gens⟩`.
    pub fn fixed(&self, gens: &[u32]) -> u64 {
        gens.iter().fold(self.full, |acc, &g| acc & !self.neg(g))
    }

    pub fn codim(&self, gens: &[u32]) -> usize {
        2 * (self.full & !self.fixed(gens)).count_ones() as usize
    }

    /// `r − rank_Q` of the weights on the planes in `mask`.
    pub fn dim_ker_of(&self, mask: u64) -> usize {
        if let Some(&k) = self.ranks.borrow().get(&mask) {
            return k;
        }
        let k = self.r - int_rank(&self.model.restrict(mask));
        self.ranks.borrow_mut().insert(mask, k);
        k
    }

    pub fn dim_ker(&self, gens: &[u32]) -> usize {
        self.dim_ker_of(self.fixed(gens))
    }

    /// `r − rank_{Z_2}` of the weights on the planes in `mask`.
    pub fn mod2_nullity_of(&self, mask: u64) -> usize {
        let masks = (0..self.model.planes()).filter(|&i| mask >> i & 1 == 1).map(|i| self.col_masks[i]);
        self.r - f2_rank(masks)
    }

    /// Upper bound for `dim_ker`, cheap to evaluate.
    pub(crate) fn dim_ker_upper_bound(&self, mask: u64) -> usize {
        self.mod2_nullity_of(mask)
    }

    pub fn fixed_set(&self, gens: &[u32]) -> FixedSetDescriptor {
        let mask = self.fixed(gens);
        let codim = self.codim(gens);
        FixedSetDescriptor {
            subgroup: gens.iter().map(|&g| to_bits(g, self.r)).collect(),
            fixed_planes: (0..self.model.planes()).filter(|&i| mask >> i & 1 == 1).collect(),
            codim,
            dim: self.n() - codim,
            dim_ker: self.dim_ker_of(mask),
            mod2_nullity: self.mod2_nullity_of(mask),
        }
    }

    /// No plane is moved by both; checked against additivity of codimensions.
    pub fn is_transverse(&self, s: u32, t: u32) -> bool {
        let disjoint = self.neg(s) & self.neg(t) == 0;
        let additive = self.codim(&[s, t]) == self.codim(&[s]) + self.codim(&[t]);
        assert_eq!(disjoint, additive, "transversality characterizations disagree");
        disjoint
    }

    /// Checks both transversality characterizations and the parity
    /// congruence `cod F(στ) ≡ cod F(σ) + cod F(τ) mod 4` over all pairs.
    pub fn pair_report(&self) -> PairReport {
        let mut rep = PairReport::default();
        for s in self.involutions() {
            for t in s + 1..1u32 << self.r {
                rep.pairs += 1;
                let disjoint = self.neg(s) & self.neg(t) == 0;
                let additive = self.codim(&[s, t]) == self.codim(&[s]) + self.codim(&[t]);
                rep.transverse += usize::from(disjoint);
                rep.transversality_mismatches += usize::from(disjoint != additive);
                let parity = (self.codim(&[s ^ t]) + 4 - (self.codim(&[s]) + self.codim(&[t])) % 4) % 4 == 0;
                rep.parity_failures += usize::from(!parity);
            }
        }
        rep
    }

    pub fn in_gamma(&self, v: u32) -> bool {
        v != 0 && self.codim(&[v]) % 4 == 0 && self.dim_ker(&[v]) <= 1
    }

    pub fn build_gamma(&self) -> GammaGraph {
        let member: Vec<bool> = (0..1u32 << self.r).map(|v| self.in_gamma(v)).collect();
        let vertices = (0..1u32 << self.r).filter(|&v| member[v as usize]).collect();
        GammaGraph { r: self.r, vertices, member, neg: self.neg.clone() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub pairs: usize,
    pub transverse: usize,
    pub transversality_mismatches: usize,
    pub parity_failures: usize,
}

impl PairReport {
    pub fn add(&mut self, other: PairReport) {
        self.pairs += other.pairs;
        self.transverse += other.transverse;
        self.transversality_mismatches += other.transversality_mismatches;
        self.parity_failures += other.parity_failures;
    }

    pub fn clean(&self) -> bool {
        self.transversality_mismatches == 0 && self.parity_failures == 0
    }
}

pub(crate) fn f2_rank(vectors: impl IntoIterator<Item = u32>) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for mut v in vectors {
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Membership in the `Z_2`-span of a growing set of vectors.
#[derive(Clone, Debug, Default)]
pub(crate) struct F2Span {
    basis: Vec<u32>,
}

impl F2Span {
    pub fn reduce(&self, mut v: u32) -> u32 {
        for &b in &self.basis {
            v = v.min(v ^ b);
        }
        v
    }

    pub fn contains(&self, v: u32) -> bool {
        self.reduce(v) == 0
    }

    pub fn insert(&mut self, v: u32) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        self.basis.push(v);
        self.basis.sort_unstable_by(|a, b| b.cmp(a));
        true
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Involutions with `codim ≡ 0 mod 4` and `dim_ker ≤ 1`; edges join
/// non-transverse pairs.
#[derive(Clone, Debug)]
pub struct GammaGraph {
    pub r: usize,
    pub vertices: Vec<u32>,
    member: Vec<bool>,
    neg: Vec<u64>,
}

impl GammaGraph {
    pub fn contains(&self, v: u32) -> bool {
        self.member[v as usize]
    }

    pub fn has_edge(&self, s: u32, t: u32) -> bool {
        s != t && self.contains(s) && self.contains(t) && self.neg[s as usize] & self.neg[t as usize] != 0
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.vertices.iter().enumerate().flat_map(move |(a, &s)| {
            self.vertices[a + 1..].iter().filter(move |&&t| self.has_edge(s, t)).map(move |&t| (s, t))
        })
    }

    /// Dimension of the span of the vertices over `Z_2`.
    pub fn rank(&self) -> usize {
        f2_rank(self.vertices.iter().copied())
    }
}

/// Seeded random valid model with entries in `[−bound, bound]`.
pub fn random_model(n: usize, r: usize, seed: u64, bound: i64) -> Result<IsotropyModel, WebError> {
    check_params(n, r, bound)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_SAMPLES {
        let w: Vec<Vec<i64>> = (0..r).map(|_| (0..n / 2).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
        if let Ok(m) = IsotropyModel::new(n, w) {
            return Ok(m);
        }
    }
    Err(WebError::InfeasibleParameters(format!("no valid model found for n = {n}, r = {r}, bound = {bound}")))
}

fn check_params(n: usize, r: usize, bound: i64) -> Result<(), WebError> {
    let bad = |msg: String| Err(WebError::InfeasibleParameters(msg));
    if n == 0 || n % 2 == 1 {
        return bad(format!("n = {n} must be positive and even"));
    }
    if r == 0 || r > n / 2 {
        return bad(format!("rank r = {r} needs 1 ≤ r ≤ n/2 = {}", n / 2));
    }
    if r > MAX_RANK || n / 2 > MAX_PLANES {
        return bad(format!("r ≤ {MAX_RANK} and n ≤ {} are supported", 2 * MAX_PLANES));
    }
    if bound < 1 {
        return bad(format!("weight bound {bound} must be at least 1"));
    }
    Ok(())
}

/// Every valid model up to column permutation, columns in nondecreasing
/// order of their index in the lexicographic list of nonzero weights.
pub fn exhaustive_models(n: usize, r: usize, bound: i64) -> Result<ExhaustiveModels, WebError> {
    check_params(n, r, bound)?;
    let width = (2 * bound + 1) as usize;
    let columns: Vec<Vec<i64>> = (0..width.pow(r as u32))
        .map(|mut idx| {
            let mut col = vec![0; r];
            for j in (0..r).rev() {
                col[j] = (idx % width) as i64 - bound;
                idx /= width;
            }
            col
        })
        .filter(|c| c.iter().any(|&v| v != 0))
        .collect();
    Ok(ExhaustiveModels { n, r, columns, idx: Some(vec![0; n / 2]) })
}

pub struct ExhaustiveModels {
    n: usize,
    r: usize,
    columns: Vec<Vec<i64>>,
    idx: Option<Vec<usize>>,
}

impl ExhaustiveModels {
    fn advance(&mut self) {
        let Some(idx) = self.idx.as_mut() else { return };
        let top = self.columns.len() - 1;
        let Some(pos) = (0..idx.len()).rev().find(|&p| idx[p] < top) else {
            self.idx = None;
            return;
        };
        idx[pos] += 1;
        let v = idx[pos];
        for slot in idx.iter_mut().skip(pos + 1) {
            *slot = v;
        }
    }
}

impl Iterator for ExhaustiveModels {
    type Item = IsotropyModel;

    fn next(&mut self) -> Option<IsotropyModel> {
        loop {
            let idx = self.idx.clone()?;
            self.advance();
            let w: Vec<Vec<i64>> = (0..self.r).map(|j| idx.iter().map(|&c| self.columns[c][j]).collect()).collect();
            if int_rank(&w) == self.r {
                return Some(IsotropyModel { n: self.n, r: self.r, w });
            }
        }
    }
}
