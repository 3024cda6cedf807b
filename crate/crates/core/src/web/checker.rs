//! Replays a [`WebResult`] from the raw weights with exact rational
//! arithmetic and plain integer parities, sharing no state with the search.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::search::{Certificate, Leaf, SearchMode, WebResult};
use super::IsotropyModel;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub ok: bool,
    pub steps_checked: usize,
    pub failures: Vec<String>,
}

struct Checker {
    failures: Vec<String>,
}

impl Checker {
    fn require(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if !cond {
            self.failures.push(what());
        }
    }
}

fn q_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect()).collect();
    echelon(&mut m)
}

fn echelon(m: &mut [Vec<BigRational>]) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] / &m[rank][col];
            for j in col..ncols {
                let t = &f * &m[rank][j];
                m[i][j] -= t;
            }
        }
        rank += 1;
    }
    rank
}

fn det(m: &[Vec<i64>]) -> BigInt {
    let mut a: Vec<Vec<BigRational>> =
        m.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect()).collect();
    let n = a.len();
    let mut d = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else { return BigInt::zero() };
        if p != col {
            a.swap(p, col);
            d = -d;
        }
        d *= a[col][col].clone();
        for i in col + 1..n {
            let f = &a[i][col] / &a[col][col];
            for j in col..n {
                let t = &f * &a[col][j];
                a[i][j] -= t;
            }
        }
    }
    d.to_integer()
}

fn rank_mod(rows: &[Vec<i64>], q: u64) -> usize {
    let q = q as i128;
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| (v as i128).rem_euclid(q)).collect()).collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][col] != 0) else { continue };
        m.swap(rank, p);
        let inv = modpow(m[rank][col], q - 2, q);
        for i in rank + 1..m.len() {
            let f = m[i][col] * inv % q;
            for j in col..ncols {
                m[i][j] = (m[i][j] - f * m[rank][j]).rem_euclid(q);
            }
        }
        rank += 1;
    }
    rank
}

fn modpow(mut b: i128, mut e: i128, q: i128) -> i128 {
    let mut out = 1;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            out = out * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    out
}

/// Prime factors of `|d|`, or `None` if a cofactor is too large to settle.
fn prime_factors(d: &BigInt) -> Option<Vec<u64>> {
    let mut d = d.abs().to_u128()?;
    let mut out = Vec::new();
    let mut p = 2u128;
    while p * p <= d {
        if d % p == 0 {
            out.push(p as u64);
            while d % p == 0 {
                d /= p;
            }
        }
        p += 1;
        if p > 2_000_000 {
            return None;
        }
    }
    if d > 1 {
        out.push(u64::try_from(d).ok()?);
    }
    Some(out)
}

/// Rows span `span_Q(rows) ∩ Z^c`: for a nonzero maximal minor `D`, the
/// rows stay independent modulo every prime dividing `D`.
fn saturated(rows: &[Vec<i64>]) -> Result<bool, String> {
    let r = rows.len();
    if r == 0 {
        return Ok(true);
    }
    let ncols = rows[0].len();
    let mut cols: Vec<usize> = Vec::new();
    for c in 0..ncols {
        cols.push(c);
        let sub: Vec<Vec<i64>> = rows.iter().map(|row| cols.iter().map(|&k| row[k]).collect()).collect();
        if q_rank(&sub) < cols.len() {
            cols.pop();
        }
        if cols.len() == r {
            break;
        }
    }
    if cols.len() < r {
        return Ok(false);
    }
    let minor: Vec<Vec<i64>> = rows.iter().map(|row| cols.iter().map(|&k| row[k]).collect()).collect();
    let d = det(&minor);
    let primes = prime_factors(&d).ok_or_else(|| format!("cannot factor the minor {d}"))?;
    Ok(primes.into_iter().all(|q| rank_mod(rows, q) == r))
}

fn negative_planes(w: &[Vec<i64>], v: &[u8]) -> Vec<bool> {
    let planes = w.first().map_or(0, Vec::len);
    (0..planes)
        .map(|i| {
            let dot: i64 = w.iter().zip(v).map(|(row, &b)| i64::from(b) * row[i]).sum();
            dot.rem_euclid(2) == 1
        })
        .collect()
}

fn fixed_planes(m: &IsotropyModel, gens: &[Vec<u8>]) -> Vec<usize> {
    let negs: Vec<Vec<bool>> = gens.iter().map(|g| negative_planes(&m.w, g)).collect();
    (0..m.n / 2).filter(|&i| negs.iter().all(|neg| !neg[i])).collect()
}

fn columns(m: &IsotropyModel, planes: &[usize]) -> Vec<Vec<i64>> {
    m.w.iter().map(|row| planes.iter().map(|&i| row[i]).collect()).collect()
}

fn xor(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

fn in_gamma(m: &IsotropyModel, v: &[u8]) -> bool {
    let fixed = fixed_planes(m, &[v.to_vec()]);
    let codim = m.n - 2 * fixed.len();
    v.iter().any(|&b| b == 1) && codim % 4 == 0 && m.r - q_rank(&columns(m, &fixed)) <= 1
}

fn same_row_space(a: &[Vec<i64>], b: &[Vec<i64>], r: usize) -> bool {
    let stacked: Vec<Vec<i64>> = a.iter().chain(b).cloned().collect();
    q_rank(a) == r && q_rank(b) == r && q_rank(&stacked) == r
}

fn check_lattice(ck: &mut Checker, label: &str, spanning: &[Vec<i64>], m: &IsotropyModel) {
    ck.require(m.w.len() == m.r && m.w.iter().all(|row| row.len() == m.n / 2), || format!("{label}: shape"));
    if !ck.failures.is_empty() {
        return;
    }
    ck.require(same_row_space(spanning, &m.w, m.r), || format!("{label}: row space differs or rank is not {}", m.r));
    match saturated(&m.w) {
        Ok(true) => {}
        Ok(false) => ck.failures.push(format!("{label}: weights are not saturated")),
        Err(e) => ck.failures.push(format!("{label}: {e}")),
    }
}

fn check_certificate(ck: &mut Checker, m: &IsotropyModel, c: &Certificate) {
    let amb = fixed_planes(m, &c.ambient);
    ck.require(2 * amb.len() == c.ambient_dim, || format!("ambient dimension {} ≠ {}", 2 * amb.len(), c.ambient_dim));
    ck.require(c.ambient_dim % 4 == 0, || format!("ambient dimension {} not divisible by 4", c.ambient_dim));
    let moved: Vec<Vec<usize>> = c
        .pair
        .iter()
        .map(|gens| {
            let f = fixed_planes(m, gens);
            amb.iter().copied().filter(|i| !f.contains(i)).collect()
        })
        .collect();
    for (side, mv) in moved.iter().enumerate() {
        ck.require(2 * mv.len() == c.codims[side], || format!("side {side}: codimension {} ≠ {}", 2 * mv.len(), c.codims[side]));
        ck.require(!mv.is_empty(), || format!("side {side} is the whole ambient space"));
    }
    ck.require(moved[0].iter().all(|i| !moved[1].contains(i)), || "pair is not transverse".into());
    let lhs = 2 * c.codims[0] + 2 * c.codims[1];
    ck.require(lhs <= c.ambient_dim, || format!("{lhs} > {}", c.ambient_dim));

    let actor = |name: &str| c.actors.iter().find(|a| a.name == name).map(|a| a.bits.clone());
    match c.case {
        2..=4 => {
            let (Some(s), Some(t)) = (actor("sigma"), actor("tau")) else {
                ck.failures.push("missing sigma or tau".into());
                return;
            };
            ck.require(in_gamma(m, &s) && in_gamma(m, &t), || "sigma or tau is not a vertex".into());
            if c.case == 3 {
                let (fs, ft) = (fixed_planes(m, &[s.clone()]), fixed_planes(m, &[t.clone()]));
                let shared = (0..m.n / 2).any(|i| !fs.contains(&i) && !ft.contains(&i));
                ck.require(!shared, || "sigma and tau are joined by an edge".into());
            }
            if c.case == 4 {
                ck.require(!in_gamma(m, &xor(&s, &t)), || "sigma·tau is a vertex".into());
            }
        }
        1 => {
            if let Some(v) = actor("iota_next") {
                let codim = m.n - 2 * fixed_planes(m, &[v]).len();
                ck.require(codim % 4 == 0 && codim > 0, || format!("new generator has codimension {codim}"));
            }
        }
        5 => check_chain(ck, m, c),
        _ => ck.failures.push(format!("unknown case {}", c.case)),
    }
}

fn check_chain(ck: &mut Checker, m: &IsotropyModel, c: &Certificate) {
    let Some(t) = &c.chain else {
        ck.failures.push("case 5 without a chain".into());
        return;
    };
    let mut gens: Vec<Vec<u8>> = Vec::new();
    let mut dims = vec![m.n];
    let mut prev = m.n;
    for (h, step) in t.steps.iter().enumerate() {
        gens.push(step.rho.clone());
        let d = 2 * fixed_planes(m, &gens).len();
        ck.require(prev - d == step.k, || format!("k_{} = {} recorded as {}", h + 1, prev - d, step.k));
        dims.push(d);
        prev = d;
    }
    ck.require(dims == t.dims, || format!("chain dimensions {dims:?} ≠ {:?}", t.dims));
    ck.require(dims.iter().all(|d| d % 4 == 0), || "chain dimension not divisible by 4".into());
    let ks: Vec<usize> = t.steps.iter().map(|s| s.k).collect();
    ck.require(ks.windows(2).all(|w| w[0] >= 2 * w[1]), || "codimensions do not halve".into());
    ck.require(ks.last() == Some(&0), || "last codimension is not zero".into());
}

/// Verifies every reduction and the leaf of `res`.
pub fn check_result(res: &WebResult) -> CheckReport {
    let mut ck = Checker { failures: Vec::new() };
    let raw = &res.model;
    ck.require(raw.w.iter().all(|row| row.len() == raw.n / 2) && raw.w.len() == raw.r, || "raw model shape".into());
    if ck.failures.is_empty() {
        check_lattice(&mut ck, "normalized model", &raw.w, &res.normalized);
        ck.require(res.normalized.n == raw.n, || "normalization changed n".into());
    }
    let mut parent = &res.normalized;
    let mut steps = 0;
    for (idx, red) in res.path.iter().enumerate() {
        if !ck.failures.is_empty() {
            break;
        }
        let label = format!("reduction {}", idx + 1);
        let fixed = fixed_planes(parent, &red.subgroup);
        ck.require(fixed == red.fixed_planes, || format!("{label}: fixed planes {fixed:?} ≠ {:?}", red.fixed_planes));
        let dim = 2 * fixed.len();
        ck.require(dim == red.dim && dim < parent.n && dim % 4 == 0, || format!("{label}: dimension {dim}"));
        let restricted = columns(parent, &fixed);
        let dk = parent.r - q_rank(&restricted);
        ck.require(dk == red.dim_ker, || format!("{label}: kernel {dk} ≠ {}", red.dim_ker));
        let gate = (dim as u128).pow(2) << dk <= (parent.n as u128).pow(2);
        ck.require(gate, || format!("{label}: gate fails for dim {dim}, kernel {dk}"));
        let child = &red.model;
        ck.require(child.n == dim && child.r + dk == parent.r, || format!("{label}: reduced model has n = {}, r = {}", child.n, child.r));
        if ck.failures.is_empty() && child.r > 0 {
            check_lattice(&mut ck, &label, &restricted, child);
        }
        if res.mode == SearchMode::Strict && child.n > 0 {
            ck.require((1u128 << child.r) >= (child.n as u128).pow(2), || format!("{label}: rank bound lost"));
        }
        parent = child;
        steps += 1;
    }
    if ck.failures.is_empty() {
        match &res.leaf {
            Leaf::PointComponent => ck.require(parent.n == 0, || "point leaf in positive dimension".into()),
            Leaf::Flagged { .. } => {}
            Leaf::Certificate(c) => check_certificate(&mut ck, parent, c),
        }
    }
    CheckReport { ok: ck.failures.is_empty(), steps_checked: steps, failures: ck.failures }
}
