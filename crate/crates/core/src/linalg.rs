//! Exact linear algebra over a [`Field`], plus the integer routines the
//! isotropy models need (fraction-free rank and lattice saturation).
//!
//! Matrices use the row-vector convention of the ring tables: row `a` holds
//! the image of source basis vector `a`, so a map acts as `x ↦ x·M`.

use crate::field::Field;

/// Reduced row echelon form in place. Returns the pivot columns.
pub fn row_reduce<F: Field>(f: &F, m: &mut Vec<Vec<F::Elem>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(piv) = (row..m.len()).find(|&i| !f.is_zero(&m[i][col])) else {
            continue;
        };
        m.swap(row, piv);
        let inv = f.inv(&m[row][col]).expect("nonzero pivot");
        for x in m[row].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..m.len() {
            if i != row && !f.is_zero(&m[i][col]) {
                let factor = m[i][col].clone();
                for j in 0..m[i].len() {
                    let t = f.mul(&factor, &m[row][j]);
                    m[i][j] = f.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank<F: Field>(f: &F, rows: &[Vec<F::Elem>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    row_reduce(f, &mut m, ncols).len()
}

/// `x·M` for a row vector `x` of length `M.len()`.
pub fn vec_mat<F: Field>(f: &F, x: &[F::Elem], m: &[Vec<F::Elem>], ncols: usize) -> Vec<F::Elem> {
    debug_assert_eq!(x.len(), m.len());
    let mut out = vec![f.zero(); ncols];
    for (xi, row) in x.iter().zip(m) {
        if f.is_zero(xi) {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row) {
            *o = f.add(o, &f.mul(xi, r));
        }
    }
    out
}

/// Echelon data for `[M | I]`, used by kernel and solve.
struct Augmented<E> {
    rows: Vec<Vec<E>>,
    pivots: Vec<usize>,
    ncols: usize,
}

fn augment<F: Field>(f: &F, m: &[Vec<F::Elem>], ncols: usize) -> Augmented<F::Elem> {
    let s = m.len();
    let mut rows: Vec<Vec<F::Elem>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..s).map(|j| if i == j { f.one() } else { f.zero() }));
            v
        })
        .collect();
    let pivots = row_reduce(f, &mut rows, ncols);
    Augmented { rows, pivots, ncols }
}

/// Basis of `{x : x·M = 0}`.
pub fn left_kernel<F: Field>(f: &F, m: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let aug = augment(f, m, ncols);
    aug.rows[aug.pivots.len()..]
        .iter()
        .map(|r| r[ncols..].to_vec())
        .collect()
}

/// Some `x` with `x·M = y`, if one exists.
pub fn solve_left<F: Field>(f: &F, m: &[Vec<F::Elem>], y: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let ncols = y.len();
    let aug = augment(f, m, ncols);
    let mut residue = y.to_vec();
    let mut x = vec![f.zero(); m.len()];
    for (r, &col) in aug.pivots.iter().enumerate() {
        let c = residue[col].clone();
        if f.is_zero(&c) {
            continue;
        }
        for j in 0..aug.ncols {
            residue[j] = f.sub(&residue[j], &f.mul(&c, &aug.rows[r][j]));
        }
        for (xi, a) in x.iter_mut().zip(&aug.rows[r][aug.ncols..]) {
            *xi = f.add(xi, &f.mul(&c, a));
        }
    }
    residue.iter().all(|v| f.is_zero(v)).then_some(x)
}

/// Rank over `Q` of an integer matrix, by fraction-free (Bareiss) elimination.
pub fn int_rank(rows: &[Vec<i64>]) -> usize {
    let Some(ncols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        for i in rank + 1..m.len() {
            for j in col + 1..ncols {
                let v = m[rank][col] * m[i][j] - m[i][col] * m[rank][j];
                debug_assert_eq!(v % prev, 0, "Bareiss division must be exact");
                m[i][j] = v / prev;
            }
            m[i][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Determinant of a square integer matrix by Bareiss elimination.
fn int_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != 0) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * prev
}

/// Distinct prime factors by trial division, `None` past `10^7`.
fn small_prime_factors(mut d: u128) -> Option<Vec<u128>> {
    let mut out = Vec::new();
    let mut p = 2u128;
    while p * p <= d {
        if p > 10_000_000 {
            return None;
        }
        if d % p == 0 {
            out.push(p);
            while d % p == 0 {
                d /= p;
            }
        }
        p += 1;
    }
    if d > 1 {
        out.push(d);
    }
    Some(out)
}

/// Some `x ≢ 0 (mod q)` with `x·B ≡ 0 (mod q)`, entries in `[0, q)`.
fn left_kernel_mod(b: &[Vec<i128>], q: i128) -> Option<Vec<i128>> {
    let r = b.len();
    let c = b[0].len();
    let mut m: Vec<Vec<i128>> = b
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v: Vec<i128> = row.iter().map(|x| x.rem_euclid(q)).collect();
            v.extend((0..r).map(|j| i128::from(i == j)));
            v
        })
        .collect();
    let mut rank = 0;
    for col in 0..c {
        let Some(p) = (rank..r).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = pow_mod(m[rank][col], q - 2, q);
        for i in rank + 1..r {
            let f = m[i][col] * inv % q;
            if f != 0 {
                for j in 0..c + r {
                    m[i][j] = (m[i][j] - f * m[rank][j]).rem_euclid(q);
                }
            }
        }
        rank += 1;
    }
    (rank < r).then(|| m[rank][c..].to_vec())
}

fn pow_mod(mut b: i128, mut e: i128, q: i128) -> i128 {
    let mut out = 1;
    b = b.rem_euclid(q);
    while e > 0 {
        if e & 1 == 1 {
            out = out * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    out
}

/// Basis of the saturation `span_Q(rows) ∩ Z^c` of the row lattice.
///
/// The index of the row lattice in its saturation divides every maximal
/// minor. For each prime `q` of one nonzero minor, a row combination that
/// vanishes mod `q` is divided by `q` until the rows stay independent mod
/// `q`. Returns `None` if the rows are linearly dependent or an entry
/// leaves `i64`.
pub fn saturate_rows(rows: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let r = rows.len();
    let Some(c) = rows.first().map(Vec::len) else {
        return Some(Vec::new());
    };
    if r > c || int_rank(rows) < r {
        return None;
    }
    let mut b: Vec<Vec<i128>> = rows
        .iter()
        .map(|row| row.iter().map(|&v| v as i128).collect())
        .collect();
    let mut cols: Vec<usize> = Vec::new();
    for j in 0..c {
        cols.push(j);
        let sub: Vec<Vec<i64>> = rows.iter().map(|row| cols.iter().map(|&k| row[k]).collect()).collect();
        if int_rank(&sub) < cols.len() {
            cols.pop();
        }
        if cols.len() == r {
            break;
        }
    }
    let minor: Vec<Vec<i128>> = b.iter().map(|row| cols.iter().map(|&k| row[k]).collect()).collect();
    let d = int_det(&minor);
    for q in small_prime_factors(d.unsigned_abs())? {
        let q = q as i128;
        while let Some(mut x) = left_kernel_mod(&b, q) {
            let i = x.iter().position(|&v| v != 0).expect("nonzero kernel vector");
            let inv = pow_mod(x[i], q - 2, q);
            for v in x.iter_mut() {
                *v = *v * inv % q;
            }
            let combo: Vec<i128> = (0..c).map(|k| (0..r).map(|t| x[t] * b[t][k]).sum::<i128>()).collect();
            debug_assert!(combo.iter().all(|v| v % q == 0));
            b[i] = combo.into_iter().map(|v| v / q).collect();
        }
    }
    b.into_iter()
        .map(|row| row.into_iter().map(|v| i64::try_from(v).ok()).collect())
        .collect()
}
