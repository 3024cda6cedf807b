use crate::field::{Field, Rationals};
use crate::steenrod::{binom_mod_p, Prime};

use super::{GradedAlgebra, RingError};

fn domain<T>(msg: impl Into<String>) -> Result<T, RingError> {
    Err(RingError::Domain(msg.into()))
}

fn power_label(g: &str, i: usize) -> String {
    match i {
        0 => "1".to_string(),
        1 => g.to_string(),
        _ => format!("{g}^{i}"),
    }
}

/// How the reduced powers act on `x^i` for a truncated polynomial ring.
#[derive(Clone, Copy, Debug)]
enum MonogenicAction {
    /// `p = 2`, `|x| = 2^s`: `Sq^{|x| j} x^i = C(i, j) x^{i+j}`.
    PowerOfTwo,
    /// odd `p`, `|x| = 2 λ p^r` with `λ | p - 1`:
    /// `P^{j p^r} x^i = C(λ i, j) x^{i + j(p-1)/λ}`, as for `x = y^{λ p^r}`, `|y| = 2`.
    OddPower { lambda: u64, pr: u64 },
    /// Every positive operation vanishes (consistent when `x^p = 0`).
    Trivial,
}

fn monogenic_action(p: Prime, k: usize, q: usize) -> Option<MonogenicAction> {
    if p.is_two() {
        if k.is_power_of_two() {
            return Some(MonogenicAction::PowerOfTwo);
        }
    } else if k % 2 == 0 {
        let pp = p.get() as u64;
        let mut half = k as u64 / 2;
        let mut pr = 1;
        while half % pp == 0 {
            half /= pp;
            pr *= pp;
        }
        if (pp - 1) % half == 0 {
            return Some(MonogenicAction::OddPower { lambda: half, pr });
        }
    }
    (q < p.get() as usize).then_some(MonogenicAction::Trivial)
}

/// `F[x]/x^{q+1}` with `|x| = k`; `n = kq`.
fn monogenic<F: Field>(field: F, k: usize, q: usize, gen: &str, name: String) -> Result<GradedAlgebra<F>, RingError> {
    if k == 0 || q == 0 {
        return domain("generator degree and height must be positive");
    }
    if k % 2 == 1 && q >= 2 && field.prime() != Some(Prime::TWO) {
        return domain(format!(
            "an odd-degree generator squares to zero outside characteristic 2, so height {q} is impossible"
        ));
    }
    let n = k * q;
    let mut dims = vec![0; n + 1];
    for i in 0..=q {
        dims[i * k] = 1;
    }
    let mut a = GradedAlgebra::zero_tables(field.clone(), dims, name)?;
    for i in 0..=q {
        for j in 0..=q - i {
            a.set_product(i * k, 0, j * k, 0, vec![field.one()])?;
        }
    }
    let mut labels = vec![Vec::new(); n + 1];
    for i in 0..=q {
        labels[i * k] = vec![power_label(gen, i)];
    }
    a.set_labels(labels)?;
    a.set_poincare(true);

    if let Some(p) = field.prime() {
        let action = monogenic_action(p, k, q).ok_or_else(|| {
            RingError::Domain(format!(
                "no Steenrod action is known for a degree-{k} generator of height {q} over Z_{p}"
            ))
        })?;
        a.enable_steenrod()?;
        let pp = p.get() as u64;
        for i in 1..=q as u64 {
            // (operation index, target power, coefficient)
            let mut entries: Vec<(u64, u64, u32)> = Vec::new();
            match action {
                MonogenicAction::PowerOfTwo => {
                    for j in 1..=i {
                        entries.push((k as u64 * j, i + j, binom_mod_p(i, j, p)));
                    }
                }
                MonogenicAction::OddPower { lambda, pr } => {
                    for j in 1..=lambda * i {
                        if (j * (pp - 1)) % lambda != 0 {
                            continue;
                        }
                        entries.push((j * pr, i + j * (pp - 1) / lambda, binom_mod_p(lambda * i, j, p)));
                    }
                }
                MonogenicAction::Trivial => {}
            }
            for (op, target, c) in entries {
                if target > q as u64 || c == 0 {
                    continue;
                }
                a.set_steenrod(op, i as usize * k, vec![vec![field.from_i64(c as i64)]])?;
            }
        }
    }
    Ok(a)
}

pub fn build_sphere<F: Field>(n: usize, field: F) -> Result<GradedAlgebra<F>, RingError> {
    if n == 0 {
        return domain("sphere dimension must be positive");
    }
    let name = format!("S{n}_{}", field.name());
    monogenic(field, n, 1, "s", name)
}

pub fn build_cp<F: Field>(m: usize, field: F) -> Result<GradedAlgebra<F>, RingError> {
    if m == 0 {
        return domain("CP^m needs m >= 1");
    }
    let name = format!("CP{m}_{}", field.name());
    monogenic(field, 2, m, "x", name)
}

pub fn build_hp<F: Field>(m: usize, field: F) -> Result<GradedAlgebra<F>, RingError> {
    if m == 0 {
        return domain("HP^m needs m >= 1");
    }
    let name = format!("HP{m}_{}", field.name());
    monogenic(field, 4, m, "y", name)
}

/// `F[x]/x^{q+1}` with `|x| = k`. Over `Z_p` a Steenrod action is attached
/// when one is known: `|x|` a power of two at `p = 2`, `|x| = 2λp^r` with
/// `λ | p-1` at odd `p`, or the trivial action when `q < p`.
pub fn build_truncated_poly<F: Field>(k: usize, q: usize, field: F) -> Result<GradedAlgebra<F>, RingError> {
    let name = format!("T{k}x{q}_{}", field.name());
    monogenic(field, k, q, "x", name)
}

/// Künneth product with `(a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa'⊗bb'` and, when both
/// factors carry Steenrod tables, the Cartan action `P^k(a⊗b) = Σ P^i a ⊗ P^{k-i} b`.
pub fn build_product<F: Field>(a: &GradedAlgebra<F>, b: &GradedAlgebra<F>) -> Result<GradedAlgebra<F>, RingError> {
    if a.field() != b.field() {
        return Err(RingError::FieldMismatch(a.field().name(), b.field().name()));
    }
    let f = a.field().clone();
    let n = a.n() + b.n();
    // basis of degree d: (i, x, y) with x ∈ basis of A^i, y ∈ basis of B^{d-i}
    let mut index: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n + 1];
    for (d, slot) in index.iter_mut().enumerate() {
        for i in 0..=d.min(a.n()) {
            if d - i > b.n() {
                continue;
            }
            for x in 0..a.dim(i) {
                for y in 0..b.dim(d - i) {
                    slot.push((i, x, y));
                }
            }
        }
    }
    let dims: Vec<usize> = index.iter().map(Vec::len).collect();
    let name = format!("{}x{}", strip_field(a.name()), b.name());
    let mut out = GradedAlgebra::zero_tables(f.clone(), dims.clone(), name)?;

    let tensor = |d: usize, i: usize, u: &[F::Elem], v: &[F::Elem]| -> Vec<F::Elem> {
        index[d]
            .iter()
            .map(|&(ii, x, y)| if ii == i { f.mul(&u[x], &v[y]) } else { f.zero() })
            .collect()
    };

    for d1 in 0..=n {
        for d2 in 0..=n - d1 {
            for (s, &(i1, x1, y1)) in index[d1].iter().enumerate() {
                for (t, &(i2, x2, y2)) in index[d2].iter().enumerate() {
                    let (j1, j2) = (d1 - i1, d2 - i2);
                    let d = d1 + d2;
                    let coords = if i1 + i2 > a.n() || j1 + j2 > b.n() {
                        out.zero_vec(d)
                    } else {
                        let u = a.basis_product(i1, x1, i2, x2).expect("within range").to_vec();
                        let v = b.basis_product(j1, y1, j2, y2).expect("within range").to_vec();
                        let mut w = tensor(d, i1 + i2, &u, &v);
                        if (j1 * i2) % 2 == 1 {
                            w = w.iter().map(|e| f.neg(e)).collect();
                        }
                        w
                    };
                    out.set_product(d1, s, d2, t, coords)?;
                }
            }
        }
    }

    let mut labels = vec![Vec::new(); n + 1];
    for (d, slot) in index.iter().enumerate() {
        for &(i, x, y) in slot {
            let (la, lb) = (&a.labels()[i][x], &b.labels()[d - i][y]);
            labels[d].push(match (la.as_str(), lb.as_str()) {
                ("1", "1") => "1".to_string(),
                ("1", _) => lb.clone(),
                (_, "1") => la.clone(),
                _ => format!("{la}*{lb}"),
            });
        }
    }
    out.set_labels(labels)?;
    out.set_poincare(a.poincare() && b.poincare());

    if a.has_steenrod() && b.has_steenrod() {
        out.enable_steenrod()?;
        let max_k = n as u64;
        for (d, slot) in index.iter().enumerate() {
            for k in 1..=max_k {
                let Some(to) = out.op_degree(k).map(|od| d + od) else { break };
                if to > n {
                    break;
                }
                let rows: Vec<Vec<F::Elem>> = slot
                    .iter()
                    .map(|&(i, x, y)| {
                        let mut acc = out.zero_vec(to);
                        for s in 0..=k {
                            let u = a.apply_op(s, i, &a.basis(i, x));
                            let v = b.apply_op(k - s, d - i, &b.basis(d - i, y));
                            if u.is_empty() || v.is_empty() {
                                continue;
                            }
                            let ia = i + a.op_degree(s).unwrap();
                            let w = tensor(to, ia, &u, &v);
                            acc = acc.iter().zip(&w).map(|(p, q)| f.add(p, q)).collect();
                        }
                        acc
                    })
                    .collect();
                out.set_steenrod(k, d, rows)?;
            }
        }
    }
    Ok(out)
}

fn strip_field(name: &str) -> &str {
    name.rsplit_once('_').map(|(h, _)| h).unwrap_or(name)
}

/// `(S^2 × S^4) # g(S^3 × S^3)` over `Q`: basis `1, x, u_i, v_i, z, w` in
/// degrees 0, 2, 3, 3, 4, 6 with `xz = w`, `u_i v_i = w`, `x^2 = 0`.
pub fn build_connected_sum_m6(g: usize) -> Result<GradedAlgebra<Rationals>, RingError> {
    if g == 0 {
        return domain("M6 needs at least one S3xS3 summand");
    }
    let q = Rationals;
    let dims = vec![1, 0, 1, 2 * g, 1, 0, 1];
    let mut a = GradedAlgebra::zero_tables(q, dims, format!("M6g{g}_Q"))?;
    a.set_unit_products();
    let one = vec![q.one()];
    a.set_product(2, 0, 4, 0, one.clone())?;
    a.set_product(4, 0, 2, 0, one.clone())?;
    for i in 0..g {
        a.set_product(3, i, 3, g + i, one.clone())?;
        a.set_product(3, g + i, 3, i, vec![q.from_i64(-1)])?;
    }
    let mut labels = vec![vec!["1".to_string()], vec![], vec!["x".to_string()], Vec::new(), vec!["z".to_string()], vec![], vec!["w".to_string()]];
    labels[3] = (1..=g).map(|i| format!("u{i}")).chain((1..=g).map(|i| format!("v{i}"))).collect();
    a.set_labels(labels)?;
    a.set_poincare(true);
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::rings::validate;

    fn z(p: u32) -> PrimeField {
        PrimeField(Prime::new(p).unwrap())
    }

    #[test]
    fn documented_betti_numbers() {
        let cp2 = build_cp(2, Rationals).unwrap();
        assert_eq!(cp2.dims(), &[1, 0, 1, 0, 1]);
        assert_eq!(cp2.basis_product(2, 0, 2, 0).unwrap(), &[Rationals.one()]);

        let s3hp2 = build_product(&build_sphere(3, Rationals).unwrap(), &build_hp(2, Rationals).unwrap()).unwrap();
        for d in 0..=11 {
            let expected = usize::from([0, 3, 4, 7, 8, 11].contains(&d));
            assert_eq!(s3hp2.dim(d), expected, "degree {d}");
        }

        let m6 = build_connected_sum_m6(2).unwrap();
        assert_eq!(m6.dim(3), 4);
        assert_eq!(m6.euler(), 0);
        let m6 = build_connected_sum_m6(1).unwrap();
        assert_eq!((m6.b_odd(), m6.euler()), (2, 2));

        let hp2 = build_hp(2, Rationals).unwrap();
        assert_eq!((hp2.b_odd(), hp2.euler()), (0, 3));
        assert_eq!(build_sphere(3, Rationals).unwrap().b_odd(), 1);
    }

    #[test]
    fn builders_validate() {
        let rings = vec![
            build_sphere(4, z(2)).unwrap(),
            build_cp(3, z(2)).unwrap(),
            build_hp(3, z(2)).unwrap(),
            build_cp(4, z(3)).unwrap(),
            build_hp(3, z(3)).unwrap(),
            build_hp(2, z(5)).unwrap(),
            build_truncated_poly(2, 10, z(5)).unwrap(),
            build_truncated_poly(12, 3, z(3)).unwrap(),
            build_truncated_poly(8, 3, z(2)).unwrap(),
            build_truncated_poly(1, 5, z(2)).unwrap(),
            build_product(&build_sphere(3, z(2)).unwrap(), &build_cp(2, z(2)).unwrap()).unwrap(),
            build_product(&build_cp(2, z(3)).unwrap(), &build_hp(1, z(3)).unwrap()).unwrap(),
        ];
        for r in &rings {
            let report = validate(r);
            assert!(report.passed(), "{}: {:?}", r.name(), report.first_failure());
        }
    }

    #[test]
    fn cp3_mod2_squares() {
        let cp3 = build_cp(3, z(2)).unwrap();
        // Sq^2 x = x^2, Sq^2 x^2 = 0, Sq^4 x^2 = x^4 beyond range, Sq^2 x^3 beyond
        assert_eq!(cp3.apply_op(2, 2, &[1]), vec![1]);
        assert_eq!(cp3.apply_op(2, 4, &[1]), vec![0]);
        assert!(cp3.apply_op(4, 4, &[1]).is_empty());
    }

    #[test]
    fn rejects_unknown_actions() {
        assert!(build_truncated_poly(6, 3, z(2)).is_err());
        assert!(build_truncated_poly(3, 2, Rationals).is_err());
        assert!(build_truncated_poly(6, 2, z(5)).is_ok());
        assert!(build_truncated_poly(6, 5, z(5)).is_err());
        assert!(build_cp(0, Rationals).is_err());
    }
}
