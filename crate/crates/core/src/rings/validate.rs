use serde::Serialize;
use serde_json::{json, Value};

use crate::field::Field;
use crate::linalg::rank;
use crate::steenrod::adem_relation;

use super::GradedAlgebra;

/// Failures kept per axiom; the total is still counted.
const MAX_WITNESSES: usize = 8;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Failure {
    pub witness: Value,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    pub cases: u64,
    pub total_failures: u64,
    pub failures: Vec<Failure>,
}

impl AxiomCheck {
    fn new(axiom: &str) -> Self {
        AxiomCheck { axiom: axiom.to_string(), passed: true, cases: 0, total_failures: 0, failures: Vec::new() }
    }

    fn case(&mut self, ok: bool, witness: impl FnOnce() -> (Value, String)) {
        self.cases += 1;
        if ok {
            return;
        }
        self.passed = false;
        self.total_failures += 1;
        if self.failures.len() < MAX_WITNESSES {
            let (witness, detail) = witness();
            self.failures.push(Failure { witness, detail });
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ValidationReport {
    pub ring: String,
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<(&str, &Failure)> {
        self.checks
            .iter()
            .find_map(|c| c.failures.first().map(|f| (c.axiom.as_str(), f)))
    }
}

fn cls(i: usize, a: usize) -> Value {
    json!([i, a])
}

/// Checks every ring axiom and, when present, the Steenrod axioms.
pub fn validate<F: Field>(alg: &GradedAlgebra<F>) -> ValidationReport {
    let mut checks = vec![unit(alg), commutativity(alg), associativity(alg)];
    if alg.poincare() {
        checks.push(poincare(alg));
    }
    if alg.has_steenrod() {
        checks.extend(steenrod(alg));
    }
    ValidationReport { ring: alg.name().to_string(), checks }
}

fn unit<F: Field>(alg: &GradedAlgebra<F>) -> AxiomCheck {
    let mut c = AxiomCheck::new("unit");
    c.case(alg.dim(0) == 1, || (json!({"degree": 0}), format!("d_0 = {}", alg.dim(0))));
    if alg.dim(0) != 1 {
        return c;
    }
    for j in 0..=alg.n() {
        for b in 0..alg.dim(j) {
            let e = alg.basis(j, b);
            let left = alg.basis_product(0, 0, j, b).unwrap();
            let right = alg.basis_product(j, b, 0, 0).unwrap();
            c.case(left == e.as_slice() && right == e.as_slice(), || {
                (json!({"a": cls(j, b)}), "1·a or a·1 differs from a".into())
            });
        }
    }
    c
}

fn commutativity<F: Field>(alg: &GradedAlgebra<F>) -> AxiomCheck {
    let f = alg.field();
    let mut c = AxiomCheck::new("graded-commutativity");
    for i in 0..=alg.n() {
        for j in i..=alg.n() - i {
            for a in 0..alg.dim(i) {
                for b in 0..alg.dim(j) {
                    let ab = alg.basis_product(i, a, j, b).unwrap();
                    let ba = alg.basis_product(j, b, i, a).unwrap();
                    let ok = if (i * j) % 2 == 0 {
                        ab == ba
                    } else {
                        ab.iter().zip(ba).all(|(x, y)| f.is_zero(&f.add(x, y)))
                    };
                    c.case(ok, || {
                        (
                            json!({"a": cls(i, a), "b": cls(j, b)}),
                            format!("b·a ≠ (-1)^{} a·b", i * j),
                        )
                    });
                }
            }
        }
    }
    c
}

fn associativity<F: Field>(alg: &GradedAlgebra<F>) -> AxiomCheck {
    let mut c = AxiomCheck::new("associativity");
    let n = alg.n();
    for i in 1..=n {
        for j in 1..=n - i {
            for k in 1..=n - i - j {
                for a in 0..alg.dim(i) {
                    for b in 0..alg.dim(j) {
                        let ab = alg.basis_product(i, a, j, b).unwrap();
                        for cc in 0..alg.dim(k) {
                            let left = alg.mul(i + j, ab, k, &alg.basis(k, cc));
                            let bc = alg.basis_product(j, b, k, cc).unwrap();
                            let right = alg.mul(i, &alg.basis(i, a), j + k, bc);
                            c.case(left == right, || {
                                (
                                    json!({"a": cls(i, a), "b": cls(j, b), "c": cls(k, cc)}),
                                    "(ab)c ≠ a(bc)".into(),
                                )
                            });
                        }
                    }
                }
            }
        }
    }
    c
}

fn poincare<F: Field>(alg: &GradedAlgebra<F>) -> AxiomCheck {
    let mut c = AxiomCheck::new("poincare-duality");
    let n = alg.n();
    c.case(alg.dim(n) == 1, || (json!({"degree": n}), format!("d_n = {}", alg.dim(n))));
    if alg.dim(n) != 1 {
        return c;
    }
    for i in 0..=n {
        let (di, dj) = (alg.dim(i), alg.dim(n - i));
        let pairing: Vec<Vec<F::Elem>> = (0..di)
            .map(|a| (0..dj).map(|b| alg.basis_product(i, a, n - i, b).unwrap()[0].clone()).collect())
            .collect();
        let r = rank(alg.field(), &pairing, dj);
        c.case(di == dj && r == di, || {
            (
                json!({"degree": i, "dual_degree": n - i}),
                format!("pairing {di}x{dj} has rank {r}"),
            )
        });
    }
    c
}

fn steenrod<F: Field>(alg: &GradedAlgebra<F>) -> Vec<AxiomCheck> {
    let f = alg.field();
    let p = alg.prime().expect("Steenrod tables live over Z_p");
    let n = alg.n();
    let tables = alg.steenrod_tables().unwrap();
    let unstable_bound = |k: u64| if p.is_two() { k as usize } else { 2 * k as usize };

    let mut identity = AxiomCheck::new("steenrod-identity");
    for d in 0..=n {
        if let Some(m) = tables.get(&(0, d)) {
            let ok = (0..alg.dim(d)).all(|a| m[a] == alg.basis(d, a));
            identity.case(ok, || (json!({"op": 0, "degree": d}), "operation 0 is not the identity".into()));
        }
    }

    let mut vanishing = AxiomCheck::new("steenrod-vanishing");
    for (&(k, d), m) in tables {
        let zero = m.iter().flatten().all(|v| f.is_zero(v));
        vanishing.case(unstable_bound(k) <= d || zero, || {
            (json!({"op": k, "degree": d}), "operation above the unstable range is nonzero".into())
        });
    }

    let mut top = AxiomCheck::new("steenrod-top-power");
    for d in 1..=n {
        if !p.is_two() && d % 2 == 1 {
            continue;
        }
        let k = if p.is_two() { d as u64 } else { d as u64 / 2 };
        let r = if p.is_two() { 2 } else { p.get() as usize };
        for a in 0..alg.dim(d) {
            let x = alg.basis(d, a);
            let op = alg.apply_op(k, d, &x);
            let pow = alg.power(d, &x, r).unwrap_or_default();
            top.case(op == pow, || {
                (json!({"op": k, "x": cls(d, a)}), "top operation differs from the p-th power".into())
            });
        }
    }

    let mut cartan = AxiomCheck::new("steenrod-cartan");
    for i in 0..=n {
        for j in 0..=n - i {
            for k in 1.. {
                let to = i + j + alg.op_degree(k).unwrap();
                if to > n {
                    break;
                }
                for a in 0..alg.dim(i) {
                    for b in 0..alg.dim(j) {
                        let (x, y) = (alg.basis(i, a), alg.basis(j, b));
                        let lhs = alg.apply_op(k, i + j, alg.basis_product(i, a, j, b).unwrap());
                        let mut rhs = alg.zero_vec(to);
                        for s in 0..=k {
                            let u = alg.apply_op(s, i, &x);
                            let v = alg.apply_op(k - s, j, &y);
                            if u.is_empty() || v.is_empty() {
                                continue;
                            }
                            let w = alg.mul(i + alg.op_degree(s).unwrap(), &u, j + alg.op_degree(k - s).unwrap(), &v);
                            rhs = rhs.iter().zip(&w).map(|(s, t)| f.add(s, t)).collect();
                        }
                        cartan.case(lhs == rhs, || {
                            (
                                json!({"op": k, "a": cls(i, a), "b": cls(j, b)}),
                                "Cartan formula fails".into(),
                            )
                        });
                    }
                }
            }
        }
    }

    let mut adem = AxiomCheck::new("steenrod-adem");
    let factor = if p.is_two() { 2 } else { p.get() as u64 };
    for d in 0..=n {
        for x_idx in 0..alg.dim(d) {
            let x = alg.basis(d, x_idx);
            for b in 1.. {
                let db = alg.op_degree(b).unwrap();
                if d + db > n {
                    break;
                }
                let sb = alg.apply_op(b, d, &x);
                for a in 1..factor * b {
                    let to = d + db + alg.op_degree(a).unwrap();
                    if to > n {
                        break;
                    }
                    let lhs = alg.apply_op(a, d + db, &sb);
                    let mut rhs = alg.zero_vec(to);
                    for (hi, lo, c) in adem_relation(p, a, b) {
                        let inner = alg.apply_op(lo, d, &x);
                        let outer = alg.apply_op(hi, d + alg.op_degree(lo).unwrap(), &inner);
                        let c = f.from_i64(c as i64);
                        rhs = rhs.iter().zip(&outer).map(|(s, t)| f.add(s, &f.mul(&c, t))).collect();
                    }
                    adem.case(lhs == rhs, || {
                        (json!({"a": a, "b": b, "x": cls(d, x_idx)}), "Adem relation fails".into())
                    });
                }
            }
        }
    }

    vec![identity, vanishing, top, cartan, adem]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::rings::{build_cp, build_sphere};
    use crate::steenrod::Prime;

    #[test]
    fn sphere_passes() {
        let s4 = build_sphere(4, PrimeField(Prime::TWO)).unwrap();
        assert!(validate(&s4).passed());
    }

    #[test]
    fn detects_commutativity_failure() {
        let q = Rationals;
        // S3 x S3 with u·v = v·u (wrong sign)
        let mut a = GradedAlgebra::zero_tables(q, vec![1, 0, 0, 2, 0, 0, 1], "bad").unwrap();
        a.set_unit_products();
        a.set_product(3, 0, 3, 1, vec![q.one()]).unwrap();
        a.set_product(3, 1, 3, 0, vec![q.one()]).unwrap();
        let report = validate(&a);
        assert!(!report.passed());
        let (axiom, failure) = report.first_failure().unwrap();
        assert_eq!(axiom, "graded-commutativity");
        assert_eq!(failure.witness, json!({"a": [3, 0], "b": [3, 1]}));
    }

    #[test]
    fn detects_broken_top_power() {
        let mut cp2 = build_cp(2, PrimeField(Prime::TWO)).unwrap();
        cp2.set_steenrod(2, 2, vec![vec![0]]).unwrap();
        let report = validate(&cp2);
        assert!(!report.passed());
        assert!(report.checks.iter().any(|c| c.axiom == "steenrod-top-power" && !c.passed));
    }

    #[test]
    fn detects_missing_poincare_pairing() {
        let q = Rationals;
        let mut a = GradedAlgebra::zero_tables(q, vec![1, 0, 1, 0, 1], "flat").unwrap();
        a.set_unit_products();
        a.set_poincare(true);
        let report = validate(&a);
        assert!(report.checks.iter().any(|c| c.axiom == "poincare-duality" && !c.passed));
    }
}
