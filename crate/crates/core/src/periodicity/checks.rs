use num_integer::Integer;
use serde::Serialize;
use serde_json::{json, Value};

use crate::field::Field;
use crate::linalg::solve_left;
use crate::rings::{validate, GradedAlgebra};

use super::{
    is_inducer, is_zero_vec, minimal_period, search_degree, InducerCheck, PeriodSpectrum, PeriodicityError,
    PeriodicityWitness,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Inapplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub ring: String,
    pub result: Outcome,
    pub witness: Value,
    pub locus: Value,
}

impl Verdict {
    fn new(check: &str, ring: &str, result: Outcome, witness: Value, locus: Value) -> Self {
        Verdict { check: check.to_string(), ring: ring.to_string(), result, witness, locus }
    }

    pub fn passed(&self) -> bool {
        self.result == Outcome::Pass
    }
}

fn violation<T>(msg: impl Into<String>) -> Result<T, PeriodicityError> {
    Err(PeriodicityError::HypothesisViolation(msg.into()))
}

fn locus_json<E>(c: &InducerCheck<E>) -> Value {
    match c {
        InducerCheck::Induces(_) => Value::Null,
        InducerCheck::Fails(l) => serde_json::to_value(l).unwrap(),
    }
}

/// Factorization lemma: if `x ∈ H^k` (nonzero, `2k ≤ c`) induces periodicity
/// up to `c` and `x^r = y·z` with `1 ≤ r ≤ c/k`, `deg y ≢ 0 mod k`, then `y`
/// induces periodicity. When `deg y > k` the element `y′` with
/// `y = x^s·y′`, `deg y′ < k`, is reported and checked as well.
///
/// When `deg y ≡ 0 mod k` and `y` is a nonzero multiple of `x^s` (`s ≥ 1`)
/// the factorization has the trivial shape and `x` itself is reported;
/// any other `y` in such a degree is a hypothesis violation.
pub fn check_factorization_lemma<F: Field>(
    alg: &GradedAlgebra<F>,
    k: usize,
    x: &[F::Elem],
    c: usize,
    r: usize,
    y: (usize, &[F::Elem]),
    z: (usize, &[F::Elem]),
) -> Result<Verdict, PeriodicityError> {
    const CHECK: &str = "factorization-lemma";
    let f = alg.field();
    let (dy, y) = y;
    let (dz, z) = z;
    if is_zero_vec(f, x) {
        return violation("x must be nonzero");
    }
    if 2 * k > c {
        return violation(format!("2k = {} exceeds c = {c}", 2 * k));
    }
    let xw = match is_inducer(alg, k, x, c)? {
        InducerCheck::Induces(w) => w,
        InducerCheck::Fails(l) => return violation(format!("x does not induce periodicity: {l:?}")),
    };
    if r == 0 || r * k > c {
        return violation(format!("r = {r} outside 1..={}", c / k));
    }
    if dy + dz != r * k || y.len() != alg.dim(dy) || z.len() != alg.dim(dz) {
        return violation(format!("degrees {dy} + {dz} do not match r·k = {}", r * k));
    }
    let xr = alg.power(k, x, r).expect("r·k ≤ c ≤ n");
    if alg.mul(dy, y, dz, z) != xr {
        return violation("x^r ≠ y·z");
    }
    if dy % k == 0 {
        let s = dy / k;
        if s == 0 {
            return violation("deg y ≡ 0 mod k with y a unit");
        }
        let xs = alg.power(k, x, s).unwrap();
        return match solve_left(f, &[xs], y) {
            Some(a) if !f.is_zero(&a[0]) => Ok(Verdict::new(
                CHECK,
                alg.name(),
                Outcome::Pass,
                json!({"shape": "trivial", "s": s, "coefficient": f.to_json(&a[0]), "x": xw.to_json(f)}),
                Value::Null,
            )),
            _ => violation(format!("deg y = {dy} ≡ 0 mod {k} and y is not a multiple of x^{s}")),
        };
    }
    let y_check = is_inducer(alg, dy, y, c)?;
    let mut witness = json!({"shape": "proper", "y_degree": dy, "x": xw.to_json(f)});
    let mut locus = json!({"y": locus_json(&y_check)});
    let mut ok = y_check.induces();
    if let Some(w) = y_check.witness() {
        witness["y"] = w.to_json(f);
    }
    if dy > k {
        let s = dy / k;
        let t = dy - s * k;
        let xs = alg.power(k, x, s).unwrap();
        let m = alg.mult_matrix(s * k, &xs, t);
        match solve_left(f, &m, y) {
            Some(yp) => {
                let yp_check = is_inducer(alg, t, &yp, c)?;
                ok &= yp_check.induces();
                witness["derived"] = json!({
                    "s": s,
                    "degree": t,
                    "element": yp.iter().map(|v| f.to_json(v)).collect::<Vec<_>>(),
                    "induces": yp_check.induces(),
                });
                locus["derived"] = locus_json(&yp_check);
            }
            None => {
                ok = false;
                locus["derived"] = json!({"reason": format!("y is not x^{s} times an element of degree {t}")});
            }
        }
    }
    let result = if ok { Outcome::Pass } else { Outcome::Fail };
    Ok(Verdict::new(CHECK, alg.name(), result, witness, locus))
}

fn spectrum_witness<F: Field>(f: &F, s: &PeriodSpectrum<F::Elem>) -> Value {
    json!({
        "minimal_period": s.minimal_period,
        "minimal_inducer": s.minimal_inducer.as_ref().map(|w| w.to_json(f)),
    })
}

/// Over `Z_2`: the least degree `l` of a nonzero inducer with `2l ≤ c` is a power of 2.
pub fn check_power_of_two_theorem<F: Field>(alg: &GradedAlgebra<F>, c: usize) -> Result<Verdict, PeriodicityError> {
    const CHECK: &str = "power-of-two";
    if !alg.prime().is_some_and(|p| p.is_two()) {
        return Err(PeriodicityError::WrongField(format!("{} is not over Z_2", alg.name())));
    }
    let f = alg.field();
    let s = minimal_period(alg, c)?;
    let mut witness = spectrum_witness(f, &s);
    let Some(l) = s.minimal_inducer.as_ref().map(|w| w.degree).filter(|&l| 2 * l <= c) else {
        let reason = if (1..c).all(|i| alg.dim(i) == 0) { "sphere convention" } else { "no inducer with 2l ≤ c" };
        return Ok(Verdict::new(CHECK, alg.name(), Outcome::Inapplicable, witness, json!({"reason": reason})));
    };
    witness["l"] = json!(l);
    if l.is_power_of_two() {
        witness["exponent"] = json!(l.trailing_zeros());
        Ok(Verdict::new(CHECK, alg.name(), Outcome::Pass, witness, Value::Null))
    } else {
        Ok(Verdict::new(CHECK, alg.name(), Outcome::Fail, witness, json!({"l": l})))
    }
}

/// `l = 2λp^r` with `λ | p−1`, if such a form exists.
pub fn decompose_odd_period(l: usize, p: usize) -> Option<(usize, u32)> {
    if l == 0 || l % 2 == 1 {
        return None;
    }
    let (mut lambda, mut r) = (l / 2, 0);
    while lambda % p == 0 {
        lambda /= p;
        r += 1;
    }
    ((p - 1) % lambda == 0).then_some((lambda, r))
}

/// Over `Z_p`, `p` odd: the least degree `l` of a nonzero inducer with
/// `pl ≤ c` has the form `2λp^r` with `λ | p−1`.
pub fn check_odd_p_theorem<F: Field>(alg: &GradedAlgebra<F>, c: usize) -> Result<Verdict, PeriodicityError> {
    const CHECK: &str = "odd-p";
    let p = match alg.prime() {
        Some(p) if !p.is_two() => p.get() as usize,
        _ => return Err(PeriodicityError::WrongField(format!("{} is not over an odd prime field", alg.name()))),
    };
    let f = alg.field();
    let s = minimal_period(alg, c)?;
    let mut witness = spectrum_witness(f, &s);
    let Some(l) = s.minimal_inducer.as_ref().map(|w| w.degree).filter(|&l| p * l <= c) else {
        let reason = if (1..c).all(|i| alg.dim(i) == 0) { "sphere convention" } else { "no inducer with pl ≤ c" };
        return Ok(Verdict::new(CHECK, alg.name(), Outcome::Inapplicable, witness, json!({"reason": reason})));
    };
    witness["l"] = json!(l);
    match decompose_odd_period(l, p) {
        Some((lambda, r)) => {
            witness["lambda"] = json!(lambda);
            witness["r"] = json!(r);
            Ok(Verdict::new(CHECK, alg.name(), Outcome::Pass, witness, Value::Null))
        }
        None => Ok(Verdict::new(CHECK, alg.name(), Outcome::Fail, witness, json!({"l": l}))),
    }
}

/// For every `d1 > d2` in `set`, is `d1 − d2` in `set`?
pub fn difference_closed(set: &[usize]) -> Option<(usize, usize)> {
    for &a in set {
        for &b in set {
            if a > b && !set.contains(&(a - b)) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Over `Q`: a `k`-periodic ring with `3k ≤ n` is `gcd(4, k)`-periodic.
///
/// `D` collects the degrees `d` with `2d ≤ c` carrying an inducer up to `c`
/// (markers included); it must be closed under positive differences and
/// contain `gcd(4, k)`.
pub fn rational_gcd_periodicity<F: Field>(
    alg: &GradedAlgebra<F>,
    k: usize,
    c: usize,
) -> Result<Verdict, PeriodicityError> {
    const CHECK: &str = "gcd-closure";
    if alg.prime().is_some() {
        return Err(PeriodicityError::WrongField(format!("{} is not over Q", alg.name())));
    }
    let n = alg.n();
    if k == 0 || k > n || c > n {
        return Err(PeriodicityError::DegreeOutOfRange { k, c, n });
    }
    let g = k.gcd(&4);
    if alg.is_homology_sphere() {
        return Ok(Verdict::new(
            CHECK,
            alg.name(),
            Outcome::Pass,
            json!({"k": k, "gcd": g, "vacuous": "rational homology sphere"}),
            Value::Null,
        ));
    }
    let kw = search_degree(alg, k, c)?;
    let Some(kw) = kw.marker.as_ref().or(kw.first_nonzero()) else {
        return violation(format!("no element of degree {k} induces periodicity up to {c}"));
    };
    let mut d = Vec::new();
    for deg in 1..=c / 2 {
        if search_degree(alg, deg, c)?.has_any() {
            d.push(deg);
        }
    }
    let mut witness = json!({"k": k, "gcd": g, "D": d, "k_witness": kw.to_json(alg.field())});
    if 3 * k > n {
        return Ok(Verdict::new(
            CHECK,
            alg.name(),
            Outcome::Inapplicable,
            witness,
            json!({"reason": format!("3k = {} exceeds n = {n}", 3 * k)}),
        ));
    }
    let gap = difference_closed(&d);
    let has_gcd = d.contains(&g);
    witness["closed"] = json!(gap.is_none());
    let result = if gap.is_none() && has_gcd { Outcome::Pass } else { Outcome::Fail };
    let locus = if result == Outcome::Pass {
        Value::Null
    } else {
        json!({"missing_difference": gap.map(|(a, b)| vec![a, b]), "gcd_in_D": has_gcd})
    };
    Ok(Verdict::new(CHECK, alg.name(), result, witness, locus))
}

/// A degree-4 inducer up to `n`: a nonzero element, or the marker.
pub(crate) fn four_periodicity_witness<F: Field>(
    alg: &GradedAlgebra<F>,
) -> Result<Option<PeriodicityWitness<F::Elem>>, PeriodicityError> {
    if alg.n() < 4 {
        return Ok(None);
    }
    let w = search_degree(alg, 4, alg.n())?;
    Ok(w.first_nonzero().or(w.marker.as_ref()).cloned())
}

/// Over `Q`: a simply connected (`d_1 = 0`) 4-periodic Poincaré duality
/// algebra with `n ≡ 0 mod 4` has `b_odd = 0`.
pub fn check_bodd_corollary<F: Field>(alg: &GradedAlgebra<F>) -> Result<Verdict, PeriodicityError> {
    const CHECK: &str = "bodd";
    if alg.prime().is_some() {
        return Err(PeriodicityError::WrongField(format!("{} is not over Q", alg.name())));
    }
    let n = alg.n();
    let inapplicable =
        |reason: String| Ok(Verdict::new(CHECK, alg.name(), Outcome::Inapplicable, Value::Null, json!({"reason": reason})));
    if alg.dim(1) != 0 {
        return inapplicable(format!("d_1 = {}", alg.dim(1)));
    }
    if n == 0 || n % 4 != 0 {
        return inapplicable(format!("n = {n} is not a positive multiple of 4"));
    }
    let mut pd_ring = alg.clone();
    pd_ring.set_poincare(true);
    let pd_ok = validate(&pd_ring).checks.iter().all(|c| c.axiom != "poincare-duality" || c.passed);
    if !pd_ok {
        return inapplicable("Poincaré duality fails".into());
    }
    let Some(w) = four_periodicity_witness(alg)? else {
        return inapplicable("no degree-4 periodicity witness".into());
    };
    let b = alg.b_odd();
    let witness = json!({"b_odd": b, "periodicity": w.to_json(alg.field())});
    if b == 0 {
        Ok(Verdict::new(CHECK, alg.name(), Outcome::Pass, witness, Value::Null))
    } else {
        let odd: Vec<usize> = (1..=n).step_by(2).filter(|&i| alg.dim(i) != 0).collect();
        Ok(Verdict::new(CHECK, alg.name(), Outcome::Fail, witness, json!({"odd_degrees": odd})))
    }
}
