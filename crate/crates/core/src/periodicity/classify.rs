use serde::Serialize;

use crate::field::Field;
use crate::rings::GradedAlgebra;

use super::checks::four_periodicity_witness;
use super::PeriodicityError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FourPeriodicLabel {
    #[serde(rename = "sphere")]
    Sphere,
    #[serde(rename = "CP")]
    Cp,
    #[serde(rename = "HP")]
    Hp,
    #[serde(rename = "S3xHP")]
    S3xHp,
    #[serde(rename = "S2xHP")]
    S2xHp,
    #[serde(rename = "M6-family")]
    M6Family,
    #[serde(rename = "other")]
    Other,
}

impl FourPeriodicLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            FourPeriodicLabel::Sphere => "sphere",
            FourPeriodicLabel::Cp => "CP",
            FourPeriodicLabel::Hp => "HP",
            FourPeriodicLabel::S3xHp => "S3xHP",
            FourPeriodicLabel::S2xHp => "S2xHP",
            FourPeriodicLabel::M6Family => "M6-family",
            FourPeriodicLabel::Other => "other",
        }
    }
}

fn betti_is(alg: &GradedAlgebra<impl Field>, rule: impl Fn(usize) -> usize) -> bool {
    (0..=alg.n()).all(|i| alg.dim(i) == rule(i))
}

fn nonzero<F: Field>(f: &F, v: &Option<Vec<F::Elem>>) -> bool {
    v.as_ref().is_some_and(|v| v.iter().any(|c| !f.is_zero(c)))
}

/// Generator of a one-dimensional `H^d`.
fn gen<F: Field>(alg: &GradedAlgebra<F>, d: usize) -> Vec<F::Elem> {
    alg.basis(d, 0)
}

/// Matches a 4-periodic rational ring against the model list.
///
/// The ring is 4-periodic when a nonzero degree-4 element induces
/// periodicity up to `n`, when `n ≤ 4`, or when it is a rational homology
/// sphere.
pub fn classify_4periodic<F: Field>(alg: &GradedAlgebra<F>) -> Result<FourPeriodicLabel, PeriodicityError> {
    if alg.prime().is_some() {
        return Err(PeriodicityError::WrongField(format!("{} is not over Q", alg.name())));
    }
    let f = alg.field();
    let n = alg.n();
    let sphere = alg.is_homology_sphere();
    let periodic = sphere || n <= 4 || four_periodicity_witness(alg)?.is_some_and(|w| !w.zero_marker);
    if !periodic {
        return Err(PeriodicityError::NotFourPeriodic(format!("{}: no degree-4 inducer up to {n}", alg.name())));
    }
    if sphere {
        return Ok(FourPeriodicLabel::Sphere);
    }
    let pow = |d: usize, r: usize| alg.power(d, &gen(alg, d), r);

    if n % 2 == 0 && betti_is(alg, |i| usize::from(i % 2 == 0)) && nonzero(f, &pow(2, n / 2)) {
        return Ok(FourPeriodicLabel::Cp);
    }
    if n % 4 == 0 && betti_is(alg, |i| usize::from(i % 4 == 0)) && nonzero(f, &pow(4, n / 4)) {
        return Ok(FourPeriodicLabel::Hp);
    }
    if n % 4 == 3 && betti_is(alg, |i| usize::from(i % 4 == 0 || i % 4 == 3)) {
        let top = pow(4, (n - 3) / 4).unwrap();
        if nonzero(f, &Some(alg.mul(3, &gen(alg, 3), n - 3, &top))) {
            return Ok(FourPeriodicLabel::S3xHp);
        }
    }
    if n % 4 == 2 && betti_is(alg, |i| usize::from(i % 4 == 0 || i % 4 == 2)) {
        let x = gen(alg, 2);
        let top = pow(4, (n - 2) / 4).unwrap();
        let x2_zero = !nonzero(f, &pow(2, 2));
        if x2_zero && nonzero(f, &Some(alg.mul(2, &x, n - 2, &top))) {
            return Ok(FourPeriodicLabel::S2xHp);
        }
    }
    if n == 6 {
        let b = alg.betti();
        let g = b[3] / 2;
        if g >= 1 && b == vec![1, 0, 1, 2 * g, 1, 0, 1] && !nonzero(f, &pow(2, 2)) {
            return Ok(FourPeriodicLabel::M6Family);
        }
    }
    Ok(FourPeriodicLabel::Other)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::rings::{build_connected_sum_m6, build_cp, build_hp, build_product, build_sphere};
    use crate::steenrod::Prime;

    #[test]
    fn documented_labels() {
        let q = Rationals;
        assert_eq!(classify_4periodic(&build_hp(3, q).unwrap()).unwrap(), FourPeriodicLabel::Hp);
        let s2hp = build_product(&build_sphere(2, q).unwrap(), &build_hp(2, q).unwrap()).unwrap();
        assert_eq!(classify_4periodic(&s2hp).unwrap(), FourPeriodicLabel::S2xHp);
        assert_eq!(classify_4periodic(&build_connected_sum_m6(3).unwrap()).unwrap(), FourPeriodicLabel::M6Family);
        assert_eq!(classify_4periodic(&build_cp(5, q).unwrap()).unwrap(), FourPeriodicLabel::Cp);
        assert_eq!(classify_4periodic(&build_sphere(9, q).unwrap()).unwrap(), FourPeriodicLabel::Sphere);
        let s3hp = build_product(&build_sphere(3, q).unwrap(), &build_hp(3, q).unwrap()).unwrap();
        assert_eq!(classify_4periodic(&s3hp).unwrap(), FourPeriodicLabel::S3xHp);
    }

    #[test]
    fn rejects_non_periodic() {
        let q = Rationals;
        let s3s5 = build_product(&build_sphere(3, q).unwrap(), &build_sphere(5, q).unwrap()).unwrap();
        assert!(matches!(classify_4periodic(&s3s5), Err(PeriodicityError::NotFourPeriodic(_))));
        assert!(classify_4periodic(&build_cp(2, PrimeField(Prime::TWO)).unwrap()).is_err());
    }
}
