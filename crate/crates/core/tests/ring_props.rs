use std::collections::HashSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use steenweb::field::{Field, PrimeField, Rationals};
use steenweb::linalg::rank;
use steenweb::periodicity::{classify_4periodic, is_inducer, FourPeriodicLabel};
use steenweb::rings::random::random_ring;
use steenweb::rings::{
    build_connected_sum_m6, build_cp, build_hp, build_product, build_sphere, build_truncated_poly, AnyAlgebra,
    GradedAlgebra, RingError,
};
use steenweb::steenrod::{PolyAction, Prime};

fn fp(p: u32) -> PrimeField {
    PrimeField(Prime::new(p).unwrap())
}

/// `(kind, a, b)` picks a sphere, CP, HP, truncated ring or product.
fn build<F: Field>(f: F, kind: u8, a: usize, b: usize) -> Result<GradedAlgebra<F>, RingError> {
    match kind {
        0 => build_sphere(a, f),
        1 => build_cp(a, f),
        2 => build_hp(a, f),
        3 => build_truncated_poly(a, b, f),
        4 => build_product(&build_sphere(a, f.clone())?, &build_cp(b, f)?),
        _ => build_product(&build_hp(a.min(3), f.clone())?, &build_sphere(b + 1, f)?),
    }
}

fn pairing_is_perfect<F: Field>(alg: &GradedAlgebra<F>) -> bool {
    let n = alg.n();
    (0..=n).all(|i| {
        let (d, e) = (alg.dim(i), alg.dim(n - i));
        let m: Vec<Vec<F::Elem>> =
            (0..d).map(|a| (0..e).map(|b| alg.mul(i, &alg.basis(i, a), n - i, &alg.basis(n - i, b))[0].clone()).collect()).collect();
        d == e && rank(alg.field(), &m, e) == d
    })
}

fn check_builder<F: Field>(alg: Result<GradedAlgebra<F>, RingError>) -> Result<(), TestCaseError>
where
    AnyAlgebra: From<GradedAlgebra<F>>,
{
    let Ok(alg) = alg else { return Ok(()) };
    let report = steenweb::rings::validate(&alg);
    prop_assert!(report.passed(), "{} {:?}", alg.name(), report.first_failure());
    prop_assert!(pairing_is_perfect(&alg), "{}", alg.name());
    let any = AnyAlgebra::from(alg);
    prop_assert_eq!(AnyAlgebra::from_json_str(&any.to_json_string()).unwrap(), any);
    Ok(())
}

fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `Z_p` vectors of length `d`, all of them.
fn vectors(p: u32, d: usize) -> Vec<Vec<u32>> {
    (0..(p as usize).pow(d as u32))
        .map(|mut i| {
            (0..d)
                .map(|_| {
                    let c = (i % p as usize) as u32;
                    i /= p as usize;
                    c
                })
                .collect()
        })
        .collect()
}

/// Surjectivity and injectivity of `y ↦ xy` read off by enumerating `H^i`.
fn inducer_oracle(alg: &GradedAlgebra<PrimeField>, k: usize, x: &[u32], c: usize) -> bool {
    let p = alg.field().0.get();
    if x.iter().all(|&v| v == 0) {
        return 2 * k <= c && (1..c).all(|i| alg.dim(i) == 0);
    }
    (0..=c - k).all(|i| {
        let images: HashSet<Vec<u32>> = vectors(p, alg.dim(i)).iter().map(|y| alg.mul(k, x, i, y)).collect();
        let onto = i >= c - k || images.len() == (p as usize).pow(alg.dim(i + k) as u32);
        let one_to_one = i == 0 || images.len() == (p as usize).pow(alg.dim(i) as u32);
        onto && one_to_one
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn builders_validate(kind in 0u8..6, a in 1usize..7, b in 1usize..5, field in 0u8..4) {
        match field {
            0 => check_builder(build(Rationals, kind, a, b))?,
            1 => check_builder(build(fp(2), kind, a, b))?,
            2 => check_builder(build(fp(3), kind, a, b))?,
            _ => check_builder(build(fp(5), kind, a, b))?,
        }
    }

    #[test]
    fn kunneth_betti(ka in 0u8..4, a in 1usize..6, kb in 0u8..4, b in 1usize..6, two in any::<bool>()) {
        let f = if two { fp(2) } else { fp(3) };
        let (Ok(x), Ok(y)) = (build(f, ka, a, 2), build(f, kb, b, 2)) else { return Ok(()) };
        let prod = build_product(&x, &y).unwrap();
        prop_assert_eq!(prod.betti(), convolve(&x.betti(), &y.betti()));
    }

    #[test]
    fn classification_round_trip(kind in 0u8..6, m in 2usize..6) {
        let q = Rationals;
        let (ring, label) = match kind {
            0 => (build_sphere(m + 1, q), FourPeriodicLabel::Sphere),
            1 => (build_cp(m, q), FourPeriodicLabel::Cp),
            2 => (build_hp(m, q), FourPeriodicLabel::Hp),
            3 => (build_product(&build_sphere(3, q).unwrap(), &build_hp(m - 1, q).unwrap()), FourPeriodicLabel::S3xHp),
            4 => (build_product(&build_sphere(2, q).unwrap(), &build_hp(m - 1, q).unwrap()), FourPeriodicLabel::S2xHp),
            _ => (build_connected_sum_m6(m - 1), FourPeriodicLabel::M6Family),
        };
        prop_assert_eq!(classify_4periodic(&ring.unwrap()).unwrap(), label);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn is_inducer_matches_enumeration(seed in any::<u64>(), p in prop_oneof![Just(2u32), Just(3), Just(5)], pick in any::<prop::sample::Index>(), xs in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = random_ring(Prime::new(p).unwrap(), &mut rng);
        let n = alg.n();
        let k = 1 + pick.index(n);
        let x: Vec<u32> = (0..alg.dim(k)).map(|i| ((xs >> (4 * i)) % u64::from(p)) as u32).collect();
        let c = n - pick.index(n - k + 1);
        prop_assert_eq!(is_inducer(&alg, k, &x, c).unwrap().induces(), inducer_oracle(&alg, k, &x, c));
    }

    #[test]
    fn truncated_tables_match_polynomial_action(p in prop_oneof![Just(2u32), Just(3), Just(5)], e in 0u32..3, lambda in 1u64..5, q in 1usize..8) {
        let prime = Prime::new(p).unwrap();
        let pp = u64::from(p);
        // x = t^s with s = |x| / |t|
        let (k, s) = if prime.is_two() {
            (2usize.pow(e), 2u32.pow(e))
        } else {
            prop_assume!((pp - 1) % lambda == 0);
            let s = lambda * pp.pow(e);
            (2 * s as usize, s as u32)
        };
        let Ok(alg) = build_truncated_poly(k, q, fp(p)) else { return Ok(()) };
        let act = PolyAction::new(prime, 1);
        let step = alg.op_degree(1).unwrap();
        for i in 1..=q {
            for op in 1..=((alg.n() - i * k) / step) as u64 {
                let ring = alg.apply_op(op, i * k, &[1]);
                let image = act.apply_op(op, &PolyAction::monomial_poly(vec![s * i as u32]));
                let target = i * k + op as usize * step;
                // the image is c·t^{s·i + op·(p-1)}, or c·t^{s·i + op} at p = 2
                let coeff = image.values().next().copied().unwrap_or(0);
                if target % k != 0 {
                    prop_assert_eq!(coeff, 0);
                    continue;
                }
                prop_assert_eq!(ring.first().copied().unwrap_or(0), coeff, "op {} on x^{}", op, i);
            }
        }
    }
}
