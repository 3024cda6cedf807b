use proptest::prelude::*;

use steenweb::steenrod::{
    adem_reduce, hit_decompose, p_adic_split, sq_power_of_two_decomposition, Monomial, PolyAction, Prime,
    SqDecomposition, SteenrodElement,
};

fn prime() -> impl Strategy<Value = Prime> {
    prop_oneof![Just(2u32), Just(3), Just(5)].prop_map(|p| Prime::new(p).unwrap())
}

/// Signed sums of rotations of `exps`, hence homogeneous.
fn rotations(p: Prime, exps: Vec<u64>) -> impl Strategy<Value = SteenrodElement> {
    prop::collection::vec((any::<prop::sample::Index>(), 0..p.get()), 1..4).prop_map(move |terms| {
        let n = exps.len();
        SteenrodElement::from_terms(
            p,
            terms.into_iter().map(|(rot, c)| {
                let k = rot.index(n);
                (Monomial::new(exps[k..].iter().chain(&exps[..k]).copied()), c)
            }),
        )
    })
}

fn exponents() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..7, 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduction_is_canonical(e in (prime(), exponents()).prop_flat_map(|(p, x)| rotations(p, x))) {
        let r = adem_reduce(&e);
        prop_assert!(r.is_canonical());
        prop_assert_eq!(adem_reduce(&r), r.clone());
        if !r.is_zero() {
            prop_assert_eq!(r.degree(), e.degree());
        }
    }

    #[test]
    fn reduction_is_linear(
        (e, f, alpha) in (prime(), exponents())
            .prop_flat_map(|(p, x)| (rotations(p, x.clone()), rotations(p, x), 0..p.get()))
    ) {
        let lhs = adem_reduce(&e.scale(alpha).add(&f).unwrap());
        let rhs = adem_reduce(&e).scale(alpha).add(&adem_reduce(&f)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduced_composite_acts_like_the_composite(
        a in prop::collection::vec(1u64..6, 1..3),
        b in prop::collection::vec(1u64..6, 1..3),
        f in prop::collection::vec(0u32..5, 3),
        odd in any::<bool>(),
    ) {
        let p = if odd { Prime::THREE } else { Prime::TWO };
        let (a, b) = (Monomial::new(a), Monomial::new(b));
        let act = PolyAction::new(p, 3);
        let f = PolyAction::monomial_poly(f);
        let reduced = adem_reduce(&SteenrodElement::from_monomial(p, a.compose(&b)));
        prop_assert_eq!(act.apply(&reduced, &f), act.apply_monomial(&a, &act.apply_monomial(&b, &f)));
    }

    #[test]
    fn sq_decomposition_marker_iff_power_of_two(l in 1u64..=256) {
        match sq_power_of_two_decomposition(l) {
            SqDecomposition::PowerOfTwo => prop_assert!(l.is_power_of_two()),
            d => {
                prop_assert!(!l.is_power_of_two());
                prop_assert!(d.verify(l));
            }
        }
    }

    #[test]
    fn hit_decompositions_verify(odd5 in any::<bool>(), k in 1u64..=200, m in any::<prop::sample::Index>()) {
        let p = if odd5 { Prime::new(5).unwrap() } else { Prime::THREE };
        let lambda = p_adic_split(p, k).unwrap().lambda;
        let m = 1 + m.index(lambda as usize) as u64;
        prop_assert!(hit_decompose(p, k, m).unwrap().verify());
    }
}
