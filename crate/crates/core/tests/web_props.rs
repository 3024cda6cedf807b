use proptest::prelude::*;

use steenweb::suites::rank_for;
use steenweb::web::{check_result, find_certificate, random_model, IsotropyModel, SearchMode, Web};

/// Arbitrary valid models with `n ≤ 16` and `r ≤ 5`.
fn model() -> impl Strategy<Value = IsotropyModel> {
    (1usize..=8, 1usize..=5)
        .prop_flat_map(|(planes, r)| prop::collection::vec(prop::collection::vec(-2i64..=2, planes), r.min(planes)))
        .prop_filter_map("invalid model", |w| IsotropyModel::new(2 * w[0].len(), w).ok())
}

fn subgroup(r: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..(1 << r), 0..3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn pair_properties(m in model()) {
        let report = Web::new(&m).pair_report();
        prop_assert!(report.clean(), "{:?}", report);
    }

    #[test]
    fn monotonicity((m, h, extra) in model().prop_flat_map(|m| { let r = m.w.len(); (Just(m), subgroup(r), subgroup(r)) })) {
        let web = Web::new(&m);
        let big: Vec<u32> = h.iter().chain(&extra).copied().collect();
        prop_assert!(web.codim(&h) <= web.codim(&big));
        prop_assert!(web.dim_ker(&h) <= web.dim_ker(&big));
    }

    #[test]
    fn codim_mod_four_is_the_parity_functional(m in model()) {
        let web = Web::new(&m);
        let s = (0..m.planes()).fold(0, |acc, i| acc ^ web.col_mask(i));
        for v in web.involutions() {
            prop_assert_eq!(web.codim(&[v]) % 4 == 0, (v & s).count_ones() % 2 == 0);
        }
    }

    #[test]
    fn relaxed_certificates_reverify(m in model()) {
        prop_assume!(m.n % 4 == 0);
        let res = find_certificate(&m, SearchMode::Relaxed).unwrap();
        let check = check_result(&res);
        prop_assert!(check.ok, "{:?}", check.failures);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn strict_search_is_sound_and_terminates(n in prop_oneof![Just(16usize), Just(32)], seed in any::<u64>(), bound in 1i64..=3) {
        let m = random_model(n, rank_for(n), seed, bound).unwrap();
        let res = find_certificate(&m, SearchMode::Strict).unwrap();
        let check = check_result(&res);
        prop_assert!(check.ok, "{:?}", check.failures);
        let mut last = res.normalized.n;
        for step in &res.path {
            prop_assert!(step.model.n < last);
            last = step.model.n;
        }
        if let Some(c) = res.certificate() {
            prop_assert_eq!(c.ambient_dim % 4, 0);
            prop_assert!(2 * c.codims[0] + 2 * c.codims[1] <= c.ambient_dim);
        }
    }
}
