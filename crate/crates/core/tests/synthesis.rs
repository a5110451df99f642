mod common;

use std::collections::BTreeSet;

use hierctl::oracle::{oracle_sup_bounded, SupKind};
use hierctl::{ops, sct, Word};
use proptest::prelude::*;

const BOUND: usize = 5;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sup_normal_matches_bounded_fixpoint(
        seed in 0u64..10_000,
        draws in proptest::collection::vec(0.0f64..1.0, 1..24),
        keep in 0.2f64..1.0,
    ) {
        let g = common::plant(seed);
        let l = ops::generated(&g);
        let b = common::sub_plant(&g, &draws, keep);
        let n = sct::sup_normal_closed(&b, &l).unwrap();
        let expected = oracle_sup_bounded(SupKind::Normal, &b, &l, None, BOUND).unwrap();
        prop_assert_eq!(ops::bounded_set(&n, BOUND), expected);
        prop_assert!(sct::check_normality(&n, &g).unwrap().is_holds());
        prop_assert!(ops::includes(&n, &b).unwrap().is_holds());
    }

    #[test]
    fn sup_relobs_is_relatively_observable_and_within_the_bounded_fixpoint(
        seed in 0u64..10_000,
        draws in proptest::collection::vec(0.0f64..1.0, 1..24),
        keep in 0.2f64..0.8,
    ) {
        let g = common::plant(seed);
        let k = common::sub_plant(&g, &draws, keep);
        let c = common::sub_plant(&g, &draws, keep + 0.2);
        let (r, report) = sct::sup_relobs_closed(&k, &c, &g, 100).unwrap();
        prop_assert!(report.converged);
        prop_assert!(sct::check_relative_observability(&r, &c, &g).unwrap().is_holds());
        prop_assert!(ops::includes(&r, &k).unwrap().is_holds());
        let cut = ops::bounded_set(&r, BOUND);
        let bounded = oracle_sup_bounded(SupKind::Relobs, &k, &c, Some(&g), BOUND).unwrap();
        prop_assert!(cut.is_subset(&bounded), "{:?} not within {:?}", cut, bounded);
    }
}

#[test]
fn sup_relobs_with_full_observation_is_the_identity() {
    let g = common::plant_where(3, |g| {
        g.alphabet().events().iter().all(|e| e.observable) && g.num_transitions() > 2
    });
    let k = common::sub_plant(&g, &[0.1, 0.9, 0.4], 0.5);
    let (r, report) = sct::sup_relobs_closed(&k, &k, &g, 10).unwrap();
    assert_eq!(report.rounds, 0);
    let a: BTreeSet<Word> = ops::bounded_set(&r, 6);
    assert_eq!(a, ops::bounded_set(&k, 6));
}
