use proptest::prelude::*;
use randcal_moments::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn construction_is_total(order in 1u32..4, seed in prop::collection::btree_set(1u32..12, 5)) {
        let nodes: Vec<u32> = seed.into_iter().take(order as usize + 2).collect();
        prop_assume!(nodes.len() == order as usize + 2);
        let m = build_moment_matched_laws(order, &nodes).unwrap();
        for (_, a, b) in m.moment_table(order) {
            prop_assert_eq!(a, b);
        }
        prop_assert!(m.kernel[0] > randcal_radial::q(0, 1));
        prop_assert!(s_moment_gap(&m, order + 1) != randcal_radial::q(0, 1));
    }
}
