use proptest::prelude::*;
use randcal_radial::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn two_point_barycentric_identity_is_exact(n1 in 1u32..6, gap in 2u32..6, step in 1u32..5, extra in 1i64..20, dim in 2u32..6) {
        let n2 = n1 + gap;
        let n0 = n1 + 1 + (step % (gap - 1));
        let p1 = q((n2 * n2 - n0 * n0) as i64, (n2 * n2 - n1 * n1) as i64);
        let p2 = q(1, 1) - &p1;
        let lambda = q(2 * n2 as i64 * 3 + extra, 3);
        let combo = [(p1, n1), (p2, n2)];
        for mode in [Mode::Schrodinger, Mode::Conductivity] {
            prop_assert_eq!(verify_affine_identity(n0, &combo, &lambda, dim, 30, mode).unwrap(), q(0, 1));
        }
    }

    #[test]
    fn shooting_agrees_with_formula(n in 1u32..8, extra in 1i64..40, ell in 0u32..12) {
        let lambda = q(2 * n as i64 * 4 + extra, 4);
        let f = QNFamily::new(lambda, n, 3).unwrap();
        let num = dn_eig_numeric(&RadialPotential::from_family(&f), ell, 3).unwrap();
        prop_assert!((num - to_f64(&f.dn_eig_exact(ell))).abs() < 1e-8);
    }
}
