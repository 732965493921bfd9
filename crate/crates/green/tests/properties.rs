use proptest::prelude::*;
use randcal_green::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_atom_round_trip_from_exact_moments(a in 0.5f64..50.0, b in 0.5f64..50.0, tau in 0.05f64..0.95) {
        prop_assume!((a - b).abs() > 1e-3 * a.max(b));
        let m = |k: i32| tau * a.powi(k) + (1.0 - tau) * b.powi(k);
        let r = two_atom_recover(&[m(1)], &[m(2)], &[m(3)], tau).unwrap();
        let ((x, y), _) = r[0];
        prop_assert!((x - a).abs() <= 1e-8 * a.max(b) && (y - b).abs() <= 1e-8 * a.max(b), "{x} {y} vs {a} {b}");
    }

    #[test]
    fn green_inverts_stiffness(vals in proptest::collection::vec(0.0f64..100.0, 30)) {
        let g = Grid::line(28);
        let f = Field::new(g, vals).unwrap();
        let op = assemble_green(g, &f, Kind::Potential).unwrap();
        let prod = op.stiffness() * op.dense();
        let err = (prod - nalgebra::DMatrix::identity(28, 28)).amax();
        prop_assert!(err < 1e-10);
    }

    #[test]
    fn conductivity_scaling(alpha in 0.1f64..10.0) {
        let g = Grid::square(6);
        let gamma = Field::from_fn(g, |x, y| 1.0 + x * y);
        let a = assemble_green(g, &gamma, Kind::Conductivity).unwrap().dense();
        let b = assemble_green(g, &gamma.map(|v| alpha * v), Kind::Conductivity).unwrap().dense();
        prop_assert!((a / alpha - b).amax() <= 1e-12 * 10.0);
    }
}
