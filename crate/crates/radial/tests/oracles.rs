use randcal_radial::*;

fn fam(n: u32) -> QNFamily {
    QNFamily::new(q(16, 1), n, 3).unwrap()
}

fn pot(n: u32) -> RadialPotential {
    RadialPotential::from_family(&fam(n))
}

#[test]
fn shooting_matches_exact_eigenvalues() {
    for n in [1, 5, 7] {
        for l in 0..=20 {
            let num = dn_eig_numeric(&pot(n), l, 3).unwrap();
            let exact = to_f64(&fam(n).dn_eig_exact(l));
            assert!((num - exact).abs() <= 1e-8, "N={n} l={l}: {num} vs {exact}");
        }
    }
}

#[test]
fn shooting_matches_exact_eigenvalues_other_dimensions() {
    for dim in [2, 4, 5] {
        for n in [1, 3] {
            let f = QNFamily::new(q(10, 1), n, dim).unwrap();
            for l in [0, 1, 4, 9] {
                let num = dn_eig_numeric(&RadialPotential::from_family(&f), l, dim).unwrap();
                assert!((num - to_f64(&f.dn_eig_exact(l))).abs() <= 1e-8, "n={dim} N={n} l={l}");
            }
        }
    }
}

#[test]
fn solution_profile_sup_norm() {
    for n in [1, 5, 7] {
        for l in [0, 1, 3, 10, 20] {
            let err = solution_sup_error(&fam(n), l, 0.01, 200).unwrap();
            assert!(err <= 1e-8, "N={n} l={l}: {err}");
        }
    }
}

#[test]
fn exact_solution_log_derivative() {
    let f = fam(5);
    let h = 1e-5;
    let r1 = f.radial_exact_solution(3, 1.0).unwrap();
    let r0 = f.radial_exact_solution(3, 1.0 - h).unwrap();
    let r00 = f.radial_exact_solution(3, 1.0 - 2.0 * h).unwrap();
    let deriv = (3.0 * r1 - 4.0 * r0 + r00) / (2.0 * h);
    assert!((deriv / r1 - to_f64(&f.dn_eig_exact(3))).abs() < 1e-6);
    assert!(f.radial_exact_solution(2, 1e-3).unwrap() / 1e-6 - 1.0 < 1e-3);
}

#[test]
fn mean_potential_is_not_the_barycentric_member() {
    let mean = RadialPotential::mixture(&[(q(1, 2), pot(1)), (q(1, 2), pot(7))]);
    let mu = dn_eig_numeric(&mean, 0, 3).unwrap();
    assert!((mu - 78.0 / 17.0).abs() > 1e-3);
}

#[test]
fn counterexample_identities_are_exact() {
    let combo = [(q(1, 2), 1), (q(1, 2), 7)];
    for mode in [Mode::Schrodinger, Mode::Conductivity] {
        assert_eq!(verify_affine_identity(5, &combo, &q(16, 1), 3, 50, mode).unwrap(), q(0, 1));
    }
    let off = [(q(1, 2), 1), (q(1, 2), 6)];
    assert!(verify_affine_identity(5, &off, &q(16, 1), 3, 50, Mode::Schrodinger).unwrap() > q(0, 1));
}

#[test]
fn eigenvalues_affine_in_n_squared() {
    // Interpolate through N = 1, 2, 3 in the variable N², extrapolate to N = 6.
    for mode in [Mode::Schrodinger, Mode::Conductivity] {
        for l in 0..=12 {
            let eig = |n: u32| {
                let f = QNFamily::new(q(16, 1), n, 3).unwrap();
                match mode {
                    Mode::Schrodinger => f.dn_eig_exact(l),
                    Mode::Conductivity => f.conductivity_dn_exact(l),
                }
            };
            let slope = (eig(2) - eig(1)) / q(3, 1);
            assert_eq!(eig(3), eig(1) + &slope * q(8, 1));
            assert_eq!(eig(6), eig(1) + &slope * q(35, 1));
        }
    }
}

#[test]
fn conductivity_constants() {
    assert_eq!(fam(1).conductivity_dn_exact(1), q(71, 323));
    for n in [1, 5, 7] {
        assert_eq!(fam(n).conductivity_dn_exact(0), q(0, 1));
        assert_eq!(fam(n).gamma_exact(&q(1, 1)).unwrap(), q(1, 1));
    }
    let g0: Vec<_> = [1, 5, 7].iter().map(|&n| fam(n).gamma_exact(&q(0, 1)).unwrap()).collect();
    assert_eq!(g0, vec![q(9, 289), q(121, 289), q(225, 289)]);
    assert_eq!((&g0[0] + &g0[2]) / q(2, 1), q(117, 289));
}

#[test]
fn conductivity_shooting_matches_exact() {
    for n in [1, 5, 7] {
        for l in [0, 1, 2, 7, 15] {
            let num = conductivity_dn_numeric(&fam(n), l).unwrap();
            let exact = to_f64(&fam(n).conductivity_dn_exact(l));
            assert!((num - exact).abs() < 1e-8, "N={n} l={l}: {num} vs {exact}");
        }
    }
}

#[test]
fn liouville_transform_consistency() {
    for n in [1, 5, 7] {
        for l in [0, 2, 6] {
            let err = liouville_check(&fam(n), l, 0.01, 100).unwrap();
            assert!(err <= 1e-6, "N={n} l={l}: {err}");
        }
    }
}

#[test]
fn alessandrini_identity() {
    assert!(alessandrini_check(&pot(1), &pot(7), 0, 3).unwrap() <= 1e-6);
    assert!(alessandrini_check(&pot(1), &RadialPotential::zero(), 2, 3).unwrap() <= 1e-6);
    assert_eq!(alessandrini_check(&pot(5), &pot(5), 3, 3).unwrap(), 0.0);
}

#[test]
fn dn_jensen_on_counterexample_law() {
    let law = [(q(1, 2), JensenAtom::Family(fam(1))), (q(1, 2), JensenAtom::Family(fam(7)))];
    let rep = jensen_dn_check(&law, 20, 3).unwrap();
    assert!(rep.margins.iter().all(|&m| m >= -1e-7));
    assert!(rep.margins[0] > 1e-4);
    assert!(rep.margins[20] < rep.margins[0]);
    assert_eq!(rep.expected[0], EigenEntry::Exact(q(78, 17)));
}

#[test]
fn dn_jensen_degenerate_law() {
    let rep = jensen_dn_check(&[(q(1, 1), JensenAtom::Family(fam(5)))], 10, 3).unwrap();
    assert!(rep.margins.iter().all(|m| m.abs() < 1e-8));
    let mixed = [(q(1, 3), JensenAtom::Potential(pot(1))), (q(2, 3), JensenAtom::Potential(RadialPotential::zero()))];
    let rep = jensen_dn_check(&mixed, 5, 3).unwrap();
    assert!(matches!(rep.expected[0], EigenEntry::Float(_)));
    assert!(rep.margins[0] > 0.0);
}

#[test]
fn barycentric_search() {
    let t7 = find_barycentric_tuples(7, 2, LambdaPolicy::Fixed(q(16, 1)));
    assert!(t7.iter().any(|t| t.n0 == 5 && t.nodes == vec![1, 7] && t.weights == vec![q(1, 2), q(1, 2)]));
    let t5 = find_barycentric_tuples(5, 2, LambdaPolicy::MinimalAdmissible);
    assert!(t5.iter().any(|t| t.n0 == 3 && t.nodes == vec![1, 5] && t.weights == vec![q(2, 3), q(1, 3)]));
    assert!(t5.iter().all(|t| t.nodes[0] != t.nodes[1]));
    for j in [2, 3] {
        for t in find_barycentric_tuples(6, j, LambdaPolicy::MinimalAdmissible) {
            let combo: Vec<_> = t.weights.iter().cloned().zip(t.nodes.iter().copied()).collect();
            let dev = verify_affine_identity(t.n0, &combo, &t.lambda, 3, 10, Mode::Schrodinger).unwrap();
            assert_eq!(dev, q(0, 1), "{t:?}");
        }
    }
    assert!(find_barycentric_tuples(1, 2, LambdaPolicy::MinimalAdmissible).is_empty());
}

#[test]
fn taylor_orders_and_boundary_values() {
    assert!(fam(1).qn_exact(&q(0, 1)).unwrap() > q(0, 1));
    assert_eq!(fam(5).qn_exact(&q(0, 1)).unwrap(), q(0, 1));
    assert_eq!(fam(7).qn_exact(&q(0, 1)).unwrap(), q(0, 1));
    assert_eq!(fam(5).taylor_leading().0, 8);
    assert_eq!(fam(7).taylor_leading().0, 12);
}
