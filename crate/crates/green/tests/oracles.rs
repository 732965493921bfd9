use std::collections::BTreeMap;

use nalgebra::SymmetricEigen;
use randcal_green::scenarios::{BumpPair, ConductivityPair};
use randcal_green::*;
use randcal_symcalc::q;

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn min_eig(m: &nalgebra::DMatrix<f64>) -> f64 {
    let s = (m + m.transpose()) * 0.5;
    SymmetricEigen::new(s).eigenvalues.min()
}

#[test]
fn free_probe_calibration_is_exact() {
    let g = Grid::line(200);
    let op = assemble_green(g, &Field::constant(g, 0.0), Kind::Potential).unwrap();
    let cfg = ProbeConfig::line();
    for s in probe_symbol(&op, 100, [1.0, 0.0], &cfg.kappas(&g), &cfg).unwrap() {
        assert!((s.calibrated * s.xi_h2 - 1.0).abs() < 1e-10, "{s:?}");
    }
}

#[test]
fn constant_potential_matches_discrete_resolvent() {
    for g in [Grid::line(300), Grid::square(40)] {
        let qc = 50.0;
        let op = assemble_green(g, &Field::constant(g, qc), Kind::Potential).unwrap();
        let cfg = ProbeConfig::for_grid(&g);
        let node = (0..g.len()).max_by_key(|&k| g.boundary_distance(k)).unwrap();
        let powers: Vec<usize> = (1..=cfg.kp).collect();
        for theta in default_directions(if g.dim() == 1 { 1 } else { 4 }) {
            let fit = ProbeColumn::new(&op, node, cfg.kp).fit(&cfg, theta, &powers).unwrap();
            for k in cfg.kappas(&g) {
                let s = discrete_dispersion(&g, k, theta);
                assert!(rel(fit.symbol(s), 1.0 / (s + qc)) < 1e-3, "{theta:?} {fit:?}");
            }
        }
    }
}

#[test]
fn green_operators_are_symmetric_and_monotone() {
    let g = Grid::line(60);
    let lo = Field::from_fn(g, |x, _| 10.0 + 5.0 * x);
    let hi = lo.map(|v| v + 3.0);
    let a = assemble_green(g, &lo, Kind::Potential).unwrap().dense();
    let b = assemble_green(g, &hi, Kind::Potential).unwrap().dense();
    assert!((&a - a.transpose()).norm() <= 1e-12 * a.norm());
    assert!(min_eig(&a) > 0.0);
    assert!(min_eig(&(&a - &b)) >= -1e-12);
}

#[test]
fn jensen_gap_and_second_order_identity() {
    let pair = BumpPair::moderate();
    let r = jensen_green_check(&CoefficientSampler::Atoms(pair.atoms())).unwrap();
    assert!(r.lambda_min >= -JENSEN_TOL, "{r:?}");
    assert!(r.lambda_max > 0.0);
    assert!(r.second_order_residual <= 1e-10, "{r:?}");
}

#[test]
fn degenerate_sampler_has_no_jensen_gap() {
    let g = Grid::line(50);
    let f = Field::constant(g, 7.0);
    let r = jensen_green_check(&CoefficientSampler::Atoms(vec![(0.5, f.clone()), (0.5, f)])).unwrap();
    assert!(r.lambda_min.abs() <= 1e-14 && r.lambda_max.abs() <= 1e-14);
}

#[test]
fn mean_and_variance_from_averaged_green() {
    let pair = BumpPair::moderate();
    let ebar = averaged_green(&CoefficientSampler::Atoms(pair.atoms()), Kind::Potential).unwrap();
    let mv = recover_mean_variance(&ebar, &ProbeConfig::line()).unwrap();
    let (mean, var) = (pair.mean(), pair.variance());
    let probes = pair.central_nodes(0.08);
    assert!(probes.len() >= 5);
    for &k in &probes {
        assert!(rel(mv.mean[k], mean[k]) <= 0.05, "mean at {k}: {} vs {}", mv.mean[k], mean[k]);
        assert!(rel(mv.variance[k], var[k]) <= 0.10, "variance at {k}: {} vs {}", mv.variance[k], var[k]);
    }
}

#[test]
fn two_atom_pipeline_recovers_atoms() {
    let pair = BumpPair::fine();
    let ebar = averaged_green(&CoefficientSampler::Atoms(pair.atoms()), Kind::Potential).unwrap();
    let res = two_atom_pipeline(&ebar, pair.tau, &PipelineConfig::default()).unwrap();
    let (q1, q2) = (pair.q1.interior(), pair.q2.interior());
    for k in pair.central_nodes(0.08) {
        let ((a, b), branch) = res.atoms[k];
        assert_eq!(branch, TwoAtomBranch::General);
        assert!(rel(a, q1[k]) <= 0.10 && rel(b, q2[k]) <= 0.10, "node {k}: ({a}, {b}) vs ({}, {})", q1[k], q2[k]);
    }
}

#[test]
fn surrogate_differs_only_through_third_moment() {
    let tau = q(1, 3);
    let m = [q(5, 1), q(1, 2), q(-3, 1), q(2, 7), q(1, 1)];
    let d = [q(2, 1), q(-1, 3), q(4, 1), q(1, 1), q(-2, 5)];
    let gap = surrogate_symbol_gap(&tau, &m, &d, &q(1, 1)).unwrap();
    for k in -7..=-2 {
        assert_eq!(gap[&k], (q(0, 1), q(0, 1)), "degree {k}");
    }
    let c3 = &tau * (q(1, 1) - &tau) * (q(1, 1) - q(2, 1) * &tau) * &d[0] * &d[0] * &d[0];
    assert_eq!(gap[&-8], (-c3, q(0, 1)));
}

fn bump2(x: f64, c: f64) -> f64 {
    (-((x - c) / 0.15).powi(2)).exp()
}

#[test]
fn finite_model_mixed_moments() {
    let npts = 60;
    let xs: Vec<f64> = (0..npts).map(|i| (i as f64 + 0.5) / npts as f64).collect();
    let q0: Vec<f64> = vec![1.0; npts];
    let v = vec![
        xs.iter().map(|&x| bump2(x, 0.35)).collect::<Vec<_>>(),
        xs.iter().map(|&x| bump2(x, 0.65)).collect::<Vec<_>>(),
    ];
    let law = vec![(0.1, vec![0.0, 0.0]), (0.2, vec![1.0, 0.0]), (0.3, vec![0.0, 1.0]), (0.4, vec![1.0, 1.0])];
    let moments: Vec<Vec<f64>> = (1..=3)
        .map(|k| {
            (0..npts)
                .map(|i| law.iter().map(|(p, x)| p * (q0[i] + x[0] * v[0][i] + x[1] * v[1][i]).powi(k)).sum())
                .collect()
        })
        .collect();
    let got = finite_model_recover(&moments, &q0, &v, 3).unwrap();
    let want = law_mixed_moments(&law, 2, 3);
    assert_eq!(got.len(), want.len());
    for (alpha, w) in &want {
        assert!((got[alpha] - w).abs() <= 1e-8, "{alpha:?}: {} vs {w}", got[alpha]);
    }

    let zero: BTreeMap<_, _> = finite_model_recover(&vec![q0.clone(); 3], &q0, &v, 3).unwrap();
    assert!(zero.iter().filter(|(a, _)| a.iter().sum::<u32>() > 0).all(|(_, m)| m.abs() <= 1e-10));

    let dependent = vec![v[0].clone(), v[0].iter().map(|x| 2.0 * x).collect()];
    match finite_model_recover(&moments, &q0, &dependent, 3) {
        Err(GreenError::RankDeficient { degree, monomials }) => {
            assert_eq!(degree, 1);
            assert_eq!(monomials, vec!["V1".to_string(), "V2".to_string()]);
        }
        other => panic!("expected rank deficiency, got {other:?}"),
    }
}

#[test]
fn rigidity_cases() {
    let g = Grid::line(120);
    let q1 = Field::from_fn(g, |x, _| 200.0 * (1.0 + bump2(x, 0.4)));
    let q2 = Field::from_fn(g, |x, _| 200.0 * (1.0 + 0.5 * bump2(x, 0.6)));
    let tau = 0.4;
    let same = rigidity_residual(&q1, &q1, &q1, tau, Kind::Potential).unwrap();
    assert_eq!(same.residual, 0.0);
    let combo = Field::combine(&[(tau, &q1), (1.0 - tau, &q2)]).unwrap();
    let r = rigidity_residual(&combo, &q1, &q2, tau, Kind::Potential).unwrap();
    let jensen = jensen_green_check(&CoefficientSampler::Atoms(vec![(tau, q1.clone()), (1.0 - tau, q2.clone())])).unwrap();
    assert!(r.residual > 1e-6 && r.residual >= 0.99 * jensen.lambda_max, "{r:?} {jensen:?}");

    let s = Grid::square(12);
    let g1 = Field::from_fn(s, |x, y| 1.0 + 0.5 * x * y + 0.3 * (3.0 * x).sin());
    let g2 = g1.map(|v| 2.5 * v);
    let harm = g1.zip_with(&g2, |a, b| 1.0 / (tau / a + (1.0 - tau) / b)).unwrap();
    let c = rigidity_residual(&harm, &g1, &g2, tau, Kind::Conductivity).unwrap();
    assert!(c.residual <= 1e-10, "{c:?}");
    assert_eq!((c.proportional, c.harmonic_combination), (Some(true), Some(true)));
}

#[test]
fn conductivity_scaling_is_exact() {
    let s = Grid::square(10);
    let g = Field::from_fn(s, |x, y| 1.0 + x + 0.5 * y * y);
    let a = assemble_green(s, &g, Kind::Conductivity).unwrap().dense();
    let b = assemble_green(s, &g.map(|v| 3.0 * v), Kind::Conductivity).unwrap().dense();
    assert!((&a / 3.0 - b).norm() <= 1e-12 * a.norm());
}

fn cosine(c: &Sym2, g: [f64; 2]) -> f64 {
    let d = principal_direction(c);
    (d[0] * g[0] + d[1] * g[1]).abs() / g[0].hypot(g[1])
}

#[test]
fn conductivity_invariant_two_atom_and_proportional() {
    let n = 80;
    let grid = Grid::square(n);
    let cfg = ProbeConfig::plane();
    let dirs = default_directions(4);
    let probes: Vec<usize> =
        [(40, 40), (37, 42), (43, 38), (40, 44)].iter().map(|&(i, j)| grid.interior_index(i, j).unwrap()).collect();

    let pair = ConductivityPair::opposed(n, 1.0 / 3.0);
    let ebar = averaged_green(&CoefficientSampler::Atoms(pair.atoms()), Kind::Conductivity).unwrap();
    let inv = conductivity_invariant_recover(&ebar, &probes, &dirs, &cfg, &[1, 2, 3, 4]).unwrap();
    let mut norms = Vec::new();
    for p in &inv.points {
        let want = pair.invariant_at(p.node);
        let err: Sym2 = [[p.c[0][0] - want[0][0], p.c[0][1] - want[0][1]], [p.c[1][0] - want[1][0], p.c[1][1] - want[1][1]]];
        let (i, j) = grid.coords(p.node);
        let grad = pair.grad_log_ratio[grid.full_index(i, j)];
        assert!(frobenius(&err) <= 0.15 * frobenius(&want), "node {}: {:?} vs {want:?}", p.node, p.c);
        assert!(cosine(&p.c, grad) >= 0.98);
        norms.push(frobenius(&p.c));
    }

    let prop = ConductivityPair::proportional(n, 1.0 / 3.0);
    let ebar = averaged_green(&CoefficientSampler::Atoms(prop.atoms()), Kind::Conductivity).unwrap();
    let inv = conductivity_invariant_recover(&ebar, &probes, &dirs, &cfg, &[1, 2, 3, 4]).unwrap();
    for (p, big) in inv.points.iter().zip(&norms) {
        assert!(frobenius(&p.c) <= 0.05 * big, "node {}: {:?}", p.node, p.c);
    }
}

#[test]
fn conductivity_invariant_needs_three_directions() {
    let grid = Grid::square(20);
    let op = GreenCombination::single(assemble_green(grid, &Field::constant(grid, 1.0), Kind::Conductivity).unwrap());
    let r = conductivity_invariant_recover(&op, &[210], &default_directions(2), &ProbeConfig::plane(), &[1, 2, 3, 4]);
    assert!(matches!(r, Err(GreenError::Precondition(_))));
}
