use randcal_symcalc::*;

fn term(s: &mut Symbol, re: i64, im: i64, base: i32, orders: &[u32], xi: i32) {
    s.add_term(gr_int(re, im), JetMonomial::new(base, orders.iter().copied()), xi);
}

/// Hand-expanded parametrix of `ξ² + u` through `ξ^-8`.
fn printed_expansion() -> Symbol {
    let mut s = Symbol::zero(-8);
    term(&mut s, 1, 0, 0, &[], -2);
    term(&mut s, -1, 0, 1, &[], -4);
    term(&mut s, 0, -2, 0, &[1], -5);
    term(&mut s, 1, 0, 2, &[], -6);
    term(&mut s, 3, 0, 0, &[2], -6);
    term(&mut s, 0, 6, 1, &[1], -7);
    term(&mut s, 0, 4, 0, &[3], -7);
    term(&mut s, -1, 0, 3, &[], -8);
    term(&mut s, -13, 0, 1, &[2], -8);
    term(&mut s, -10, 0, 0, &[1, 1], -8);
    term(&mut s, -5, 0, 0, &[4], -8);
    s
}

#[test]
fn schrodinger_parametrix_matches_printed_expansion() {
    let r = parametrix(&schrodinger_symbol(-8), -8).unwrap();
    assert_eq!(r, printed_expansion());
}

#[test]
fn parametrix_is_exact_down_to_shifted_cutoff() {
    let p = schrodinger_symbol(-10);
    let r = parametrix(&p, -10).unwrap();
    assert_eq!(compose(&p, &r, -8), Symbol::one(-8));
}

#[test]
fn laplacian_parametrix_is_inverse_power() {
    assert_eq!(parametrix(&Symbol::xi(2, -4), -4).unwrap(), Symbol::xi(-2, -4));
}

#[test]
fn conductivity_parametrix_one_dimensional_terms() {
    let r = parametrix(&conductivity_symbol(-4), -4).unwrap();
    let mut want = Symbol::zero(-4);
    term(&mut want, 1, 0, 1, &[], -2);
    term(&mut want, 0, 1, 0, &[1], -3);
    term(&mut want, -1, 0, 0, &[2], -4);
    assert_eq!(r, want);
}

#[test]
fn conductivity_parametrix_is_two_sided() {
    let p = conductivity_symbol(-9);
    let r = parametrix(&p, -9).unwrap();
    assert_eq!(compose(&p, &r, -7), Symbol::one(-7));
    assert_eq!(compose(&r, &p, -7), Symbol::one(-7));
}

#[test]
fn compose_identity_element() {
    let s = printed_expansion();
    assert_eq!(compose(&s, &Symbol::one(-8), -8), s);
    assert_eq!(compose(&Symbol::one(-8), &s, -8), s);
}

#[test]
fn triangularity_low_orders() {
    let r1 = triangularity_report(1).unwrap();
    assert_eq!(r1.component.len(), 1);
    assert_eq!(r1.leading_coeff, gr_int(-1, 0));
    let r2 = triangularity_report(2).unwrap();
    assert_eq!(r2.component.coeff(&JetMonomial::new(0, [2]), -6), gr_int(3, 0));
    let r3 = triangularity_report(3).unwrap();
    assert_eq!(r3.leading_coeff, gr_int(-1, 0));
    assert_eq!(r3.component.coeff(&JetMonomial::new(1, [2]), -8), gr_int(-13, 0));
    assert_eq!(r3.component.coeff(&JetMonomial::new(0, [1, 1]), -8), gr_int(-10, 0));
    assert_eq!(r3.component.coeff(&JetMonomial::new(0, [4]), -8), gr_int(-5, 0));
}

#[test]
fn triangularity_through_six() {
    for k in 1..=6 {
        let rep = triangularity_report(k).unwrap();
        assert!(rep.monomials.iter().all(|&(_, o)| o <= 2 * k - 2));
        assert_eq!(rep.monomials.iter().filter(|&&(d, _)| d == k as i32).count(), 1);
    }
}

#[test]
fn even_components_real_odd_imaginary() {
    let r = parametrix(&schrodinger_symbol(-12), -12).unwrap();
    for t in r.terms() {
        if t.xi_power % 2 == 0 {
            assert_eq!(t.coeff.im, q(0, 1), "term {t:?}");
        } else {
            assert_eq!(t.coeff.re, q(0, 1), "term {t:?}");
        }
    }
}

/// Jets of two samplers with equal first and second moment fields but different
/// `E(u')²`: `u = 2 + X1 cos x + X2 sin x` with independent signs, against
/// `u = 2 + Y`, read at `x = 0`.
fn rotating_and_constant_laws() -> (MomentSymbolLaw, MomentSymbolLaw) {
    let mut a = Vec::new();
    for x1 in [-1i64, 1] {
        for x2 in [-1i64, 1] {
            a.push((q(1, 4), vec![q(2 + x1, 1), q(x2, 1), q(-x1, 1), q(-x2, 1), q(x1, 1)]));
        }
    }
    let b = [-1i64, 1].iter().map(|&y| (q(1, 2), vec![q(2 + y, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1)])).collect();
    (MomentSymbolLaw::from_jets(a).unwrap(), MomentSymbolLaw::from_jets(b).unwrap())
}

#[test]
fn averaged_symbols_first_differ_at_minus_eight() {
    let (a, b) = rotating_and_constant_laws();
    let r = parametrix(&schrodinger_symbol(-8), -8).unwrap();
    let ea = average_symbol(&r, &a).unwrap();
    let eb = average_symbol(&r, &b).unwrap();
    for k in -7..=-2 {
        assert_eq!(ea.get(&k), eb.get(&k), "degree {k}");
    }
    assert_ne!(ea[&-8], eb[&-8]);
    let up2 = JetMonomial::new(0, [1, 1]);
    assert_ne!(a.expect(&up2).unwrap(), b.expect(&up2).unwrap());
}

#[test]
fn average_is_linear_and_respects_mixtures() {
    let (a, b) = rotating_and_constant_laws();
    let r = parametrix(&schrodinger_symbol(-8), -8).unwrap();
    let s = printed_expansion().scale(&gr_int(2, 1));
    let sum = r.add(&s);
    let lhs = average_symbol(&sum, &a).unwrap();
    let ra = average_symbol(&r, &a).unwrap();
    let sa = average_symbol(&s, &a).unwrap();
    for (k, v) in &lhs {
        let want = (&ra[k].0 + &sa[k].0, &ra[k].1 + &sa[k].1);
        assert_eq!(*v, want);
    }
    let t = q(1, 3);
    let mixed = average_symbol(&r, &a.mix(&b, &t).unwrap()).unwrap();
    let eb = average_symbol(&r, &b).unwrap();
    let one_minus = q(2, 3);
    for (k, v) in &mixed {
        let want = (&t * &ra[k].0 + &one_minus * &eb[k].0, &t * &ra[k].1 + &one_minus * &eb[k].1);
        assert_eq!(*v, want);
    }
}

#[test]
fn json_records_use_fraction_strings() {
    let recs = to_records(&printed_expansion());
    let json = serde_json::to_string(&recs).unwrap();
    assert!(json.contains(r#""re":"-13/1""#));
    assert!(json.contains(r#""jet":[1,1]"#));
    let back: Vec<TermRecord> = serde_json::from_str(&json).unwrap();
    assert_eq!(from_records(&back, -8).unwrap(), printed_expansion());
}
