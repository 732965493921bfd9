use proptest::prelude::*;
use randcal_symcalc::*;

const CUT: i32 = -6;

fn small_symbol(max_xi: i32) -> impl Strategy<Value = Symbol> {
    let term = (-2i64..=2, -2i64..=2, 0i32..=2, prop::collection::vec(1u32..=2, 0..=1), (CUT..=max_xi));
    prop::collection::vec(term, 1..=3).prop_map(|ts| {
        let mut s = Symbol::zero(i32::MIN / 4);
        for (re, im, base, orders, xi) in ts {
            s.add_term(gr_int(re, im), JetMonomial::new(base, orders), xi);
        }
        s
    })
}

/// `c u^k ξ^m + lower`, an admissible parametrix input.
fn admissible() -> impl Strategy<Value = Symbol> {
    ((1i64..=3), (-1i32..=1), (1i32..=2), small_symbol(0)).prop_map(|(c, k, m, lower)| {
        let mut s = lower;
        s.add_term(gr_int(c, 0), JetMonomial::u_pow(k), m);
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn composition_is_associative(a in small_symbol(1), b in small_symbol(1), c in small_symbol(1)) {
        let ab_c = compose(&compose(&a, &b, CUT - 4), &c, CUT);
        let a_bc = compose(&a, &compose(&b, &c, CUT - 4), CUT);
        prop_assert_eq!(ab_c, a_bc);
    }

    #[test]
    fn parametrix_is_two_sided_inverse(p in admissible()) {
        let m = p.order().unwrap();
        let r = parametrix(&p, CUT - m).unwrap();
        prop_assert_eq!(compose(&p, &r, CUT), Symbol::one(CUT));
        prop_assert_eq!(compose(&r, &p, CUT), Symbol::one(CUT));
    }

    #[test]
    fn leading_term_is_reciprocal(p in admissible()) {
        let m = p.order().unwrap();
        let r = parametrix(&p, -m - 2).unwrap();
        let lead_p = p.component(m).terms()[0].clone();
        let lead_r = r.component(-m).terms()[0].clone();
        prop_assert_eq!(lead_p.coeff * lead_r.coeff, gr_int(1, 0));
        prop_assert_eq!(lead_p.jet.base_power() + lead_r.jet.base_power(), 0);
    }
}
