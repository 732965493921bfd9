use num_complex::Complex;
use num_traits::{One, Zero};

use crate::jet::JetMonomial;
use crate::symbol::{gr_int, GaussianRational, Rational, Symbol};
use crate::SymbolError;

/// Kohn-Nirenberg composition `Σ_α (1/α!) ∂_ξ^α a · D_x^α b`, keeping degrees `>= cutoff`.
///
/// Exact whenever `a` and `b` are exact (untruncated) symbols; for truncated
/// operands only degrees above the truncation error are meaningful.
pub fn compose(a: &Symbol, b: &Symbol, cutoff: i32) -> Symbol {
    let (Some(ma), Some(mb)) = (a.order(), b.order()) else {
        return Symbol::zero(cutoff);
    };
    let max_alpha = ma + mb - cutoff;
    let mut out = Symbol::zero(cutoff);
    if max_alpha < 0 {
        return out;
    }
    let mut db = b.clone();
    for alpha in 0..=max_alpha as u32 {
        if db.is_zero() {
            break;
        }
        let da = a.xi_derivative_scaled(alpha);
        if !da.is_zero() {
            out = out.add(&da.mul(&db, cutoff));
        }
        db = db.dx_kn();
    }
    out
}

/// Parametrix `r` of `p` with every homogeneous component of degree `>= cutoff`
/// exact, so that `compose(p, r, cutoff + m) = 1` where `m` is the order of `p`.
pub fn parametrix(p: &Symbol, cutoff: i32) -> Result<Symbol, SymbolError> {
    let m = p.order().ok_or(SymbolError::DegeneratePrincipalSymbol)?;
    let lead = p.component(m).terms();
    if m <= 0 || lead.len() != 1 || !lead[0].jet.is_pure_power() {
        return Err(SymbolError::DegeneratePrincipalSymbol);
    }
    let c = &lead[0].coeff;
    if c.is_zero() {
        return Err(SymbolError::DegeneratePrincipalSymbol);
    }
    let k = lead[0].jet.base_power();
    let c_inv = c.inv();
    // p_m^{-1} as a symbol without ξ; multiplying by it and shifting by -m inverts the leading term.
    let lead_inv = Symbol::monomial(c_inv.clone(), JetMonomial::u_pow(-k), -m, i32::MIN / 2);
    let mut r = Symbol::monomial(c_inv, JetMonomial::u_pow(-k), -m, cutoff);
    let one = Symbol::one(i32::MIN / 2);
    for d in (cutoff..-m).rev() {
        // Error of the current partial inverse at degree d + m fixes the term of degree d.
        let err = compose(p, &r, d + m).sub(&one).component(d + m);
        if err.is_zero() {
            continue;
        }
        let corr = err.mul(&lead_inv, d).scale(&-GaussianRational::one());
        r = r.add(&corr.truncate(cutoff));
    }
    Ok(r)
}

/// `ξ² + u`, the symbol of `-d²/dx² + u`.
pub fn schrodinger_symbol(cutoff: i32) -> Symbol {
    let mut s = Symbol::xi(2, cutoff);
    s.add_term(GaussianRational::one(), JetMonomial::u_pow(1), 0);
    s
}

/// `u^-1 ξ² + i u^-2 u' ξ`, the symbol of `-d/dx(γ d/dx)` with `γ = u^-1`.
pub fn conductivity_symbol(cutoff: i32) -> Symbol {
    let mut s = Symbol::zero(cutoff);
    s.add_term(GaussianRational::one(), JetMonomial::u_pow(-1), 2);
    s.add_term(Complex::new(Rational::zero(), Rational::one()), JetMonomial::new(-2, [1]), 1);
    s
}

/// Outcome of the triangularity check at degree `-2k-2`.
#[derive(Clone, Debug)]
pub struct TriangularityReport {
    pub k: u32,
    pub xi_power: i32,
    pub component: Symbol,
    /// (degree, max derivative order) for every monomial of the component.
    pub monomials: Vec<(i32, u32)>,
    pub leading_coeff: GaussianRational,
}

/// Checks that `σ_{-2k-2}` of the parametrix of `ξ² + u` has the unique top-degree
/// monomial `(-1)^k u^k`, all other monomials of degree `<= k-1`, and
/// derivative orders `<= 2k-2`.
pub fn triangularity_report(k: u32) -> Result<TriangularityReport, SymbolError> {
    if k == 0 {
        return Err(SymbolError::InvalidArgument("k must be at least 1".into()));
    }
    let deg = -2 * k as i32 - 2;
    let r = parametrix(&schrodinger_symbol(deg), deg)?;
    let comp = r.component(deg);
    let sign = if k % 2 == 0 { 1 } else { -1 };
    let top = JetMonomial::u_pow(k as i32);
    let leading = comp.coeff(&top, deg);
    if leading != gr_int(sign, 0) {
        return Err(SymbolError::Triangularity {
            monomial: top.to_string(),
            reason: format!("coefficient of the leading monomial is {leading}, expected {sign}"),
        });
    }
    let mut monomials = Vec::new();
    for t in comp.terms() {
        let d = t.jet.degree();
        let o = t.jet.max_order();
        monomials.push((d, o));
        if t.jet == top {
            continue;
        }
        if d > k as i32 - 1 {
            return Err(SymbolError::Triangularity {
                monomial: t.jet.to_string(),
                reason: format!("degree {d} exceeds {}", k as i32 - 1),
            });
        }
        if o > 2 * k - 2 {
            return Err(SymbolError::Triangularity {
                monomial: t.jet.to_string(),
                reason: format!("derivative order {o} exceeds {}", 2 * k - 2),
            });
        }
    }
    Ok(TriangularityReport { k, xi_power: deg, component: comp, monomials, leading_coeff: leading })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_xi_squared_with_u() {
        let a = Symbol::xi(2, 0);
        let b = Symbol::monomial(gr_int(1, 0), JetMonomial::u_pow(1), 0, 0);
        let mut want = Symbol::zero(0);
        want.add_term(gr_int(1, 0), JetMonomial::u_pow(1), 2);
        want.add_term(gr_int(0, -2), JetMonomial::derivative(1), 1);
        want.add_term(gr_int(-1, 0), JetMonomial::derivative(2), 0);
        assert_eq!(compose(&a, &b, 0), want);
    }

    #[test]
    fn compose_constant_coefficient_inverse() {
        let got = compose(&Symbol::xi(-2, -10), &Symbol::xi(2, -10), -10);
        assert_eq!(got, Symbol::one(-10));
    }

    #[test]
    fn parametrix_rejects_zero_order_or_mixed_leading_part() {
        let s = Symbol::monomial(gr_int(1, 0), JetMonomial::u_pow(1), 0, -4);
        assert!(matches!(parametrix(&s, -4), Err(SymbolError::DegeneratePrincipalSymbol)));
        let mut t = Symbol::xi(2, -4);
        t.add_term(gr_int(1, 0), JetMonomial::derivative(2), 2);
        assert!(matches!(parametrix(&t, -4), Err(SymbolError::DegeneratePrincipalSymbol)));
        assert!(matches!(parametrix(&Symbol::zero(-4), -4), Err(SymbolError::DegeneratePrincipalSymbol)));
    }

    #[test]
    fn triangularity_rejects_k_zero() {
        assert!(triangularity_report(0).is_err());
    }
}
