use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::jet::JetMonomial;

pub type Rational = BigRational;
/// Exact complex number with rational parts.
pub type GaussianRational = Complex<BigRational>;

pub fn q(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gr(re: Rational, im: Rational) -> GaussianRational {
    Complex::new(re, im)
}

pub fn gr_int(re: i64, im: i64) -> GaussianRational {
    Complex::new(q(re, 1), q(im, 1))
}

/// `p/q` form, always with an explicit denominator.
pub fn rational_string(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// One stored term `coeff · jet · ξ^xi_power`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolTerm {
    pub coeff: GaussianRational,
    pub jet: JetMonomial,
    pub xi_power: i32,
}

/// Finite graded symbol; terms below `cutoff` are never stored and zero
/// coefficients are dropped, so equality is structural.
#[derive(Clone, Debug, PartialEq)]
pub struct Symbol {
    terms: BTreeMap<(i32, JetMonomial), GaussianRational>,
    cutoff: i32,
}

impl Symbol {
    pub fn zero(cutoff: i32) -> Self {
        Self { terms: BTreeMap::new(), cutoff }
    }

    pub fn one(cutoff: i32) -> Self {
        Self::monomial(GaussianRational::one(), JetMonomial::one(), 0, cutoff)
    }

    pub fn monomial(coeff: GaussianRational, jet: JetMonomial, xi_power: i32, cutoff: i32) -> Self {
        let mut s = Self::zero(cutoff);
        s.add_term(coeff, jet, xi_power);
        s
    }

    /// `ξ^k`.
    pub fn xi(k: i32, cutoff: i32) -> Self {
        Self::monomial(GaussianRational::one(), JetMonomial::one(), k, cutoff)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = SymbolTerm>, cutoff: i32) -> Self {
        let mut s = Self::zero(cutoff);
        for t in terms {
            s.add_term(t.coeff, t.jet, t.xi_power);
        }
        s
    }

    pub fn cutoff(&self) -> i32 {
        self.cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, coeff: GaussianRational, jet: JetMonomial, xi_power: i32) {
        if xi_power < self.cutoff || coeff.is_zero() {
            return;
        }
        let key = (xi_power, jet);
        let remove = match self.terms.get_mut(&key) {
            Some(c) => {
                *c += coeff;
                c.is_zero()
            }
            None => {
                self.terms.insert(key.clone(), coeff);
                false
            }
        };
        if remove {
            self.terms.remove(&key);
        }
    }

    /// Terms in descending homogeneity, then jet order.
    pub fn terms(&self) -> Vec<SymbolTerm> {
        self.terms
            .iter()
            .rev()
            .map(|((k, j), c)| SymbolTerm { coeff: c.clone(), jet: j.clone(), xi_power: *k })
            .collect()
    }

    pub fn coeff(&self, jet: &JetMonomial, xi_power: i32) -> GaussianRational {
        self.terms.get(&(xi_power, jet.clone())).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// Highest homogeneity degree present.
    pub fn order(&self) -> Option<i32> {
        self.terms.keys().next_back().map(|(k, _)| *k)
    }

    pub fn min_xi_power(&self) -> Option<i32> {
        self.terms.keys().next().map(|(k, _)| *k)
    }

    /// Homogeneous component of degree `k` (same cutoff).
    pub fn component(&self, k: i32) -> Symbol {
        let mut s = Self::zero(self.cutoff.min(k));
        for ((p, j), c) in self.terms.range((k, JetMonomial::u_pow(i32::MIN))..) {
            if *p != k {
                break;
            }
            s.add_term(c.clone(), j.clone(), *p);
        }
        s
    }

    pub fn truncate(&self, cutoff: i32) -> Symbol {
        let mut s = Self::zero(cutoff);
        for ((p, j), c) in &self.terms {
            s.add_term(c.clone(), j.clone(), *p);
        }
        s
    }

    pub fn add(&self, other: &Symbol) -> Symbol {
        let mut s = self.truncate(self.cutoff.max(other.cutoff));
        for ((p, j), c) in &other.terms {
            s.add_term(c.clone(), j.clone(), *p);
        }
        s
    }

    pub fn sub(&self, other: &Symbol) -> Symbol {
        self.add(&other.scale(&-GaussianRational::one()))
    }

    pub fn scale(&self, c: &GaussianRational) -> Symbol {
        let mut s = Self::zero(self.cutoff);
        for ((p, j), v) in &self.terms {
            s.add_term(v * c, j.clone(), *p);
        }
        s
    }

    /// Pointwise product of symbol functions (not operator composition).
    pub fn mul(&self, other: &Symbol, cutoff: i32) -> Symbol {
        let mut s = Self::zero(cutoff);
        for ((p, j), c) in &self.terms {
            for ((p2, j2), c2) in &other.terms {
                if p + p2 >= cutoff {
                    s.add_term(c * c2, j.mul(j2), p + p2);
                }
            }
        }
        s
    }

    /// `(1/α!) ∂_ξ^α`, exact falling-factorial coefficients.
    pub fn xi_derivative_scaled(&self, alpha: u32) -> Symbol {
        let mut s = Self::zero(self.cutoff - alpha as i32);
        let mut fact = BigInt::one();
        for a in 1..=alpha {
            fact *= BigInt::from(a);
        }
        for ((p, j), c) in &self.terms {
            let mut ff = BigInt::one();
            for t in 0..alpha as i64 {
                ff *= BigInt::from(*p as i64 - t);
            }
            if ff.is_zero() {
                continue;
            }
            let f = BigRational::new(ff, fact.clone());
            s.add_term(c * Complex::new(f, Rational::zero()), j.clone(), p - alpha as i32);
        }
        s
    }

    /// `∂_x` acting on the jet part by the Leibniz rule.
    pub fn x_derivative(&self) -> Symbol {
        let mut s = Self::zero(self.cutoff);
        for ((p, j), c) in &self.terms {
            for (m, dj) in j.dx() {
                s.add_term(c * Complex::new(q(m, 1), Rational::zero()), dj, *p);
            }
        }
        s
    }

    /// `D_x = (1/i) ∂_x`.
    pub fn dx_kn(&self) -> Symbol {
        let minus_i = Complex::new(Rational::zero(), -Rational::one());
        self.x_derivative().scale(&minus_i)
    }

    /// Replaces each coefficient by its complex conjugate.
    pub fn conj(&self) -> Symbol {
        let mut s = Self::zero(self.cutoff);
        for ((p, j), c) in &self.terms {
            s.add_term(c.conj(), j.clone(), *p);
        }
        s
    }
}

fn coeff_str(c: &GaussianRational) -> String {
    let re = &c.re;
    let im = &c.im;
    let fmt = |x: &Rational| {
        if x.is_integer() {
            x.numer().to_string()
        } else {
            format!("{}/{}", x.numer(), x.denom())
        }
    };
    if im.is_zero() {
        fmt(re)
    } else if re.is_zero() {
        if im.is_one() {
            "i".to_string()
        } else if *im == -Rational::one() {
            "-i".to_string()
        } else {
            format!("{}i", fmt(im))
        }
    } else {
        let sign = if im.is_negative() { "-" } else { "+" };
        format!("({} {} {}i)", fmt(re), sign, fmt(&im.abs()))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for t in self.terms() {
            let mut c = coeff_str(&t.coeff);
            let negative = c.starts_with('-');
            if negative {
                c.remove(0);
            }
            let sep = match (first, negative) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            first = false;
            let jet = if t.jet.is_one() { String::new() } else { t.jet.to_string() };
            let body = match (c.as_str(), jet.is_empty()) {
                ("1", false) => jet,
                ("1", true) => "1".to_string(),
                (_, true) => c,
                (_, false) => format!("{c}·{jet}"),
            };
            let xi = match t.xi_power {
                0 => String::new(),
                1 => "·ξ".to_string(),
                k => format!("·ξ^{k}"),
            };
            let body = if body == "1" && !xi.is_empty() { xi[2..].to_string() } else { format!("{body}{xi}") };
            write!(f, "{sep}{body}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancelling_terms_are_dropped() {
        let mut s = Symbol::zero(-4);
        s.add_term(gr_int(2, 1), JetMonomial::u_pow(1), -2);
        s.add_term(gr_int(-2, -1), JetMonomial::u_pow(1), -2);
        assert!(s.is_zero());
    }

    #[test]
    fn terms_below_cutoff_are_not_stored() {
        let s = Symbol::xi(-5, -4);
        assert!(s.is_zero());
    }

    #[test]
    fn xi_derivative_uses_falling_factorial() {
        // (1/2) ∂_ξ^2 ξ^-2 = 3 ξ^-4
        let s = Symbol::xi(-2, -10).xi_derivative_scaled(2);
        assert_eq!(s, Symbol::monomial(gr_int(3, 0), JetMonomial::one(), -4, -12));
        // ∂_ξ^3 ξ^2 = 0
        assert!(Symbol::xi(2, 0).xi_derivative_scaled(3).is_zero());
    }

    #[test]
    fn rational_strings_round_trip() {
        let x = q(-7, 27);
        assert_eq!(rational_string(&x), "-7/27");
        assert_eq!(parse_rational("-7/27"), Some(x));
        assert_eq!(parse_rational("4"), Some(q(4, 1)));
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn display_matches_hand_written_form() {
        let mut s = Symbol::xi(-2, -8);
        s.add_term(gr_int(-1, 0), JetMonomial::u_pow(1), -4);
        s.add_term(gr_int(0, -2), JetMonomial::derivative(1), -5);
        assert_eq!(s.to_string(), "ξ^-2 - u·ξ^-4 - 2i·u'·ξ^-5");
    }
}
