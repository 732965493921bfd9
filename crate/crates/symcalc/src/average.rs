use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::jet::JetMonomial;
use crate::symbol::{Rational, Symbol};
use crate::SymbolError;

/// Finitely supported law of pointwise jet values: each atom assigns a value to
/// every derivative order (order 0 is `u` itself).
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSymbolLaw {
    atoms: Vec<(Rational, BTreeMap<u32, Rational>)>,
}

impl MomentSymbolLaw {
    pub fn new(atoms: Vec<(Rational, BTreeMap<u32, Rational>)>) -> Result<Self, SymbolError> {
        if atoms.is_empty() {
            return Err(SymbolError::InvalidLaw("law has no atoms".into()));
        }
        let mut total = Rational::zero();
        for (w, _) in &atoms {
            if !w.is_positive() {
                return Err(SymbolError::InvalidLaw(format!("non-positive weight {w}")));
            }
            total += w;
        }
        if !total.is_one() {
            return Err(SymbolError::InvalidLaw(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { atoms })
    }

    /// Convenience: atoms given as jet vectors `[u, u', u'', ...]`.
    pub fn from_jets(atoms: Vec<(Rational, Vec<Rational>)>) -> Result<Self, SymbolError> {
        Self::new(
            atoms
                .into_iter()
                .map(|(w, jet)| (w, jet.into_iter().enumerate().map(|(k, v)| (k as u32, v)).collect()))
                .collect(),
        )
    }

    pub fn atoms(&self) -> &[(Rational, BTreeMap<u32, Rational>)] {
        &self.atoms
    }

    /// Convex combination `t·self + (1-t)·other` as a merged atom list.
    pub fn mix(&self, other: &Self, t: &Rational) -> Result<Self, SymbolError> {
        let s = Rational::one() - t;
        let mut atoms: Vec<_> = self.atoms.iter().map(|(w, v)| (w * t, v.clone())).collect();
        atoms.extend(other.atoms.iter().map(|(w, v)| (w * &s, v.clone())));
        atoms.retain(|(w, _)| w.is_positive());
        Self::new(atoms)
    }

    /// `E[jet]` under the law.
    pub fn expect(&self, jet: &JetMonomial) -> Result<Rational, SymbolError> {
        let mut acc = Rational::zero();
        for (idx, (w, vals)) in self.atoms.iter().enumerate() {
            let mut prod = Rational::one();
            if jet.base_power() != 0 {
                let u = vals.get(&0).ok_or(SymbolError::MissingJetOrder { atom: idx, order: 0 })?;
                if jet.base_power() < 0 && u.is_zero() {
                    return Err(SymbolError::InvalidLaw(format!("atom {idx} has u = 0 under a negative power")));
                }
                prod *= num_traits::pow::Pow::pow(u, jet.base_power());
            }
            for &k in jet.orders() {
                let v = vals.get(&k).ok_or(SymbolError::MissingJetOrder { atom: idx, order: k })?;
                prod *= v;
            }
            acc += w * prod;
        }
        Ok(acc)
    }
}

/// Averages each jet monomial under `law` and sums per homogeneity degree,
/// returning `(re, im)` for every degree present in `s`.
pub fn average_symbol(s: &Symbol, law: &MomentSymbolLaw) -> Result<BTreeMap<i32, (Rational, Rational)>, SymbolError> {
    let mut out: BTreeMap<i32, (Rational, Rational)> = BTreeMap::new();
    for t in s.terms() {
        let e = law.expect(&t.jet)?;
        let slot = out.entry(t.xi_power).or_insert_with(|| (Rational::zero(), Rational::zero()));
        slot.0 += &t.coeff.re * &e;
        slot.1 += &t.coeff.im * &e;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{gr_int, q};

    fn two_point() -> MomentSymbolLaw {
        MomentSymbolLaw::from_jets(vec![(q(1, 2), vec![q(2, 1)]), (q(1, 2), vec![q(6, 1)])]).unwrap()
    }

    #[test]
    fn linear_term_averages_to_mean() {
        let s = Symbol::monomial(gr_int(-1, 0), JetMonomial::u_pow(1), -4, -10);
        let avg = average_symbol(&s, &two_point()).unwrap();
        assert_eq!(avg[&-4], (q(-4, 1), q(0, 1)));
    }

    #[test]
    fn quadratic_term_sees_second_moment() {
        let s = Symbol::monomial(gr_int(1, 0), JetMonomial::u_pow(2), -6, -10);
        let avg = average_symbol(&s, &two_point()).unwrap();
        assert_eq!(avg[&-6], (q(20, 1), q(0, 1)));
    }

    #[test]
    fn independent_jet_values_per_atom() {
        let law = MomentSymbolLaw::new(vec![
            (q(1, 2), BTreeMap::from([(0, q(1, 1)), (2, q(3, 1))])),
            (q(1, 2), BTreeMap::from([(0, q(2, 1)), (2, q(0, 1))])),
        ])
        .unwrap();
        let s = Symbol::monomial(gr_int(1, 0), JetMonomial::new(1, [2]), -8, -10);
        assert_eq!(average_symbol(&s, &law).unwrap()[&-8], (q(3, 2), q(0, 1)));
    }

    #[test]
    fn missing_order_is_an_error() {
        let s = Symbol::monomial(gr_int(1, 0), JetMonomial::derivative(3), -7, -10);
        assert!(matches!(
            average_symbol(&s, &two_point()),
            Err(SymbolError::MissingJetOrder { atom: 0, order: 3 })
        ));
    }

    #[test]
    fn weights_must_sum_to_one() {
        assert!(MomentSymbolLaw::from_jets(vec![(q(1, 3), vec![q(1, 1)])]).is_err());
        assert!(MomentSymbolLaw::from_jets(vec![(q(-1, 1), vec![q(1, 1)]), (q(2, 1), vec![q(1, 1)])]).is_err());
    }
}
