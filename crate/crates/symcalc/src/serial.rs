use serde::{Deserialize, Serialize};

use crate::jet::JetMonomial;
use crate::symbol::{gr, parse_rational, rational_string, Symbol, SymbolTerm};
use crate::SymbolError;

/// JSON row of a symbol term; rationals are `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub re: String,
    pub im: String,
    pub base_power: i32,
    pub jet: Vec<u32>,
    pub xi_power: i32,
}

pub fn to_records(s: &Symbol) -> Vec<TermRecord> {
    s.terms()
        .into_iter()
        .map(|t| TermRecord {
            re: rational_string(&t.coeff.re),
            im: rational_string(&t.coeff.im),
            base_power: t.jet.base_power(),
            jet: t.jet.orders().to_vec(),
            xi_power: t.xi_power,
        })
        .collect()
}

pub fn from_records(records: &[TermRecord], cutoff: i32) -> Result<Symbol, SymbolError> {
    let mut terms = Vec::with_capacity(records.len());
    for r in records {
        let re = parse_rational(&r.re).ok_or_else(|| SymbolError::Parse(r.re.clone()))?;
        let im = parse_rational(&r.im).ok_or_else(|| SymbolError::Parse(r.im.clone()))?;
        terms.push(SymbolTerm {
            coeff: gr(re, im),
            jet: JetMonomial::new(r.base_power, r.jet.iter().copied()),
            xi_power: r.xi_power,
        });
    }
    Ok(Symbol::from_terms(terms, cutoff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{parametrix, schrodinger_symbol};

    #[test]
    fn records_round_trip() {
        let r = parametrix(&schrodinger_symbol(-8), -8).unwrap();
        let recs = to_records(&r);
        assert_eq!(recs[0].re, "1/1");
        assert_eq!(recs[0].xi_power, -2);
        assert_eq!(from_records(&recs, -8).unwrap(), r);
    }

    #[test]
    fn bad_rational_is_reported() {
        let rec = TermRecord { re: "x".into(), im: "0/1".into(), base_power: 0, jet: vec![], xi_power: 0 };
        assert!(matches!(from_records(&[rec], 0), Err(SymbolError::Parse(_))));
    }
}
