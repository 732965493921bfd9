use std::collections::BTreeMap;

use randcal_symcalc::{average_symbol, parametrix, q, schrodinger_symbol, MomentSymbolLaw, Rational, SymbolError};

/// Averaged parametrix symbols of a two-atom law `q = m + εD` (`ε ∈ {1-τ, -τ}`) minus
/// those of a symmetric law with the same `E ε²`, for `τ = a/b` with `τ(1-τ)` of the
/// form `2p·s²` handled by the three-point law `ε ∈ {-s, 0, s}`.
///
/// Jets are `[f, f', f'', f''', f'''']` at one point. Degrees `-2..-7` cancel and the
/// degree `-8` gap is `-E ε³ D³ = -c₃`: the symmetric surrogate differs from the true
/// law only through the third central moment at that order.
pub fn surrogate_symbol_gap(
    tau: &Rational,
    m_jets: &[Rational; 5],
    d_jets: &[Rational; 5],
    spread: &Rational,
) -> Result<BTreeMap<i32, (Rational, Rational)>, SymbolError> {
    let one = q(1, 1);
    let var = tau * (&one - tau);
    let p = &var / (q(2, 1) * spread * spread);
    if p <= q(0, 1) || p > q(1, 2) {
        return Err(SymbolError::InvalidArgument("spread incompatible with the variance".into()));
    }
    let atom = |eps: &Rational| -> Vec<Rational> { m_jets.iter().zip(d_jets).map(|(m, d)| m + eps * d).collect() };
    let truth = MomentSymbolLaw::from_jets(vec![
        (tau.clone(), atom(&(&one - tau))),
        (&one - tau, atom(&-tau.clone())),
    ])?;
    let surrogate = MomentSymbolLaw::from_jets(vec![
        (p.clone(), atom(spread)),
        (&one - q(2, 1) * &p, atom(&q(0, 1))),
        (p, atom(&-spread.clone())),
    ])?;
    let r = parametrix(&schrodinger_symbol(-8), -8)?;
    let a = average_symbol(&r, &truth)?;
    let b = average_symbol(&r, &surrogate)?;
    let mut out = BTreeMap::new();
    for k in -8..=-2 {
        let zero = (q(0, 1), q(0, 1));
        let x = a.get(&k).unwrap_or(&zero);
        let y = b.get(&k).unwrap_or(&zero);
        out.insert(k, (&x.0 - &y.0, &x.1 - &y.1));
    }
    Ok(out)
}
