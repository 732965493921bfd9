use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::GreenError;

/// Relative singular-value floor below which monomials count as dependent.
pub const RANK_TOL: f64 = 1e-10;

/// Multi-indices `α ∈ N^d` with `|α| = k`, lexicographically descending.
pub fn multi_indices(d: usize, k: u32) -> Vec<Vec<u32>> {
    if d == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for mut rest in multi_indices(d - 1, k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn multinomial(alpha: &[u32]) -> f64 {
    factorial(alpha.iter().sum()) / alpha.iter().map(|&a| factorial(a)).product::<f64>()
}

fn binomial(n: u32, k: u32) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn monomial(v: &[Vec<f64>], alpha: &[u32], x: usize) -> f64 {
    alpha.iter().zip(v).map(|(&a, f)| f[x].powi(a as i32)).product()
}

pub fn monomial_name(alpha: &[u32]) -> String {
    let parts: Vec<String> = alpha
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > 0)
        .map(|(j, &a)| if a == 1 { format!("V{}", j + 1) } else { format!("V{}^{a}", j + 1) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

/// Mixed moments `E X^α`, `|α| <= k_max`, from `M_k = E q^k` sampled at the points of `U`.
///
/// `moments[k-1][x]` is `M_k` at point `x`; `q0[x]` and `v[j][x]` are the model fields there.
pub fn finite_model_recover(
    moments: &[Vec<f64>],
    q0: &[f64],
    v: &[Vec<f64>],
    k_max: u32,
) -> Result<BTreeMap<Vec<u32>, f64>, GreenError> {
    let d = v.len();
    let npts = q0.len();
    if moments.len() < k_max as usize {
        return Err(GreenError::Precondition(format!("need M_1..M_{k_max}, got {}", moments.len())));
    }
    if moments.iter().chain(v.iter()).any(|f| f.len() != npts) {
        return Err(GreenError::Precondition("fields sampled on different point sets".into()));
    }
    let mut known: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
    known.insert(vec![0; d], 1.0);
    for k in 1..=k_max {
        let alphas = multi_indices(d, k);
        if npts < alphas.len() {
            return Err(GreenError::Precondition(format!("{npts} points cannot determine {} moments", alphas.len())));
        }
        let mut rhs = DVector::zeros(npts);
        for x in 0..npts {
            let mut lower = 0.0;
            for l in 0..k {
                let inner: f64 = multi_indices(d, l)
                    .iter()
                    .map(|a| multinomial(a) * known[a] * monomial(v, a, x))
                    .sum();
                lower += binomial(k, l) * q0[x].powi((k - l) as i32) * inner;
            }
            rhs[x] = moments[k as usize - 1][x] - lower;
        }
        let mut a = DMatrix::from_fn(npts, alphas.len(), |x, c| multinomial(&alphas[c]) * monomial(v, &alphas[c], x));
        let scale: Vec<f64> = (0..alphas.len()).map(|c| a.column(c).norm()).collect();
        if let Some(c) = scale.iter().position(|&s| !(s > 0.0)) {
            return Err(GreenError::RankDeficient { degree: k, monomials: vec![monomial_name(&alphas[c])] });
        }
        for (c, s) in scale.iter().enumerate() {
            a.column_mut(c).scale_mut(1.0 / s);
        }
        let svd = a.svd(true, true);
        let smax = svd.singular_values.max();
        let (imin, smin) = svd.singular_values.argmin();
        if smin < RANK_TOL * smax {
            let vt = svd.v_t.as_ref().expect("requested");
            let null = vt.row(imin);
            let big = null.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let names = alphas
                .iter()
                .zip(null.iter())
                .filter(|(_, c)| c.abs() > 1e-3 * big)
                .map(|(a, _)| monomial_name(a))
                .collect();
            return Err(GreenError::RankDeficient { degree: k, monomials: names });
        }
        let sol = svd.solve(&rhs, 0.0).map_err(|e| GreenError::Numerical(e.to_string()))?;
        for (c, alpha) in alphas.into_iter().enumerate() {
            known.insert(alpha, sol[c] / scale[c]);
        }
    }
    Ok(known)
}

/// Ground-truth `E X^α` of a finite law `{(p, x)}`.
pub fn law_mixed_moments(law: &[(f64, Vec<f64>)], d: usize, k_max: u32) -> BTreeMap<Vec<u32>, f64> {
    let mut out = BTreeMap::new();
    for k in 0..=k_max {
        for alpha in multi_indices(d, k) {
            let m = law
                .iter()
                .map(|(p, x)| p * alpha.iter().zip(x).map(|(&a, xi)| xi.powi(a as i32)).product::<f64>())
                .sum();
            out.insert(alpha, m);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(2, 3).len(), 4);
        assert_eq!(multi_indices(3, 2).len(), 6);
        assert_eq!(multinomial(&[1, 2]), 3.0);
        assert_eq!(monomial_name(&[1, 2]), "V1·V2^2");
    }
}
