use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use randcal_radial::{q, rational_string, QNFamily, Rational};

use crate::MomentsError;

/// A finitely supported law over `Q_N` atoms sharing `λ` and the dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct QNLaw {
    pub lambda: Rational,
    pub dim: u32,
    /// `(probability, N)` pairs with distinct `N`.
    pub atoms: Vec<(Rational, u32)>,
}

impl QNLaw {
    pub fn new(lambda: Rational, dim: u32, atoms: Vec<(Rational, u32)>) -> Result<Self, MomentsError> {
        if atoms.is_empty() {
            return Err(MomentsError::Precondition("law has no atoms".into()));
        }
        if atoms.iter().any(|(p, _)| !p.is_positive()) {
            return Err(MomentsError::Precondition("atom weights must be positive".into()));
        }
        let total: Rational = atoms.iter().map(|(p, _)| p).sum();
        if !total.is_one() {
            return Err(MomentsError::Precondition(format!("weights sum to {}", rational_string(&total))));
        }
        let mut seen: Vec<u32> = atoms.iter().map(|&(_, n)| n).collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(MomentsError::Precondition("repeated atom".into()));
        }
        for &(_, n) in &atoms {
            QNFamily::new(lambda.clone(), n, dim)?;
        }
        Ok(Self { lambda, dim, atoms })
    }

    pub fn families(&self) -> Vec<(Rational, QNFamily)> {
        self.atoms
            .iter()
            .map(|(p, n)| (p.clone(), QNFamily::new(self.lambda.clone(), *n, self.dim).expect("validated")))
            .collect()
    }

    /// `E S^r` with `S = N²`.
    pub fn s_moment(&self, r: u32) -> Rational {
        self.atoms.iter().map(|(p, n)| p * Pow::pow(q(i64::from(*n) * i64::from(*n), 1), r)).sum()
    }
}

/// Two laws on distinct nodes whose `S = N²` moments agree through order `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentMatchedLaws {
    pub order: u32,
    pub nodes: Vec<u32>,
    /// Primitive integer kernel of the Vandermonde system, first entry positive.
    pub kernel: Vec<Rational>,
    pub law_a: BTreeMap<u32, Rational>,
    pub law_b: BTreeMap<u32, Rational>,
}

/// Default nodes `1, 2, …, M+2`.
pub fn default_nodes(order: u32) -> Vec<u32> {
    (1..=order + 2).collect()
}

/// Kernel of a full-row-rank `rows × (rows+1)` system by exact reduced row echelon form.
pub(crate) fn one_dim_kernel(mut a: Vec<Vec<Rational>>) -> Result<Vec<Rational>, MomentsError> {
    let rows = a.len();
    let cols = rows + 1;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = Rational::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let delta = &f * &a[r][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() != rows {
        return Err(MomentsError::Internal("Vandermonde system is rank deficient".into()));
    }
    let free = (0..cols).find(|c| !pivots.contains(c)).expect("one free column");
    let mut v = vec![Rational::zero(); cols];
    v[free] = Rational::one();
    for (i, &pc) in pivots.iter().enumerate() {
        v[pc] = -a[i][free].clone();
    }
    Ok(primitive(v))
}

/// Scales to coprime integers with the first nonzero entry positive.
fn primitive(v: Vec<Rational>) -> Vec<Rational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter().map(|x| Rational::from_integer(x * &sign / &g)).collect()
}

/// Moment-matched laws from the kernel of `Σ c_j S_j^r = 0`, `0 <= r <= M`.
pub fn build_moment_matched_laws(order: u32, nodes: &[u32]) -> Result<MomentMatchedLaws, MomentsError> {
    if order < 1 {
        return Err(MomentsError::Precondition("order M must be at least 1".into()));
    }
    if nodes.len() != order as usize + 2 {
        return Err(MomentsError::Precondition(format!("need {} nodes, got {}", order + 2, nodes.len())));
    }
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(MomentsError::Precondition("repeated node".into()));
    }
    if sorted[0] == 0 {
        return Err(MomentsError::Precondition("nodes must be positive".into()));
    }
    let s: Vec<Rational> = sorted.iter().map(|&n| q(i64::from(n) * i64::from(n), 1)).collect();
    let system = (0..=order).map(|r| s.iter().map(|x| Pow::pow(x, r)).collect()).collect();
    let kernel = one_dim_kernel(system)?;
    if kernel.iter().any(Zero::is_zero) {
        return Err(MomentsError::Internal("kernel has a vanishing component".into()));
    }
    let pos: Rational = kernel.iter().filter(|c| c.is_positive()).sum();
    let law_a = sorted.iter().zip(&kernel).filter(|(_, c)| c.is_positive()).map(|(&n, c)| (n, c / &pos)).collect();
    let law_b = sorted.iter().zip(&kernel).filter(|(_, c)| c.is_negative()).map(|(&n, c)| (n, -c / &pos)).collect();
    Ok(MomentMatchedLaws { order, nodes: sorted, kernel, law_a, law_b })
}

impl MomentMatchedLaws {
    fn as_law(part: &BTreeMap<u32, Rational>, lambda: &Rational, dim: u32) -> Result<QNLaw, MomentsError> {
        QNLaw::new(lambda.clone(), dim, part.iter().map(|(&n, p)| (p.clone(), n)).collect())
    }

    pub fn law_a(&self, lambda: &Rational, dim: u32) -> Result<QNLaw, MomentsError> {
        Self::as_law(&self.law_a, lambda, dim)
    }

    pub fn law_b(&self, lambda: &Rational, dim: u32) -> Result<QNLaw, MomentsError> {
        Self::as_law(&self.law_b, lambda, dim)
    }

    /// Rows `(r, E_A S^r, E_B S^r)` for `0 <= r <= max_r`.
    pub fn moment_table(&self, max_r: u32) -> Vec<(u32, Rational, Rational)> {
        let mom = |law: &BTreeMap<u32, Rational>, r: u32| -> Rational {
            law.iter().map(|(&n, p)| p * Pow::pow(q(i64::from(n) * i64::from(n), 1), r)).sum()
        };
        (0..=max_r).map(|r| (r, mom(&self.law_a, r), mom(&self.law_b, r))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_node_kernel() {
        let m = build_moment_matched_laws(1, &[1, 2, 3]).unwrap();
        assert_eq!(m.kernel, vec![q(5, 1), q(-8, 1), q(3, 1)]);
        assert_eq!(m.law_a[&1], q(5, 8));
        assert_eq!(m.law_a[&3], q(3, 8));
        assert_eq!(m.law_b[&2], q(1, 1));
    }

    #[test]
    fn rejects_bad_node_sets() {
        assert!(build_moment_matched_laws(1, &[1, 2, 2]).is_err());
        assert!(build_moment_matched_laws(1, &[1, 2]).is_err());
        assert!(build_moment_matched_laws(0, &[1, 2]).is_err());
        assert!(build_moment_matched_laws(1, &[0, 1, 2]).is_err());
    }

    #[test]
    fn primitive_normalization() {
        assert_eq!(primitive(vec![q(-1, 2), q(1, 3)]), vec![q(3, 1), q(-2, 1)]);
    }
}
