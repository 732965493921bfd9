use num_traits::{One, Pow, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use randcal_radial::{q, QNFamily, Rational};

use crate::boundary::{gr, gr_real, AffineDNDecomposition, BoundaryVector, GaussianRational};
use crate::laws::{MomentMatchedLaws, QNLaw};
use crate::MomentsError;

/// One factor `⟨Λ f, g⟩`, optionally complex-conjugated.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorPair {
    pub f: BoundaryVector,
    pub g: BoundaryVector,
    pub conjugate: bool,
}

impl FactorPair {
    pub fn new(f: BoundaryVector, g: BoundaryVector) -> Self {
        Self { f, g, conjugate: false }
    }

    /// `(a, b)` with the factor equal to `a - S b`.
    fn affine(&self, dec: &AffineDNDecomposition) -> (GaussianRational, GaussianRational) {
        let (a, b) = dec.pair(&self.f, &self.g);
        if self.conjugate {
            (a.conj(), b.conj())
        } else {
            (a, b)
        }
    }
}

/// Coefficients in `S` of `Π_j (a_j - S b_j)`, lowest degree first.
pub fn product_polynomial(dec: &AffineDNDecomposition, pairs: &[FactorPair]) -> Vec<GaussianRational> {
    let mut poly = vec![gr_real(Rational::one())];
    for p in pairs {
        let (a, b) = p.affine(dec);
        let mut next = vec![GaussianRational::zero(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k] = &next[k] + c * &a;
            next[k + 1] = &next[k + 1] - c * &b;
        }
        poly = next;
    }
    poly
}

fn s_of(n: u32) -> Rational {
    q(i64::from(n) * i64::from(n), 1)
}

/// `E Π_j ⟨Λ_q f_j, g_j⟩` by enumerating the atoms of the law.
pub fn expect_product(law: &QNLaw, pairs: &[FactorPair]) -> GaussianRational {
    let dec = AffineDNDecomposition::new(law.lambda.clone(), law.dim);
    let factors: Vec<_> = pairs.iter().map(|p| p.affine(&dec)).collect();
    let mut acc = GaussianRational::zero();
    for (w, n) in &law.atoms {
        let s = s_of(*n);
        let mut prod = gr_real(Rational::one());
        for (a, b) in &factors {
            prod = prod * (a - b.scale(s.clone()));
        }
        acc = acc + prod.scale(w.clone());
    }
    acc
}

/// `(E_A, E_B)` of the product over both moment-matched laws.
pub fn dn_moment_product(
    laws: &MomentMatchedLaws,
    pairs: &[FactorPair],
    lambda: &Rational,
    dim: u32,
) -> Result<(GaussianRational, GaussianRational), MomentsError> {
    if pairs.is_empty() {
        return Err(MomentsError::Precondition("need at least one factor".into()));
    }
    Ok((expect_product(&laws.law_a(lambda, dim)?, pairs), expect_product(&laws.law_b(lambda, dim)?, pairs)))
}

/// `r` copies of `⟨Λ e_{00}, e_{00}⟩`: the `S^r` coefficient `(-β_0)^r` never vanishes.
pub fn sharpness_pairs(r: usize) -> Vec<FactorPair> {
    let e = BoundaryVector::unit(0, 0).expect("valid index");
    vec![FactorPair::new(e.clone(), e); r]
}

/// `Cov(⟨Λf,g⟩, ⟨Λh,k⟩)` under the law, exactly.
pub fn dn_covariance(
    law: &QNLaw,
    f: &BoundaryVector,
    g: &BoundaryVector,
    h: &BoundaryVector,
    k: &BoundaryVector,
) -> GaussianRational {
    let x = [FactorPair::new(f.clone(), g.clone())];
    let y = [FactorPair::new(h.clone(), k.clone())];
    let xy = [x[0].clone(), y[0].clone()];
    expect_product(law, &xy) - expect_product(law, &x) * expect_product(law, &y)
}

/// `|E q_A(r) - E q_B(r)|` for the two moment-matched laws.
pub fn mean_potential_gap(laws: &MomentMatchedLaws, lambda: &Rational, r: &Rational) -> Result<Rational, MomentsError> {
    let mean = |part: &std::collections::BTreeMap<u32, Rational>| -> Result<Rational, MomentsError> {
        let mut acc = Rational::zero();
        for (&n, p) in part {
            acc += p * QNFamily::new(lambda.clone(), n, 3)?.qn_exact(r)?;
        }
        Ok(acc)
    };
    Ok((mean(&laws.law_a)? - mean(&laws.law_b)?).abs())
}

/// Random factor pairs with small integer (or Gaussian integer) coefficients on degrees `<= ell_max`.
pub fn random_factor_pairs(rng: &mut impl Rng, r: usize, ell_max: u32, complex: bool) -> Vec<FactorPair> {
    let coeff = |rng: &mut dyn rand::RngCore| -> GaussianRational {
        let re = q(rng.random_range(-4i64..=4), rng.random_range(1i64..=3));
        let im = if complex { q(rng.random_range(-4i64..=4), rng.random_range(1i64..=3)) } else { Rational::zero() };
        gr(re, im)
    };
    (0..r)
        .map(|_| {
            let mut f = BoundaryVector::new();
            let mut g = BoundaryVector::new();
            for _ in 0..rng.random_range(1..=3) {
                let l = rng.random_range(0..=ell_max);
                let m = rng.random_range(-(l as i32)..=l as i32);
                f.set(l, m, coeff(rng)).expect("valid index");
                g.set(l, m, coeff(rng)).expect("valid index");
            }
            let conjugate = complex && rng.random_bool(0.5);
            FactorPair { f, g, conjugate }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct TrialRow {
    pub trial: usize,
    pub r: usize,
    pub e_a: GaussianRational,
    pub e_b: GaussianRational,
}

impl TrialRow {
    pub fn equal(&self) -> bool {
        self.e_a == self.e_b
    }
}

/// `trials` random batches of `r` factors each, seeded deterministically.
pub fn run_product_trials(
    laws: &MomentMatchedLaws,
    lambda: &Rational,
    dim: u32,
    r: usize,
    trials: usize,
    seed: u64,
    complex: bool,
) -> Result<Vec<TrialRow>, MomentsError> {
    let la = laws.law_a(lambda, dim)?;
    let lb = laws.law_b(lambda, dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    Ok((0..trials)
        .map(|trial| {
            let pairs = random_factor_pairs(&mut rng, r, 6, complex);
            TrialRow { trial, r, e_a: expect_product(&la, &pairs), e_b: expect_product(&lb, &pairs) }
        })
        .collect())
}

/// `E_A S^r - E_B S^r` is nonzero exactly beyond the matched order.
pub fn s_moment_gap(laws: &MomentMatchedLaws, r: u32) -> Rational {
    laws.law_a.iter().map(|(&n, p)| p * Pow::pow(s_of(n), r)).sum::<Rational>()
        - laws.law_b.iter().map(|(&n, p)| p * Pow::pow(s_of(n), r)).sum::<Rational>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::build_moment_matched_laws;

    #[test]
    fn polynomial_matches_enumeration() {
        let laws = build_moment_matched_laws(2, &[1, 2, 3, 4]).unwrap();
        let law = laws.law_a(&q(16, 1), 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pairs = random_factor_pairs(&mut rng, 3, 4, true);
        let poly = product_polynomial(&AffineDNDecomposition::new(q(16, 1), 3), &pairs);
        let via_moments = poly.iter().enumerate().fold(GaussianRational::zero(), |acc, (k, c)| {
            acc + c.scale(law.s_moment(k as u32))
        });
        assert_eq!(via_moments, expect_product(&law, &pairs));
    }

    #[test]
    fn gap_sign_beyond_order() {
        let laws = build_moment_matched_laws(1, &[1, 2, 3]).unwrap();
        assert_eq!(s_moment_gap(&laws, 2), q(15, 1));
        assert!(s_moment_gap(&laws, 2).is_positive());
    }
}
