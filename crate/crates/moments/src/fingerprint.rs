use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use randcal_radial::{q, Rational};

use crate::laws::QNLaw;
use crate::MomentsError;

/// Joint law of the eigenvalue vector `(μ_0, …, μ_L)`, exact on a finite support.
#[derive(Clone, Debug, PartialEq)]
pub struct Fingerprint {
    pub truncation: u32,
    pub support: BTreeMap<Vec<Rational>, Rational>,
}

fn eigen_vector(law: &QNLaw, n: u32, truncation: u32) -> Vec<Rational> {
    let fam = randcal_radial::QNFamily::new(law.lambda.clone(), n, law.dim).expect("validated law");
    (0..=truncation).map(|l| fam.dn_eig_exact(l)).collect()
}

pub fn law_fingerprint(law: &QNLaw, truncation: u32) -> Fingerprint {
    let mut support = BTreeMap::new();
    for (p, n) in &law.atoms {
        *support.entry(eigen_vector(law, *n, truncation)).or_insert_with(Rational::zero) += p;
    }
    Fingerprint { truncation, support }
}

/// Empirical fingerprint from `count` seeded draws.
pub fn sample_fingerprint(law: &QNLaw, truncation: u32, count: usize, seed: u64) -> Result<Fingerprint, MomentsError> {
    if count == 0 {
        return Err(MomentsError::Precondition("sample count must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cdf: Vec<f64> = law
        .atoms
        .iter()
        .scan(0.0, |acc, (p, _)| {
            *acc += randcal_radial::to_f64(p);
            Some(*acc)
        })
        .collect();
    let mut hits = vec![0usize; law.atoms.len()];
    for _ in 0..count {
        let u: f64 = rng.random::<f64>() * cdf.last().copied().unwrap_or(1.0);
        let i = cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1);
        hits[i] += 1;
    }
    let mut support = BTreeMap::new();
    for ((_, n), h) in law.atoms.iter().zip(hits) {
        if h > 0 {
            *support.entry(eigen_vector(law, *n, truncation)).or_insert_with(Rational::zero) +=
                q(h as i64, count as i64);
        }
    }
    Ok(Fingerprint { truncation, support })
}

/// `½ Σ |P(x) - Q(x)|` over the union of supports.
pub fn tv_distance(a: &Fingerprint, b: &Fingerprint) -> Result<Rational, MomentsError> {
    if a.truncation != b.truncation {
        return Err(MomentsError::Precondition("fingerprints use different truncations".into()));
    }
    let mut total = Rational::zero();
    for (k, p) in &a.support {
        total += (p - b.support.get(k).cloned().unwrap_or_else(Rational::zero)).abs();
    }
    for (k, p) in &b.support {
        if !a.support.contains_key(k) {
            total += p.abs();
        }
    }
    Ok(total / q(2, 1))
}
