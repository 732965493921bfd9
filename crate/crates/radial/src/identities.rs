use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::family::{q, rational_string, QNFamily, Rational};
use crate::potential::RadialPotential;
use crate::shooting::{dn_eig_numeric, EigenEntry};
use crate::{RadialError, JENSEN_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Schrodinger,
    Conductivity,
}

fn check_weights(weights: &[Rational]) -> Result<(), RadialError> {
    if weights.is_empty() {
        return Err(RadialError::Precondition("empty law".into()));
    }
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(RadialError::Precondition("weights must be positive".into()));
    }
    let total: Rational = weights.iter().sum();
    if !total.is_one() {
        return Err(RadialError::Precondition(format!("weights sum to {}, not 1", rational_string(&total))));
    }
    Ok(())
}

/// Max over `ℓ <= ℓ_max` of `|μ_{ℓ,N₀} - Σ p_j μ_{ℓ,N_j}|` (or the κ analogue), exactly.
pub fn verify_affine_identity(
    n0: u32,
    combo: &[(Rational, u32)],
    lambda: &Rational,
    n: u32,
    ell_max: u32,
    mode: Mode,
) -> Result<Rational, RadialError> {
    let weights: Vec<Rational> = combo.iter().map(|(w, _)| w.clone()).collect();
    check_weights(&weights)?;
    let target = QNFamily::new(lambda.clone(), n0, n)?;
    let atoms = combo
        .iter()
        .map(|(w, nj)| Ok((w.clone(), QNFamily::new(lambda.clone(), *nj, n)?)))
        .collect::<Result<Vec<_>, RadialError>>()?;
    let eig = |f: &QNFamily, l: u32| match mode {
        Mode::Schrodinger => f.dn_eig_exact(l),
        Mode::Conductivity => f.conductivity_dn_exact(l),
    };
    let mut worst = Rational::zero();
    for l in 0..=ell_max {
        let mix: Rational = atoms.iter().map(|(w, f)| w * eig(f, l)).sum();
        let dev = (eig(&target, l) - mix).abs();
        if dev > worst {
            worst = dev;
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq)]
pub enum LambdaPolicy {
    Fixed(Rational),
    /// `λ = 2 max N_j + 1`, the smallest integer admissible for every member.
    MinimalAdmissible,
}

/// `N₀² = Σ p_j N_j²` with `p_j ∈ (0, 1)`, and an admissible `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct BarycentricTuple {
    pub n0: u32,
    pub weights: Vec<Rational>,
    pub nodes: Vec<u32>,
    pub lambda: Rational,
}

fn sq(n: u32) -> Rational {
    Rational::from_integer(BigInt::from(n) * BigInt::from(n))
}

/// Weights on increasing `nodes` solving `N₀² = Σ p_j N_j²`: the two-point
/// solution for `J = 2`, and the average of all straddling two-point solutions for `J >= 3`.
fn barycentric_weights(n0: u32, nodes: &[u32]) -> Vec<Rational> {
    let mut w = vec![Rational::zero(); nodes.len()];
    let mut pairs = 0i64;
    for (a, &na) in nodes.iter().enumerate() {
        for (b, &nb) in nodes.iter().enumerate() {
            if na < n0 && n0 < nb {
                let pa = (sq(nb) - sq(n0)) / (sq(nb) - sq(na));
                w[b] += Rational::one() - &pa;
                w[a] += pa;
                pairs += 1;
            }
        }
    }
    w.into_iter().map(|x| x / q(pairs, 1)).collect()
}

fn combinations(pool: &[u32], k: usize, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..pool.len() {
        cur.push(pool[i]);
        combinations(pool, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Enumerates barycentric identities among `Q_1 .. Q_{N_max}` with `J` distinct nodes.
pub fn find_barycentric_tuples(n_max: u32, j: usize, policy: LambdaPolicy) -> Vec<BarycentricTuple> {
    let mut out = Vec::new();
    if n_max < 2 || j < 2 {
        return out;
    }
    let pool: Vec<u32> = (1..=n_max).collect();
    let mut node_sets = Vec::new();
    combinations(&pool, j, 0, &mut Vec::new(), &mut node_sets);
    for nodes in node_sets {
        let (lo, hi) = (nodes[0], *nodes.last().unwrap());
        let lambda = match &policy {
            LambdaPolicy::Fixed(l) => l.clone(),
            LambdaPolicy::MinimalAdmissible => q(2 * hi as i64 + 1, 1),
        };
        if lambda <= q(2 * hi as i64, 1) {
            continue;
        }
        for n0 in lo + 1..hi {
            if nodes.contains(&n0) {
                continue;
            }
            let weights = barycentric_weights(n0, &nodes);
            if weights.iter().all(|w| w.is_positive() && *w < Rational::one()) {
                out.push(BarycentricTuple { n0, weights, nodes: nodes.clone(), lambda: lambda.clone() });
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub enum JensenAtom {
    Family(QNFamily),
    Potential(RadialPotential),
}

impl JensenAtom {
    fn potential(&self) -> RadialPotential {
        match self {
            JensenAtom::Family(f) => RadialPotential::from_family(f),
            JensenAtom::Potential(p) => p.clone(),
        }
    }
}

/// Per-`ℓ` comparison of `E μ_ℓ` with `μ_ℓ(q̄)`.
#[derive(Clone, Debug)]
pub struct JensenReport {
    pub expected: Vec<EigenEntry>,
    pub mean_potential: Vec<f64>,
    /// `μ_ℓ(q̄) - E μ_ℓ`, indexed by `ℓ`.
    pub margins: Vec<f64>,
}

/// DN Jensen inequality `E Λ_q <= Λ_{q̄}` on each spherical-harmonic degree.
/// Errors if any margin is below `-1e-7`.
pub fn jensen_dn_check(law: &[(Rational, JensenAtom)], ell_max: u32, n: u32) -> Result<JensenReport, RadialError> {
    let weights: Vec<Rational> = law.iter().map(|(w, _)| w.clone()).collect();
    check_weights(&weights)?;
    for (_, a) in law {
        if let JensenAtom::Family(f) = a {
            if f.dim() != n {
                return Err(RadialError::Precondition(format!("atom dimension {} != {n}", f.dim())));
            }
        }
    }
    let mean = RadialPotential::mixture(&law.iter().map(|(w, a)| (w.clone(), a.potential())).collect::<Vec<_>>());
    let all_exact = law.iter().all(|(_, a)| matches!(a, JensenAtom::Family(_)));
    let mut report = JensenReport { expected: Vec::new(), mean_potential: Vec::new(), margins: Vec::new() };
    for l in 0..=ell_max {
        let expected = if all_exact {
            EigenEntry::Exact(
                law.iter()
                    .map(|(w, a)| match a {
                        JensenAtom::Family(f) => w * f.dn_eig_exact(l),
                        JensenAtom::Potential(_) => unreachable!(),
                    })
                    .sum(),
            )
        } else {
            let mut acc = 0.0;
            for (w, a) in law {
                acc += crate::family::to_f64(w) * dn_eig_numeric(&a.potential(), l, n)?;
            }
            EigenEntry::Float(acc)
        };
        let at_mean = dn_eig_numeric(&mean, l, n)?;
        let margin = at_mean - expected.as_f64();
        if margin < -JENSEN_TOL {
            return Err(RadialError::JensenViolation { ell: l, margin, tol: JENSEN_TOL });
        }
        report.expected.push(expected);
        report.mean_potential.push(at_mean);
        report.margins.push(margin);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_validated() {
        let bad = [(q(1, 2), 1), (q(1, 3), 7)];
        assert!(verify_affine_identity(5, &bad, &q(16, 1), 3, 3, Mode::Schrodinger).is_err());
        let small = [(q(1, 2), 1), (q(1, 2), 7)];
        assert!(verify_affine_identity(5, &small, &q(14, 1), 3, 3, Mode::Schrodinger).is_err());
    }

    #[test]
    fn averaged_straddling_weights_sum_to_one() {
        let w = barycentric_weights(4, &[1, 3, 5, 6]);
        assert_eq!(w.iter().sum::<Rational>(), Rational::one());
        let second: Rational = w.iter().zip([1u32, 3, 5, 6]).map(|(p, n)| p * sq(n)).sum();
        assert_eq!(second, sq(4));
    }
}
