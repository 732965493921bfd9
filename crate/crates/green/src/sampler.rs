use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{Field, Grid};
use crate::operator::{assemble_green, GreenCombination, Kind};
use crate::GreenError;

const WEIGHT_TOL: f64 = 1e-12;

/// A finitely supported random coefficient field.
#[derive(Clone, Debug)]
pub enum CoefficientSampler {
    /// `{(p_i, q_i)}`.
    Atoms(Vec<(f64, Field)>),
    /// `q = q₀ + Σ X_j V_j` with `X` drawn from `{(p, x)}`.
    FiniteModel { q0: Field, v: Vec<Field>, law: Vec<(f64, Vec<f64>)> },
}

impl CoefficientSampler {
    pub fn grid(&self) -> Grid {
        match self {
            CoefficientSampler::Atoms(a) => a[0].1.grid(),
            CoefficientSampler::FiniteModel { q0, .. } => q0.grid(),
        }
    }

    /// Checks weights and, per realization, admissibility for `kind`.
    pub fn validate(&self, kind: Kind) -> Result<(), GreenError> {
        let weights: Vec<f64> = match self {
            CoefficientSampler::Atoms(a) => a.iter().map(|(w, _)| *w).collect(),
            CoefficientSampler::FiniteModel { q0, v, law } => {
                if v.iter().any(|f| f.grid() != q0.grid()) {
                    return Err(GreenError::Precondition("model fields on different grids".into()));
                }
                if law.iter().any(|(_, x)| x.len() != v.len()) {
                    return Err(GreenError::Precondition("support point dimension mismatch".into()));
                }
                law.iter().map(|(w, _)| *w).collect()
            }
        };
        if weights.is_empty() {
            return Err(GreenError::Precondition("sampler has no realizations".into()));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(GreenError::Precondition("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(GreenError::Precondition(format!("weights sum to {total}")));
        }
        for (_, f) in self.realizations()? {
            if f.grid() != self.grid() {
                return Err(GreenError::Precondition("atoms on different grids".into()));
            }
            let vals = match kind {
                Kind::Potential => f.interior(),
                Kind::Conductivity => f.values().to_vec(),
            };
            let ok = match kind {
                Kind::Potential => vals.iter().all(|&v| v >= 0.0),
                Kind::Conductivity => vals.iter().all(|&v| v > 0.0),
            };
            if !ok {
                return Err(GreenError::Precondition(format!("realization not admissible for {kind:?}")));
            }
        }
        Ok(())
    }

    /// Weighted realizations `(p, field)`.
    pub fn realizations(&self) -> Result<Vec<(f64, Field)>, GreenError> {
        match self {
            CoefficientSampler::Atoms(a) => Ok(a.clone()),
            CoefficientSampler::FiniteModel { q0, v, law } => law
                .iter()
                .map(|(p, x)| {
                    let mut parts: Vec<(f64, &Field)> = vec![(1.0, q0)];
                    parts.extend(x.iter().copied().zip(v.iter()));
                    Ok((*p, Field::combine(&parts)?))
                })
                .collect(),
        }
    }

    /// Pointwise mean field.
    pub fn mean(&self) -> Result<Field, GreenError> {
        let r = self.realizations()?;
        Field::combine(&r.iter().map(|(w, f)| (*w, f)).collect::<Vec<_>>())
    }

    /// Exact moment fields `E q^k`, `k = 1..=k_max`.
    pub fn moment_fields(&self, k_max: u32) -> Result<Vec<Field>, GreenError> {
        let r = self.realizations()?;
        (1..=k_max)
            .map(|k| {
                let pw: Vec<Field> = r.iter().map(|(_, f)| f.map(|v| v.powi(k as i32))).collect();
                Field::combine(&r.iter().zip(&pw).map(|((w, _), f)| (*w, f)).collect::<Vec<_>>())
            })
            .collect()
    }
}

/// `Ē = E G_q` by exact enumeration of the sampler.
pub fn averaged_green(sampler: &CoefficientSampler, kind: Kind) -> Result<GreenCombination, GreenError> {
    sampler.validate(kind)?;
    let grid = sampler.grid();
    let terms = sampler
        .realizations()?
        .into_iter()
        .map(|(w, f)| Ok((w, assemble_green(grid, &f, kind)?)))
        .collect::<Result<Vec<_>, GreenError>>()?;
    GreenCombination::new(terms)
}

/// Seeded Monte Carlo estimate of `Ē` from `samples` draws.
pub fn averaged_green_monte_carlo(
    sampler: &CoefficientSampler,
    kind: Kind,
    samples: usize,
    seed: u64,
) -> Result<GreenCombination, GreenError> {
    if samples == 0 {
        return Err(GreenError::Precondition("sample count must be positive".into()));
    }
    sampler.validate(kind)?;
    let grid = sampler.grid();
    let real = sampler.realizations()?;
    let mut counts = vec![0usize; real.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut u: f64 = rng.random();
        let mut pick = real.len() - 1;
        for (i, (w, _)) in real.iter().enumerate() {
            if u < *w {
                pick = i;
                break;
            }
            u -= w;
        }
        counts[pick] += 1;
    }
    let terms = real
        .iter()
        .zip(counts)
        .filter(|(_, c)| *c > 0)
        .map(|((_, f), c)| Ok((c as f64 / samples as f64, assemble_green(grid, f, kind)?)))
        .collect::<Result<Vec<_>, GreenError>>()?;
    GreenCombination::new(terms)
}
