use crate::grid::{Field, Grid};
use crate::operator::{assemble_green, GreenCombination, GreenOperator, Kind};
use crate::probe::{probe_columns, ProbeConfig};
use crate::GreenError;

/// Fitted coefficients at every interior node of `D = T - Σ w_i G(f_i)`, along `θ = e₁`.
fn fit_residual_everywhere(
    target: &GreenCombination,
    subtract: &[(f64, Field)],
    cfg: &ProbeConfig,
    powers: &[usize],
) -> Result<Vec<Vec<f64>>, GreenError> {
    use rayon::prelude::*;
    let grid = target.grid();
    let mut terms = target.terms().to_vec();
    for (w, f) in subtract {
        terms.push((-w, assemble_green(grid, f, Kind::Potential)?));
    }
    let diff = GreenCombination::new(terms)?;
    let nodes: Vec<usize> = (0..grid.len()).collect();
    let cols = probe_columns(&diff, &nodes, cfg.kp);
    cols.par_iter()
        .map(|c| c.fit(cfg, [1.0, 0.0], powers).map(|f| f.coeffs))
        .collect()
}

/// Recovered mean and variance at every interior node.
#[derive(Clone, Debug)]
pub struct MeanVariance {
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

/// Mean from the `|ξ|⁻⁴` coefficient of `Ē - G₀`, then variance from the
/// `|ξ|⁻⁶` coefficient of `Ē - G_{q̂}`, at every interior node of a 1D or 2D grid.
pub fn recover_mean_variance(ebar: &GreenCombination, cfg: &ProbeConfig) -> Result<MeanVariance, GreenError> {
    let grid = ebar.grid();
    let mean = stage_mean(ebar, cfg)?;
    let mfield = Field::from_interior(grid, &mean.iter().map(|&m| m.max(0.0)).collect::<Vec<_>>())?;
    let c = fit_residual_everywhere(ebar, &[(1.0, mfield)], cfg, &[2, 3, 4, 5])?;
    Ok(MeanVariance { mean, variance: c.iter().map(|v| v[1]).collect() })
}

fn stage_mean(ebar: &GreenCombination, cfg: &ProbeConfig) -> Result<Vec<f64>, GreenError> {
    let zero = Field::constant(ebar.grid(), 0.0);
    let c = fit_residual_everywhere(ebar, &[(1.0, zero)], cfg, &[2, 3, 4])?;
    Ok(c.iter().map(|v| -v[0]).collect())
}

/// Which formula produced a two-atom recovery.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoAtomBranch {
    Degenerate,
    Symmetric,
    General,
}

/// Pointwise two-atom values from `m₁, m₂, m₃` and the weight `τ` of the first atom.
pub fn two_atom_recover(
    m1: &[f64],
    m2: &[f64],
    m3: &[f64],
    tau: f64,
) -> Result<Vec<((f64, f64), TwoAtomBranch)>, GreenError> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(GreenError::Precondition(format!("τ = {tau} outside (0, 1)")));
    }
    if m1.len() != m2.len() || m1.len() != m3.len() {
        return Err(GreenError::Precondition("moment fields differ in length".into()));
    }
    let mut out = Vec::with_capacity(m1.len());
    for k in 0..m1.len() {
        let (a, b, c) = (m1[k], m2[k], m3[k]);
        let v = b - a * a;
        let tol_v = (1e-6 * a * a).max(1e-10);
        if v < -tol_v {
            return Err(GreenError::InconsistentMoments { index: k, variance: v });
        }
        if v <= tol_v {
            out.push(((a, a), TwoAtomBranch::Degenerate));
        } else if (tau - 0.5).abs() < 1e-12 {
            let s = v.sqrt();
            out.push(((a + s, a - s), TwoAtomBranch::Symmetric));
        } else {
            let c3 = c - 3.0 * a * b + 2.0 * a * a * a;
            let delta = c3 / ((1.0 - 2.0 * tau) * v);
            out.push(((a + (1.0 - tau) * delta, a - tau * delta), TwoAtomBranch::General));
        }
    }
    Ok(out)
}

/// Settings of the iterative two-atom pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub probe: ProbeConfig,
    pub iterations: usize,
    /// Gaussian smoothing width of coefficient updates, in nodes.
    pub smoothing_nodes: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self { probe: ProbeConfig::line(), iterations: 5, smoothing_nodes: 8.0 }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub m1: Vec<f64>,
    pub variance: Vec<f64>,
    pub c3: Vec<f64>,
    pub atoms: Vec<((f64, f64), TwoAtomBranch)>,
}

/// Gaussian smoothing of a 1D interior field with edge replication.
fn smooth(v: &[f64], sigma: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return v.to_vec();
    }
    let reach = (4.0 * sigma).ceil() as isize;
    let w: Vec<f64> = (-reach..=reach).map(|d| (-(d * d) as f64 / (2.0 * sigma * sigma)).exp()).collect();
    let total: f64 = w.iter().sum();
    let n = v.len() as isize;
    (0..n)
        .map(|i| {
            (-reach..=reach)
                .zip(&w)
                .map(|(d, wt)| wt * v[(i + d).clamp(0, n - 1) as usize])
                .sum::<f64>()
                / total
        })
        .collect()
}

/// Two-atom recovery from `Ē` on a 1D grid.
///
/// Each round compares `Ē` with the symmetric surrogate `½G(m₁+√V) + ½G(m₁-√V)`,
/// which shares `m₁`, `m₂` and every derivative term through `|ξ|⁻⁸` with the true
/// law, so the residual's `|ξ|⁻⁴, |ξ|⁻⁶, |ξ|⁻⁸` coefficients are the corrections to
/// `m₁`, `V` and `-c₃`.
pub fn two_atom_pipeline(ebar: &GreenCombination, tau: f64, cfg: &PipelineConfig) -> Result<PipelineResult, GreenError> {
    let grid = ebar.grid();
    if grid.dim() != 1 {
        return Err(GreenError::Precondition("the two-atom pipeline runs on 1D grids".into()));
    }
    let mut m1 = stage_mean(ebar, &cfg.probe)?;
    let mut var = vec![0.0; grid.len()];
    let mut c3 = vec![0.0; grid.len()];
    for _ in 0..cfg.iterations.max(1) {
        let (hi, lo) = surrogate_atoms(&grid, &m1, &var)?;
        let c = fit_residual_everywhere(ebar, &[(0.5, hi), (0.5, lo)], &cfg.probe, &[2, 3, 4, 5])?;
        let d1 = smooth(&c.iter().map(|v| v[0]).collect::<Vec<_>>(), cfg.smoothing_nodes);
        let dv = smooth(&c.iter().map(|v| v[1]).collect::<Vec<_>>(), cfg.smoothing_nodes);
        for k in 0..grid.len() {
            m1[k] -= d1[k];
            var[k] += dv[k];
            c3[k] = -c[k][2];
        }
    }
    let m2: Vec<f64> = m1.iter().zip(&var).map(|(a, v)| v + a * a).collect();
    let m3: Vec<f64> = (0..grid.len()).map(|k| c3[k] + 3.0 * m1[k] * m2[k] - 2.0 * m1[k].powi(3)).collect();
    let atoms = two_atom_recover(&m1, &m2, &m3, tau)?;
    Ok(PipelineResult { m1, variance: var, c3, atoms })
}

fn surrogate_atoms(grid: &Grid, m1: &[f64], var: &[f64]) -> Result<(Field, Field), GreenError> {
    let s: Vec<f64> = var.iter().map(|v| v.max(0.0).sqrt()).collect();
    let hi: Vec<f64> = m1.iter().zip(&s).map(|(a, b)| (a + b).max(0.0)).collect();
    let lo: Vec<f64> = m1.iter().zip(&s).map(|(a, b)| (a - b).max(0.0)).collect();
    Ok((Field::from_interior(*grid, &hi)?, Field::from_interior(*grid, &lo)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_branches() {
        let r = two_atom_recover(&[4.0], &[18.0], &[86.0], 1.0 / 3.0).unwrap();
        assert!((r[0].0 .0 - 2.0).abs() < 1e-12 && (r[0].0 .1 - 5.0).abs() < 1e-12);
        assert_eq!(r[0].1, TwoAtomBranch::General);
        let r = two_atom_recover(&[2.0], &[5.0], &[14.0], 0.5).unwrap();
        assert_eq!(r[0], ((3.0, 1.0), TwoAtomBranch::Symmetric));
        let r = two_atom_recover(&[3.0], &[9.0], &[27.0], 0.25).unwrap();
        assert_eq!(r[0], ((3.0, 3.0), TwoAtomBranch::Degenerate));
        assert!(two_atom_recover(&[3.0], &[8.0], &[27.0], 0.25).is_err());
    }

    #[test]
    fn smoothing_preserves_constants() {
        assert!(smooth(&[2.0; 30], 3.0).iter().all(|v| (v - 2.0).abs() < 1e-14));
    }
}
