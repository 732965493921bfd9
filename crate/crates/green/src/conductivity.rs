use rayon::prelude::*;

use crate::grid::Field;
use crate::operator::{assemble_green, GreenCombination, GreenOperator, Kind};
use crate::probe::{probe_columns, ProbeConfig};
use crate::GreenError;

pub type Sym2 = [[f64; 2]; 2];

/// Invariant `C_a` at one probe point, with the directional samples it was solved from.
#[derive(Clone, Debug)]
pub struct PointInvariant {
    pub node: usize,
    pub directions: Vec<[f64; 2]>,
    /// `𝒱(θ) = tr C_a - θᵀ C_a θ` per direction.
    pub v_theta: Vec<f64>,
    pub c: Sym2,
}

#[derive(Clone, Debug)]
pub struct ConductivityInvariant {
    /// Recovered `m = E γ⁻¹`, boundary copied from the nearest interior node.
    pub m: Field,
    pub points: Vec<PointInvariant>,
}

/// Directions `θ_k = (cos kπ/K, sin kπ/K)`.
pub fn default_directions(count: usize) -> Vec<[f64; 2]> {
    (0..count)
        .map(|k| {
            let t = std::f64::consts::PI * k as f64 / count as f64;
            [t.cos(), t.sin()]
        })
        .collect()
}

/// Recovers `m` from the `|ξ|⁻²` coefficient of `Ē_R` everywhere, then `C_a` at
/// `probes` from the `|ξ|⁻⁴` coefficient of `Ē_R - R_{1/m̂}` along each direction.
pub fn conductivity_invariant_recover(
    ebar: &GreenCombination,
    probes: &[usize],
    directions: &[[f64; 2]],
    cfg: &ProbeConfig,
    powers: &[usize],
) -> Result<ConductivityInvariant, GreenError> {
    let grid = ebar.grid();
    if grid.dim() != 2 {
        return Err(GreenError::Precondition("the conductivity invariant needs a 2D grid".into()));
    }
    if directions.len() < 3 {
        return Err(GreenError::Precondition(format!("{} directions cannot determine C_a", directions.len())));
    }
    if !powers.contains(&1) || !powers.contains(&2) {
        return Err(GreenError::Precondition("fit powers must include 1 and 2".into()));
    }
    let nodes: Vec<usize> = (0..grid.len()).collect();
    let m_hat: Vec<f64> = probe_columns(ebar, &nodes, cfg.kp)
        .par_iter()
        .map(|c| c.fit(cfg, [1.0, 0.0], powers).map(|f| f.coefficient(1).expect("power 1")))
        .collect::<Result<_, _>>()?;
    if let Some(k) = m_hat.iter().position(|&m| !(m > 0.0)) {
        return Err(GreenError::Numerical(format!("recovered m is not positive at node {k}")));
    }
    let m = Field::from_interior(grid, &m_hat)?;
    let rh = assemble_green(grid, &m.map(|v| 1.0 / v), Kind::Conductivity)?;
    let diff = ebar.plus(-1.0, &GreenCombination::single(rh))?;
    let cols = probe_columns(&diff, probes, cfg.kp);
    let points = cols
        .iter()
        .map(|col| {
            let v_theta = directions
                .iter()
                .map(|&th| col.fit(cfg, th, powers).map(|f| -f.coefficient(2).expect("power 2")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(PointInvariant { node: col.node(), directions: directions.to_vec(), c: solve_invariant(directions, &v_theta)?, v_theta })
        })
        .collect::<Result<Vec<_>, GreenError>>()?;
    Ok(ConductivityInvariant { m, points })
}

/// Least-squares `C` from `tr C - θᵀCθ = 𝒱(θ)`, unknowns `(C11, C12, C22)`.
pub fn solve_invariant(directions: &[[f64; 2]], v_theta: &[f64]) -> Result<Sym2, GreenError> {
    if directions.len() < 3 || directions.len() != v_theta.len() {
        return Err(GreenError::Precondition("need at least 3 directions with one sample each".into()));
    }
    let a = nalgebra::DMatrix::from_fn(directions.len(), 3, |r, c| {
        let t = directions[r];
        match c {
            0 => 1.0 - t[0] * t[0],
            1 => -2.0 * t[0] * t[1],
            _ => 1.0 - t[1] * t[1],
        }
    });
    let b = nalgebra::DVector::from_column_slice(v_theta);
    let svd = a.svd(true, true);
    if svd.singular_values.min() < 1e-10 * svd.singular_values.max() {
        return Err(GreenError::Precondition("directions do not determine C_a".into()));
    }
    let x = svd.solve(&b, 0.0).map_err(|e| GreenError::Numerical(e.to_string()))?;
    Ok([[x[0], x[1]], [x[1], x[2]]])
}

/// `τ(1-τ) a₁a₂/m ∇log(a₁/a₂) ⊗ ∇log(a₁/a₂)` with `m = τa₁ + (1-τ)a₂`.
pub fn closed_form_invariant(a1: f64, a2: f64, tau: f64, grad_log_ratio: [f64; 2]) -> Sym2 {
    let s = tau * (1.0 - tau) * a1 * a2 / (tau * a1 + (1.0 - tau) * a2);
    let g = grad_log_ratio;
    [[s * g[0] * g[0], s * g[0] * g[1]], [s * g[1] * g[0], s * g[1] * g[1]]]
}

pub fn frobenius(c: &Sym2) -> f64 {
    c.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

/// Unit eigenvector of the largest eigenvalue of a symmetric 2×2 matrix.
pub fn principal_direction(c: &Sym2) -> [f64; 2] {
    let m = nalgebra::Matrix2::new(c[0][0], c[0][1], c[1][0], c[1][1]);
    let e = nalgebra::SymmetricEigen::new(m);
    let i = if e.eigenvalues[0] >= e.eigenvalues[1] { 0 } else { 1 };
    let v = e.eigenvectors.column(i);
    [v[0], v[1]]
}
