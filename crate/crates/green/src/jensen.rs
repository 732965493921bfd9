use nalgebra::{DMatrix, SymmetricEigen};

use crate::operator::{assemble_green, GreenOperator, Kind};
use crate::sampler::{averaged_green, CoefficientSampler};
use crate::GreenError;

#[derive(Clone, Debug)]
pub struct JensenGreenReport {
    /// Smallest eigenvalue of `Ē - G_{q̄}`.
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Operator norm of `(Ē - G_{q̄}) - Σ w_i G_{q̄} K_i G_{q_i} K_i G_{q̄}`, `K_i = q_i - q̄`.
    pub second_order_residual: f64,
}

pub(crate) fn symmetric_part(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Spectral norm of a (numerically) symmetric matrix.
pub(crate) fn sym_norm(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(symmetric_part(m)).eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Jensen gap `Ē - G_{q̄} >= 0` for a potential sampler, with the second-order resolvent identity.
pub fn jensen_green_check(sampler: &CoefficientSampler) -> Result<JensenGreenReport, GreenError> {
    let ebar = averaged_green(sampler, Kind::Potential)?.dense();
    let mean = sampler.mean()?;
    let grid = sampler.grid();
    let gbar = assemble_green(grid, &mean, Kind::Potential)?.dense();
    let gap = symmetric_part(&(&ebar - &gbar));
    let eig = SymmetricEigen::new(gap.clone()).eigenvalues;
    let qbar = mean.interior();
    let mut second = DMatrix::zeros(grid.len(), grid.len());
    for (w, f) in sampler.realizations()? {
        let gi = assemble_green(grid, &f, Kind::Potential)?.dense();
        let k: Vec<f64> = f.interior().iter().zip(&qbar).map(|(a, b)| a - b).collect();
        let kd = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(k));
        let left = &gbar * &kd;
        second += (&left * gi * kd.transpose() * &gbar) * w;
    }
    Ok(JensenGreenReport {
        lambda_min: eig.min(),
        lambda_max: eig.max(),
        second_order_residual: sym_norm(&(gap - second)),
    })
}
