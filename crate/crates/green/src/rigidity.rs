use crate::grid::Field;
use crate::jensen::sym_norm;
use crate::operator::{assemble_green, GreenOperator, Kind};
use crate::GreenError;

const FIELD_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct RigidityReport {
    /// `‖G_q - τG_{q₁} - (1-τ)G_{q₂}‖` in operator norm.
    pub residual: f64,
    /// Conductivity only: `γ₂ = Cγ₁` for a constant `C`.
    pub proportional: Option<bool>,
    /// Conductivity only: `γ⁻¹ = τγ₁⁻¹ + (1-τ)γ₂⁻¹`.
    pub harmonic_combination: Option<bool>,
}

/// How far a deterministic field reproduces the averaged operator of a two-atom law.
pub fn rigidity_residual(q: &Field, q1: &Field, q2: &Field, tau: f64, kind: Kind) -> Result<RigidityReport, GreenError> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(GreenError::Precondition(format!("τ = {tau} outside (0, 1)")));
    }
    let grid = q.grid();
    let g = assemble_green(grid, q, kind)?.dense();
    let g1 = assemble_green(grid, q1, kind)?.dense();
    let g2 = assemble_green(grid, q2, kind)?.dense();
    let residual = sym_norm(&((&g - g1) * tau + (g - g2) * (1.0 - tau)));
    let (proportional, harmonic_combination) = match kind {
        Kind::Potential => (None, None),
        Kind::Conductivity => {
            let ratio = q2.zip_with(q1, |a, b| a / b)?;
            let r0 = ratio.values()[0];
            let prop = ratio.values().iter().all(|r| (r - r0).abs() <= FIELD_TOL * r0.abs());
            let harm = q.values().iter().zip(q1.values()).zip(q2.values()).all(|((g, a), b)| {
                let want = tau / a + (1.0 - tau) / b;
                (1.0 / g - want).abs() <= FIELD_TOL * want.abs()
            });
            (Some(prop), Some(harm))
        }
    };
    Ok(RigidityReport { residual, proportional, harmonic_combination })
}
