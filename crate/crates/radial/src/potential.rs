use std::fmt;
use std::sync::Arc;

use crate::family::{to_f64, QNFamily, Rational};
use crate::RadialError;

type EvalFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A radial potential `q(r)` on `[0, 1]`.
#[derive(Clone)]
pub struct RadialPotential {
    eval: Arc<EvalFn>,
    smoothness: u32,
    label: String,
}

impl fmt::Debug for RadialPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialPotential").field("label", &self.label).field("smoothness", &self.smoothness).finish()
    }
}

impl RadialPotential {
    /// `smoothness` is the highest derivative order that is safe to evaluate.
    pub fn new(label: impl Into<String>, smoothness: u32, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { eval: Arc::new(f), smoothness, label: label.into() }
    }

    pub fn zero() -> Self {
        Self::new("0", u32::MAX, |_| 0.0)
    }

    pub fn from_family(fam: &QNFamily) -> Self {
        let d = to_f64(&fam.d());
        let n = fam.index() as i32;
        let scale = 8.0 * (n * n) as f64 * d;
        Self::new(format!("Q_{}", fam.index()), u32::MAX, move |r| {
            let den = 1.0 - d * r.powi(2 * n);
            scale * r.powi(2 * n - 2) / (den * den)
        })
    }

    /// Pointwise mixture `Σ p_j q_j`.
    pub fn mixture(parts: &[(Rational, RadialPotential)]) -> Self {
        let parts: Vec<(f64, RadialPotential)> = parts.iter().map(|(w, p)| (to_f64(w), p.clone())).collect();
        let label = parts.iter().map(|(w, p)| format!("{w}·{}", p.label)).collect::<Vec<_>>().join(" + ");
        let smooth = parts.iter().map(|(_, p)| p.smoothness).min().unwrap_or(u32::MAX);
        Self::new(label, smooth, move |r| parts.iter().map(|(w, p)| w * p.at(r)).sum())
    }

    pub fn eval(&self, r: f64) -> Result<f64, RadialError> {
        if !(0.0..=1.0).contains(&r) {
            return Err(RadialError::Domain(r));
        }
        Ok(self.at(r))
    }

    pub(crate) fn at(&self, r: f64) -> f64 {
        (self.eval)(r)
    }

    pub fn smoothness(&self) -> u32 {
        self.smoothness
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::q;

    #[test]
    fn mixture_of_family_members() {
        let q1 = RadialPotential::from_family(&QNFamily::new(q(16, 1), 1, 3).unwrap());
        let q7 = RadialPotential::from_family(&QNFamily::new(q(16, 1), 7, 3).unwrap());
        let m = RadialPotential::mixture(&[(q(1, 2), q1), (q(1, 2), q7)]);
        assert!((m.eval(0.0).unwrap() - 28.0 / 9.0).abs() < 1e-12);
        assert!((m.eval(1.0).unwrap() - 0.5 * (126.0 + 30.0)).abs() < 1e-9);
        assert!(m.eval(-0.1).is_err());
    }
}
