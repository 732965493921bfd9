use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;
use randcal_radial::{q, DNEigenvalueTable, EigenEntry, Rational};

use crate::MomentsError;

pub type GaussianRational = Complex<Rational>;

pub fn gr(re: Rational, im: Rational) -> GaussianRational {
    Complex::new(re, im)
}

pub fn gr_real(x: Rational) -> GaussianRational {
    Complex::new(x, Rational::zero())
}

/// Finitely many spherical-harmonic coefficients `f_{ℓm}`, `|m| <= ℓ`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BoundaryVector {
    coeffs: BTreeMap<(u32, i32), GaussianRational>,
}

impl BoundaryVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Unit vector `e_{(ℓ, m)}`.
    pub fn unit(ell: u32, m: i32) -> Result<Self, MomentsError> {
        let mut v = Self::new();
        v.set(ell, m, gr_real(q(1, 1)))?;
        Ok(v)
    }

    pub fn set(&mut self, ell: u32, m: i32, c: GaussianRational) -> Result<(), MomentsError> {
        if m.unsigned_abs() > ell {
            return Err(MomentsError::Precondition(format!("|m| = {} exceeds l = {ell}", m.unsigned_abs())));
        }
        if c.is_zero() {
            self.coeffs.remove(&(ell, m));
        } else {
            self.coeffs.insert((ell, m), c);
        }
        Ok(())
    }

    pub fn get(&self, ell: u32, m: i32) -> GaussianRational {
        self.coeffs.get(&(ell, m)).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, i32), GaussianRational> {
        &self.coeffs
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(l, _)| l).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            let s = out.get(k.0, k.1) + v;
            out.set(k.0, k.1, s).expect("valid index");
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(k, v)| (*k, v.conj())).collect() }
    }

    /// `Σ d_ℓ f_{ℓm} g_{ℓm}` for a diagonal form `d`.
    pub(crate) fn pair_with(&self, g: &Self, diag: impl Fn(u32) -> Rational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (&(l, m), f) in &self.coeffs {
            if let Some(gv) = g.coeffs.get(&(l, m)) {
                acc = acc + (f * gv).scale(diag(l));
            }
        }
        acc
    }
}

/// `Λ_{Q_N} = A - S B` per degree: `α_ℓ = ℓ + λ²/(2D)`, `β_ℓ = 2/D`, `D = λ + 2ℓ + n - 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineDNDecomposition {
    pub lambda: Rational,
    pub dim: u32,
}

impl AffineDNDecomposition {
    pub fn new(lambda: Rational, dim: u32) -> Self {
        Self { lambda, dim }
    }

    fn denom(&self, ell: u32) -> Rational {
        &self.lambda + q(2 * i64::from(ell) + i64::from(self.dim) - 2, 1)
    }

    pub fn alpha(&self, ell: u32) -> Rational {
        q(i64::from(ell), 1) + &self.lambda * &self.lambda / (self.denom(ell) * q(2, 1))
    }

    pub fn beta(&self, ell: u32) -> Rational {
        q(2, 1) / self.denom(ell)
    }

    /// `(⟨A f, g⟩, ⟨B f, g⟩)`, so that `⟨Λ_{Q_N} f, g⟩ = a - N² b`.
    pub fn pair(&self, f: &BoundaryVector, g: &BoundaryVector) -> (GaussianRational, GaussianRational) {
        (f.pair_with(g, |l| self.alpha(l)), f.pair_with(g, |l| self.beta(l)))
    }
}

/// Exact or floating value of a DN bilinear-form entry.
#[derive(Clone, Debug, PartialEq)]
pub enum FormValue {
    Exact(GaussianRational),
    Float(Complex<f64>),
}

/// `⟨Λ f, g⟩ = Σ μ_ℓ f_{ℓm} g_{ℓm}` from a diagonal eigenvalue table.
pub fn dn_form_entry(
    table: &DNEigenvalueTable,
    f: &BoundaryVector,
    g: &BoundaryVector,
) -> Result<FormValue, MomentsError> {
    for v in [f, g] {
        if let Some(l) = v.max_degree() {
            if !table.entries.contains_key(&l) {
                return Err(MomentsError::Support { ell: l });
            }
        }
    }
    let exact = table.entries.values().all(|e| matches!(e, EigenEntry::Exact(_)));
    if exact {
        Ok(FormValue::Exact(f.pair_with(g, |l| match &table.entries[&l] {
            EigenEntry::Exact(x) => x.clone(),
            EigenEntry::Float(_) => unreachable!(),
        })))
    } else {
        let mut acc = Complex::new(0.0, 0.0);
        for (&(l, m), fv) in f.coeffs() {
            let gv = g.get(l, m);
            let prod = fv * &gv;
            let mu = table.entries[&l].as_f64();
            acc += Complex::new(randcal_radial::to_f64(&prod.re), randcal_radial::to_f64(&prod.im)) * mu;
        }
        Ok(FormValue::Float(acc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use randcal_radial::{dn_table_exact, QNFamily};

    #[test]
    fn decomposition_reproduces_eigenvalues() {
        let dec = AffineDNDecomposition::new(q(16, 1), 3);
        for n in [1u32, 5, 7] {
            let fam = QNFamily::new(q(16, 1), n, 3).unwrap();
            for l in 0..10 {
                let s = q(i64::from(n * n), 1);
                assert_eq!(dec.alpha(l) - s * dec.beta(l), fam.dn_eig_exact(l));
            }
        }
    }

    #[test]
    fn unit_entry_and_orthogonality() {
        let t = dn_table_exact(&QNFamily::new(q(16, 1), 5, 3).unwrap(), 3);
        let e00 = BoundaryVector::unit(0, 0).unwrap();
        let e11 = BoundaryVector::unit(1, 1).unwrap();
        assert_eq!(dn_form_entry(&t, &e00, &e00).unwrap(), FormValue::Exact(gr_real(q(78, 17))));
        assert_eq!(dn_form_entry(&t, &e00, &e11).unwrap(), FormValue::Exact(gr_real(q(0, 1))));
        assert!(matches!(dn_form_entry(&t, &BoundaryVector::unit(4, 0).unwrap(), &e00), Err(MomentsError::Support { ell: 4 })));
        assert!(BoundaryVector::unit(1, 2).is_err());
    }
}
