use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::RadialError;

pub type Rational = BigRational;

pub fn q(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_string(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Radial potentials `Q_N(r) = 8N² d_N r^(2N-2) / (1 - d_N r^(2N))²` on the unit ball in `R^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QNFamily {
    lambda: Rational,
    index: u32,
    dim: u32,
}

impl QNFamily {
    /// Requires `λ > 2N`, `N >= 1`, `n >= 2`.
    pub fn new(lambda: Rational, index: u32, dim: u32) -> Result<Self, RadialError> {
        if index == 0 {
            return Err(RadialError::Precondition("N must be a positive integer".into()));
        }
        if dim < 2 {
            return Err(RadialError::Precondition(format!("dimension {dim} < 2")));
        }
        if lambda <= Rational::from_integer(BigInt::from(2 * index)) {
            return Err(RadialError::Precondition(format!(
                "lambda {} must exceed 2N = {}",
                rational_string(&lambda),
                2 * index
            )));
        }
        Ok(Self { lambda, index, dim })
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    /// The integer `N`.
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    fn n_rat(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.index))
    }

    /// `S = N²`.
    pub fn s(&self) -> Rational {
        let n = self.n_rat();
        &n * &n
    }

    /// `d_N = (λ - 2N)/(λ + 2N)`.
    pub fn d(&self) -> Rational {
        let two_n = self.n_rat() * q(2, 1);
        (&self.lambda - &two_n) / (&self.lambda + &two_n)
    }

    /// `β_N = d_N (1 - 2N)/(1 + 2N)`.
    pub fn beta(&self) -> Rational {
        let two_n = self.n_rat() * q(2, 1);
        self.d() * (Rational::one() - &two_n) / (Rational::one() + &two_n)
    }

    /// `ν = ℓ + (n-2)/2`.
    pub fn nu(&self, ell: u32) -> Rational {
        Rational::from_integer(BigInt::from(ell)) + q(self.dim as i64 - 2, 2)
    }

    /// `c_N = d_N (ν - N)/(ν + N)` of the regular solution for degree `ℓ`.
    pub fn c(&self, ell: u32) -> Rational {
        let nu = self.nu(ell);
        let n = self.n_rat();
        self.d() * (&nu - &n) / (&nu + &n)
    }

    /// Exact DN eigenvalue `μ_ℓ = ℓ + (λ² - 4N²)/(2(λ + 2ℓ + n - 2))`.
    pub fn dn_eig_exact(&self, ell: u32) -> Rational {
        let l = Rational::from_integer(BigInt::from(ell));
        let num = &self.lambda * &self.lambda - self.s() * q(4, 1);
        let den = (&self.lambda + &l * q(2, 1) + q(self.dim as i64 - 2, 1)) * q(2, 1);
        l + num / den
    }

    /// Exact conductivity DN eigenvalue `κ_ℓ = μ_ℓ - μ_0` of `γ_N = w_N²`.
    pub fn conductivity_dn_exact(&self, ell: u32) -> Rational {
        self.dn_eig_exact(ell) - self.dn_eig_exact(0)
    }

    fn check_r(r: f64) -> Result<(), RadialError> {
        if (0.0..=1.0).contains(&r) {
            Ok(())
        } else {
            Err(RadialError::Domain(r))
        }
    }

    fn check_r_exact(r: &Rational) -> Result<(), RadialError> {
        if r.is_negative() || *r > Rational::one() {
            Err(RadialError::Domain(to_f64(r)))
        } else {
            Ok(())
        }
    }

    pub fn qn_eval(&self, r: f64) -> Result<f64, RadialError> {
        Self::check_r(r)?;
        Ok(self.qn_unchecked(r))
    }

    pub(crate) fn qn_unchecked(&self, r: f64) -> f64 {
        let d = to_f64(&self.d());
        let n = self.index as i32;
        let den = 1.0 - d * r.powi(2 * n);
        8.0 * (n * n) as f64 * d * r.powi(2 * n - 2) / (den * den)
    }

    pub fn qn_exact(&self, r: &Rational) -> Result<Rational, RadialError> {
        Self::check_r_exact(r)?;
        let d = self.d();
        let n = self.index as i32;
        let den = Rational::one() - &d * Pow::pow(r, 2 * n);
        Ok(q(8, 1) * self.s() * d * Pow::pow(r, 2 * n - 2) / (&den * &den))
    }

    /// Leading Taylor term at `r = 0`: `(order, coefficient)` with `Q_N ~ coeff r^order`.
    pub fn taylor_leading(&self) -> (u32, Rational) {
        (2 * self.index - 2, q(8, 1) * self.s() * self.d())
    }

    /// Unnormalized regular solution `r^ℓ (1 - c r^(2N))/(1 - d r^(2N))`.
    pub fn radial_exact_solution(&self, ell: u32, r: f64) -> Result<f64, RadialError> {
        Self::check_r(r)?;
        let c = to_f64(&self.c(ell));
        let d = to_f64(&self.d());
        let r2n = r.powi(2 * self.index as i32);
        Ok(r.powi(ell as i32) * (1.0 - c * r2n) / (1.0 - d * r2n))
    }

    /// Positive radial solution with boundary value 1 (the `ℓ = 0` regular solution, normalized).
    pub fn wn_eval(&self, r: f64) -> Result<f64, RadialError> {
        Self::check_r(r)?;
        let c = to_f64(&self.c(0));
        let d = to_f64(&self.d());
        let r2n = r.powi(2 * self.index as i32);
        Ok((1.0 - d) / (1.0 - c) * (1.0 - c * r2n) / (1.0 - d * r2n))
    }

    pub fn wn_exact(&self, r: &Rational) -> Result<Rational, RadialError> {
        Self::check_r_exact(r)?;
        let c = self.c(0);
        let d = self.d();
        let r2n: Rational = Pow::pow(r, 2 * self.index as i32);
        Ok((Rational::one() - &d) / (Rational::one() - &c) * (Rational::one() - &c * &r2n)
            / (Rational::one() - &d * &r2n))
    }

    /// Conductivity `γ_N = w_N²`.
    pub fn gamma_eval(&self, r: f64) -> Result<f64, RadialError> {
        let w = self.wn_eval(r)?;
        Ok(w * w)
    }

    pub fn gamma_exact(&self, r: &Rational) -> Result<Rational, RadialError> {
        let w = self.wn_exact(r)?;
        Ok(&w * &w)
    }

    /// `r γ'(r)/γ(r)` of `γ_N`.
    pub fn gamma_log_slope(&self, r: f64) -> f64 {
        let c = to_f64(&self.c(0));
        let d = to_f64(&self.d());
        let r2n = r.powi(2 * self.index as i32);
        2.0 * 2.0 * self.index as f64 * r2n * (d / (1.0 - d * r2n) - c / (1.0 - c * r2n))
    }
}

/// Exact values `Σ p_j x_j` for weights and values of equal length.
pub fn weighted_sum(weights: &[Rational], values: &[Rational]) -> Rational {
    weights.iter().zip(values).fold(Rational::zero(), |acc, (w, v)| acc + w * v)
}
