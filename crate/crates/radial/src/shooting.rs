use std::collections::BTreeMap;

use crate::family::{rational_string, to_f64, QNFamily, Rational};
use crate::ode::{integrate, OdeOptions};
use crate::potential::RadialPotential;
use crate::RadialError;

/// Start radius and tolerances of the shooting solver.
#[derive(Clone, Copy, Debug)]
pub struct ShootingOptions {
    pub eps: f64,
    pub ode: OdeOptions,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self { eps: 1e-6, ode: OdeOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EigenEntry {
    Exact(Rational),
    Float(f64),
}

impl EigenEntry {
    pub fn as_f64(&self) -> f64 {
        match self {
            EigenEntry::Exact(x) => to_f64(x),
            EigenEntry::Float(x) => *x,
        }
    }

    /// `"p/q"` for exact entries, decimal otherwise.
    pub fn render(&self) -> String {
        match self {
            EigenEntry::Exact(x) => rational_string(x),
            EigenEntry::Float(x) => format!("{x:.15e}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    ExactFormula,
    OdeOracle,
}

/// DN eigenvalues `ℓ -> μ_ℓ` for `0 <= ℓ <= ℓ_max`.
#[derive(Clone, Debug)]
pub struct DNEigenvalueTable {
    pub entries: BTreeMap<u32, EigenEntry>,
    pub provenance: Provenance,
}

pub fn dn_table_exact(fam: &QNFamily, ell_max: u32) -> DNEigenvalueTable {
    let entries = (0..=ell_max).map(|l| (l, EigenEntry::Exact(fam.dn_eig_exact(l)))).collect();
    DNEigenvalueTable { entries, provenance: Provenance::ExactFormula }
}

pub fn dn_table_numeric(q: &RadialPotential, ell_max: u32, n: u32) -> Result<DNEigenvalueTable, RadialError> {
    let mut entries = BTreeMap::new();
    for l in 0..=ell_max {
        entries.insert(l, EigenEntry::Float(dn_eig_numeric(q, l, n)?));
    }
    Ok(DNEigenvalueTable { entries, provenance: Provenance::OdeOracle })
}

fn check_dim(n: u32) -> Result<(), RadialError> {
    if n < 2 {
        return Err(RadialError::Precondition(format!("dimension {n} < 2")));
    }
    Ok(())
}

fn eval_checked(q: &RadialPotential, r: f64) -> f64 {
    let v = q.at(r);
    if v.is_finite() {
        v
    } else {
        f64::NAN
    }
}

/// Frobenius seed `R = r^ℓ (1 + a r²)` as `(ln R, r R'/R)` at `r = eps`.
fn schrodinger_seed(q0: f64, ell: u32, n: u32, eps: f64) -> [f64; 2] {
    let a = q0 / (2.0 * (2 * ell + n) as f64);
    let ae = a * eps * eps;
    [ell as f64 * eps.ln() + ae.ln_1p(), ell as f64 + 2.0 * ae / (1.0 + ae)]
}

/// Riccati form of the radial Schrödinger equation in `t = ln r`,
/// state `(ln R, w = r R'/R)`.
fn schrodinger_rhs(q: &RadialPotential, ell: u32, n: u32) -> impl Fn(f64, &[f64], &mut [f64]) + '_ {
    let ang = (ell * (ell + n - 2)) as f64;
    let nm2 = n as f64 - 2.0;
    move |t, y, dy| {
        let r = t.exp().min(1.0);
        dy[0] = y[1];
        dy[1] = ang + r * r * eval_checked(q, r) - nm2 * y[1] - y[1] * y[1];
    }
}

fn shoot(
    q: &RadialPotential,
    ell: u32,
    n: u32,
    t_out: &[f64],
    opts: ShootingOptions,
) -> Result<Vec<Vec<f64>>, RadialError> {
    check_dim(n)?;
    let q0 = q.at(0.0);
    if !q0.is_finite() {
        return Err(RadialError::Integration(format!("potential {} not finite at r = 0", q.label())));
    }
    let seed = schrodinger_seed(q0, ell, n, opts.eps);
    integrate(schrodinger_rhs(q, ell, n), opts.eps.ln(), &seed, t_out, opts.ode)
        .map_err(|e| RadialError::Integration(format!("potential {}, l = {ell}: {e}", q.label())))
}

/// `R'_ℓ(1)/R_ℓ(1)` of the regular radial solution, by shooting from `r = ε`.
pub fn dn_eig_numeric(q: &RadialPotential, ell: u32, n: u32) -> Result<f64, RadialError> {
    dn_eig_numeric_with(q, ell, n, ShootingOptions::default())
}

pub fn dn_eig_numeric_with(q: &RadialPotential, ell: u32, n: u32, opts: ShootingOptions) -> Result<f64, RadialError> {
    Ok(shoot(q, ell, n, &[0.0], opts)?[0][1])
}

/// Output grid on `[r_min, 1]`: log-spaced and uniform points merged, as increasing `t = ln r`.
fn sample_grid(r_min: f64, npts: usize) -> Vec<f64> {
    let npts = npts.max(2);
    let lo = r_min.ln();
    let mut ts: Vec<f64> = (0..npts).map(|i| lo * (1.0 - i as f64 / (npts - 1) as f64)).collect();
    ts.extend((0..npts).map(|i| (r_min + (1.0 - r_min) * i as f64 / (npts - 1) as f64).ln()));
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    *ts.last_mut().unwrap() = 0.0;
    ts
}

/// Max over `r ∈ [r_min, 1]` of `|R_num(r) - R_exact(r)|`, both normalized to `R(1) = 1`.
pub fn solution_sup_error(fam: &QNFamily, ell: u32, r_min: f64, npts: usize) -> Result<f64, RadialError> {
    let ts = sample_grid(r_min, npts);
    let ys = shoot(&RadialPotential::from_family(fam), ell, fam.dim(), &ts, ShootingOptions::default())?;
    let l1 = ys.last().unwrap()[0];
    let e1 = fam.radial_exact_solution(ell, 1.0)?;
    let mut worst = 0.0f64;
    for (t, y) in ts.iter().zip(&ys) {
        let r = t.exp().min(1.0);
        let num = (y[0] - l1).exp();
        let exact = fam.radial_exact_solution(ell, r)? / e1;
        worst = worst.max((num - exact).abs());
    }
    Ok(worst)
}

/// Conductivity DN eigenvalue `γ(1) R'(1)/R(1)` for `γ_N`, by shooting the
/// Riccati form `w' = ℓ(ℓ+n-2) - (n-2 + rγ'/γ) w - w²` in `t = ln r`.
pub fn conductivity_dn_numeric(fam: &QNFamily, ell: u32) -> Result<f64, RadialError> {
    let ys = shoot_conductivity(fam, ell, &[0.0], ShootingOptions::default())?;
    Ok(fam.gamma_eval(1.0)? * ys[0][1])
}

fn shoot_conductivity(
    fam: &QNFamily,
    ell: u32,
    t_out: &[f64],
    opts: ShootingOptions,
) -> Result<Vec<Vec<f64>>, RadialError> {
    let n = fam.dim();
    let ang = (ell * (ell + n - 2)) as f64;
    let nm2 = n as f64 - 2.0;
    let (c, d) = (to_f64(&fam.c(0)), to_f64(&fam.d()));
    let two_n = 2 * fam.index() as i32;
    let log_slope = |r: f64| {
        let r2n = r.powi(two_n);
        2.0 * two_n as f64 * r2n * (d / (1.0 - d * r2n) - c / (1.0 - c * r2n))
    };
    // The log slope of γ_N is O(r^(2N)), so the seed is the free one.
    let seed = [ell as f64 * opts.eps.ln(), ell as f64];
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let r = t.exp().min(1.0);
        dy[0] = y[1];
        dy[1] = ang - (nm2 + log_slope(r)) * y[1] - y[1] * y[1];
    };
    integrate(rhs, opts.eps.ln(), &seed, t_out, opts.ode)
}

/// Max over `[r_min, 1]` of `|U_ℓ - R_ℓ/w_N|`, where `U_ℓ` solves the conductivity
/// equation of `γ_N = w_N²` and `R_ℓ` the Schrödinger equation with `Q_N`; both
/// have boundary value 1.
pub fn liouville_check(fam: &QNFamily, ell: u32, r_min: f64, npts: usize) -> Result<f64, RadialError> {
    let ts = sample_grid(r_min, npts);
    let opts = ShootingOptions::default();
    let yc = shoot_conductivity(fam, ell, &ts, opts)?;
    let ys = shoot(&RadialPotential::from_family(fam), ell, fam.dim(), &ts, opts)?;
    let (c1, s1) = (yc.last().unwrap()[0], ys.last().unwrap()[0]);
    let mut worst = 0.0f64;
    for ((t, c), s) in ts.iter().zip(&yc).zip(&ys) {
        let r = t.exp().min(1.0);
        let u = (c[0] - c1).exp();
        let v = (s[0] - s1).exp() / fam.wn_eval(r)?;
        worst = worst.max((u - v).abs());
    }
    Ok(worst)
}

/// `|(μ⁽¹⁾ - μ⁽²⁾) - ∫₀¹ (q₁ - q₂) R⁽¹⁾ R⁽²⁾ r^(n-1) dr|` with `R(1) = 1`.
pub fn alessandrini_check(q1: &RadialPotential, q2: &RadialPotential, ell: u32, n: u32) -> Result<f64, RadialError> {
    check_dim(n)?;
    let opts = ShootingOptions::default();
    let eps = opts.eps;
    let (a0, b0) = (q1.at(0.0), q2.at(0.0));
    let s1 = schrodinger_seed(a0, ell, n, eps);
    let s2 = schrodinger_seed(b0, ell, n, eps);
    let f1 = schrodinger_rhs(q1, ell, n);
    let f2 = schrodinger_rhs(q2, ell, n);
    let nf = n as f64;
    // J' = (q₁ - q₂) R⁽¹⁾ R⁽²⁾ r^n in t, since r^(n-1) dr = r^n dt.
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        f1(t, &y[0..2], &mut dy[0..2]);
        f2(t, &y[2..4], &mut dy[2..4]);
        let r = t.exp().min(1.0);
        dy[4] = (q1.at(r) - q2.at(r)) * (y[0] + y[2] + nf * t).exp();
    };
    let y0 = [s1[0], s1[1], s2[0], s2[1], 0.0];
    let y = integrate(rhs, eps.ln(), &y0, &[0.0], opts.ode)?.remove(0);
    let lhs = y[1] - y[3];
    let rhs_val = y[4] * (-y[0] - y[2]).exp();
    Ok((lhs - rhs_val).abs())
}
