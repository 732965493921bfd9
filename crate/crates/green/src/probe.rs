use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::grid::Grid;
use crate::operator::GreenOperator;
use crate::GreenError;

/// Windowed plane-wave probe settings.
///
/// A probe at `x₀` pairs `(-Δ_h)^kp T e_{x₀}` with `u = w(y - x₀) cos(κθ·(y - x₀))`,
/// where `w` is a Gaussian of width `window/κ` cut at `trunc` widths. For
/// `T = Σ c_p (-Δ_h)^{-p}` the result is exactly `Σ c_p ((-Δ_h)^{kp-p} u)(x₀)`,
/// which is the fitting basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeConfig {
    pub kp: usize,
    pub window: f64,
    pub trunc: f64,
    /// Band of `κh`.
    pub band: (f64, f64),
    pub nk: usize,
    pub cond_max: f64,
    pub min_boundary_nodes: usize,
}

impl ProbeConfig {
    /// Defaults for 1D grids.
    pub fn line() -> Self {
        Self { kp: 5, window: 6.0, trunc: 7.0, band: (PI / 5.0, PI / 3.0), nk: 10, cond_max: 1e8, min_boundary_nodes: 1 }
    }

    /// Defaults for 2D grids.
    pub fn plane() -> Self {
        Self { kp: 4, window: 4.0, trunc: 6.0, band: (PI / 4.0, PI / 2.0), nk: 8, cond_max: 1e8, min_boundary_nodes: 1 }
    }

    pub fn for_grid(grid: &Grid) -> Self {
        if grid.dim() == 1 {
            Self::line()
        } else {
            Self::plane()
        }
    }

    /// Probe frequencies `κ`, evenly spaced over the band.
    pub fn kappas(&self, grid: &Grid) -> Vec<f64> {
        let nk = self.nk.max(1);
        (0..nk)
            .map(|i| {
                let t = if nk == 1 { 0.0 } else { i as f64 / (nk - 1) as f64 };
                (self.band.0 + t * (self.band.1 - self.band.0)) / grid.h()
            })
            .collect()
    }
}

/// Discrete dispersion `ξ_h² = Σ_j (4/h²) sin²(κθ_j h/2)`.
pub fn discrete_dispersion(grid: &Grid, kappa: f64, theta: [f64; 2]) -> f64 {
    let h = grid.h();
    (0..grid.dim()).map(|j| 4.0 / (h * h) * (kappa * theta[j] * h / 2.0).sin().powi(2)).sum()
}

/// `(-Δ_h)^kp T e_{x₀}` for one probe point.
#[derive(Clone, Debug)]
pub struct ProbeColumn {
    grid: Grid,
    node: usize,
    kp: usize,
    pre: Vec<f64>,
}

impl ProbeColumn {
    pub fn from_column(grid: Grid, node: usize, column: Vec<f64>, kp: usize) -> Self {
        let mut pre = column;
        for _ in 0..kp {
            pre = grid.neg_laplacian(&pre);
        }
        Self { grid, node, kp, pre }
    }

    pub fn new(op: &dyn GreenOperator, node: usize, kp: usize) -> Self {
        Self::from_column(op.grid(), node, op.column(node), kp)
    }

    pub fn node(&self) -> usize {
        self.node
    }

    /// Difference of two probe columns at the same node.
    pub fn minus(&self, other: &ProbeColumn) -> Result<ProbeColumn, GreenError> {
        if self.node != other.node || self.kp != other.kp || self.grid != other.grid {
            return Err(GreenError::Precondition("probe columns do not match".into()));
        }
        let pre = self.pre.iter().zip(&other.pre).map(|(a, b)| a - b).collect();
        Ok(ProbeColumn { grid: self.grid, node: self.node, kp: self.kp, pre })
    }

    fn check(&self, cfg: &ProbeConfig, kappa: f64) -> Result<(), GreenError> {
        if kappa * self.grid.h() >= PI || kappa <= 0.0 {
            return Err(GreenError::Precondition(format!("frequency κh = {} outside (0, π)", kappa * self.grid.h())));
        }
        if self.grid.boundary_distance(self.node) < cfg.min_boundary_nodes {
            return Err(GreenError::Precondition(format!("probe node {} too close to the boundary", self.node)));
        }
        Ok(())
    }

    /// `Σ_y pre(y) u(y)` for the windowed cosine wave.
    pub fn raw(&self, cfg: &ProbeConfig, kappa: f64, theta: [f64; 2]) -> Result<f64, GreenError> {
        self.check(cfg, kappa)?;
        let g = &self.grid;
        let (h, n) = (g.h(), g.n() as isize);
        let sigma = cfg.window / kappa;
        let reach = (cfg.trunc * sigma / h).floor() as isize;
        let (i0, j0) = g.coords(self.node);
        let (i0, j0) = (i0 as isize, j0 as isize);
        let mut acc = 0.0;
        let jr = if g.dim() == 1 { 0 } else { reach };
        for di in -reach..=reach {
            for dj in -jr..=jr {
                let (i, j) = (i0 + di, j0 + dj);
                if i < 1 || i > n || (g.dim() == 2 && (j < 1 || j > n)) {
                    continue;
                }
                if let Some(u) = wave(h, sigma, cfg.trunc, kappa, theta, di, dj) {
                    let k = g.interior_index(i as usize, j as usize).expect("interior");
                    acc += self.pre[k] * u;
                }
            }
        }
        Ok(acc)
    }

    /// `((-Δ_h)^{kp-p} Re u)(x₀)` with Dirichlet padding, from a local patch.
    pub fn basis(&self, cfg: &ProbeConfig, kappa: f64, theta: [f64; 2], p: usize) -> Result<f64, GreenError> {
        self.check(cfg, kappa)?;
        if p > self.kp {
            return Err(GreenError::Precondition(format!("fit power {p} exceeds preconditioning {}", self.kp)));
        }
        let g = &self.grid;
        let (h, n) = (g.h(), g.n() as isize);
        let sigma = cfg.window / kappa;
        let steps = self.kp - p;
        let r = steps.max(1) as isize;
        let side = (2 * r + 1) as usize;
        let two_d = g.dim() == 2;
        let (i0, j0) = g.coords(self.node);
        let (i0, j0) = (i0 as isize, j0 as isize);
        let jr = if two_d { r } else { 0 };
        let inside = |di: isize, dj: isize| {
            let (i, j) = (i0 + di, j0 + dj);
            i >= 1 && i <= n && (!two_d || (j >= 1 && j <= n))
        };
        let idx = |di: isize, dj: isize| ((di + r) as usize) * side + (dj + r) as usize;
        let mut v = vec![0.0; side * side];
        for di in -r..=r {
            for dj in -jr..=jr {
                if inside(di, dj) {
                    v[idx(di, dj)] = wave(h, sigma, cfg.trunc, kappa, theta, di, dj).unwrap_or(0.0);
                }
            }
        }
        let get = |v: &[f64], di: isize, dj: isize| {
            if di.abs() > r || dj.abs() > jr || !inside(di, dj) {
                0.0
            } else {
                v[idx(di, dj)]
            }
        };
        for _ in 0..steps {
            let mut nv = vec![0.0; side * side];
            for di in -r..=r {
                for dj in -jr..=jr {
                    if !inside(di, dj) {
                        continue;
                    }
                    let c = get(&v, di, dj);
                    let mut s = 2.0 * c - get(&v, di - 1, dj) - get(&v, di + 1, dj);
                    if two_d {
                        s += 2.0 * c - get(&v, di, dj - 1) - get(&v, di, dj + 1);
                    }
                    nv[idx(di, dj)] = s / (h * h);
                }
            }
            v = nv;
        }
        Ok(v[idx(0, 0)])
    }

    /// Least-squares fit of the probe data to `Σ_p c_p B_p` over the configured band.
    pub fn fit(&self, cfg: &ProbeConfig, theta: [f64; 2], powers: &[usize]) -> Result<SymbolFit, GreenError> {
        let kappas = cfg.kappas(&self.grid);
        if kappas.len() < powers.len() {
            return Err(GreenError::Precondition("fewer frequencies than fit terms".into()));
        }
        let mut m = DMatrix::zeros(kappas.len(), powers.len());
        let mut y = DVector::zeros(kappas.len());
        for (a, &k) in kappas.iter().enumerate() {
            y[a] = self.raw(cfg, k, theta)?;
            for (b, &p) in powers.iter().enumerate() {
                m[(a, b)] = self.basis(cfg, k, theta, p)?;
            }
        }
        let scale: Vec<f64> = (0..powers.len()).map(|b| m.column(b).norm()).collect();
        if scale.iter().any(|&s| !(s > 0.0)) {
            return Err(GreenError::IllConditioned { cond: f64::INFINITY, node: self.node });
        }
        for (b, s) in scale.iter().enumerate() {
            m.column_mut(b).scale_mut(1.0 / s);
        }
        let svd = m.clone().svd(true, true);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        let cond = smax / smin;
        if !(cond <= cfg.cond_max) {
            return Err(GreenError::IllConditioned { cond, node: self.node });
        }
        let sol = svd.solve(&y, 0.0).map_err(|e| GreenError::Numerical(e.to_string()))?;
        let resid = (&m * &sol - &y).norm() / y.norm().max(f64::MIN_POSITIVE);
        let coeffs = sol.iter().zip(&scale).map(|(c, s)| c / s).collect();
        Ok(SymbolFit { powers: powers.to_vec(), coeffs, cond, relative_residual: resid })
    }
}

/// `w(s) cos(κθ·s)` at offset `(di, dj)` nodes, `None` outside the truncated window.
fn wave(h: f64, sigma: f64, trunc: f64, kappa: f64, theta: [f64; 2], di: isize, dj: isize) -> Option<f64> {
    let (sx, sy) = (di as f64 * h, dj as f64 * h);
    let r2 = sx * sx + sy * sy;
    if r2 > (trunc * sigma).powi(2) {
        return None;
    }
    Some((-r2 / (2.0 * sigma * sigma)).exp() * (kappa * (theta[0] * sx + theta[1] * sy)).cos())
}

/// Coefficients `c_p` of `Σ_p c_p |ξ|^{-2p}` fitted at one node and direction.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolFit {
    pub powers: Vec<usize>,
    pub coeffs: Vec<f64>,
    pub cond: f64,
    pub relative_residual: f64,
}

impl SymbolFit {
    pub fn coefficient(&self, p: usize) -> Option<f64> {
        self.powers.iter().position(|&q| q == p).map(|i| self.coeffs[i])
    }

    /// Fitted symbol `Σ_p c_p s^{-p}` at `s = ξ_h²`.
    pub fn symbol(&self, xi_h2: f64) -> f64 {
        self.powers.iter().zip(&self.coeffs).map(|(&p, c)| c * xi_h2.powi(-(p as i32))).sum()
    }
}

/// One probe reading at frequency `κ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSample {
    pub kappa: f64,
    pub xi_h2: f64,
    pub raw: f64,
    /// `raw / (B_1 ξ_h²)`: exactly `1/ξ_h²` for the free Green operator.
    pub calibrated: f64,
}

/// Probe readings of `T` at `x₀` along `θ` for each frequency in `kappas`.
pub fn probe_symbol(
    op: &dyn GreenOperator,
    node: usize,
    theta: [f64; 2],
    kappas: &[f64],
    cfg: &ProbeConfig,
) -> Result<Vec<ProbeSample>, GreenError> {
    let col = ProbeColumn::new(op, node, cfg.kp);
    kappas
        .iter()
        .map(|&k| {
            let raw = col.raw(cfg, k, theta)?;
            let b1 = col.basis(cfg, k, theta, 1)?;
            let xi_h2 = discrete_dispersion(&op.grid(), k, theta);
            Ok(ProbeSample { kappa: k, xi_h2, raw, calibrated: raw / (b1 * xi_h2) })
        })
        .collect()
}

/// Probe columns of `op` at many nodes, solved in blocks.
pub fn probe_columns(op: &dyn GreenOperator, nodes: &[usize], kp: usize) -> Vec<ProbeColumn> {
    use rayon::prelude::*;
    let grid = op.grid();
    let len = grid.len();
    nodes
        .par_chunks(16)
        .flat_map_iter(|chunk| {
            let r = chunk.len();
            let mut rhs = vec![0.0; len * r];
            for (c, &k) in chunk.iter().enumerate() {
                rhs[k * r + c] = 1.0;
            }
            let out = op.apply_many(&rhs, r);
            chunk
                .iter()
                .enumerate()
                .map(|(c, &k)| {
                    let col: Vec<f64> = (0..len).map(|i| out[i * r + c]).collect();
                    ProbeColumn::from_column(grid, k, col, kp)
                })
                .collect::<Vec<_>>()
        })
        .collect()
}
