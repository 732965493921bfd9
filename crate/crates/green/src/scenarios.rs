//! Reference samplers used by the oracle tests and the CLI suite.

use crate::grid::{Field, Grid};

fn bump(x: f64, c: f64, w: f64) -> f64 {
    (-((x - c) / w).powi(2)).exp()
}

/// Two 1D potential atoms `A(0.6 + 0.5 b(0.5, W))` and `A(0.3 + 0.3 b(0.47, 0.85W))`.
#[derive(Clone, Debug)]
pub struct BumpPair {
    pub q1: Field,
    pub q2: Field,
    pub tau: f64,
}

impl BumpPair {
    pub fn new(n: usize, amplitude: f64, width: f64, tau: f64) -> Self {
        let g = Grid::line(n);
        let q1 = Field::from_fn(g, |x, _| amplitude * (0.6 + 0.5 * bump(x, 0.5, width)));
        let q2 = Field::from_fn(g, |x, _| amplitude * (0.3 + 0.3 * bump(x, 0.47, 0.85 * width)));
        Self { q1, q2, tau }
    }

    /// `n = 400` setting for mean/variance recovery.
    pub fn moderate() -> Self {
        Self::new(400, 6000.0, 0.06, 1.0 / 3.0)
    }

    /// `n = 1000` setting for the full two-atom pipeline.
    pub fn fine() -> Self {
        Self::new(1000, 18700.0, 0.06, 1.0 / 3.0)
    }

    pub fn grid(&self) -> Grid {
        self.q1.grid()
    }

    pub fn atoms(&self) -> Vec<(f64, Field)> {
        vec![(self.tau, self.q1.clone()), (1.0 - self.tau, self.q2.clone())]
    }

    pub fn mean(&self) -> Vec<f64> {
        self.stat(|a, b, t| t * a + (1.0 - t) * b)
    }

    pub fn variance(&self) -> Vec<f64> {
        self.stat(|a, b, t| t * (1.0 - t) * (a - b).powi(2))
    }

    fn stat(&self, f: impl Fn(f64, f64, f64) -> f64) -> Vec<f64> {
        self.q1.interior().iter().zip(self.q2.interior()).map(|(&a, b)| f(a, b, self.tau)).collect()
    }

    /// Interior nodes with `|x - 0.5| < radius`.
    pub fn central_nodes(&self, radius: f64) -> Vec<usize> {
        let g = self.grid();
        (0..g.len())
            .filter(|&k| {
                let (i, j) = g.coords(k);
                (g.position(i, j)[0] - 0.5).abs() < radius
            })
            .collect()
    }
}

/// 2D conductivity atoms `a_i = s_i e^{e_i g}` (resistivities, `γ_i = 1/a_i`) with
/// `g = s ψ/gw exp(-r²/W²)`, `ψ = θ₀·(x - ½)`, `r = |x - ½|`.
#[derive(Clone, Debug)]
pub struct ConductivityPair {
    pub a1: Field,
    pub a2: Field,
    pub tau: f64,
    /// `∇ log(a₁/a₂)` at every full-grid node, in closed form.
    pub grad_log_ratio: Vec<[f64; 2]>,
}

pub const PAIR_THETA0: f64 = 0.5;

impl ConductivityPair {
    fn build(n: usize, tau: f64, s1: f64, s2: f64, e1: f64, e2: f64) -> Self {
        let (s, w, gw) = (2.0, 0.15, 0.1);
        let t0 = [PAIR_THETA0.cos(), PAIR_THETA0.sin()];
        let g = move |x: f64, y: f64| {
            let (dx, dy) = (x - 0.5, y - 0.5);
            s * (t0[0] * dx + t0[1] * dy) / gw * (-(dx * dx + dy * dy) / (w * w)).exp()
        };
        let grad = move |x: f64, y: f64| {
            let (dx, dy) = (x - 0.5, y - 0.5);
            let e = (-(dx * dx + dy * dy) / (w * w)).exp();
            let psi = t0[0] * dx + t0[1] * dy;
            let f = s / gw * e;
            [f * (t0[0] - 2.0 * psi * dx / (w * w)), f * (t0[1] - 2.0 * psi * dy / (w * w))]
        };
        let grid = Grid::square(n);
        let a1 = Field::from_fn(grid, |x, y| s1 * (e1 * g(x, y)).exp());
        let a2 = Field::from_fn(grid, |x, y| s2 * (e2 * g(x, y)).exp());
        let grad_log_ratio = (0..grid.full_len())
            .map(|k| {
                let (i, j) = (k / (n + 2), k % (n + 2));
                let p = grid.position(i, j);
                let d = grad(p[0], p[1]);
                [(e1 - e2) * d[0], (e1 - e2) * d[1]]
            })
            .collect();
        Self { a1, a2, tau, grad_log_ratio }
    }

    /// `a₁ = e^{g/2}`, `a₂ = e^{-g/2}`: rank-one `C_a` along `∇g`.
    pub fn opposed(n: usize, tau: f64) -> Self {
        Self::build(n, tau, 1.0, 1.0, 0.5, -0.5)
    }

    /// `a₁ = 1.5e^{0.3g}`, `a₂ = 0.7e^{0.3g}`: random scalar multiple of one profile.
    pub fn proportional(n: usize, tau: f64) -> Self {
        Self::build(n, tau, 1.5, 0.7, 0.3, 0.3)
    }

    pub fn grid(&self) -> Grid {
        self.a1.grid()
    }

    /// Conductivity atoms `γ_i = 1/a_i`.
    pub fn atoms(&self) -> Vec<(f64, Field)> {
        vec![(self.tau, self.a1.map(|v| 1.0 / v)), (1.0 - self.tau, self.a2.map(|v| 1.0 / v))]
    }

    /// Closed-form `C_a` at an interior node.
    pub fn invariant_at(&self, node: usize) -> crate::conductivity::Sym2 {
        let g = self.grid();
        let (i, j) = g.coords(node);
        let f = g.full_index(i, j);
        crate::conductivity::closed_form_invariant(
            self.a1.values()[f],
            self.a2.values()[f],
            self.tau,
            self.grad_log_ratio[f],
        )
    }
}
