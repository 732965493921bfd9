use crate::GreenError;

/// Uniform grid on `[0,1]^dim` with `n` interior nodes per axis and `h = 1/(n+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid {
    dim: usize,
    n: usize,
}

impl Grid {
    pub fn new(dim: usize, n: usize) -> Result<Self, GreenError> {
        if !(1..=2).contains(&dim) {
            return Err(GreenError::Precondition(format!("dimension {dim} not in {{1, 2}}")));
        }
        if n < 1 {
            return Err(GreenError::Precondition("grid needs at least one interior node".into()));
        }
        Ok(Self { dim, n })
    }

    pub fn line(n: usize) -> Self {
        Self { dim: 1, n: n.max(1) }
    }

    pub fn square(n: usize) -> Self {
        Self { dim: 2, n: n.max(1) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Interior nodes per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.n + 1) as f64
    }

    /// Number of interior unknowns.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of nodes including the boundary.
    pub fn full_len(&self) -> usize {
        (self.n + 2).pow(self.dim as u32)
    }

    /// Full-grid coordinates `(i, j)` of interior index `k` (`j = 0` in 1D); interior coordinates run `1..=n`.
    pub fn coords(&self, k: usize) -> (usize, usize) {
        if self.dim == 1 {
            (k + 1, 0)
        } else {
            (k / self.n + 1, k % self.n + 1)
        }
    }

    /// Interior index of full-grid coordinates, if interior.
    pub fn interior_index(&self, i: usize, j: usize) -> Option<usize> {
        let inside = |c: usize| (1..=self.n).contains(&c);
        match self.dim {
            1 if inside(i) => Some(i - 1),
            2 if inside(i) && inside(j) => Some((i - 1) * self.n + (j - 1)),
            _ => None,
        }
    }

    pub fn full_index(&self, i: usize, j: usize) -> usize {
        if self.dim == 1 {
            i
        } else {
            i * (self.n + 2) + j
        }
    }

    /// Physical position of full-grid coordinates.
    pub fn position(&self, i: usize, j: usize) -> [f64; 2] {
        [i as f64 * self.h(), if self.dim == 1 { 0.0 } else { j as f64 * self.h() }]
    }

    /// Node distance from the boundary, in steps.
    pub fn boundary_distance(&self, k: usize) -> usize {
        let (i, j) = self.coords(k);
        let d = i.min(self.n + 1 - i);
        if self.dim == 1 {
            d
        } else {
            d.min(j.min(self.n + 1 - j))
        }
    }

    /// `-Δ_h v` for interior values `v`, zero Dirichlet padding.
    pub fn neg_laplacian(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        let h2 = self.h() * self.h();
        let mut out = vec![0.0; v.len()];
        if self.dim == 1 {
            for k in 0..n {
                let l = if k > 0 { v[k - 1] } else { 0.0 };
                let r = if k + 1 < n { v[k + 1] } else { 0.0 };
                out[k] = (2.0 * v[k] - l - r) / h2;
            }
        } else {
            for a in 0..n {
                for b in 0..n {
                    let k = a * n + b;
                    let mut s = 4.0 * v[k];
                    if a > 0 {
                        s -= v[k - n];
                    }
                    if a + 1 < n {
                        s -= v[k + n];
                    }
                    if b > 0 {
                        s -= v[k - 1];
                    }
                    if b + 1 < n {
                        s -= v[k + 1];
                    }
                    out[k] = s / h2;
                }
            }
        }
        out
    }
}

/// Real values on every node of a grid, boundary included.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self, GreenError> {
        if values.len() != grid.full_len() {
            return Err(GreenError::Precondition(format!(
                "field has {} values, grid needs {}",
                values.len(),
                grid.full_len()
            )));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f(x, y)` at every node (`y = 0` in 1D).
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let m = grid.n() + 2;
        let values = if grid.dim() == 1 {
            (0..m).map(|i| f(i as f64 * grid.h(), 0.0)).collect()
        } else {
            (0..m * m).map(|k| f((k / m) as f64 * grid.h(), (k % m) as f64 * grid.h())).collect()
        };
        Self { grid, values }
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Self { grid, values: vec![c; grid.full_len()] }
    }

    /// Field from interior values; boundary values copied from the nearest interior node.
    pub fn from_interior(grid: Grid, interior: &[f64]) -> Result<Self, GreenError> {
        if interior.len() != grid.len() {
            return Err(GreenError::Precondition("interior length mismatch".into()));
        }
        let n = grid.n();
        let clamp = |c: usize| c.clamp(1, n);
        let m = n + 2;
        let values = if grid.dim() == 1 {
            (0..m).map(|i| interior[clamp(i) - 1]).collect()
        } else {
            (0..m * m)
                .map(|k| interior[grid.interior_index(clamp(k / m), clamp(k % m)).expect("clamped")])
                .collect()
        };
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.full_index(i, j)]
    }

    pub fn interior(&self) -> Vec<f64> {
        (0..self.grid.len())
            .map(|k| {
                let (i, j) = self.grid.coords(k);
                self.at(i, j)
            })
            .collect()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Result<Self, GreenError> {
        if self.grid != other.grid {
            return Err(GreenError::Precondition("fields live on different grids".into()));
        }
        Ok(Self { grid: self.grid, values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect() })
    }

    /// `Σ w_i f_i` over fields on a common grid.
    pub fn combine(parts: &[(f64, &Field)]) -> Result<Self, GreenError> {
        let Some((_, first)) = parts.first() else {
            return Err(GreenError::Precondition("empty combination".into()));
        };
        let mut acc = Field::constant(first.grid, 0.0);
        for (w, f) in parts {
            acc = acc.zip_with(f, |a, b| a + w * b)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_round_trip() {
        let g = Grid::square(5);
        for k in 0..g.len() {
            let (i, j) = g.coords(k);
            assert_eq!(g.interior_index(i, j), Some(k));
        }
        assert_eq!(g.interior_index(0, 3), None);
        assert_eq!(g.boundary_distance(g.interior_index(3, 3).unwrap()), 3);
        assert_eq!(Grid::line(4).boundary_distance(0), 1);
    }

    #[test]
    fn laplacian_of_quadratic() {
        let g = Grid::line(9);
        let x: Vec<f64> = (1..=9).map(|i| i as f64 * g.h()).collect();
        let v: Vec<f64> = x.iter().map(|t| t * (1.0 - t)).collect();
        for w in g.neg_laplacian(&v) {
            assert!((w - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn boundary_copy() {
        let g = Grid::square(2);
        let f = Field::from_interior(g, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(f.at(0, 0), 1.0);
        assert_eq!(f.at(3, 3), 4.0);
        assert_eq!(f.at(0, 2), 2.0);
        assert_eq!(f.interior(), vec![1.0, 2.0, 3.0, 4.0]);
    }
}
