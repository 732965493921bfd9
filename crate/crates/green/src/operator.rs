use std::sync::Arc;

use nalgebra::DMatrix;

use crate::banded::BandedCholesky;
use crate::grid::{Field, Grid};
use crate::GreenError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// `-Δ_h + q`.
    Potential,
    /// `-∇_h·(γ ∇_h)` with harmonic face averages of `γ`.
    Conductivity,
}

/// A symmetric linear operator on interior grid vectors.
pub trait GreenOperator: Send + Sync {
    fn grid(&self) -> Grid;

    /// Applies the operator to `r` interleaved vectors: `x[i * r + c]`.
    fn apply_many(&self, x: &[f64], r: usize) -> Vec<f64>;

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.apply_many(v, 1)
    }

    /// Column `k`, equal to row `k` by symmetry.
    fn column(&self, k: usize) -> Vec<f64> {
        let mut e = vec![0.0; self.grid().len()];
        e[k] = 1.0;
        self.apply(&e)
    }

    fn dense(&self) -> DMatrix<f64> {
        let n = self.grid().len();
        let mut eye = vec![0.0; n * n];
        for i in 0..n {
            eye[i * n + i] = 1.0;
        }
        let out = self.apply_many(&eye, n);
        // Symmetric operator: the interleaved layout is its own transpose.
        DMatrix::from_row_slice(n, n, &out)
    }
}

/// Inverse of the Dirichlet operator of a potential or conductivity field, via a banded Cholesky factor.
#[derive(Clone, Debug)]
pub struct DiscreteGreen {
    grid: Grid,
    kind: Kind,
    field: Field,
    factor: Arc<BandedCholesky>,
}

fn face(a: f64, b: f64) -> f64 {
    2.0 * a * b / (a + b)
}

/// Stencil entry `A[k][l]` of the Dirichlet operator for interior indices.
fn stencil(grid: &Grid, field: &Field, kind: Kind, k: usize, l: usize) -> f64 {
    let h2 = grid.h() * grid.h();
    let (i, j) = grid.coords(k);
    let (a, b) = grid.coords(l);
    let nbrs: Vec<(usize, usize)> = if grid.dim() == 1 {
        vec![(i - 1, 0), (i + 1, 0)]
    } else {
        vec![(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)]
    };
    match kind {
        Kind::Potential => {
            if k == l {
                (2 * grid.dim()) as f64 / h2 + field.at(i, j)
            } else if nbrs.contains(&(a, b)) {
                -1.0 / h2
            } else {
                0.0
            }
        }
        Kind::Conductivity => {
            let g = field.at(i, j);
            if k == l {
                nbrs.iter().map(|&(p, q)| face(g, field.at(p, q))).sum::<f64>() / h2
            } else if nbrs.contains(&(a, b)) {
                -face(g, field.at(a, b)) / h2
            } else {
                0.0
            }
        }
    }
}

impl DiscreteGreen {
    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Dense Dirichlet operator `A` with `G = A⁻¹`.
    pub fn stiffness(&self) -> DMatrix<f64> {
        let n = self.grid.len();
        let b = if self.grid.dim() == 1 { 1 } else { self.grid.n() };
        DMatrix::from_fn(n, n, |k, l| {
            if k.abs_diff(l) <= b {
                stencil(&self.grid, &self.field, self.kind, k, l)
            } else {
                0.0
            }
        })
    }
}

/// Factorizes the Dirichlet operator for `field`; potentials must be `>= 0`, conductivities `> 0`.
pub fn assemble_green(grid: Grid, field: &Field, kind: Kind) -> Result<DiscreteGreen, GreenError> {
    if field.grid() != grid {
        return Err(GreenError::Precondition("field lives on a different grid".into()));
    }
    let vals = match kind {
        Kind::Potential => field.interior(),
        Kind::Conductivity => field.values().to_vec(),
    };
    for &v in &vals {
        let bad = match kind {
            Kind::Potential => !(v >= 0.0) || !v.is_finite(),
            Kind::Conductivity => !(v > 0.0) || !v.is_finite(),
        };
        if bad {
            return Err(GreenError::Precondition(format!("{kind:?} field value {v} not admissible")));
        }
    }
    let b = if grid.dim() == 1 { 1 } else { grid.n() };
    let factor = BandedCholesky::factor(grid.len(), b, |k, l| stencil(&grid, field, kind, k, l))?;
    Ok(DiscreteGreen { grid, kind, field: field.clone(), factor: Arc::new(factor) })
}

impl GreenOperator for DiscreteGreen {
    fn grid(&self) -> Grid {
        self.grid
    }

    fn apply_many(&self, x: &[f64], r: usize) -> Vec<f64> {
        let mut out = x.to_vec();
        self.factor.solve_many(&mut out, r);
        out
    }
}

/// `Σ w_i G_i` over operators on a common grid.
#[derive(Clone, Debug)]
pub struct GreenCombination {
    grid: Grid,
    terms: Vec<(f64, DiscreteGreen)>,
}

impl GreenCombination {
    pub fn new(terms: Vec<(f64, DiscreteGreen)>) -> Result<Self, GreenError> {
        let Some((_, first)) = terms.first() else {
            return Err(GreenError::Precondition("empty operator combination".into()));
        };
        let grid = first.grid;
        if terms.iter().any(|(_, g)| g.grid != grid) {
            return Err(GreenError::Precondition("operators live on different grids".into()));
        }
        Ok(Self { grid, terms })
    }

    pub fn single(g: DiscreteGreen) -> Self {
        Self { grid: g.grid, terms: vec![(1.0, g)] }
    }

    pub fn terms(&self) -> &[(f64, DiscreteGreen)] {
        &self.terms
    }

    /// `self + w · other`.
    pub fn plus(&self, w: f64, other: &GreenCombination) -> Result<Self, GreenError> {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|(v, g)| (w * v, g.clone())));
        Self::new(terms)
    }
}

impl GreenOperator for GreenCombination {
    fn grid(&self) -> Grid {
        self.grid
    }

    fn apply_many(&self, x: &[f64], r: usize) -> Vec<f64> {
        let mut acc = vec![0.0; x.len()];
        for (w, g) in &self.terms {
            for (a, v) in acc.iter_mut().zip(g.apply_many(x, r)) {
                *a += w * v;
            }
        }
        acc
    }
}
