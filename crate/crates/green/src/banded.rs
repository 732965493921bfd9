use crate::GreenError;

/// Cholesky factor `L` of a symmetric positive definite band matrix with half-bandwidth `b`.
/// Row `i` stores `L[i][i-b..=i]`.
#[derive(Clone, Debug)]
pub struct BandedCholesky {
    n: usize,
    b: usize,
    l: Vec<f64>,
}

impl BandedCholesky {
    /// `entry(i, j)` gives `A[i][j]` for `i - b <= j <= i`.
    pub fn factor(n: usize, b: usize, entry: impl Fn(usize, usize) -> f64) -> Result<Self, GreenError> {
        let w = b + 1;
        let mut l = vec![0.0; n * w];
        for i in 0..n {
            let j0 = i.saturating_sub(b);
            for j in j0..=i {
                let m0 = j0.max(j.saturating_sub(b));
                let mut s = entry(i, j);
                for m in m0..j {
                    s -= l[i * w + (m + b - i)] * l[j * w + (m + b - j)];
                }
                if j == i {
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(GreenError::Indefinite { row: i, pivot: s });
                    }
                    l[i * w + b] = s.sqrt();
                } else {
                    l[i * w + (j + b - i)] = s / l[j * w + b];
                }
            }
        }
        Ok(Self { n, b, l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.l[i * (self.b + 1) + (j + self.b - i)]
    }

    /// Solves `A X = B` in place for `r` right-hand sides stored row-interleaved: `x[i * r + c]`.
    pub fn solve_many(&self, x: &mut [f64], r: usize) {
        let (n, b) = (self.n, self.b);
        for i in 0..n {
            for m in i.saturating_sub(b)..i {
                let lim = self.at(i, m);
                if lim != 0.0 {
                    let (head, tail) = x.split_at_mut(i * r);
                    let src = &head[m * r..m * r + r];
                    for (t, s) in tail[..r].iter_mut().zip(src) {
                        *t -= lim * s;
                    }
                }
            }
            let d = self.at(i, i);
            for t in &mut x[i * r..i * r + r] {
                *t /= d;
            }
        }
        for i in (0..n).rev() {
            for m in i + 1..(i + b + 1).min(n) {
                let lmi = self.at(m, i);
                if lmi != 0.0 {
                    let (head, tail) = x.split_at_mut(m * r);
                    for (t, s) in head[i * r..i * r + r].iter_mut().zip(&tail[..r]) {
                        *t -= lmi * s;
                    }
                }
            }
            let d = self.at(i, i);
            for t in &mut x[i * r..i * r + r] {
                *t /= d;
            }
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut x = rhs.to_vec();
        self.solve_many(&mut x, 1);
        x
    }
}
