//! Symmetric positive definite banded matrices and their Cholesky factor.

/// Lower band of a symmetric matrix: row `i` stores columns `i - bw ..= i`.
#[derive(Debug, Clone)]
pub struct BandedSpd {
    pub n: usize,
    pub bw: usize,
    data: Vec<f64>,
}

/// Failure of the factorisation at a non-positive pivot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NotPositiveDefinite {
    pub row: usize,
    pub pivot: f64,
}

impl BandedSpd {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self { n, bw, data: vec![0.0; n * (bw + 1)] }
    }

    fn at(&self, i: usize, j: usize) -> usize {
        i * (self.bw + 1) + (j + self.bw - i)
    }

    /// Adds `v` to entry `(i, j)`, `j ≤ i`, `i - j ≤ bw`.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        debug_assert!(i - j <= self.bw);
        let k = self.at(i, j);
        self.data[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bw {
            0.0
        } else {
            self.data[self.at(i, j)]
        }
    }

    pub fn clear(&mut self) {
        self.data.iter_mut().for_each(|x| *x = 0.0);
    }

    /// `y = A x`.
    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let j0 = i.saturating_sub(self.bw);
            for j in j0..=i {
                let a = self.data[self.at(i, j)];
                y[i] += a * x[j];
                if j != i {
                    y[j] += a * x[i];
                }
            }
        }
        y
    }

    /// In-place Cholesky factorisation `A = L Lᵀ`.
    pub fn cholesky(mut self) -> Result<Cholesky, NotPositiveDefinite> {
        let w = self.bw + 1;
        for i in 0..self.n {
            let k0 = i.saturating_sub(self.bw);
            for j in k0..=i {
                let (ri, rj) = (i * w + self.bw - i, j * w + self.bw - j);
                let mut s = self.data[ri + j];
                let (a, b) = (&self.data[ri + k0..ri + j], &self.data[rj + k0..rj + j]);
                s -= a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
                if i == j {
                    if !(s > 0.0) {
                        return Err(NotPositiveDefinite { row: i, pivot: s });
                    }
                    self.data[ri + j] = s.sqrt();
                } else {
                    self.data[ri + j] = s / self.data[rj + j];
                }
            }
        }
        Ok(Cholesky { m: self })
    }
}

/// Cholesky factor of a [`BandedSpd`].
#[derive(Debug, Clone)]
pub struct Cholesky {
    m: BandedSpd,
}

impl Cholesky {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw) = (self.m.n, self.m.bw);
        let w = bw + 1;
        let d = &self.m.data;
        let mut y = b.to_vec();
        for i in 0..n {
            let k0 = i.saturating_sub(bw);
            let ri = i * w + bw - i;
            let s: f64 = d[ri + k0..ri + i].iter().zip(&y[k0..i]).map(|(a, b)| a * b).sum();
            y[i] = (y[i] - s) / d[ri + i];
        }
        for i in (0..n).rev() {
            let ri = i * w + bw - i;
            y[i] /= d[ri + i];
            let xi = y[i];
            let k0 = i.saturating_sub(bw);
            for k in k0..i {
                y[k] -= d[ri + k] * xi;
            }
        }
        y
    }
}
