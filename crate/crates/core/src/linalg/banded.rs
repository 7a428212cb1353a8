//! Banded LU with partial pivoting (the `gbtrf`/`gbtrs` scheme).
//!
//! Row `r` is stored as a dense window over columns `r - kl ..= r + kl + ku`;
//! the extra `kl` super-diagonals absorb fill-in from row interchanges.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

#[derive(Clone, Debug)]
pub struct BandedLu<T> {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<C<T>>,
    pivots: Vec<usize>,
    factored: bool,
}

impl<T: Real> BandedLu<T> {
    /// Empty `n × n` matrix with `kl` sub- and `ku` super-diagonals.
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            width,
            data: vec![C::zero(); n * width],
            pivots: (0..n).collect(),
            factored: false,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    #[inline]
    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    #[inline]
    fn slot(&self, row: usize, col: usize) -> usize {
        debug_assert!(col + self.kl >= row && col <= row + self.kl + self.ku);
        row * self.width + (col + self.kl - row)
    }

    /// Adds `value` to entry `(row, col)`; panics outside the band.
    pub fn add(&mut self, row: usize, col: usize, value: C<T>) {
        assert!(!self.factored, "matrix already factored");
        assert!(
            col + self.kl >= row && col <= row + self.ku,
            "entry ({row}, {col}) outside the band"
        );
        let s = self.slot(row, col);
        self.data[s] += value;
    }

    pub fn get(&self, row: usize, col: usize) -> C<T> {
        if col + self.kl < row || col > row + self.ku + self.kl {
            return C::zero();
        }
        self.data[self.slot(row, col)]
    }

    /// `y = A x` for the unfactored matrix.
    pub fn apply(&self, x: &[C<T>]) -> Vec<C<T>> {
        assert!(!self.factored, "apply needs the unfactored matrix");
        (0..self.n)
            .map(|r| {
                let lo = r.saturating_sub(self.kl);
                let hi = (r + self.ku).min(self.n - 1);
                (lo..=hi).fold(C::zero(), |acc, c| acc + self.data[self.slot(r, c)] * x[c])
            })
            .collect()
    }

    /// Max absolute row sum of the unfactored matrix.
    pub fn max_row_norm(&self) -> T {
        self.data
            .chunks(self.width)
            .map(|row| row.iter().map(|z| z.norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    /// In-place factorization. A pivot below `1e-14 · max row norm` is
    /// reported as `SingularSystem`.
    pub fn factor(&mut self) -> Result<()> {
        assert!(!self.factored, "matrix already factored");
        let n = self.n;
        let (kl, ku, w) = (self.kl, self.ku, self.width);
        let threshold = self.max_row_norm() * T::tol(1e-14);
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = T::zero();
            for i in k..=last_row {
                let v = self.data[i * w + (k + kl - i)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > threshold) {
                return Err(Error::SingularSystem {
                    row: k,
                    pivot: best.to_f64_lossy(),
                    threshold: threshold.to_f64_lossy(),
                });
            }
            let last_col = (k + kl + ku).min(n - 1);
            self.pivots[k] = p;
            if p != k {
                for c in k..=last_col {
                    let a = k * w + (c + kl - k);
                    let b = p * w + (c + kl - p);
                    self.data.swap(a, b);
                }
            }
            let span = last_col - k;
            let (head, tail) = self.data.split_at_mut((k + 1) * w);
            let pivot_row = &head[k * w + kl..k * w + kl + span + 1];
            let inv_pivot = C::new(T::one(), T::zero()) / pivot_row[0];
            for i in k + 1..=last_row {
                let off = (i - k - 1) * w;
                let start = off + (k + kl - i);
                let row = &mut tail[start..start + span + 1];
                let l = row[0] * inv_pivot;
                row[0] = l;
                if l.is_zero() {
                    continue;
                }
                for (dst, &src) in row[1..].iter_mut().zip(&pivot_row[1..]) {
                    *dst -= l * src;
                }
            }
        }
        self.factored = true;
        Ok(())
    }

    pub fn is_factored(&self) -> bool {
        self.factored
    }

    /// Solves `A x = b` in place using the factorization.
    pub fn solve_in_place(&self, b: &mut [C<T>]) {
        assert!(self.factored, "solve before factor");
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let (kl, ku, w) = (self.kl, self.ku, self.width);
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk.is_zero() {
                continue;
            }
            for i in k + 1..=(k + kl).min(n - 1) {
                let l = self.data[i * w + (k + kl - i)];
                b[i] -= l * bk;
            }
        }
        for k in (0..n).rev() {
            let last_col = (k + kl + ku).min(n - 1);
            let row = &self.data[k * w + kl..k * w + kl + (last_col - k) + 1];
            let mut acc = b[k];
            for (u, &x) in row[1..].iter().zip(&b[k + 1..=last_col]) {
                acc -= *u * x;
            }
            b[k] = acc / row[0];
        }
    }

    pub fn solve(&self, b: &[C<T>]) -> Vec<C<T>> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CMatrix, DenseLu};

    fn banded_pair(n: usize, kl: usize, ku: usize) -> (BandedLu<f64>, CMatrix<f64>) {
        let mut b = BandedLu::new(n, kl, ku);
        let mut d = CMatrix::zeros(n, n);
        for r in 0..n {
            for c in r.saturating_sub(kl)..=(r + ku).min(n - 1) {
                let x = (r * 31 + c * 17) as f64;
                // weak diagonal so that pivoting actually happens
                let v = C::new((x * 0.13).sin(), (x * 0.29).cos() * 0.5);
                b.add(r, c, v);
                d[(r, c)] = v;
            }
        }
        (b, d)
    }

    #[test]
    fn matches_dense_solve() {
        let (mut b, d) = banded_pair(40, 3, 2);
        let rhs: Vec<C<f64>> = (0..40).map(|i| C::new(i as f64, 1.0 - i as f64 * 0.5)).collect();
        let dense = DenseLu::factor(&d).unwrap().solve(&rhs);
        b.factor().unwrap();
        let x = b.solve(&rhs);
        for (a, e) in x.iter().zip(&dense) {
            assert!((a - e).norm() < 1e-9 * (1.0 + e.norm()), "{a} vs {e}");
        }
    }

    #[test]
    fn residual_of_solution_is_small() {
        let (mut b, d) = banded_pair(60, 5, 5);
        let rhs: Vec<C<f64>> = (0..60).map(|i| C::new((i as f64).cos(), (i as f64).sin())).collect();
        b.factor().unwrap();
        let x = b.solve(&rhs);
        let r = d.matvec(&x);
        let num: f64 = r.iter().zip(&rhs).map(|(a, e)| (a - e).norm_sqr()).sum::<f64>().sqrt();
        let den: f64 = rhs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(num / den < 1e-12);
    }

    #[test]
    fn zero_column_is_singular() {
        let mut b = BandedLu::<f64>::new(5, 1, 1);
        for r in 0..5 {
            if r != 2 {
                b.add(r, r, C::new(1.0, 0.0));
            }
        }
        assert!(matches!(b.factor(), Err(Error::SingularSystem { row: 2, .. })));
    }
}
