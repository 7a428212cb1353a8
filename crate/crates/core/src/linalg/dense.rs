use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diag(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C::new(v, T::zero());
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn into_vec(self) -> Vec<C<T>> {
        self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `‖M − M*‖_F`
    pub fn hermitian_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut acc = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `(M + M*) / 2`
    pub fn hermitian_part(&self) -> Self {
        let half = T::of(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    /// `(M − M*) / 2i`
    pub fn skew_hermitian_part(&self) -> Self {
        let scale = C::new(T::zero(), -T::of(0.5));
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] - self[(j, i)].conj()) * scale)
    }

    pub fn matvec(&self, x: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).fold(C::zero(), |acc, (&a, &b)| acc + a * b))
            .collect()
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = C<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Add for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn add(self, rhs: Self) -> CMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn sub(self, rhs: Self) -> CMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;

    fn mul(self, rhs: Self) -> CMatrix<T> {
        self.matmul(rhs)
    }
}

/// LU factorization with partial pivoting of a dense square matrix.
#[derive(Clone, Debug)]
pub struct DenseLu<T> {
    n: usize,
    lu: Vec<C<T>>,
    perm: Vec<usize>,
}

impl<T: Real> DenseLu<T> {
    /// Fails with `SingularScattering` when a pivot falls below
    /// `1e-14 · max|a_ij|`.
    pub fn factor(m: &CMatrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "LU of a {}x{} matrix",
                m.rows(),
                m.cols()
            )));
        }
        let n = m.rows();
        let mut lu = m.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let threshold = m.max_abs() * T::tol(1e-14);
        for k in 0..n {
            let (p, pivot_abs) = (k..n)
                .map(|i| (i, lu[i * n + k].norm()))
                .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pivot_abs > threshold) {
                return Err(Error::SingularScattering { row: k });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let l = lu[i * n + k] / pivot;
                lu[i * n + k] = l;
                if l.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= l * u;
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    pub fn solve(&self, b: &[C<T>]) -> Vec<C<T>> {
        let n = self.n;
        let mut x: Vec<C<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc / self.lu[i * n + i];
        }
        x
    }

    pub fn inverse(&self) -> CMatrix<T> {
        let n = self.n;
        let mut inv = CMatrix::zeros(n, n);
        let mut e = vec![C::zero(); n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = C::zero());
            e[j] = C::one();
            for (i, v) in self.solve(&e).into_iter().enumerate() {
                inv[(i, j)] = v;
            }
        }
        inv
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize) -> CMatrix<f64> {
        CMatrix::from_fn(n, n, |i, j| {
            let x = (i * 7 + j * 3) as f64;
            C::new((x * 0.37).sin() + if i == j { 3.0 } else { 0.0 }, (x * 0.11).cos())
        })
    }

    #[test]
    fn lu_inverse_is_inverse() {
        let m = sample(9);
        let inv = DenseLu::factor(&m).unwrap().inverse();
        let err = (&(&inv * &m) - &CMatrix::identity(9)).frobenius();
        assert!(err < 1e-13, "{err}");
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let mut m = sample(4);
        for j in 0..4 {
            let v = m[(0, j)];
            m[(3, j)] = v * 2.0;
        }
        assert!(matches!(DenseLu::factor(&m), Err(Error::SingularScattering { .. })));
    }

    #[test]
    fn hermitian_and_skew_parts_recombine() {
        let m = sample(5);
        let re = m.hermitian_part();
        let im = m.skew_hermitian_part();
        let back = &re + &im.scale(C::new(0.0, 1.0));
        assert!((&back - &m).frobenius() < 1e-14);
        assert!(re.hermitian_defect() < 1e-15);
        assert!(im.hermitian_defect() < 1e-15);
    }
}
