//! Scalar abstraction shared by every numerical module.
//!
//! All kernels are written against [`Real`] so that the same code runs in
//! `f64` (the production path) and `f32` (cheap previews, precision studies).

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + LowerExp
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar.
    fn of(x: f64) -> Self;

    /// Lossless widening to `f64` for reporting.
    fn to_f64_lossy(self) -> f64;

    /// IEEE total order.
    fn total_order(&self, other: &Self) -> std::cmp::Ordering;

    /// A relative tolerance of `x`, but never below what the type can resolve.
    fn tol(x: f64) -> Self {
        Self::of(x).max(Self::epsilon() * Self::of(64.0))
    }
}

impl Real for f32 {
    #[inline]
    fn total_order(&self, other: &Self) -> std::cmp::Ordering {
        self.total_cmp(other)
    }

    #[inline]
    fn of(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    #[inline]
    fn total_order(&self, other: &Self) -> std::cmp::Ordering {
        self.total_cmp(other)
    }

    #[inline]
    fn of(x: f64) -> Self {
        x
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

/// Complex scalar over a [`Real`].
pub type C<T> = Complex<T>;

/// 2D point `[x, y]`.
pub type Point<T> = [T; 2];

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

/// `e^{iθ}`
#[inline]
pub(crate) fn cis<T: Real>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}
