use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::grid::ComplexGridField;
use crate::error::{Error, Result};
use crate::scalar::{cis, cplx, Real, C};

/// Circle points used by [`far_field`].
pub const DEFAULT_QUADRATURE: usize = 256;

/// Far-field pattern for one incident direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FarFieldVector<T> {
    pub k: T,
    pub angles: Vec<T>,
    pub values: Vec<C<T>>,
}

impl<T: Real> FarFieldVector<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `‖self − other‖₂ / ‖other‖₂`.
    pub fn relative_error(&self, other: &Self) -> T {
        relative_l2(&self.values, &other.values)
    }
}

pub(crate) fn relative_l2<T: Real>(a: &[C<T>], b: &[C<T>]) -> T {
    assert_eq!(a.len(), b.len());
    let num: T = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: T = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

/// `θ_j = 2πj/N`.
pub fn uniform_angles<T: Real>(n: usize) -> Vec<T> {
    (0..n).map(|j| T::TAU() * T::of(j as f64) / T::of(n as f64)).collect()
}

/// `γ₂ = e^{iπ/4}/√(8πk)`.
pub fn gamma2<T: Real>(k: T) -> C<T> {
    cis(T::FRAC_PI_4()) / (T::of(8.0) * T::PI() * k).sqrt()
}

/// Largest admissible extraction radius: the circle and its interpolation
/// stencils stay `4h` clear of the collar. This is also the default, since
/// grid-scale near-field error decays away from the scatterer.
pub fn max_extraction_radius<T: Real>(field: &ComplexGridField<T>) -> T {
    field.spec.half_extent - T::of(4.0) * field.spec.h
}

/// Checks that a circle of radius `radius` encloses a scatterer of
/// circumradius `enclosed` and stays clear of the collar. The cubic
/// interpolation stencil reaches `2h` inward, so the circle keeps that far
/// from the scatterer too.
pub fn check_extraction_radius<T: Real>(field: &ComplexGridField<T>, radius: T, enclosed: T) -> Result<()> {
    let r = radius.to_f64_lossy();
    if !(radius - T::of(2.0) * field.spec.h >= enclosed) {
        return Err(Error::CircleOutOfBounds {
            radius: r,
            reason: format!("interpolation stencil reaches the scatterer (circumradius {enclosed}, h {})", field.spec.h),
        });
    }
    if radius > max_extraction_radius(field) {
        return Err(Error::CircleOutOfBounds {
            radius: r,
            reason: format!("closer than 4h to the PML collar (limit {})", max_extraction_radius(field)),
        });
    }
    Ok(())
}

/// Far field of a radiating field from its trace on a circle of radius
/// `radius`, using [`DEFAULT_QUADRATURE`] points.
pub fn far_field<T: Real>(field: &ComplexGridField<T>, k: T, radius: T, angles: &[T]) -> Result<FarFieldVector<T>> {
    far_field_with(field, k, radius, angles, DEFAULT_QUADRATURE)
}

/// As [`far_field`] with `points` quadrature nodes.
pub fn far_field_with<T: Real>(
    field: &ComplexGridField<T>,
    k: T,
    radius: T,
    angles: &[T],
    points: usize,
) -> Result<FarFieldVector<T>> {
    if !(radius > T::zero()) || radius > max_extraction_radius(field) {
        return Err(Error::CircleOutOfBounds {
            radius: radius.to_f64_lossy(),
            reason: format!("must lie in (0, {}]", max_extraction_radius(field)),
        });
    }
    if points < DEFAULT_QUADRATURE {
        return Err(Error::ConfigInvalid(format!("need at least {DEFAULT_QUADRATURE} quadrature points, got {points}")));
    }
    let w = radius * T::TAU() / T::of(points as f64);
    // (y, ν, u, ∂ν u)
    let trace: Vec<([T; 2], [T; 2], C<T>, C<T>)> = (0..points)
        .map(|m| {
            let t = T::TAU() * T::of(m as f64) / T::of(points as f64);
            let nu = [t.cos(), t.sin()];
            let y = [radius * nu[0], radius * nu[1]];
            let (u, g) = field.interpolate_with_gradient(y).ok_or_else(|| Error::CircleOutOfBounds {
                radius: radius.to_f64_lossy(),
                reason: "interpolation stencil leaves the grid".into(),
            })?;
            Ok((y, nu, u, g[0] * nu[0] + g[1] * nu[1]))
        })
        .collect::<Result<_>>()?;
    let g2 = gamma2(k);
    let ik = cplx(T::zero(), k);
    let values = angles
        .iter()
        .map(|&theta| {
            let xh = [theta.cos(), theta.sin()];
            let mut acc = C::zero();
            for (y, nu, u, du) in &trace {
                let e = cis(-k * (xh[0] * y[0] + xh[1] * y[1]));
                let xn = xh[0] * nu[0] + xh[1] * nu[1];
                acc += (*u * (-ik * xn) - *du) * e;
            }
            g2 * acc * w
        })
        .collect();
    Ok(FarFieldVector { k, angles: angles.to_vec(), values })
}
