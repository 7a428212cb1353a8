//! Series solution for a homogeneous isotropic disc centred at the origin.
//!
//! Inside, `a Δu + k²n u = 0`; across the boundary `u` and `a ∂ν u`
//! are continuous. Only valid for `A = a I` with real `a`, real `n`.

use num_complex::Complex64;

use super::extract::FarFieldVector;
use super::special::{bessel_jy, hankel1_with_derivative};
use crate::error::{Error, Result};

/// Highest mode kept: `|m| ≤ ⌈kρ·max(1, √(n/a))⌉ + 12`.
pub fn mie_truncation(k: f64, radius: f64, a: f64, n: f64) -> i64 {
    let ki = k * (n / a).sqrt();
    (k.max(ki) * radius).ceil() as i64 + 12
}

/// Scattered-wave coefficients `a_m` for `m = −M..=M`, `M` from [`mie_truncation`].
pub fn mie_coefficients(k: f64, radius: f64, a: f64, n: f64) -> Result<Vec<(i64, Complex64)>> {
    mie_coefficients_to(k, radius, a, n, mie_truncation(k, radius, a, n))
}

/// As [`mie_coefficients`] with an explicit highest mode.
pub fn mie_coefficients_to(k: f64, radius: f64, a: f64, n: f64, m_max: i64) -> Result<Vec<(i64, Complex64)>> {
    if !(k > 0.0 && radius > 0.0 && a > 0.0 && n > 0.0) {
        return Err(Error::ConfigInvalid(format!("mie parameters must be positive: k={k} radius={radius} a={a} n={n}")));
    }
    let ki = k * (n / a).sqrt();
    let mut out = Vec::with_capacity((2 * m_max + 1) as usize);
    for m in -m_max..=m_max {
        let (j, _, jp, _) = bessel_jy(m, k * radius);
        let (h, hp) = hankel1_with_derivative(m, k * radius);
        let (jin, _, jinp, _) = bessel_jy(m, ki * radius);
        let det = h * (a * ki * jinp) - hp * (k * jin);
        if det.norm() < 1e-300 || !det.is_finite() {
            return Err(Error::ModeSystemSingular { mode: m });
        }
        let num = Complex64::new(jin * k * jp - a * ki * jinp * j, 0.0);
        out.push((m, num / det));
    }
    Ok(out)
}

/// Far field `u∞(θ)` for incidence angle `theta_d`.
pub fn mie_far_field(k: f64, radius: f64, a: f64, n: f64, theta_d: f64, thetas: &[f64]) -> Result<FarFieldVector<f64>> {
    mie_far_field_to(k, radius, a, n, theta_d, thetas, mie_truncation(k, radius, a, n))
}

/// As [`mie_far_field`] with an explicit highest mode.
pub fn mie_far_field_to(
    k: f64,
    radius: f64,
    a: f64,
    n: f64,
    theta_d: f64,
    thetas: &[f64],
    m_max: i64,
) -> Result<FarFieldVector<f64>> {
    let coeffs = mie_coefficients_to(k, radius, a, n, m_max)?;
    let pre = (2.0 / (std::f64::consts::PI * k)).sqrt() * Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    let values = thetas
        .iter()
        .map(|&t| pre * coeffs.iter().map(|&(m, c)| c * Complex64::from_polar(1.0, m as f64 * (t - theta_d))).sum::<Complex64>())
        .collect();
    Ok(FarFieldVector { k, angles: thetas.to_vec(), values })
}
