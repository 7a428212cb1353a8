//! Discrete far-field operators, the scattering operator and synthetic noise.

use num_traits::One;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, DenseLu};
use crate::media::{MediaConfig, Medium};
use crate::scalar::{cis, cplx, Point, Real, C};
use crate::solver::{
    assemble_system, check_extraction_radius, far_field, gamma2, max_extraction_radius, solve_plane_wave,
    uniform_angles, ComplexGridField, GridSpec,
};

/// `N×N` far-field samples: rows are observation directions `x̂_i`,
/// columns incident directions `d_j`, both at `θ_j = 2πj/N`.
#[derive(Clone, Debug, PartialEq)]
pub struct FarFieldMatrix<T> {
    pub k: T,
    pub angles: Vec<T>,
    pub entries: CMatrix<T>,
}

impl<T: Real> FarFieldMatrix<T> {
    /// Validates shape, uniform angles and finiteness.
    pub fn new(k: T, angles: Vec<T>, entries: CMatrix<T>) -> Result<Self> {
        let n = angles.len();
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::DimensionMismatch(format!("direction count must be even, got {n}")));
        }
        if entries.rows() != n || entries.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} entries for {n} directions",
                entries.rows(),
                entries.cols()
            )));
        }
        let expect = uniform_angles::<T>(n);
        if angles.iter().zip(&expect).any(|(a, e)| (*a - *e).abs() > T::tol(1e-9)) {
            return Err(Error::DimensionMismatch("angles are not uniform 2πj/N".into()));
        }
        if !(k > T::zero()) || !entries.is_finite() {
            return Err(Error::DimensionMismatch("non-finite entries or non-positive wavenumber".into()));
        }
        Ok(Self { k, angles, entries })
    }

    pub fn zeros(k: T, n: usize) -> Self {
        Self { k, angles: uniform_angles(n), entries: CMatrix::zeros(n, n) }
    }

    pub fn n(&self) -> usize {
        self.angles.len()
    }

    /// Unit vector of direction `j`.
    pub fn direction(&self, j: usize) -> Point<T> {
        [self.angles[j].cos(), self.angles[j].sin()]
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() || self.k != other.k || self.angles != other.angles {
            return Err(Error::DimensionMismatch(format!(
                "far-field matrices differ (N {} vs {}, k {} vs {})",
                self.n(),
                other.n(),
                self.k,
                other.k
            )));
        }
        Ok(())
    }

    /// `max|F[i,j] − F[j+N/2, i+N/2]| / max|F|` (0 for the zero matrix).
    pub fn reciprocity_defect(&self) -> T {
        let n = self.n();
        let h = n / 2;
        let m = &self.entries;
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((m[(i, j)] - m[((j + h) % n, (i + h) % n)]).norm());
            }
        }
        relative_to(worst, m.max_abs())
    }

    /// `max|F[i,j] − F[(i−j) mod N, 0]| / max|F|`: zero for a rotation-invariant scene.
    pub fn circulant_defect(&self) -> T {
        let n = self.n();
        let m = &self.entries;
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((m[(i, j)] - m[((i + n - j) % n, 0)]).norm());
            }
        }
        relative_to(worst, m.max_abs())
    }
}

fn relative_to<T: Real>(x: T, scale: T) -> T {
    if scale.is_zero() {
        T::zero()
    } else {
        x / scale
    }
}

/// Scattered background fields `u_b^s(·, d_j)`, one per incident direction.
#[derive(Clone, Debug)]
pub struct BackgroundFields<T> {
    pub k: T,
    pub angles: Vec<T>,
    pub scattered: Vec<ComplexGridField<T>>,
}

impl<T: Real> BackgroundFields<T> {
    pub fn n(&self) -> usize {
        self.angles.len()
    }

    /// Total field `u_b(z, d_j) = u_b^s(z, d_j) + e^{ik d_j·z}` by bicubic interpolation.
    pub fn total_at(&self, j: usize, z: Point<T>) -> Option<C<T>> {
        let d = [self.angles[j].cos(), self.angles[j].sin()];
        let us = self.scattered[j].interpolate(z)?;
        Some(us + cis(self.k * (d[0] * z[0] + d[1] * z[1])))
    }
}

/// One forward simulation over all incident directions.
#[derive(Clone, Debug)]
pub struct Simulation<T> {
    pub matrix: FarFieldMatrix<T>,
    pub fields: Option<BackgroundFields<T>>,
    pub probe_residual: T,
    pub extraction_radius: T,
}

/// One factorization, `N` plane-wave solves (in parallel over directions)
/// and `N` far-field extractions. Scattered fields are kept when `retain` is set.
pub fn assemble_far_field_matrix<T: Real>(
    config: &MediaConfig<T>,
    spec: &GridSpec<T>,
    medium: Medium,
    n: usize,
    retain: bool,
) -> Result<Simulation<T>> {
    if n < 8 || !n.is_multiple_of(2) {
        return Err(Error::ConfigInvalid(format!("direction count must be even and at least 8, got {n}")));
    }
    let system = assemble_system(spec, config, medium)?;
    let angles: Vec<T> = uniform_angles(n);
    let radius = spec.half_extent - T::of(4.0) * spec.h;
    let enclosed = config.host.shape.circumradius();
    let columns: Vec<(Vec<C<T>>, Option<ComplexGridField<T>>)> = angles
        .par_iter()
        .map(|&theta| {
            let u = solve_plane_wave(&system, [theta.cos(), theta.sin()])?;
            check_extraction_radius(&u, radius, enclosed)?;
            let ff = far_field(&u, config.k, max_extraction_radius(&u), &angles)?;
            Ok((ff.values, retain.then_some(u)))
        })
        .collect::<Result<_>>()?;
    let mut entries = CMatrix::zeros(n, n);
    let mut scattered = Vec::with_capacity(if retain { n } else { 0 });
    for (j, (col, field)) in columns.into_iter().enumerate() {
        for (i, v) in col.into_iter().enumerate() {
            entries[(i, j)] = v;
        }
        scattered.extend(field);
    }
    let fields = retain.then(|| BackgroundFields { k: config.k, angles: angles.clone(), scattered });
    Ok(Simulation {
        matrix: FarFieldMatrix::new(config.k, angles, entries)?,
        fields,
        probe_residual: system.probe_residual(),
        extraction_radius: radius,
    })
}

/// `F = F₀ − F_b`.
pub fn relative_operator<T: Real>(f0: &FarFieldMatrix<T>, fb: &FarFieldMatrix<T>) -> Result<FarFieldMatrix<T>> {
    f0.check_compatible(fb)?;
    Ok(FarFieldMatrix { k: f0.k, angles: f0.angles.clone(), entries: &f0.entries - &fb.entries })
}

/// `S = I + 2ik·γ̄₂·(2π/N)·F_b` with its LU inverse.
#[derive(Clone, Debug)]
pub struct ScatteringOperator<T> {
    pub k: T,
    pub s: CMatrix<T>,
    pub s_inv: CMatrix<T>,
    /// `‖S*S − I‖_F / ‖S‖_F²`.
    pub unitarity_defect: T,
    /// `‖S⁻¹S − I‖_F`.
    pub inverse_residual: T,
}

impl<T: Real> ScatteringOperator<T> {
    pub fn n(&self) -> usize {
        self.s.rows()
    }
}

/// Coupling constant `2ik·γ̄₂·2π/N` between `F_b` and `S − I`.
///
/// With `u^∞` normalized by `γ₂ = e^{iπ/4}/√(8πk)`, the conjugate is what
/// makes `S` unitary for lossless media: each angular mode of `(2π/N)F_b`
/// is `2π·√(2/πk)·e^{−iπ/4}·a_m`, and `|1 + 2a_m| = 1`.
pub fn scattering_weight<T: Real>(k: T, n: usize) -> C<T> {
    cplx(T::zero(), T::of(2.0) * k) * gamma2(k).conj() * (T::TAU() / T::of(n as f64))
}

pub fn scattering_operator<T: Real>(fb: &FarFieldMatrix<T>) -> Result<ScatteringOperator<T>> {
    if !fb.entries.is_finite() {
        return Err(Error::DimensionMismatch("far-field matrix has non-finite entries".into()));
    }
    let n = fb.n();
    let identity = CMatrix::identity(n);
    let s = &identity + &fb.entries.scale(scattering_weight(fb.k, n));
    let lu = DenseLu::factor(&s)?;
    let s_inv = lu.inverse();
    let ss = &s.adjoint() * &s;
    let unitarity_defect = (&ss - &identity).frobenius() / (s.frobenius() * s.frobenius());
    let inverse_residual = (&(&s_inv * &s) - &identity).frobenius();
    Ok(ScatteringOperator { k: fb.k, s, s_inv, unitarity_defect, inverse_residual })
}

/// `F̃_ij = F_ij(1 + level·ε_ij)`, `ε_ij` uniform on the complex unit disc
/// from a seeded ChaCha8 stream (row-major draw order).
pub fn add_noise<T: Real>(f: &FarFieldMatrix<T>, level: T, seed: u64) -> Result<FarFieldMatrix<T>> {
    if !(level >= T::zero()) || !level.is_finite() {
        return Err(Error::ConfigInvalid(format!("noise level must be non-negative, got {level}")));
    }
    if level.is_zero() {
        return Ok(f.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = f.n();
    let entries = CMatrix::from_fn(n, n, |i, j| {
        let r = rng.random::<f64>().sqrt();
        let t = std::f64::consts::TAU * rng.random::<f64>();
        let eps: C<T> = cplx(T::of(r * t.cos()), T::of(r * t.sin()));
        f.entries[(i, j)] * (C::<T>::one() + eps * level)
    });
    Ok(FarFieldMatrix { k: f.k, angles: f.angles.clone(), entries })
}
