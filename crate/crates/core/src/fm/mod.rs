//! Factorization-method reconstruction.
//!
//! `F̃ = γ₂⁻¹ P (2π/N) F` with `P = S⁻¹` (or `S*` for comparison),
//! `F♯ = |Re F̃| + |Im F̃|`, test functions `φ_z = P g_z` with
//! `g_z[j] = γ₂ u_b(z, −x̂_j)`, and the Picard indicator
//! `X(z) = [Σ |(φ_z, ψ_i)|²/λ_i]⁻¹` over the retained spectrum.

mod eig;
mod indicator;

pub use eig::{hermitian_eig, operator_abs, HermitianEigensystem};
pub use indicator::{
    contrast_statistics, picard_indicator, top_decile, ContrastStatistic, IndicatorGrid, Lattice, INDICATOR_CAP,
};

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::farfield::{BackgroundFields, FarFieldMatrix, ScatteringOperator};
use crate::linalg::CMatrix;
use crate::media::Shape;
use crate::scalar::{Point, Real, C};
use crate::solver::gamma2;

/// How `S_b` is undone in `F̃` and `φ_z`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preconditioner {
    /// `S⁻¹` by LU.
    #[default]
    Inverse,
    /// `S*`.
    Adjoint,
}

impl Preconditioner {
    fn matrix<'a, T: Real>(self, s: &'a ScatteringOperator<T>) -> std::borrow::Cow<'a, CMatrix<T>> {
        match self {
            Preconditioner::Inverse => std::borrow::Cow::Borrowed(&s.s_inv),
            Preconditioner::Adjoint => std::borrow::Cow::Owned(s.s.adjoint()),
        }
    }
}

/// `F♯` with its eigensystem (eigenvalues clamped at zero).
#[derive(Clone, Debug)]
pub struct FSharp<T> {
    pub k: T,
    pub matrix: CMatrix<T>,
    pub eig: HermitianEigensystem<T>,
}

impl<T: Real> FSharp<T> {
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }
}

/// `|Re F̃| + |Im F̃|` for `F̃ = γ₂⁻¹ P (2π/N) F`.
pub fn f_sharp<T: Real>(f: &FarFieldMatrix<T>, s: &ScatteringOperator<T>, pre: Preconditioner) -> Result<FSharp<T>> {
    let n = f.n();
    if s.n() != n || s.k != f.k {
        return Err(Error::DimensionMismatch(format!(
            "far-field operator (N {n}, k {}) and scattering operator (N {}, k {})",
            f.k,
            s.n(),
            s.k
        )));
    }
    let w = T::TAU() / T::of(n as f64);
    let scale = gamma2(f.k).inv() * w;
    let tilde = (&*pre.matrix(s) * &f.entries).scale(scale);
    let re = eig::operator_abs(&tilde.hermitian_part())?;
    let im = eig::operator_abs(&tilde.skew_hermitian_part())?;
    let matrix = (&re + &im).hermitian_part();
    let mut eig = hermitian_eig(&matrix)?;
    let floor = -T::tol(1e-10) * eig.lambda.first().copied().unwrap_or_else(T::zero).abs();
    if let Some(&low) = eig.lambda.last() {
        if low < floor {
            return Err(Error::NotHermitian { defect: low.to_f64_lossy() });
        }
    }
    for l in &mut eig.lambda {
        *l = l.max(T::zero());
    }
    Ok(FSharp { k: f.k, matrix, eig })
}

/// Test functions `φ_z` (row `p` of `phi`).
#[derive(Clone, Debug)]
pub struct TestFunctionSet<T> {
    pub points: Vec<Point<T>>,
    pub phi: CMatrix<T>,
}

/// `g_z[j] = γ₂ u_b(z, −x̂_j)`: the far field of the background Green's function
/// by mixed reciprocity, read off the stored field for `d = −x̂_j`.
pub fn green_far_field<T: Real>(fields: &BackgroundFields<T>, z: Point<T>) -> Result<Vec<C<T>>> {
    let n = fields.n();
    if !n.is_multiple_of(2) || fields.scattered.len() != n {
        return Err(Error::MissingFields);
    }
    let g = gamma2(fields.k);
    (0..n)
        .map(|j| {
            let u = fields
                .total_at((j + n / 2) % n, z)
                .ok_or(Error::PointInPml { x: z[0].to_f64_lossy(), y: z[1].to_f64_lossy() })?;
            Ok(g * u)
        })
        .collect()
}

/// `φ_z = P g_z` for every point, which must lie inside the host `domain`.
pub fn test_functions<T: Real>(
    fields: Option<&BackgroundFields<T>>,
    s: &ScatteringOperator<T>,
    pre: Preconditioner,
    domain: &Shape<T>,
    points: &[Point<T>],
) -> Result<TestFunctionSet<T>> {
    let fields = fields.ok_or(Error::MissingFields)?;
    if fields.n() != s.n() || fields.k != s.k {
        return Err(Error::DimensionMismatch("background fields do not match the scattering operator".into()));
    }
    if let Some(z) = points.iter().find(|z| !domain.contains(**z)) {
        return Err(Error::PointOutsideD { x: z[0].to_f64_lossy(), y: z[1].to_f64_lossy() });
    }
    let p = pre.matrix(s);
    let rows: Vec<Vec<C<T>>> =
        points.par_iter().map(|&z| Ok(p.matvec(&green_far_field(fields, z)?))).collect::<Result<_>>()?;
    let n = s.n();
    let phi = CMatrix::from_fn(points.len(), n, |r, c| rows[r][c]);
    Ok(TestFunctionSet { points: points.to_vec(), phi })
}

/// `Σ |(φ, ψ_i)|²/λ_i` over eigenpairs with `λ_i ≥ floor_rel·λ_1`.
pub(crate) fn picard_sum<T: Real>(eig: &HermitianEigensystem<T>, phi: &[C<T>], floor_rel: T) -> T {
    let cutoff = floor_rel * eig.lambda[0];
    let n = eig.n();
    let mut acc = T::zero();
    for (i, &l) in eig.lambda.iter().enumerate() {
        if !(l > T::zero()) || l < cutoff {
            break;
        }
        let mut dot: C<T> = C::zero();
        for r in 0..n {
            dot += eig.psi[(r, i)].conj() * phi[r];
        }
        acc += dot.norm_sqr() / l;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farfield::scattering_operator;
    use crate::scalar::{cis, cplx};
    use crate::solver::{uniform_angles, ComplexGridField, GridSpec};

    fn operator(n: usize) -> ScatteringOperator<f64> {
        scattering_operator(&FarFieldMatrix::zeros(1.0, n)).unwrap()
    }

    #[test]
    fn zero_far_field_has_zero_f_sharp() {
        let fs = f_sharp(&FarFieldMatrix::zeros(1.0, 8), &operator(8), Preconditioner::Inverse).unwrap();
        assert_eq!(fs.matrix, CMatrix::zeros(8, 8));
        assert!(fs.eig.lambda.iter().all(|l| *l == 0.0));
    }

    #[test]
    fn psd_input_is_reproduced() {
        // F chosen so that F̃ = γ₂⁻¹(2π/N)F is a Hermitian PSD matrix B
        let n = 8;
        let g = crate::fm::eig::support::random_psd(n, 4);
        let f = g.scale(gamma2(1.0) * (n as f64 / std::f64::consts::TAU));
        let ffm = FarFieldMatrix::new(1.0, uniform_angles(n), f).unwrap();
        let fs = f_sharp(&ffm, &operator(n), Preconditioner::Inverse).unwrap();
        assert!((&fs.matrix - &g).frobenius() <= 1e-9 * g.frobenius());
    }

    #[test]
    fn scaling_covariance() {
        let n = 8;
        let g = crate::fm::eig::support::random_psd(n, 5);
        let f = FarFieldMatrix::new(1.0, uniform_angles(n), g.scale(cplx(0.3, -0.2))).unwrap();
        let s = operator(n);
        let a = f_sharp(&f, &s, Preconditioner::Inverse).unwrap();
        let f2 = FarFieldMatrix { entries: f.entries.scale_real(2.5), ..f.clone() };
        let b = f_sharp(&f2, &s, Preconditioner::Inverse).unwrap();
        for (x, y) in a.eig.lambda.iter().zip(&b.eig.lambda) {
            assert!((2.5 * x - y).abs() <= 1e-9 * b.eig.lambda[0]);
        }
    }

    #[test]
    fn adjoint_and_inverse_agree_for_identity() {
        let n = 8;
        let g = crate::fm::eig::support::random_psd(n, 6);
        let f = FarFieldMatrix::new(1.0, uniform_angles(n), g).unwrap();
        let a = f_sharp(&f, &operator(n), Preconditioner::Inverse).unwrap();
        let b = f_sharp(&f, &operator(n), Preconditioner::Adjoint).unwrap();
        assert!((&a.matrix - &b.matrix).frobenius() < 1e-12);
    }

    #[test]
    fn mismatched_sizes_are_rejected() {
        let f = FarFieldMatrix::zeros(1.0, 8);
        assert!(matches!(f_sharp(&f, &operator(10), Preconditioner::Inverse), Err(Error::DimensionMismatch(_))));
    }

    fn zero_fields(n: usize) -> BackgroundFields<f64> {
        let spec = GridSpec::with_default_pml(3.0, 0.1, 8, 1.0).unwrap();
        BackgroundFields { k: 1.0, angles: uniform_angles(n), scattered: vec![ComplexGridField::zeros(spec); n] }
    }

    #[test]
    fn free_space_test_functions_are_plane_waves() {
        let n = 16;
        let fields = zero_fields(n);
        let domain = Shape::circle(0.0, 0.0, 2.0);
        let z = [0.37, -0.81];
        let tf = test_functions(Some(&fields), &operator(n), Preconditioner::Inverse, &domain, &[z]).unwrap();
        let angles = uniform_angles::<f64>(n);
        for (j, t) in angles.iter().enumerate() {
            let expect = gamma2(1.0) * cis(-(t.cos() * z[0] + t.sin() * z[1]));
            assert!((tf.phi[(0, j)] - expect).norm() < 1e-14, "{j}");
        }
    }

    #[test]
    fn test_function_errors() {
        let fields = zero_fields(8);
        let domain = Shape::circle(0.0, 0.0, 1.0);
        let s = operator(8);
        assert!(matches!(
            test_functions(Some(&fields), &s, Preconditioner::Inverse, &domain, &[[1.5, 0.0]]),
            Err(Error::PointOutsideD { .. })
        ));
        assert!(matches!(test_functions(None, &s, Preconditioner::Inverse, &domain, &[[0.0, 0.0]]), Err(Error::MissingFields)));
    }

    #[test]
    fn picard_single_term() {
        let n = 6;
        let g = crate::fm::eig::support::random_psd(n, 8);
        let e = hermitian_eig(&g).unwrap();
        let psi1 = e.vector(0);
        let sum = picard_sum(&e, &psi1, 1e-12);
        assert!((1.0 / sum - e.lambda[0]).abs() < 1e-10 * e.lambda[0]);
        let rotated: Vec<C<f64>> = psi1.iter().map(|z| z * cis(0.7)).collect();
        assert!((picard_sum(&e, &rotated, 1e-12) - sum).abs() < 1e-12 * sum);
    }
}
