//! Picard indicator on a sampling lattice and the statistics derived from it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{picard_sum, FSharp, TestFunctionSet};
use crate::error::{Error, Result};
use crate::media::{MediaConfig, Shape};
use crate::scalar::{Point, Real};

/// Value reported where the Picard series vanishes (no usable signal).
pub const INDICATOR_CAP: f64 = 1e30;

/// `nx × ny` lattice over `[xmin, xmax] × [ymin, ymax]`, row-major with `x` fastest.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Deserialize<'de>"))]
pub struct Lattice<T> {
    pub nx: usize,
    pub ny: usize,
    /// `[xmin, xmax, ymin, ymax]`
    pub bounds: [T; 4],
}

impl<T: Real> Lattice<T> {
    /// 81×81 over `[−2, 2]²`.
    pub fn reference() -> Self {
        Self { nx: 81, ny: 81, bounds: [T::of(-2.0), T::of(2.0), T::of(-2.0), T::of(2.0)] }
    }

    pub fn validate(&self) -> Result<()> {
        let [x0, x1, y0, y1] = self.bounds;
        if self.nx < 2 || self.ny < 2 || !(x0 < x1) || !(y0 < y1) {
            return Err(Error::ConfigInvalid(format!(
                "lattice needs nx, ny >= 2 and increasing bounds, got {}x{} over {:?}",
                self.nx, self.ny, self.bounds
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, idx: usize) -> Point<T> {
        let (i, j) = (idx % self.nx, idx / self.nx);
        let [x0, x1, y0, y1] = self.bounds;
        let fx = T::of(i as f64) / T::of((self.nx - 1) as f64);
        let fy = T::of(j as f64) / T::of((self.ny - 1) as f64);
        [x0 + (x1 - x0) * fx, y0 + (y1 - y0) * fy]
    }

    pub fn points(&self) -> Vec<Point<T>> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }
}

/// `X_FM` over a lattice; points outside the host carry `mask = false` and value 0.
#[derive(Clone, Debug)]
pub struct IndicatorGrid<T> {
    pub lattice: Lattice<T>,
    pub values: Vec<T>,
    pub mask: Vec<bool>,
    /// Points whose series vanished and were reported as [`INDICATOR_CAP`].
    pub degenerate: Vec<bool>,
    pub retained_modes: usize,
    pub floored_modes: usize,
    /// `λ₁ = 0`: every value is the cap.
    pub no_defect_signal: bool,
}

impl<T: Real> IndicatorGrid<T> {
    /// Lattice points with a meaningful value: inside the host and not capped.
    pub fn valid(&self) -> impl Iterator<Item = (Point<T>, T)> + '_ {
        (0..self.values.len())
            .filter(|&i| self.mask[i] && !self.degenerate[i])
            .map(|i| (self.lattice.point(i), self.values[i]))
    }
}

/// Evaluates `X_FM(z) = [Σ_{λ_i ≥ floor·λ₁} |(φ_z, ψ_i)|²/λ_i]⁻¹` for every
/// test function; `mask` marks which lattice points `tf` covers, in order.
pub fn picard_indicator<T: Real>(
    fs: &FSharp<T>,
    tf: &TestFunctionSet<T>,
    lattice: Lattice<T>,
    mask: Vec<bool>,
    floor_rel: T,
) -> Result<IndicatorGrid<T>> {
    if !(floor_rel >= T::zero() && floor_rel <= T::of(1e-2)) {
        return Err(Error::ConfigInvalid(format!("floor_rel must lie in [0, 1e-2], got {floor_rel}")));
    }
    if mask.len() != lattice.len() || mask.iter().filter(|m| **m).count() != tf.points.len() {
        return Err(Error::DimensionMismatch("mask does not match the test functions".into()));
    }
    if tf.phi.cols() != fs.n() {
        return Err(Error::DimensionMismatch(format!("test functions of length {} for N = {}", tf.phi.cols(), fs.n())));
    }
    let cap = T::of(INDICATOR_CAP);
    let lambda1 = fs.eig.lambda.first().copied().unwrap_or_else(T::zero);
    let no_defect_signal = !(lambda1 > T::zero());
    let retained = if no_defect_signal {
        0
    } else {
        fs.eig.lambda.iter().take_while(|&&l| l > T::zero() && l >= floor_rel * lambda1).count()
    };
    if !no_defect_signal && retained == 0 {
        return Err(Error::EmptySpectrum);
    }
    let sums: Vec<T> = (0..tf.points.len())
        .into_par_iter()
        .map(|p| if no_defect_signal { T::zero() } else { picard_sum(&fs.eig, tf.phi.row(p), floor_rel) })
        .collect();
    let mut values = vec![T::zero(); lattice.len()];
    let mut degenerate = vec![false; lattice.len()];
    let mut it = sums.into_iter();
    for (idx, &inside) in mask.iter().enumerate() {
        if !inside {
            continue;
        }
        let s = it.next().expect("mask count checked");
        if s > T::zero() && s.is_finite() && (T::one() / s) < cap {
            values[idx] = T::one() / s;
        } else {
            values[idx] = cap;
            degenerate[idx] = true;
        }
    }
    Ok(IndicatorGrid {
        lattice,
        values,
        mask,
        degenerate,
        retained_modes: retained,
        floored_modes: fs.n() - retained,
        no_defect_signal,
    })
}

/// Points of the top 10% of valid indicator values.
pub fn top_decile<T: Real>(grid: &IndicatorGrid<T>) -> Vec<Point<T>> {
    let mut valid: Vec<(Point<T>, T)> = grid.valid().collect();
    if valid.is_empty() {
        return vec![];
    }
    valid.sort_by(|a, b| b.1.total_order(&a.1));
    let keep = valid.len().div_ceil(10);
    valid.truncate(keep);
    valid.into_iter().map(|(p, _)| p).collect()
}

/// Mean indicator inside a defect versus in a shell around it.
#[derive(Clone, Debug, Serialize)]
pub struct ContrastStatistic {
    pub defect: usize,
    pub inside_mean: f64,
    pub outside_mean: f64,
    pub inside_points: usize,
    pub outside_points: usize,
    /// `inside_mean / outside_mean`.
    pub ratio: f64,
}

/// Per defect: inside are points deeper than `min(0.2, r_in/2)` in the defect,
/// outside are host points whose distance to it lies in `(0.2, 0.8)` and that
/// stay more than 0.2 away from every other defect.
pub fn contrast_statistics<T: Real>(grid: &IndicatorGrid<T>, config: &MediaConfig<T>) -> Vec<ContrastStatistic> {
    let (near, far) = (T::of(0.2), T::of(0.8));
    let pts: Vec<(Point<T>, T)> = grid.valid().collect();
    config
        .defects
        .iter()
        .enumerate()
        .map(|(idx, d)| {
            let depth = near.min(d.shape.inradius() * T::of(0.5));
            let others: Vec<&Shape<T>> =
                config.defects.iter().enumerate().filter(|(j, _)| *j != idx).map(|(_, o)| &o.shape).collect();
            let (mut si, mut ni, mut so, mut no) = (0.0, 0usize, 0.0, 0usize);
            for &(p, v) in &pts {
                let sd = d.shape.signed_distance(p);
                if sd < -depth {
                    si += v.to_f64_lossy();
                    ni += 1;
                } else if sd > near && sd < far && others.iter().all(|o| o.signed_distance(p) > near) {
                    so += v.to_f64_lossy();
                    no += 1;
                }
            }
            let inside_mean = if ni > 0 { si / ni as f64 } else { f64::NAN };
            let outside_mean = if no > 0 { so / no as f64 } else { f64::NAN };
            ContrastStatistic {
                defect: idx,
                inside_mean,
                outside_mean,
                inside_points: ni,
                outside_points: no,
                ratio: inside_mean / outside_mean,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fm::{hermitian_eig, HermitianEigensystem};
    use crate::linalg::CMatrix;
    use crate::presets;
    use crate::scalar::{cis, C};

    fn fsharp(lambda: &[f64]) -> FSharp<f64> {
        let n = lambda.len();
        let psi = hermitian_eig(&crate::fm::eig::support::random_hermitian(n, 11)).unwrap().psi;
        let eig = HermitianEigensystem { lambda: lambda.to_vec(), psi };
        FSharp { k: 1.0, matrix: eig.compose(|l| l), eig }
    }

    fn single(phi: Vec<C<f64>>) -> TestFunctionSet<f64> {
        let n = phi.len();
        TestFunctionSet { points: vec![[0.0, 0.0]], phi: CMatrix::from_row_major(1, n, phi).unwrap() }
    }

    fn tiny_lattice() -> Lattice<f64> {
        Lattice { nx: 2, ny: 2, bounds: [-1.0, 1.0, -1.0, 1.0] }
    }

    #[test]
    fn eigenvector_gives_its_eigenvalue() {
        let fs = fsharp(&[4.0, 2.0, 1.0, 0.5]);
        let tf = single(fs.eig.vector(0));
        let g = picard_indicator(&fs, &tf, tiny_lattice(), vec![true, false, false, false], 1e-12).unwrap();
        assert!((g.values[0] - 4.0).abs() < 1e-12);
        assert_eq!(g.retained_modes, 4);
        assert!(!g.no_defect_signal && !g.degenerate[0]);
    }

    #[test]
    fn orthogonal_to_retained_modes_is_capped() {
        // last mode is floored away, φ lies entirely in it
        let fs = fsharp(&[1.0, 0.5, 1e-14]);
        let tf = single(fs.eig.vector(2));
        let g = picard_indicator(&fs, &tf, tiny_lattice(), vec![false, true, false, false], 1e-12).unwrap();
        assert_eq!(g.retained_modes, 2);
        assert_eq!(g.floored_modes, 1);
        assert!(g.degenerate[1]);
        assert_eq!(g.values[1], INDICATOR_CAP);
    }

    #[test]
    fn zero_spectrum_flags_no_signal() {
        let fs = fsharp(&[0.0, 0.0]);
        let tf = single(vec![C::new(1.0, 0.0), C::new(0.0, 0.0)]);
        let g = picard_indicator(&fs, &tf, tiny_lattice(), vec![true, false, false, false], 1e-12).unwrap();
        assert!(g.no_defect_signal);
        assert_eq!(g.values[0], INDICATOR_CAP);
    }

    #[test]
    fn phase_and_scale_behaviour() {
        let fs = fsharp(&[3.0, 1.0, 0.2]);
        let phi: Vec<C<f64>> = vec![C::new(0.3, 0.1), C::new(-0.2, 0.5), C::new(0.7, 0.0)];
        let mask = vec![true, false, false, false];
        let base = picard_indicator(&fs, &single(phi.clone()), tiny_lattice(), mask.clone(), 1e-12).unwrap();
        let rot: Vec<C<f64>> = phi.iter().map(|z| z * cis(1.3)).collect();
        let r = picard_indicator(&fs, &single(rot), tiny_lattice(), mask.clone(), 1e-12).unwrap();
        assert!((r.values[0] - base.values[0]).abs() < 1e-13 * base.values[0]);
        let scaled = FSharp { eig: HermitianEigensystem { lambda: fs.eig.lambda.iter().map(|l| l * 2.0).collect(), ..fs.eig.clone() }, ..fs.clone() };
        let s = picard_indicator(&scaled, &single(phi), tiny_lattice(), mask, 1e-12).unwrap();
        assert!((s.values[0] - 2.0 * base.values[0]).abs() < 1e-13 * s.values[0]);
    }

    #[test]
    fn rejects_bad_floor_and_mask() {
        let fs = fsharp(&[1.0, 0.5]);
        let tf = single(fs.eig.vector(0));
        assert!(picard_indicator(&fs, &tf, tiny_lattice(), vec![true, false, false, false], 0.5).is_err());
        assert!(picard_indicator(&fs, &tf, tiny_lattice(), vec![true, true, false, false], 1e-12).is_err());
    }

    #[test]
    fn lattice_layout() {
        let l = Lattice::<f64>::reference();
        assert_eq!(l.len(), 6561);
        assert_eq!(l.point(0), [-2.0, -2.0]);
        assert_eq!(l.point(80), [2.0, -2.0]);
        assert!((l.point(40 * 81 + 40)[0]).abs() < 1e-15);
        assert!(Lattice { nx: 1, ny: 3, bounds: [0.0, 1.0, 0.0, 1.0] }.validate().is_err());
    }

    fn synthetic_grid(f: impl Fn(Point<f64>) -> f64) -> IndicatorGrid<f64> {
        let lattice = Lattice::<f64>::reference();
        let values: Vec<f64> = lattice.points().into_iter().map(f).collect();
        let n = values.len();
        IndicatorGrid { lattice, values, mask: vec![true; n], degenerate: vec![false; n], retained_modes: 1, floored_modes: 0, no_defect_signal: false }
    }

    #[test]
    fn contrast_of_a_bump() {
        let cfg = presets::example1_circle::<f64>();
        let g = synthetic_grid(|p| if p[0].hypot(p[1]) < 1.0 { 3.0 } else { 1.0 });
        let stats = contrast_statistics(&g, &cfg);
        assert_eq!(stats.len(), 1);
        assert!((stats[0].ratio - 3.0).abs() < 1e-12);
        // |z| < 0.8 and 0.2 < |z| − 1 < 0.8
        let inner = g.lattice.points().iter().filter(|p| p[0].hypot(p[1]) < 0.8).count();
        assert_eq!(stats[0].inside_points, inner);
        let top = top_decile(&g);
        assert_eq!(top.len(), 657);
    }

    #[test]
    fn two_disc_statistics_exclude_the_other_disc() {
        let cfg = presets::example1_two_discs::<f64>();
        let g = synthetic_grid(|p| if (p[0] + 1.0).hypot(p[1] - 1.0) < 0.3 { 5.0 } else { 1.0 });
        let stats = contrast_statistics(&g, &cfg);
        assert!((stats[0].ratio - 5.0).abs() < 1e-12);
        assert!((stats[1].ratio - 1.0).abs() < 1e-12);
        assert!(stats.iter().all(|s| s.inside_points > 0 && s.outside_points > 0));
    }
}
