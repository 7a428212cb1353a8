#![allow(dead_code)]

use defectfm::media::{Host, MediaConfig, Shape, SymTensor2};
use defectfm::scalar::C;
use defectfm::solver::GridSpec;

pub fn rel_l2(a: &[C<f64>], b: &[C<f64>]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

pub fn disc_scene(radius: f64, a: f64, n: f64) -> MediaConfig<f64> {
    MediaConfig {
        host: Host { shape: Shape::circle(0.0, 0.0, radius), a: SymTensor2::scaled_identity(a), n },
        defects: vec![],
        k: 1.0,
    }
}

pub fn homogeneous() -> MediaConfig<f64> {
    disc_scene(1.0, 1.0, 1.0)
}

/// Grid with spacing exactly `h` and half extent the smallest multiple of
/// `h/2` that is at least `min_half_extent`.
pub fn grid(min_half_extent: f64, h: f64, pml_cells: usize) -> GridSpec<f64> {
    let half_cells = (2.0 * min_half_extent / h).ceil();
    GridSpec::with_default_pml(half_cells * h / 2.0, h, pml_cells, 1.0).unwrap()
}

/// `2π / max √(n/a)` for an isotropic disc scene in free space.
pub fn min_wavelength(a: f64, n: f64) -> f64 {
    std::f64::consts::TAU / (n / a).sqrt().max(1.0)
}

/// Hankel function `H_m⁽¹⁾(x)` for `m = 0, 1`.
pub fn hankel1(m: u32, x: f64) -> C<f64> {
    C::new(puruspe::Jn(m, x), puruspe::Yn(m, x))
}

pub fn gamma2(k: f64) -> C<f64> {
    C::from_polar(1.0, std::f64::consts::FRAC_PI_4) / (8.0 * std::f64::consts::PI * k).sqrt()
}

/// Runs `f` on a one-thread pool and returns its result and wall time.
pub fn single_threaded<R: Send>(f: impl FnOnce() -> R + Send) -> (R, std::time::Duration) {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let t = std::time::Instant::now();
    let r = pool.install(f);
    (r, t.elapsed())
}
