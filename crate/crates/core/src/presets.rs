//! Scenes of the reference experiments: a `[-2, 2]²` host at `k = 1`.

use crate::media::{Defect, Host, MediaConfig, Shape, SymTensor2};
use crate::scalar::{Real, C};

/// Bundled scene, with the acquisition settings used for it.
#[derive(Clone, Debug)]
pub struct Preset<T> {
    pub name: &'static str,
    pub media: MediaConfig<T>,
    pub directions: usize,
    pub noise_level: f64,
}

pub const NAMES: [&str; 8] = [
    "example1_circle",
    "example1_square",
    "example1_ellipse",
    "example1_twodiscs",
    "example2_aniso_host",
    "example2_aniso_host_twodiscs",
    "example3_aniso_defects",
    "example3_aniso_defects_ellipse",
];

fn t<T: Real>(x: f64) -> T {
    T::of(x)
}

fn square_host<T: Real>(a: SymTensor2<T>) -> Host<T> {
    Host { shape: Shape::rectangle(t(-2.0), t(2.0), t(-2.0), t(2.0)), a, n: t(3.0) }
}

fn isotropic_host<T: Real>() -> Host<T> {
    square_host(SymTensor2::scaled_identity(t(0.5)))
}

/// Anisotropic host tensor of the second and third experiments.
pub fn anisotropic_host_tensor<T: Real>() -> SymTensor2<T> {
    SymTensor2::real(t(0.6022), t(0.1591), t(0.7478))
}

/// Anisotropic defect tensor of the third experiment.
pub fn anisotropic_defect_tensor<T: Real>() -> SymTensor2<T> {
    SymTensor2::real(t(0.1673), t(-0.0308), t(0.2030))
}

fn two_discs<T: Real>() -> [Shape<T>; 2] {
    [Shape::circle(t(-1.0), t(1.0), t(0.3)), Shape::circle(t(1.0), t(-1.0), t(0.3))]
}

fn small_ellipse<T: Real>() -> Shape<T> {
    Shape::ellipse(t(0.5), t(1.0), t(0.5), t(0.3))
}

fn scene<T: Real>(host: Host<T>, defects: Vec<Defect<T>>) -> MediaConfig<T> {
    MediaConfig { host, defects, k: T::one() }
}

pub fn example1_circle<T: Real>() -> MediaConfig<T> {
    scene(isotropic_host(), vec![Defect::void(Shape::circle(t(0.0), t(0.0), t(1.0)))])
}

pub fn example1_square<T: Real>() -> MediaConfig<T> {
    scene(isotropic_host(), vec![Defect::void(Shape::rectangle(t(-1.0), t(1.0), t(-1.0), t(1.0)))])
}

pub fn example1_ellipse<T: Real>() -> MediaConfig<T> {
    scene(isotropic_host(), vec![Defect::void(small_ellipse())])
}

pub fn example1_two_discs<T: Real>() -> MediaConfig<T> {
    scene(isotropic_host(), two_discs().into_iter().map(Defect::void).collect())
}

pub fn example2_circle<T: Real>() -> MediaConfig<T> {
    scene(
        square_host(anisotropic_host_tensor()),
        vec![Defect::void(Shape::circle(t(0.0), t(0.0), t(1.0)))],
    )
}

pub fn example2_two_discs<T: Real>() -> MediaConfig<T> {
    scene(square_host(anisotropic_host_tensor()), two_discs().into_iter().map(Defect::void).collect())
}

fn aniso_defect<T: Real>(shape: Shape<T>) -> Defect<T> {
    Defect { shape, a0: anisotropic_defect_tensor(), n0: C::new(t(3.0), T::zero()) }
}

pub fn example3_two_discs<T: Real>() -> MediaConfig<T> {
    scene(square_host(anisotropic_host_tensor()), two_discs().into_iter().map(aniso_defect).collect())
}

pub fn example3_ellipse<T: Real>() -> MediaConfig<T> {
    scene(square_host(anisotropic_host_tensor()), vec![aniso_defect(small_ellipse())])
}

/// Looks up a bundled scene by name.
pub fn preset<T: Real>(name: &str) -> Option<Preset<T>> {
    let (media, directions, noise_level) = match name {
        "example1_circle" => (example1_circle(), 32, 0.0),
        "example1_square" => (example1_square(), 32, 0.0),
        "example1_ellipse" => (example1_ellipse(), 32, 0.02),
        "example1_twodiscs" => (example1_two_discs(), 32, 0.02),
        "example2_aniso_host" => (example2_circle(), 64, 0.0),
        "example2_aniso_host_twodiscs" => (example2_two_discs(), 64, 0.0),
        "example3_aniso_defects" => (example3_two_discs(), 64, 0.04),
        "example3_aniso_defects_ellipse" => (example3_ellipse(), 64, 0.04),
        _ => return None,
    };
    let name = NAMES.iter().copied().find(|n| *n == name)?;
    Some(Preset { name, media, directions, noise_level })
}
