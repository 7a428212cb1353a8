//! Far-field operators and the factorization indicator on simulated data.

mod common;

use std::sync::OnceLock;

use common::{disc_scene, rel_l2};
use defectfm::farfield::{add_noise, relative_operator, scattering_operator};
use defectfm::fm::{f_sharp, green_far_field, picard_indicator, test_functions, Lattice, Preconditioner};
use defectfm::media::{Defect, MediaConfig, Shape};
use defectfm::pipeline::{reconstruct, simulate, NoiseConfig, ReconstructionSettings, SimulationOutput};
use defectfm::presets;
use defectfm::scalar::C;
use defectfm::solver::GridSpec;

fn default_grid(scene: &MediaConfig<f64>) -> GridSpec<f64> {
    GridSpec::for_scene(scene, 30.0, 4.0, 16).unwrap()
}

fn example1() -> &'static SimulationOutput<f64> {
    static SIM: OnceLock<SimulationOutput<f64>> = OnceLock::new();
    SIM.get_or_init(|| {
        let scene = presets::example1_circle();
        simulate(&scene, &default_grid(&scene), 32).unwrap()
    })
}

fn settings(level: f64) -> ReconstructionSettings<f64> {
    ReconstructionSettings {
        noise: NoiseConfig { level, seed: 0 },
        preconditioner: Preconditioner::Inverse,
        floor_rel: 1e-12,
        lattice: Lattice::reference(),
    }
}

#[test]
fn centred_void_in_disc_host_is_circulant() {
    let mut scene = disc_scene(1.2, 0.5, 3.0);
    scene.defects.push(Defect::void(Shape::circle(0.0, 0.0, 0.6)));
    let spec = GridSpec::with_default_pml(1.8, 0.05, 20, 1.0).unwrap();
    let sim = simulate(&scene, &spec, 32).unwrap();
    let f = relative_operator(&sim.f0, &sim.fb).unwrap();
    println!(
        "circulant defect: F0 {:.3e}, Fb {:.3e}, F {:.3e}",
        sim.f0.circulant_defect(),
        sim.fb.circulant_defect(),
        f.circulant_defect()
    );
    assert!(sim.f0.circulant_defect() <= 1e-3);
    assert!(sim.fb.circulant_defect() <= 1e-3);
    assert!(f.circulant_defect() <= 1e-3);
}

#[test]
fn example1_operators_are_reciprocal() {
    let sim = example1();
    let f = relative_operator(&sim.f0, &sim.fb).unwrap();
    println!("default grid: Fb {:.3e}, F {:.3e}", sim.fb.reciprocity_defect(), f.reciprocity_defect());
    assert!(sim.fb.reciprocity_defect() <= 1e-3);
    assert!(f.entries.frobenius() > 1e-3);
    assert!(f.reciprocity_defect() <= 1e-3);
}

#[test]
fn example1_spectrum_decays_six_orders() {
    let sim = example1();
    let rec = reconstruct(&presets::example1_circle(), &sim.f0, &sim.fb, &sim.fields, &settings(0.0)).unwrap();
    let l = &rec.f_sharp.eig.lambda;
    println!("λ_N/λ_1 = {:.3e}", l[l.len() - 1] / l[0]);
    assert!(l.windows(2).all(|w| w[0] >= w[1]));
    assert!(l[l.len() - 1] <= 1e-6 * l[0]);
}

#[test]
fn test_functions_do_not_depend_on_the_node_offset() {
    let scene = presets::example1_circle::<f64>();
    let spec = default_grid(&scene);
    let shifted = GridSpec::with_default_pml(spec.half_extent + spec.h / 2.0, spec.h, spec.pml_cells, 1.0).unwrap();
    let a = simulate(&scene, &spec, 16).unwrap();
    let b = simulate(&scene, &shifted, 16).unwrap();
    for z in [[0.0, 0.0], [0.37, -1.21], [1.5, 1.5]] {
        let ga = green_far_field(&a.fields, z).unwrap();
        let gb = green_far_field(&b.fields, z).unwrap();
        let err = rel_l2(&ga, &gb);
        println!("g_z at {z:?}: {err:.3e}");
        assert!(err <= 1e-2);
    }
}

fn scaled_indicators(c: f64) -> (Vec<f64>, Vec<f64>, usize, usize) {
    let sim = example1();
    let scene = presets::example1_circle();
    let f = relative_operator(&sim.f0, &sim.fb).unwrap();
    let mut scaled = f.clone();
    scaled.entries = scaled.entries.scale_real(c);
    let s = scattering_operator(&sim.fb).unwrap();
    let lattice = Lattice { nx: 21, ny: 21, bounds: [-2.0, 2.0, -2.0, 2.0] };
    let points = lattice.points();
    let tf = test_functions(Some(&sim.fields), &s, Preconditioner::Inverse, &scene.host.shape, &points).unwrap();
    let mask = vec![true; points.len()];
    let x = |f| picard_indicator(&f_sharp(f, &s, Preconditioner::Inverse).unwrap(), &tf, lattice, mask.clone(), 1e-12).unwrap();
    let (base, big) = (x(&f), x(&scaled));
    (base.values, big.values, base.retained_modes, big.retained_modes)
}

fn ranking(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx
}

#[test]
fn indicator_scales_with_the_operator() {
    // a power of two scales every rounding step exactly
    let (base, big, r0, r1) = scaled_indicators(4.0);
    assert_eq!(r0, r1);
    assert!(base.iter().zip(&big).all(|(x, y)| 4.0 * x == *y));
    assert_eq!(ranking(&base), ranking(&big));

    let (base, big, r0, r1) = scaled_indicators(3.5);
    assert_eq!(r0, r1);
    let worst = base.iter().zip(&big).map(|(x, y)| (y / (3.5 * x) - 1.0).abs()).fold(0.0, f64::max);
    println!("X(3.5 F) / 3.5 X(F) - 1: {worst:.3e}");
    assert!(worst <= 1e-4);
}

#[test]
fn ellipse_survives_two_percent_noise() {
    let scene = presets::example1_ellipse::<f64>();
    let sim = simulate(&scene, &default_grid(&scene), 32).unwrap();
    let rec = reconstruct(&scene, &sim.f0, &sim.fb, &sim.fields, &settings(0.02)).unwrap();
    println!("ellipse contrast at 2% noise: {:.2}", rec.report.contrast_statistic);
    assert!(rec.report.contrast_statistic >= 2.0);
}

#[test]
fn defect_matching_the_host_gives_zero_operator() {
    let mut scene = presets::example2_circle::<f64>();
    let host = scene.host.clone();
    scene.defects[0].a0 = host.a;
    scene.defects[0].n0 = C::new(host.n, 0.0);
    let sim = simulate(&scene, &default_grid(&scene), 16).unwrap();
    let f = relative_operator(&sim.f0, &sim.fb).unwrap();
    assert!(f.entries.as_slice().iter().all(|z| *z == C::new(0.0, 0.0)));
    let noisy = add_noise(&f, 0.05, 3).unwrap();
    assert!(noisy.entries.as_slice().iter().all(|z| *z == C::new(0.0, 0.0)));
    let rec = reconstruct(&scene, &sim.f0, &sim.fb, &sim.fields, &settings(0.0)).unwrap();
    assert!(rec.report.no_defect_signal);
}
