//! Forward solver against analytic and self-consistency oracles.

mod common;

use common::{disc_scene, gamma2, grid, hankel1, homogeneous, min_wavelength, rel_l2};
use defectfm::media::{MediaConfig, Medium};
use defectfm::presets;
use defectfm::scalar::C;
use defectfm::solver::*;

fn ring(radius: f64, m: usize) -> Vec<[f64; 2]> {
    (0..m)
        .map(|j| {
            let t = std::f64::consts::TAU * j as f64 / m as f64 + 0.1;
            [radius * t.cos(), radius * t.sin()]
        })
        .collect()
}

#[test]
fn point_source_matches_free_space_hankel() {
    let h = std::f64::consts::TAU / 15.0;
    let spec = grid(1.0 + 6.0 * h, h, 16);
    let sys = assemble_system(&spec, &homogeneous(), Medium::Background).unwrap();
    let g = solve_point_source(&sys, [0.0, 0.0]).unwrap();
    let pts = ring(1.0, 32);
    let got: Vec<C<f64>> = pts.iter().map(|&p| g.interpolate(p).unwrap()).collect();
    let want: Vec<C<f64>> = pts.iter().map(|_| C::new(0.0, 0.25) * hankel1(0, 1.0)).collect();
    let err = rel_l2(&got, &want);
    println!("point source vs (i/4)H0 at |x| = 1, h = λ/15: {err:.3e}");
    assert!(err <= 3e-2);
}

/// Source at the centre of a disc host: only the `m = 0` mode is excited, so
/// the exact field is `Φ_b + c J₀(k_i r)` inside with `Φ_b = i/(4a) H₀(k_i r)`.
fn centred_disc_source(a: f64, n: f64, radius: f64, r: f64) -> C<f64> {
    let ki = (n / a).sqrt();
    let alpha = C::new(0.0, 0.25 / a);
    let (h0i, h1i) = (hankel1(0, ki * radius), hankel1(1, ki * radius));
    let (j0i, j1i) = (puruspe::Jn(0, ki * radius), puruspe::Jn(1, ki * radius));
    let (h0o, h1o) = (hankel1(0, radius), hankel1(1, radius));
    let c = alpha * (h1o * h0i / h0o - h1i * (a * ki)) / (-(h1o * j0i / h0o) + a * ki * j1i);
    alpha * hankel1(0, ki * r) + c * puruspe::Jn(0, ki * r)
}

#[test]
fn point_source_in_scaled_host_matches_phi_b() {
    let (a, n, radius) = (0.5, 3.0, 2.0);
    let h = 1.0 / 6.0;
    assert!(h <= min_wavelength(a, n) / 15.0 + 1e-3);
    let scene = disc_scene(radius, a, n);
    let sys = assemble_system(&grid(3.0, h, 16), &scene, Medium::Background).unwrap();
    let g = solve_point_source(&sys, [0.0, 0.0]).unwrap();
    let mut got = Vec::new();
    let mut want = Vec::new();
    let mut phi_b = Vec::new();
    for r in [0.5, 1.0, 1.5] {
        for p in ring(r, 24) {
            got.push(g.interpolate(p).unwrap());
            want.push(centred_disc_source(a, n, radius, r));
            phi_b.push(C::new(0.0, 0.25 / a) * hankel1(0, (n / a).sqrt() * r));
        }
    }
    let err = rel_l2(&got, &want);
    println!("point source in A = 0.5I, n = 3 disc: {err:.3e} (free-space Φ_b alone differs by {:.3e})", rel_l2(&want, &phi_b));
    assert!(err <= 5e-2);
}

#[test]
fn point_source_far_field_is_gamma2() {
    let spec = grid(3.0, 0.1, 16);
    let sys = assemble_system(&spec, &homogeneous(), Medium::Background).unwrap();
    let g = solve_point_source(&sys, [0.0, 0.0]).unwrap();
    let angles = uniform_angles(32);
    let ff = far_field(&g, 1.0, max_extraction_radius(&g), &angles).unwrap();
    let want = vec![gamma2(1.0); angles.len()];
    let err = rel_l2(&ff.values, &want);
    println!("point-source far field vs γ₂: {err:.3e}");
    assert!(err <= 2e-2);
}

fn example1_background_field() -> (ComplexGridField<f64>, MediaConfig<f64>) {
    let scene = presets::example1_circle::<f64>();
    let spec = GridSpec::for_scene(&scene, 30.0, 4.0, 16).unwrap();
    let sys = assemble_system(&spec, &scene, Medium::Background).unwrap();
    (solve_plane_wave(&sys, [1.0, 0.0]).unwrap(), scene)
}

#[test]
fn quadrature_and_radius_invariance() {
    let (u, _) = example1_background_field();
    let angles = uniform_angles(32);
    let r = max_extraction_radius(&u);
    let m256 = far_field_with(&u, 1.0, r, &angles, 256).unwrap();
    let m512 = far_field_with(&u, 1.0, r, &angles, 512).unwrap();
    let quad = rel_l2(&m256.values, &m512.values);
    let inner = far_field(&u, 1.0, 3.0, &angles).unwrap();
    let radius = rel_l2(&inner.values, &m512.values);
    println!("M 256 vs 512: {quad:.3e}; R_ff 3.0 vs {r:.3}: {radius:.3e}");
    assert!(quad <= 1e-6);
    assert!(radius <= 1e-3);
}

#[test]
fn example1_residuals() {
    let scene = presets::example1_circle::<f64>();
    let spec = grid(4.32, 0.08, 16);
    assert_eq!(spec.half_extent, 4.32);
    let sys = assemble_system(&spec, &scene, Medium::Background).unwrap();
    println!("probe residual at h = 0.08, L = 4.32: {:.3e}", sys.probe_residual());
    assert!(sys.probe_residual() <= 1e-10);
    let u = solve_plane_wave(&sys, [1.0, 0.0]).unwrap();
    let rhs = sys.plane_wave_rhs([1.0, 0.0]);
    let res = sys.apply(&u.values);
    let err = rel_l2(&res, &rhs);
    println!("plane-wave PDE residual: {err:.3e}");
    assert!(err <= 1e-9);
}

#[test]
fn zero_contrast_scene_scatters_nothing() {
    let scene = homogeneous();
    let sys = assemble_system(&grid(2.0, 0.1, 12), &scene, Medium::Background).unwrap();
    let u = solve_plane_wave(&sys, [0.6, 0.8]).unwrap();
    assert!(u.values.iter().all(|z| z.norm() <= 1e-12));
}

#[test]
fn mie_matches_born_for_weak_contrast() {
    let n = 1.01;
    let angles = uniform_angles(32);
    let mie = mie_far_field(1.0, 1.0, 1.0, n, 0.0, &angles).unwrap();
    // γ₂ k² (n−1) ∫_disc e^{i q·y} dy = γ₂ k² (n−1) 2π J₁(|q|)/|q|, q = k(d − x̂)
    let born: Vec<C<f64>> = angles
        .iter()
        .map(|t| {
            let q = ((1.0 - t.cos()).powi(2) + t.sin().powi(2)).sqrt();
            let integral = if q < 1e-12 { std::f64::consts::PI } else { std::f64::consts::TAU * puruspe::Jn(1, q) / q };
            gamma2(1.0) * ((n - 1.0) * integral)
        })
        .collect();
    let err = rel_l2(&mie.values, &born);
    println!("Mie vs Born, n = 1.01: {err:.3e}");
    assert!(err <= 5e-2);
}

/// Far-field error against the series solution on the disc of the solver
/// acceptance case, with the PML width held fixed in physical units.
fn disc_error(h: f64) -> f64 {
    let (a, n) = (0.9, 1.1);
    let scene = disc_scene(1.0, a, n);
    let pml = (2.0 / h).round() as usize;
    let spec = grid(3.0, h, pml);
    let sys = assemble_system(&spec, &scene, Medium::Background).unwrap();
    let u = solve_plane_wave(&sys, [1.0, 0.0]).unwrap();
    let angles = uniform_angles(64);
    let ff = far_field(&u, 1.0, max_extraction_radius(&u), &angles).unwrap();
    rel_l2(&ff.values, &mie_far_field(1.0, 1.0, a, n, 0.0, &angles).unwrap().values)
}

#[test]
fn halving_the_default_spacing_cuts_the_error_threefold() {
    let scene = disc_scene(1.0, 0.9, 1.1);
    let h = GridSpec::for_scene(&scene, 30.0, 3.0, 16).unwrap().h;
    let (coarse, fine) = (disc_error(h), disc_error(h / 2.0));
    println!("h = {h:.4}: {coarse:.3e}, h/2: {fine:.3e}, ratio {:.2}", coarse / fine);
    assert!(coarse / fine >= 3.0);
}
