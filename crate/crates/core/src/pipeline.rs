//! Simulate → reconstruct → verify, independent of any file format.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::farfield::{
    add_noise, assemble_far_field_matrix, relative_operator, scattering_operator, BackgroundFields, FarFieldMatrix,
    ScatteringOperator,
};
use crate::fm::{
    contrast_statistics, f_sharp, picard_indicator, test_functions, top_decile, ContrastStatistic, FSharp,
    IndicatorGrid, Lattice, Preconditioner,
};
use crate::media::{validate_assumptions, AssumptionReport, MediaConfig, Medium, Shape};
use crate::scalar::{Point, Real, C};
use crate::solver::{
    assemble_system, far_field, max_extraction_radius, mie_far_field, solve_plane_wave, solve_point_source,
    uniform_angles, GridSpec, Scheme,
};

/// Default sampling density of the automatic grid.
pub const DEFAULT_POINTS_PER_WAVELENGTH: f64 = 30.0;
pub const DEFAULT_PML_CELLS: usize = 16;
/// Smallest half extent of the automatic grid.
pub const DEFAULT_MIN_HALF_EXTENT: f64 = 4.0;
pub const DEFAULT_FLOOR_REL: f64 = 1e-12;
const ASSUMPTION_SAMPLES: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub level: f64,
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self { level: 0.0, seed: 1 }
    }
}

/// Explicit grid; `pml_strength` defaults to `30/(k·T)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub half_extent: f64,
    pub h: f64,
    #[serde(default = "default_pml_cells")]
    pub pml_cells: usize,
    #[serde(default)]
    pub pml_strength: Option<f64>,
    #[serde(default)]
    pub scheme: Scheme,
}

fn default_pml_cells() -> usize {
    DEFAULT_PML_CELLS
}

fn default_directions() -> usize {
    32
}

fn default_floor() -> f64 {
    DEFAULT_FLOOR_REL
}

fn default_ppw() -> f64 {
    DEFAULT_POINTS_PER_WAVELENGTH
}

fn default_outputs() -> String {
    "out".into()
}

/// Everything a run needs. Without `grid`, the grid is chosen from the scene.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub media: MediaConfig<f64>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default = "default_ppw")]
    pub points_per_wavelength: f64,
    #[serde(default = "default_directions")]
    pub directions: usize,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default = "Lattice::reference")]
    pub lattice: Lattice<f64>,
    #[serde(default = "default_outputs")]
    pub outputs: String,
    #[serde(default)]
    pub use_adjoint_instead_of_inverse: bool,
    #[serde(default = "default_floor")]
    pub floor_rel: f64,
}

impl RunConfig {
    pub fn new(media: MediaConfig<f64>, directions: usize) -> Self {
        Self {
            media,
            grid: None,
            points_per_wavelength: DEFAULT_POINTS_PER_WAVELENGTH,
            directions,
            noise: NoiseConfig::default(),
            lattice: Lattice::reference(),
            outputs: default_outputs(),
            use_adjoint_instead_of_inverse: false,
            floor_rel: DEFAULT_FLOOR_REL,
        }
    }

    /// Bundled scene with its acquisition settings.
    pub fn preset(name: &str) -> Option<Self> {
        let p = crate::presets::preset::<f64>(name)?;
        let mut cfg = Self::new(p.media, p.directions);
        cfg.noise.level = p.noise_level;
        Some(cfg)
    }

    pub fn preconditioner(&self) -> Preconditioner {
        if self.use_adjoint_instead_of_inverse {
            Preconditioner::Adjoint
        } else {
            Preconditioner::Inverse
        }
    }

    /// Replaces the grid spacing, keeping (or choosing) the rest of the grid.
    pub fn set_grid_spacing(&mut self, h: f64) -> Result<()> {
        let spec = self.grid_spec()?.with_spacing(h, self.media.k)?;
        self.grid = Some(GridConfig {
            half_extent: spec.half_extent,
            h: spec.h,
            pml_cells: spec.pml_cells,
            pml_strength: None,
            scheme: spec.scheme,
        });
        Ok(())
    }

    pub fn grid_spec(&self) -> Result<GridSpec<f64>> {
        match self.grid {
            Some(g) => {
                let spec = match g.pml_strength {
                    Some(s) => GridSpec::new(g.half_extent, g.h, g.pml_cells, s)?,
                    None => GridSpec::with_default_pml(g.half_extent, g.h, g.pml_cells, self.media.k)?,
                };
                Ok(spec.with_scheme(g.scheme))
            }
            None => {
                if !(self.points_per_wavelength >= 10.0) {
                    return Err(Error::ConfigInvalid(format!(
                        "points_per_wavelength must be at least 10, got {}",
                        self.points_per_wavelength
                    )));
                }
                GridSpec::for_scene(&self.media, self.points_per_wavelength, DEFAULT_MIN_HALF_EXTENT, DEFAULT_PML_CELLS)
            }
        }
    }

    /// Checks the scene, grid, acquisition and reconstruction settings.
    pub fn validate(&self) -> Result<GridSpec<f64>> {
        let spec = self.grid_spec()?;
        spec.validate_for(&self.media)?;
        self.media.validate(spec.h)?;
        if self.directions < 8 || !self.directions.is_multiple_of(2) {
            return Err(Error::ConfigInvalid(format!("directions must be even and at least 8, got {}", self.directions)));
        }
        if !(self.noise.level >= 0.0 && self.noise.level.is_finite()) {
            return Err(Error::ConfigInvalid(format!("noise level must be non-negative, got {}", self.noise.level)));
        }
        if !(0.0..=1e-2).contains(&self.floor_rel) {
            return Err(Error::ConfigInvalid(format!("floor_rel must lie in [0, 1e-2], got {}", self.floor_rel)));
        }
        self.lattice.validate()?;
        Ok(spec)
    }
}

/// Output of both forward problems.
#[derive(Clone, Debug)]
pub struct SimulationOutput<T> {
    pub spec: GridSpec<T>,
    pub f0: FarFieldMatrix<T>,
    pub fb: FarFieldMatrix<T>,
    pub fields: BackgroundFields<T>,
}

/// Solves the background and defective problems for every direction.
pub fn simulate<T: Real>(media: &MediaConfig<T>, spec: &GridSpec<T>, directions: usize) -> Result<SimulationOutput<T>> {
    let background = assemble_far_field_matrix(media, spec, Medium::Background, directions, true)?;
    let defective = assemble_far_field_matrix(media, spec, Medium::Defective, directions, false)?;
    Ok(SimulationOutput {
        spec: *spec,
        f0: defective.matrix,
        fb: background.matrix,
        fields: background.fields.ok_or(Error::MissingFields)?,
    })
}

/// Scalar summary of a reconstruction.
#[derive(Clone, Debug, Serialize)]
pub struct ReconstructionReport {
    pub schema: &'static str,
    pub directions: usize,
    pub noise_level: f64,
    pub noise_seed: u64,
    pub preconditioner: Preconditioner,
    pub floor_rel: f64,
    pub unitarity_defect: f64,
    pub inverse_residual: f64,
    pub relative_operator_norm: f64,
    pub lambda_max: f64,
    pub lambda_min_retained: f64,
    pub retained_modes: usize,
    pub floored_modes: usize,
    pub no_defect_signal: bool,
    pub assumptions: AssumptionReport,
    pub contrast: Vec<ContrastStatistic>,
    /// Smallest per-defect ratio (NaN without defects).
    pub contrast_statistic: f64,
    pub top_decile_centroid: Option<[f64; 2]>,
}

#[derive(Clone, Debug)]
pub struct Reconstruction<T> {
    pub scattering: ScatteringOperator<T>,
    pub f_sharp: FSharp<T>,
    pub indicator: IndicatorGrid<T>,
    pub report: ReconstructionReport,
}

/// Settings of the inversion step.
#[derive(Clone, Copy, Debug)]
pub struct ReconstructionSettings<T> {
    pub noise: NoiseConfig,
    pub preconditioner: Preconditioner,
    pub floor_rel: T,
    pub lattice: Lattice<T>,
}

impl ReconstructionSettings<f64> {
    pub fn from_run(cfg: &RunConfig) -> Self {
        Self { noise: cfg.noise, preconditioner: cfg.preconditioner(), floor_rel: cfg.floor_rel, lattice: cfg.lattice }
    }
}

/// Noise, `S_b`, `F♯`, test functions and indicator over the lattice points inside the host.
pub fn reconstruct<T: Real>(
    media: &MediaConfig<T>,
    f0: &FarFieldMatrix<T>,
    fb: &FarFieldMatrix<T>,
    fields: &BackgroundFields<T>,
    settings: &ReconstructionSettings<T>,
) -> Result<Reconstruction<T>> {
    let f = add_noise(&relative_operator(f0, fb)?, T::of(settings.noise.level), settings.noise.seed)?;
    let s = scattering_operator(fb)?;
    let fs = f_sharp(&f, &s, settings.preconditioner)?;
    let lattice = settings.lattice;
    let mask: Vec<bool> = lattice.points().iter().map(|&p| media.host.shape.contains(p)).collect();
    let inside: Vec<Point<T>> = lattice.points().into_iter().zip(&mask).filter(|(_, m)| **m).map(|(p, _)| p).collect();
    let tf = test_functions(Some(fields), &s, settings.preconditioner, &media.host.shape, &inside)?;
    let indicator = picard_indicator(&fs, &tf, lattice, mask, settings.floor_rel)?;
    let contrast = contrast_statistics(&indicator, media);
    let contrast_statistic = contrast.iter().map(|c| c.ratio).fold(f64::NAN, f64::min);
    let top = top_decile(&indicator);
    let top_decile_centroid = (!top.is_empty() && !indicator.no_defect_signal).then(|| {
        let m = top.len() as f64;
        [
            top.iter().map(|p| p[0].to_f64_lossy()).sum::<f64>() / m,
            top.iter().map(|p| p[1].to_f64_lossy()).sum::<f64>() / m,
        ]
    });
    let retained = indicator.retained_modes;
    let report = ReconstructionReport {
        schema: "report/1",
        directions: f.n(),
        noise_level: settings.noise.level,
        noise_seed: settings.noise.seed,
        preconditioner: settings.preconditioner,
        floor_rel: settings.floor_rel.to_f64_lossy(),
        unitarity_defect: s.unitarity_defect.to_f64_lossy(),
        inverse_residual: s.inverse_residual.to_f64_lossy(),
        relative_operator_norm: f.entries.frobenius().to_f64_lossy(),
        lambda_max: fs.eig.lambda.first().map_or(0.0, |l| l.to_f64_lossy()),
        lambda_min_retained: if retained > 0 { fs.eig.lambda[retained - 1].to_f64_lossy() } else { 0.0 },
        retained_modes: retained,
        floored_modes: indicator.floored_modes,
        no_defect_signal: indicator.no_defect_signal,
        assumptions: validate_assumptions(media, ASSUMPTION_SAMPLES)?,
        contrast,
        contrast_statistic,
        top_decile_centroid,
    };
    Ok(Reconstruction { scattering: s, f_sharp: fs, indicator, report })
}

/// One oracle check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    /// `None` when the check does not apply to the scene.
    pub passed: Option<bool>,
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn new(name: &str, value: f64, tolerance: f64, detail: String) -> Self {
        Self { name: name.into(), passed: Some(value <= tolerance), value, tolerance, detail }
    }

    fn skipped(name: &str, detail: &str) -> Self {
        Self { name: name.into(), passed: None, value: f64::NAN, tolerance: f64::NAN, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub checks: Vec<Check>,
    pub all_passed: bool,
}

pub const MIE_TOL: f64 = 1e-2;
pub const RECIPROCITY_TOL: f64 = 1e-3;
pub const UNITARITY_TOL: f64 = 5e-2;
pub const MIXED_RECIPROCITY_TOL: f64 = 5e-2;
pub const PDE_RESIDUAL_TOL: f64 = 1e-9;
pub const PROBE_RESIDUAL_TOL: f64 = 1e-10;

/// Interior points used by the mixed-reciprocity check.
pub const MIXED_RECIPROCITY_POINTS: [Point<f64>; 3] = [[0.2, -0.3], [1.0, 0.5], [-1.2, -1.0]];

/// `‖a − b‖/‖b‖`, or 0 when both vanish.
pub fn relative_discrepancy<T: Real>(a: &[C<T>], b: &[C<T>]) -> T {
    let num: T = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<T>().sqrt();
    let den: T = b.iter().map(|y| y.norm_sqr()).sum::<T>().sqrt();
    if num == T::zero() {
        T::zero()
    } else {
        num / den
    }
}

/// Relative L² gap between `γ₂ u_b(z, −x̂_j)` and the far field of a direct point-source solve.
pub fn mixed_reciprocity_discrepancy<T: Real>(
    media: &MediaConfig<T>,
    spec: &GridSpec<T>,
    fields: &BackgroundFields<T>,
    z: Point<T>,
) -> Result<T> {
    let system = assemble_system(spec, media, Medium::Background)?;
    mixed_reciprocity_with(&system, fields, z)
}

pub(crate) fn mixed_reciprocity_with<T: Real>(
    system: &crate::solver::BandedSystem<T>,
    fields: &BackgroundFields<T>,
    z: Point<T>,
) -> Result<T> {
    let g = solve_point_source(system, z)?;
    let direct = far_field(&g, system.k(), max_extraction_radius(&g), &fields.angles)?;
    let mixed = crate::fm::green_far_field(fields, z)?;
    Ok(relative_discrepancy(&mixed, &direct.values))
}

/// Isotropic disc centred at the origin: `(radius, a, n)`.
fn mie_scene(media: &MediaConfig<f64>) -> Option<(f64, f64, f64)> {
    match media.host.shape {
        Shape::Circle { center: [0.0, 0.0], radius } => {
            let a = media.host.a;
            (a.is_real() && a.a12 == 0.0 && a.a11 == a.a22).then_some((radius, a.a11, media.host.n))
        }
        _ => None,
    }
}

/// Runs the oracle suite on the background problem of `cfg`; no early abort.
pub fn verify(cfg: &RunConfig) -> Result<VerifyReport> {
    let spec = cfg.validate()?;
    let media = &cfg.media;
    let n = cfg.directions;
    let system = assemble_system(&spec, media, Medium::Background)?;
    let mut checks = vec![Check::new(
        "probe_residual",
        system.probe_residual(),
        PROBE_RESIDUAL_TOL,
        "factorization residual on a pseudo-random probe".into(),
    )];

    let d = [1.0, 0.0];
    let u = solve_plane_wave(&system, d)?;
    let rhs = system.plane_wave_rhs(d);
    let lu = system.apply(&u.values);
    checks.push(Check::new(
        "pde_residual",
        relative_discrepancy(&lu, &rhs),
        PDE_RESIDUAL_TOL,
        "discrete residual of the plane-wave solve for d = (1, 0)".into(),
    ));

    match mie_scene(media) {
        Some((radius, a, idx)) => {
            let angles: Vec<f64> = uniform_angles(64);
            let ff = far_field(&u, media.k, max_extraction_radius(&u), &angles)?;
            let mie = mie_far_field(media.k, radius, a, idx, 0.0, &angles)?;
            checks.push(Check::new(
                "mie",
                relative_discrepancy(&ff.values, &mie.values),
                MIE_TOL,
                format!("background disc (radius {radius}, a {a}, n {idx}) against the series solution, 64 angles"),
            ));
        }
        None => checks.push(Check::skipped("mie", "host is not an isotropic disc centred at the origin")),
    }

    let sim = assemble_far_field_matrix(media, &spec, Medium::Background, n, true)?;
    checks.push(Check::new(
        "reciprocity",
        sim.matrix.reciprocity_defect(),
        RECIPROCITY_TOL,
        format!("max |F_b[i,j] - F_b[j+N/2,i+N/2]| / max |F_b|, N = {n}"),
    ));
    let s = scattering_operator(&sim.matrix)?;
    checks.push(Check::new("unitarity", s.unitarity_defect, UNITARITY_TOL, "||S*S - I||_F / ||S||_F^2".into()));
    let fields = sim.fields.as_ref().ok_or(Error::MissingFields)?;
    for z in MIXED_RECIPROCITY_POINTS {
        let name = format!("mixed_reciprocity({}, {})", z[0], z[1]);
        if !media.host.shape.contains(z) {
            checks.push(Check::skipped(&name, "point lies outside the host"));
            continue;
        }
        let gap = mixed_reciprocity_with(&system, fields, z)?;
        checks.push(Check::new(&name, gap, MIXED_RECIPROCITY_TOL, "gamma2 u_b(z, -x) against a point-source solve".into()));
    }
    let all_passed = checks.iter().all(|c| c.passed != Some(false));
    Ok(VerifyReport { schema: "verify/1", checks, all_passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::{Host, SymTensor2};

    #[test]
    fn presets_parse_and_validate() {
        for name in crate::presets::NAMES {
            let cfg = RunConfig::preset(name).unwrap();
            cfg.validate().unwrap();
            let json = serde_json::to_string(&cfg).unwrap();
            let back: RunConfig = serde_json::from_str(&json).unwrap();
            assert_eq!(back, cfg);
        }
    }

    #[test]
    fn minimal_config_uses_defaults() {
        let json = r#"{"media": {"host": {"shape": {"type": "circle", "center": [0, 0], "radius": 1},
            "A": {"a11": 1, "a12": 0, "a22": 1}, "n": 1}, "k": 1}}"#;
        let cfg: RunConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.directions, 32);
        assert_eq!(cfg.floor_rel, 1e-12);
        assert_eq!(cfg.lattice, Lattice::reference());
        cfg.validate().unwrap();
    }

    #[test]
    fn invalid_settings_are_rejected() {
        let mut cfg = RunConfig::preset("example1_circle").unwrap();
        cfg.directions = 31;
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::preset("example1_circle").unwrap();
        cfg.floor_rel = 0.1;
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::preset("example1_circle").unwrap();
        cfg.grid = Some(GridConfig { half_extent: 4.0, h: 0.1, pml_cells: 16, pml_strength: None, scheme: Scheme::Compact });
        assert!(matches!(cfg.validate(), Err(Error::ConfigInvalid(_))));
    }

    #[test]
    fn grid_spacing_override() {
        let mut cfg = RunConfig::preset("example1_circle").unwrap();
        cfg.set_grid_spacing(0.05).unwrap();
        let spec = cfg.validate().unwrap();
        assert_eq!(spec.h, 0.05);
        assert!(spec.half_extent >= 1.5 * 8f64.sqrt());
    }

    #[test]
    fn homogeneous_scene_verifies() {
        let media = MediaConfig {
            host: Host { shape: Shape::circle(0.0, 0.0, 1.0), a: SymTensor2::identity(), n: 1.0 },
            defects: vec![],
            k: 1.0,
        };
        let mut cfg = RunConfig::new(media, 8);
        cfg.grid = Some(GridConfig { half_extent: 2.0, h: 0.1, pml_cells: 12, pml_strength: None, scheme: Scheme::Compact });
        let report = verify(&cfg).unwrap();
        assert!(report.all_passed, "{report:#?}");
        assert!(report.checks.iter().filter(|c| c.passed.is_some()).count() >= 5);
    }
}
