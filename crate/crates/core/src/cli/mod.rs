//! Command-line front end: `simulate`, `reconstruct`, `verify`, `run` and `example`.

pub mod io;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::farfield::{BackgroundFields, FarFieldMatrix};
use crate::pipeline::{reconstruct, simulate, verify, ReconstructionSettings, RunConfig};

pub const F0_FILE: &str = "F0.ffm.json";
pub const FB_FILE: &str = "Fb.ffm.json";
pub const FIELDS_FILE: &str = "fields.bin";
pub const INDICATOR_CSV: &str = "indicator.csv";
pub const INDICATOR_PGM: &str = "indicator.pgm";
pub const SPECTRUM_CSV: &str = "spectrum.csv";
pub const REPORT_JSON: &str = "report.json";

/// Exit code of `verify` when a check fails.
pub const EXIT_CHECK_FAILED: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "defectfm", version, about = "Factorization-method imaging of defects in anisotropic media")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the background and defective problems; write F0, Fb and the background fields.
    Simulate(Common),
    /// Build the indicator from previously simulated data.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        /// Defaults to <out>/F0.ffm.json.
        #[arg(long)]
        f0: Option<PathBuf>,
        /// Defaults to <out>/Fb.ffm.json.
        #[arg(long)]
        fb: Option<PathBuf>,
        /// Defaults to <out>/fields.bin.
        #[arg(long)]
        fields: Option<PathBuf>,
    },
    /// Run the oracle checks on the background problem.
    Verify(Common),
    /// Simulate and reconstruct in one go.
    Run(Common),
    /// Print a bundled configuration (or list them).
    Example {
        name: Option<String>,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (overrides `outputs`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub noise: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Undo S_b with its adjoint instead of its inverse.
    #[arg(long)]
    pub use_adjoint: bool,
    /// Relative eigenvalue floor.
    #[arg(long)]
    pub floor: Option<f64>,
    #[arg(long)]
    pub grid_h: Option<f64>,
    #[arg(long)]
    pub directions: Option<usize>,
}

impl Common {
    /// Loads the config, applies the flags and validates the result.
    pub fn load(&self) -> Result<(RunConfig, PathBuf)> {
        let text = std::fs::read_to_string(&self.config)?;
        let mut cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Error::ConfigInvalid(format!("{}: {e}", self.config.display())))?;
        if let Some(level) = self.noise {
            cfg.noise.level = level;
        }
        if let Some(seed) = self.seed {
            cfg.noise.seed = seed;
        }
        if self.use_adjoint {
            cfg.use_adjoint_instead_of_inverse = true;
        }
        if let Some(floor) = self.floor {
            cfg.floor_rel = floor;
        }
        if let Some(n) = self.directions {
            cfg.directions = n;
        }
        if let Some(h) = self.grid_h {
            cfg.set_grid_spacing(h)?;
        }
        cfg.validate()?;
        let out = self.out.clone().unwrap_or_else(|| PathBuf::from(&cfg.outputs));
        std::fs::create_dir_all(&out)?;
        Ok((cfg, out))
    }
}

fn cmd_simulate(cfg: &RunConfig, out: &Path) -> Result<(FarFieldMatrix<f64>, FarFieldMatrix<f64>, BackgroundFields<f64>)> {
    let spec = cfg.validate()?;
    let sim = simulate(&cfg.media, &spec, cfg.directions)?;
    io::write_ffm(&out.join(F0_FILE), &sim.f0)?;
    io::write_ffm(&out.join(FB_FILE), &sim.fb)?;
    io::write_fields(&out.join(FIELDS_FILE), &sim.fields)?;
    Ok((sim.f0, sim.fb, sim.fields))
}

/// Writes the indicator artifacts; `NoDefectSignal` is raised only after they are on disk.
fn cmd_reconstruct(
    cfg: &RunConfig,
    out: &Path,
    f0: &FarFieldMatrix<f64>,
    fb: &FarFieldMatrix<f64>,
    fields: &BackgroundFields<f64>,
) -> Result<()> {
    if cfg.media.k != fb.k || fields.k != fb.k || fields.angles != fb.angles || cfg.directions != fb.n() {
        return Err(Error::DimensionMismatch(format!(
            "config k {} with {} directions, far-field k {} with {}, fields k {} with {}",
            cfg.media.k,
            cfg.directions,
            fb.k,
            fb.n(),
            fields.k,
            fields.n()
        )));
    }
    let rec = reconstruct(&cfg.media, f0, fb, fields, &ReconstructionSettings::from_run(cfg))?;
    io::write_indicator_csv(&out.join(INDICATOR_CSV), &rec.indicator)?;
    io::write_pgm(&out.join(INDICATOR_PGM), &rec.indicator)?;
    io::write_spectrum(&out.join(SPECTRUM_CSV), &rec.f_sharp.eig.lambda)?;
    io::write_json(&out.join(REPORT_JSON), &rec.report)?;
    if rec.report.no_defect_signal {
        return Err(Error::NoDefectSignal);
    }
    Ok(())
}

/// Runs one parsed command and returns the process exit code.
pub fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Simulate(common) => {
            let (cfg, out) = common.load()?;
            cmd_simulate(&cfg, &out)?;
        }
        Command::Reconstruct { common, f0, fb, fields } => {
            let (cfg, out) = common.load()?;
            let f0 = io::read_ffm(&f0.unwrap_or_else(|| out.join(F0_FILE)))?;
            let fb = io::read_ffm(&fb.unwrap_or_else(|| out.join(FB_FILE)))?;
            let fields = io::read_fields(&fields.unwrap_or_else(|| out.join(FIELDS_FILE)))?;
            cmd_reconstruct(&cfg, &out, &f0, &fb, &fields)?;
        }
        Command::Verify(common) => {
            let (cfg, out) = common.load()?;
            let report = verify(&cfg)?;
            io::write_json(&out.join(REPORT_JSON), &report)?;
            for c in &report.checks {
                let status = match c.passed {
                    Some(true) => "pass",
                    Some(false) => "FAIL",
                    None => "skip",
                };
                println!("{status:4} {:32} {:.3e} (tol {:.1e})", c.name, c.value, c.tolerance);
            }
            if !report.all_passed {
                return Ok(EXIT_CHECK_FAILED);
            }
        }
        Command::Run(common) => {
            let (cfg, out) = common.load()?;
            let (f0, fb, fields) = cmd_simulate(&cfg, &out)?;
            cmd_reconstruct(&cfg, &out, &f0, &fb, &fields)?;
        }
        Command::Example { name: None, .. } => {
            for name in crate::presets::NAMES {
                println!("{name}");
            }
        }
        Command::Example { name: Some(name), out } => {
            let cfg = RunConfig::preset(&name).ok_or_else(|| {
                Error::ConfigInvalid(format!("unknown example {name:?}; known: {}", crate::presets::NAMES.join(", ")))
            })?;
            match out {
                Some(path) => io::write_json(&path, &cfg)?,
                None => println!("{}", serde_json::to_string_pretty(&cfg).expect("config serializes")),
            }
        }
    }
    Ok(0)
}

/// JSON diagnostic written to standard error on failure.
pub fn error_json(e: &Error) -> serde_json::Value {
    serde_json::json!({ "error": e.kind(), "message": e.to_string(), "exit_code": e.exit_code() })
}

/// Parses `args`, runs the command and reports errors; returns the exit code.
pub fn main_with_args<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            e.exit_code()
        }
    }
}
