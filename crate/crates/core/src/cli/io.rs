//! Artifact formats. Every write goes to a temporary file in the target
//! directory and is renamed into place, so a failed run leaves no partial files.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::farfield::{BackgroundFields, FarFieldMatrix};
use crate::fm::IndicatorGrid;
use crate::linalg::CMatrix;
use crate::scalar::{cplx, C};
use crate::solver::{ComplexGridField, GridSpec};

pub const FFM_SCHEMA: &str = "ffm/1";
pub const FIELDS_SCHEMA: &str = "fields/1";

/// Writes `path` atomically through `fill`.
pub fn write_atomic(path: &Path, fill: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut builder = tempfile::Builder::new();
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        builder.permissions(std::fs::Permissions::from_mode(0o644));
    }
    let mut tmp = builder.tempfile_in(dir)?;
    {
        let mut w = BufWriter::new(tmp.as_file_mut());
        fill(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    write_atomic(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value).map_err(|e| Error::Schema(e.to_string()))?;
        writeln!(w)?;
        Ok(())
    })
}

fn read_to_string(path: &Path) -> Result<String> {
    let mut s = String::new();
    File::open(path)?.read_to_string(&mut s)?;
    Ok(s)
}

pub fn read_json<D: for<'de> Deserialize<'de>>(path: &Path) -> Result<D> {
    serde_json::from_str(&read_to_string(path)?).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

#[derive(Serialize, Deserialize)]
struct FfmFile {
    schema: String,
    k: f64,
    #[serde(rename = "N")]
    n: usize,
    angles: Vec<f64>,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

pub fn write_ffm(path: &Path, f: &FarFieldMatrix<f64>) -> Result<()> {
    let n = f.n();
    let rows = |part: fn(&C<f64>) -> f64| (0..n).map(|i| f.entries.row(i).iter().map(part).collect()).collect();
    let file = FfmFile {
        schema: FFM_SCHEMA.into(),
        k: f.k,
        n,
        angles: f.angles.clone(),
        re: rows(|z| z.re),
        im: rows(|z| z.im),
    };
    write_atomic(path, |w| {
        serde_json::to_writer(&mut *w, &file).map_err(|e| Error::Schema(e.to_string()))?;
        writeln!(w)?;
        Ok(())
    })
}

pub fn read_ffm(path: &Path) -> Result<FarFieldMatrix<f64>> {
    let file: FfmFile = read_json(path)?;
    if file.schema != FFM_SCHEMA {
        return Err(Error::Schema(format!("{}: expected schema {FFM_SCHEMA}, got {}", path.display(), file.schema)));
    }
    let n = file.n;
    let square = |m: &Vec<Vec<f64>>| m.len() == n && m.iter().all(|r| r.len() == n);
    if file.angles.len() != n || !square(&file.re) || !square(&file.im) {
        return Err(Error::Schema(format!("{}: arrays do not match N = {n}", path.display())));
    }
    let entries = CMatrix::from_fn(n, n, |i, j| cplx(file.re[i][j], file.im[i][j]));
    FarFieldMatrix::new(file.k, file.angles, entries)
}

#[derive(Serialize, Deserialize)]
struct FieldsHeader {
    schema: String,
    k: f64,
    #[serde(rename = "N")]
    n: usize,
    angles: Vec<f64>,
    grid: GridSpec<f64>,
    nodes_per_axis: usize,
    /// Layout of the payload that follows the header line.
    layout: String,
}

const FIELDS_LAYOUT: &str = "scattered u_b^s, per direction, row-major nodes (y slow), f64 LE re/im";

/// JSON header line, then the scattered fields as interleaved little-endian `f64`.
pub fn write_fields(path: &Path, fields: &BackgroundFields<f64>) -> Result<()> {
    let grid = fields.scattered.first().map(|f| f.spec).ok_or(Error::MissingFields)?;
    if fields.scattered.iter().any(|f| f.spec != grid) {
        return Err(Error::DimensionMismatch("background fields live on different grids".into()));
    }
    let header = FieldsHeader {
        schema: FIELDS_SCHEMA.into(),
        k: fields.k,
        n: fields.n(),
        angles: fields.angles.clone(),
        grid,
        nodes_per_axis: grid.nodes_per_axis(),
        layout: FIELDS_LAYOUT.into(),
    };
    write_atomic(path, |w| {
        serde_json::to_writer(&mut *w, &header).map_err(|e| Error::Schema(e.to_string()))?;
        writeln!(w)?;
        for field in &fields.scattered {
            for z in &field.values {
                w.write_all(&z.re.to_le_bytes())?;
                w.write_all(&z.im.to_le_bytes())?;
            }
        }
        Ok(())
    })
}

pub fn read_fields(path: &Path) -> Result<BackgroundFields<f64>> {
    let mut r = BufReader::new(File::open(path)?);
    let mut line = String::new();
    r.read_line(&mut line)?;
    let header: FieldsHeader =
        serde_json::from_str(&line).map_err(|e| Error::Schema(format!("{}: header: {e}", path.display())))?;
    if header.schema != FIELDS_SCHEMA {
        return Err(Error::Schema(format!("{}: expected schema {FIELDS_SCHEMA}, got {}", path.display(), header.schema)));
    }
    header.grid.validate()?;
    if header.nodes_per_axis != header.grid.nodes_per_axis() || header.angles.len() != header.n {
        return Err(Error::Schema(format!("{}: header is inconsistent", path.display())));
    }
    let nodes = header.grid.node_count();
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != header.n * nodes * 16 {
        return Err(Error::Schema(format!(
            "{}: payload has {} bytes, expected {}",
            path.display(),
            bytes.len(),
            header.n * nodes * 16
        )));
    }
    let word = |i: usize| f64::from_le_bytes(bytes[8 * i..8 * i + 8].try_into().expect("eight bytes"));
    let scattered = (0..header.n)
        .map(|d| {
            let base = 2 * d * nodes;
            let values = (0..nodes).map(|p| cplx(word(base + 2 * p), word(base + 2 * p + 1))).collect();
            ComplexGridField::new(header.grid, values)
        })
        .collect::<Result<_>>()?;
    Ok(BackgroundFields { k: header.k, angles: header.angles, scattered })
}

/// `x,y,value,inside_D`; points outside the host have an empty value.
pub fn write_indicator_csv(path: &Path, grid: &IndicatorGrid<f64>) -> Result<()> {
    write_atomic(path, |w| {
        writeln!(w, "x,y,value,inside_D")?;
        for (idx, p) in grid.lattice.points().into_iter().enumerate() {
            if grid.mask[idx] {
                writeln!(w, "{},{},{},1", p[0], p[1], grid.values[idx])?;
            } else {
                writeln!(w, "{},{},,0", p[0], p[1])?;
            }
        }
        Ok(())
    })
}

/// 8-bit grey levels linear in `[min, max]` of the valid values; top row is `y_max`.
/// Points outside the host are black, capped points white.
pub fn pgm_levels(grid: &IndicatorGrid<f64>) -> Vec<u8> {
    let (lo, hi) = grid.valid().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, v)| (lo.min(v), hi.max(v)));
    let (nx, ny) = (grid.lattice.nx, grid.lattice.ny);
    let mut out = Vec::with_capacity(nx * ny);
    for row in (0..ny).rev() {
        for col in 0..nx {
            let idx = row * nx + col;
            let level = if !grid.mask[idx] {
                0
            } else if grid.degenerate[idx] {
                255
            } else if hi > lo {
                ((grid.values[idx] - lo) / (hi - lo) * 255.0).round().clamp(0.0, 255.0) as u8
            } else {
                255
            };
            out.push(level);
        }
    }
    out
}

pub fn write_pgm(path: &Path, grid: &IndicatorGrid<f64>) -> Result<()> {
    let levels = pgm_levels(grid);
    write_atomic(path, |w| {
        write!(w, "P5\n{} {}\n255\n", grid.lattice.nx, grid.lattice.ny)?;
        w.write_all(&levels)?;
        Ok(())
    })
}

pub fn write_spectrum(path: &Path, lambda: &[f64]) -> Result<()> {
    write_atomic(path, |w| {
        writeln!(w, "i,lambda")?;
        for (i, l) in lambda.iter().enumerate() {
            writeln!(w, "{},{l}", i + 1)?;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::uniform_angles;

    fn sample_matrix(n: usize) -> FarFieldMatrix<f64> {
        let entries = CMatrix::from_fn(n, n, |i, j| cplx((i as f64 + 0.1).ln() / 3.0, (j as f64).sqrt() * 1e-7 - 0.3));
        FarFieldMatrix::new(1.0, uniform_angles(n), entries).unwrap()
    }

    #[test]
    fn ffm_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("F.ffm.json");
        let f = sample_matrix(8);
        write_ffm(&path, &f).unwrap();
        let back = read_ffm(&path).unwrap();
        assert_eq!(back, f);
        assert!(back.angles.iter().zip(&f.angles).all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn fields_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fields.bin");
        let spec = GridSpec::with_default_pml(2.0, 0.25, 8, 1.0).unwrap();
        let scattered = (0..4)
            .map(|d| {
                let values = (0..spec.node_count()).map(|p| cplx(p as f64 / 7.0, -(d as f64) / 3.0)).collect();
                ComplexGridField::new(spec, values).unwrap()
            })
            .collect();
        let fields = BackgroundFields { k: 1.0, angles: uniform_angles(4), scattered };
        write_fields(&path, &fields).unwrap();
        let back = read_fields(&path).unwrap();
        assert_eq!(back.scattered, fields.scattered);
        assert_eq!(back.angles, fields.angles);
    }

    #[test]
    fn malformed_inputs_are_schema_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, r#"{"schema":"ffm/0","k":1,"N":2,"angles":[0,3.14],"re":[[0,0],[0,0]],"im":[[0,0],[0,0]]}"#)
            .unwrap();
        assert!(matches!(read_ffm(&path), Err(Error::Schema(_))));
        std::fs::write(&path, "{").unwrap();
        assert!(matches!(read_ffm(&path), Err(Error::Schema(_))));
        std::fs::write(&path, "{}\n").unwrap();
        assert!(matches!(read_fields(&path), Err(Error::Schema(_))));
    }

    #[test]
    fn failed_write_leaves_nothing_behind() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let r = write_atomic(&path, |w| {
            writeln!(w, "partial")?;
            Err(Error::EmptySpectrum)
        });
        assert!(r.is_err());
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
    }
}
