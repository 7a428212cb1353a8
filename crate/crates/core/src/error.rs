use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("singular system: pivot {pivot:e} at row {row} (threshold {threshold:e})")]
    SingularSystem { row: usize, pivot: f64, threshold: f64 },

    #[error("point ({x}, {y}) lies inside or too close to the PML collar")]
    PointInPml { x: f64, y: f64 },

    #[error("far-field circle of radius {radius} is not admissible: {reason}")]
    CircleOutOfBounds { radius: f64, reason: String },

    #[error("transmission system of angular mode {mode} is singular")]
    ModeSystemSingular { mode: i64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("scattering matrix is singular: pivot collapse at row {row}")]
    SingularScattering { row: usize },

    #[error("matrix is not Hermitian: relative defect {defect:e}")]
    NotHermitian { defect: f64 },

    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("sampling point ({x}, {y}) lies outside the host region")]
    PointOutsideD { x: f64, y: f64 },

    #[error("background fields were not retained")]
    MissingFields,

    #[error("no eigenvalue survives the spectral floor")]
    EmptySpectrum,

    #[error("relative far-field operator carries no defect signal")]
    NoDefectSignal,

    #[error("schema error: {0}")]
    Schema(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code: 2 config, 3 solver, 4 data mismatch, 5 no-defect signal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConfigInvalid(_) | Error::Io(_) => 2,
            Error::SingularSystem { .. }
            | Error::PointInPml { .. }
            | Error::CircleOutOfBounds { .. }
            | Error::ModeSystemSingular { .. }
            | Error::SingularScattering { .. }
            | Error::NotHermitian { .. }
            | Error::NoConvergence { .. }
            | Error::EmptySpectrum => 3,
            Error::DimensionMismatch(_)
            | Error::Schema(_)
            | Error::MissingFields
            | Error::PointOutsideD { .. } => 4,
            Error::NoDefectSignal => 5,
        }
    }

    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ConfigInvalid(_) => "ConfigInvalid",
            Error::SingularSystem { .. } => "SingularSystem",
            Error::PointInPml { .. } => "PointInPml",
            Error::CircleOutOfBounds { .. } => "CircleOutOfBounds",
            Error::ModeSystemSingular { .. } => "ModeSystemSingular",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::SingularScattering { .. } => "SingularScattering",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::PointOutsideD { .. } => "PointOutsideD",
            Error::MissingFields => "MissingFields",
            Error::EmptySpectrum => "EmptySpectrum",
            Error::NoDefectSignal => "NoDefectSignal",
            Error::Schema(_) => "SchemaError",
            Error::Io(_) => "Io",
        }
    }
}
