pub mod cli;
pub mod error;
pub mod farfield;
pub mod fm;
pub mod linalg;
pub mod media;
pub mod pipeline;
pub mod presets;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};

pub type FarFieldMatrix64 = farfield::FarFieldMatrix<f64>;
pub type FarFieldMatrix32 = farfield::FarFieldMatrix<f32>;
pub type GridSpec64 = solver::GridSpec<f64>;
pub type GridSpec32 = solver::GridSpec<f32>;
pub type MediaConfig64 = media::MediaConfig<f64>;
pub type MediaConfig32 = media::MediaConfig<f32>;
pub type IndicatorGrid64 = fm::IndicatorGrid<f64>;
pub type IndicatorGrid32 = fm::IndicatorGrid<f32>;
