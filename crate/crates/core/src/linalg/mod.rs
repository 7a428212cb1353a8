//! Dense and banded complex linear algebra.

mod banded;
mod dense;

pub use banded::BandedLu;
pub use dense::{CMatrix, DenseLu};
