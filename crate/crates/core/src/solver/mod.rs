//! Forward solver for `∇·A∇u + k²n u = f` on a PML-truncated grid.

mod assemble;
mod extract;
mod grid;
mod mie;
pub mod special;

pub use assemble::{assemble_system, solve_plane_wave, solve_point_source, BandedSystem};
pub use extract::{
    check_extraction_radius, far_field, far_field_with, gamma2,
    max_extraction_radius, uniform_angles, FarFieldVector, DEFAULT_QUADRATURE,
};
pub use grid::{ComplexGridField, GridSpec, Scheme};
pub use mie::{mie_coefficients, mie_coefficients_to, mie_far_field, mie_far_field_to, mie_truncation};
