//! Grids, continuum-normalized transforms and the Fourier-multiplier calculus.

mod field;
mod grid;
mod operators;
mod polarization;
mod transform;
mod units;

pub use field::{Domain, SpectralField};
pub use grid::{Grid, WaveVectorTable};
pub use operators::{
    apply_frequency_power, curl, evolve_field, helicity_apply, helicity_project,
    transversality_residual, transverse_project, zero_mode_ratio, TRANSVERSE_TOLERANCE,
};
pub use polarization::{
    momentum_amplitudes, plane_wave, polarization_vector, synthesize_from_amplitudes, Helicity,
    MomentumAmplitudes, PolarizationVector,
};
pub(crate) use operators::{apply_frequency_power_unchecked, check_zero_mode};
pub use transform::{forward_transform, inverse_transform};
pub use units::UnitsConfig;
