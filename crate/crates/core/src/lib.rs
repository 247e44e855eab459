//! Pseudospectral toolkit for single-photon pulse states.
//!
//! States are classical pulse functions in either the Landau–Peierls (LP)
//! representation `ψ` or the Białynicki-Birula (BB) representation `F`,
//! sampled on a periodic grid. Every operator that matters here is a
//! Fourier multiplier: the frequency operator `Ω = c(-Δ)^{1/2}` and its
//! powers, the curl, the helicity operator `Λ` and its projectors.
//!
//! The crate computes the normal-ordered energy-density expectation value of
//! a one-photon state along both representations and provides the
//! diagnostics used to show that this density vanishes nowhere:
//! Knight-style detector comparisons against the vacuum, tail fits,
//! antilocality witnesses and helicity vanishing scans.
//!
//! Conventions: positions `x_j = -L/2 + jΔ`, wavenumbers `k_m = 2πm/L`, and
//! the continuum-normalized transform
//! `ṽ(k) = Δ^d (2π)^{-d/2} Σ_j v(x_j) e^{-ik·x_j}`, so discrete sums
//! approximate the continuum inner products directly.

pub mod error;
pub mod io;
pub mod locality;
pub mod observables;
pub mod representations;
pub mod scenarios;
pub mod spectral;

pub use error::{Error, Result};
pub use spectral::{
    apply_frequency_power, curl, forward_transform, helicity_apply, helicity_project,
    inverse_transform, momentum_amplitudes, plane_wave, polarization_vector,
    synthesize_from_amplitudes, transverse_project, Domain, Grid, Helicity, MomentumAmplitudes,
    PolarizationVector, SpectralField, UnitsConfig, WaveVectorTable,
};

pub use observables::{
    detector_energy, energy_density, knight_locality_test, lp_energy, total_energy, DetectorVolume,
    EnergyDensityMap, EnergyPath, KnightReport, Verdict,
};
pub use representations::{
    bb_from_em, bb_from_lp, bb_inner, evolve, lp_from_bb, lp_from_potentials, lp_inner, normalize,
    riemann_silberstein_split, riemann_silberstein_vector, AnyState, BbState, EmFields,
    HelicityPair, LpState, PhotonState, Representation,
};

pub use num_complex::Complex64;
