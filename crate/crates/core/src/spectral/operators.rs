//! Fourier multipliers: powers of `Ω`, curl, helicity `Λ` and projectors.
//!
//! Every operator accepts a field in either domain and returns its result in
//! the domain of the input. In 1D the helicity operator is the multiplier
//! `sign(k)`, the reduced-model analogue of `c∇× = ΩΛ` with `-ic∂_x` in
//! place of the curl.

use num_complex::Complex64;

use super::grid::norm3;
use super::{Domain, Grid, Helicity, SpectralField, UnitsConfig};
use crate::error::{Error, Result};

/// Largest admissible `max|k·ṽ| / max|k||ṽ|` for a field flagged transverse.
pub const TRANSVERSE_TOLERANCE: f64 = 1e-10;

/// Zero-mode amplitude, relative to the spectral peak, above which negative
/// powers of `Ω` are refused.
pub const ZERO_MODE_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Applies `f(mode, values)` to every frequency mode. The result is returned
/// in the domain of `field`, with the transverse flag cleared.
pub(crate) fn map_modes(
    field: &SpectralField,
    mut f: impl FnMut(usize, &mut [Complex64]),
) -> SpectralField {
    let spec = field.to_frequency();
    let grid = *spec.grid();
    let nc = spec.n_components();
    let mut comps = spec.into_components();
    let mut buf = [ZERO; 3];
    for m in 0..grid.len() {
        for c in 0..nc {
            buf[c] = comps[c][m];
        }
        f(m, &mut buf[..nc]);
        for c in 0..nc {
            comps[c][m] = buf[c];
        }
    }
    let out = SpectralField::from_parts(grid, comps, Domain::Frequency, false);
    out.to_domain(field.domain())
}

fn require_3d(grid: &Grid) -> Result<()> {
    if grid.dim() != 3 {
        return Err(Error::Dimension {
            expected: 3,
            found: grid.dim(),
        });
    }
    Ok(())
}

/// `max_m |k_m·ṽ(k_m)| / max_m |k_m||ṽ(k_m)|`; zero in 1D and for the zero field.
pub fn transversality_residual(field: &SpectralField) -> f64 {
    let grid = *field.grid();
    if grid.dim() != 3 {
        return 0.0;
    }
    let spec = field.to_frequency();
    let (mut num, mut den) = (0.0f64, 0.0f64);
    for m in 0..grid.len() {
        let k = grid.wavevector(m);
        let v = [spec.component(0)[m], spec.component(1)[m], spec.component(2)[m]];
        let dot = v[0] * k[0] + v[1] * k[1] + v[2] * k[2];
        let mag = (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt();
        num = num.max(dot.norm());
        den = den.max(norm3(&k) * mag);
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Zero-mode amplitude divided by the largest spectral amplitude.
pub fn zero_mode_ratio(field: &SpectralField) -> f64 {
    let spec = field.to_frequency();
    let norms = spec.pointwise_norm_sq();
    let peak = norms.iter().cloned().fold(0.0f64, f64::max).sqrt();
    if peak == 0.0 {
        0.0
    } else {
        norms[0].sqrt() / peak
    }
}

pub(crate) fn check_zero_mode(field: &SpectralField) -> Result<()> {
    let ratio = zero_mode_ratio(field);
    if ratio > ZERO_MODE_TOLERANCE {
        return Err(Error::ZeroMode {
            amplitude: ratio,
            limit: ZERO_MODE_TOLERANCE,
        });
    }
    Ok(())
}

fn check_transverse(field: &SpectralField) -> Result<()> {
    if field.grid().dim() == 3 {
        let residual = transversality_residual(field);
        if residual >= TRANSVERSE_TOLERANCE {
            return Err(Error::Transversality { residual });
        }
    }
    Ok(())
}

/// Multiplies every mode by `ω_k^s`. For `s < 0` the zero mode must be
/// negligible and is set to exactly zero on output.
pub fn apply_frequency_power(
    field: &SpectralField,
    s: f64,
    units: &UnitsConfig,
) -> Result<SpectralField> {
    if s == 0.0 {
        return Ok(field.clone());
    }
    if s < 0.0 {
        check_zero_mode(field)?;
    }
    Ok(apply_frequency_power_unchecked(field, s, units))
}

/// `ω_k^s` multiplier with the zero mode mapped to zero, no precondition.
pub(crate) fn apply_frequency_power_unchecked(
    field: &SpectralField,
    s: f64,
    units: &UnitsConfig,
) -> SpectralField {
    let grid = *field.grid();
    let out = map_modes(field, |m, v| {
        let omega = units.c * norm3(&grid.wavevector(m));
        let factor = if omega == 0.0 { 0.0 } else { omega.powf(s) };
        for z in v.iter_mut() {
            *z *= factor;
        }
    });
    out.with_transverse(field.is_transverse())
}

/// Mode-wise `i k × ṽ(k)`.
pub fn curl(field: &SpectralField) -> Result<SpectralField> {
    let grid = *field.grid();
    require_3d(&grid)?;
    let out = map_modes(field, |m, v| {
        let k = grid.wavevector(m);
        let w = cross_c(&k, v);
        for c in 0..3 {
            v[c] = I * w[c];
        }
    });
    Ok(out.with_transverse(true))
}

fn cross_c(k: &[f64; 3], v: &[Complex64]) -> [Complex64; 3] {
    [
        v[2] * k[1] - v[1] * k[2],
        v[0] * k[2] - v[2] * k[0],
        v[1] * k[0] - v[0] * k[1],
    ]
}

/// Helicity operator `Λ`: `i k̂ × ṽ` in 3D, `sign(k)` in 1D; zero mode → 0.
pub fn helicity_apply(field: &SpectralField) -> Result<SpectralField> {
    check_transverse(field)?;
    Ok(helicity_unchecked(field))
}

fn helicity_unchecked(field: &SpectralField) -> SpectralField {
    let grid = *field.grid();
    let out = map_modes(field, |m, v| {
        let k = grid.wavevector(m);
        let mag = norm3(&k);
        if mag == 0.0 {
            v.iter_mut().for_each(|z| *z = ZERO);
            return;
        }
        if grid.dim() == 1 {
            v[0] *= k[0].signum();
        } else {
            let w = cross_c(&k, v);
            for c in 0..3 {
                v[c] = I * w[c] / mag;
            }
        }
    });
    out.with_transverse(field.is_transverse() || grid.dim() == 3)
}

/// Helicity projector `(1 ± Λ)/2`. The two projections of a transverse field
/// sum back to it exactly; on the zero mode each takes half.
pub fn helicity_project(field: &SpectralField, sign: Helicity) -> Result<SpectralField> {
    check_transverse(field)?;
    let grid = *field.grid();
    let s = sign.sign();
    let out = map_modes(field, |m, v| {
        let k = grid.wavevector(m);
        let mag = norm3(&k);
        if grid.dim() == 1 {
            let lambda = if mag == 0.0 { 0.0 } else { k[0].signum() };
            v[0] *= 0.5 * (1.0 + s * lambda);
        } else if mag == 0.0 {
            for z in v.iter_mut() {
                *z *= 0.5;
            }
        } else {
            let w = cross_c(&k, v);
            for c in 0..3 {
                v[c] = 0.5 * (v[c] + s * I * w[c] / mag);
            }
        }
    });
    Ok(out.with_transverse(field.is_transverse()))
}

/// Mode-wise `ṽ - k̂(k̂·ṽ)`; the zero mode, which has no direction, is dropped.
pub fn transverse_project(field: &SpectralField) -> Result<SpectralField> {
    let grid = *field.grid();
    require_3d(&grid)?;
    let out = map_modes(field, |m, v| {
        let k = grid.wavevector(m);
        let mag = norm3(&k);
        if mag == 0.0 {
            v.iter_mut().for_each(|z| *z = ZERO);
            return;
        }
        let kh = [k[0] / mag, k[1] / mag, k[2] / mag];
        let dot = v[0] * kh[0] + v[1] * kh[1] + v[2] * kh[2];
        for c in 0..3 {
            v[c] -= dot * kh[c];
        }
    });
    Ok(out.with_transverse(true))
}

/// Free evolution `e^{-iω_k t}`, shared by the LP and BB representations.
pub fn evolve_field(field: &SpectralField, t: f64, units: &UnitsConfig) -> SpectralField {
    let grid = *field.grid();
    let out = map_modes(field, |m, v| {
        let omega = units.c * norm3(&grid.wavevector(m));
        let phase = Complex64::from_polar(1.0, -omega * t);
        for z in v.iter_mut() {
            *z *= phase;
        }
    });
    out.with_transverse(field.is_transverse())
}
