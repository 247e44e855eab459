use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::norm3;
use super::operators::{map_modes, transversality_residual, ZERO_MODE_TOLERANCE, TRANSVERSE_TOLERANCE};
use super::{Domain, Grid, SpectralField};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub fn sign(self) -> f64 {
        match self {
            Helicity::Plus => 1.0,
            Helicity::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Helicity::Plus => Helicity::Minus,
            Helicity::Minus => Helicity::Plus,
        }
    }
}

/// Circular polarization vector `ε_σ(k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationVector {
    pub k: [f64; 3],
    pub sigma: Helicity,
    pub eps: [Complex64; 3],
}

/// `ε_+(k) = [-k_x k_z + i|k|k_y, -k_y k_z - i|k|k_x, k_x² + k_y²] / (√2 |k| ρ)`
/// with `ρ = √(k_x² + k_y²)`, and `ε_- = ε_+*`.
///
/// On the `k_z` axis the formula is 0/0; the limit `k_x → 0⁺` at `k_y = 0`
/// is returned, `(-sign(k_z), -i, 0)/√2` for `σ = +`.
pub fn polarization_vector(k: [f64; 3], sigma: Helicity) -> Result<PolarizationVector> {
    let mag = norm3(&k);
    if mag == 0.0 {
        return Err(Error::ZeroWaveVector);
    }
    let rho = (k[0] * k[0] + k[1] * k[1]).sqrt();
    let plus = if rho <= 1e-14 * mag {
        [
            Complex64::new(-k[2].signum() * FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, -FRAC_1_SQRT_2),
            Complex64::new(0.0, 0.0),
        ]
    } else {
        let norm = FRAC_1_SQRT_2 / (mag * rho);
        [
            Complex64::new(-k[0] * k[2], mag * k[1]) * norm,
            Complex64::new(-k[1] * k[2], -mag * k[0]) * norm,
            Complex64::new(rho * rho, 0.0) * norm,
        ]
    };
    let eps = match sigma {
        Helicity::Plus => plus,
        Helicity::Minus => plus.map(|z| z.conj()),
    };
    Ok(PolarizationVector { k, sigma, eps })
}

/// Continuum-normalized plane wave `φ_{k,σ} = (2π)^{-d/2} ε_σ(k) e^{ik·x}`.
///
/// In 1D the polarization collapses to a scalar and `sigma` must equal
/// `sign(k)`, the helicity of `e^{ikx}` in the reduced model.
pub fn plane_wave(grid: &Grid, mode: [isize; 3], sigma: Helicity) -> Result<SpectralField> {
    let flat = grid
        .mode_flat_index(mode)
        .ok_or_else(|| Error::InvalidArgument(format!("mode {mode:?} not on the grid")))?;
    let k = grid.wavevector(flat);
    if norm3(&k) == 0.0 {
        return Err(Error::ZeroWaveVector);
    }
    if grid.dim() == 1 {
        if k[0].signum() != sigma.sign() {
            return Err(Error::InvalidArgument(format!(
                "1D plane wave with k = {} has helicity {}",
                k[0],
                k[0].signum()
            )));
        }
        let norm = (2.0 * PI).powf(-0.5);
        return SpectralField::scalar_from_fn(*grid, |x| Complex64::from_polar(norm, k[0] * x));
    }
    let eps = polarization_vector(k, sigma)?.eps;
    let norm = (2.0 * PI).powf(-1.5);
    let field = SpectralField::vector_from_fn(*grid, |p| {
        let phase = Complex64::from_polar(norm, k[0] * p[0] + k[1] * p[1] + k[2] * p[2]);
        [eps[0] * phase, eps[1] * phase, eps[2] * phase]
    })?;
    Ok(field.with_transverse(true))
}

/// Plane-wave amplitudes `z(k, σ)` indexed like the grid's frequency modes.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumAmplitudes {
    pub grid: Grid,
    pub plus: Vec<Complex64>,
    pub minus: Vec<Complex64>,
}

impl MomentumAmplitudes {
    pub fn get(&self, mode: usize, sigma: Helicity) -> Complex64 {
        match sigma {
            Helicity::Plus => self.plus[mode],
            Helicity::Minus => self.minus[mode],
        }
    }

    /// `Σ_σ ∫ d^dk |z(k,σ)|²` as a Riemann sum over modes.
    pub fn norm_sq(&self) -> f64 {
        let s: f64 = self
            .plus
            .iter()
            .chain(&self.minus)
            .map(|z| z.norm_sqr())
            .sum();
        s * self.grid.mode_volume()
    }
}

/// `z(k,σ) = ε_σ(k)*·ṽ(k)`.
///
/// In 1D the two polarizations are the `sign(k)` split: positive wavenumbers
/// (and the zero mode) carry `+`, negative ones carry `-`. In 3D the field
/// must be transverse with a negligible zero mode.
pub fn momentum_amplitudes(field: &SpectralField) -> Result<MomentumAmplitudes> {
    let grid = *field.grid();
    let spec = field.to_frequency();
    let n = grid.len();
    let mut plus = vec![Complex64::new(0.0, 0.0); n];
    let mut minus = vec![Complex64::new(0.0, 0.0); n];
    if grid.dim() == 1 {
        for (m, &z) in spec.component(0).iter().enumerate() {
            if grid.wavenumber(m) < 0.0 {
                minus[m] = z;
            } else {
                plus[m] = z;
            }
        }
        return Ok(MomentumAmplitudes { grid, plus, minus });
    }
    let residual = transversality_residual(&spec);
    if residual >= TRANSVERSE_TOLERANCE {
        return Err(Error::Transversality { residual });
    }
    let norms = spec.pointwise_norm_sq();
    let peak = norms.iter().cloned().fold(0.0f64, f64::max).sqrt();
    if norms[0].sqrt() > ZERO_MODE_TOLERANCE * peak {
        return Err(Error::ZeroMode {
            amplitude: norms[0].sqrt() / peak,
            limit: ZERO_MODE_TOLERANCE,
        });
    }
    for m in 1..n {
        let v = [spec.component(0)[m], spec.component(1)[m], spec.component(2)[m]];
        let ep = polarization_vector(grid.wavevector(m), Helicity::Plus)?.eps;
        // ε_- = ε_+*, so ε_-* = ε_+
        plus[m] = ep[0].conj() * v[0] + ep[1].conj() * v[1] + ep[2].conj() * v[2];
        minus[m] = ep[0] * v[0] + ep[1] * v[1] + ep[2] * v[2];
    }
    Ok(MomentumAmplitudes { grid, plus, minus })
}

/// `ṽ(k) = Σ_σ ε_σ(k) z(k,σ)`, returned in the position domain.
pub fn synthesize_from_amplitudes(amps: &MomentumAmplitudes, grid: &Grid) -> Result<SpectralField> {
    if amps.grid != *grid {
        return Err(Error::GridMismatch);
    }
    let zero = SpectralField::zeros(*grid, Domain::Frequency);
    if grid.dim() == 1 {
        let out = map_modes(&zero, |m, v| v[0] = amps.plus[m] + amps.minus[m]);
        return Ok(out.to_position());
    }
    let mut failed = None;
    let out = map_modes(&zero, |m, v| {
        if m == 0 {
            return;
        }
        match polarization_vector(grid.wavevector(m), Helicity::Plus) {
            Ok(p) => {
                for c in 0..3 {
                    v[c] = p.eps[c] * amps.plus[m] + p.eps[c].conj() * amps.minus[m];
                }
            }
            Err(e) => failed = Some(e),
        }
    });
    if let Some(e) = failed {
        return Err(e);
    }
    Ok(out.to_position().with_transverse(true))
}
