use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::UnitsConfig;
use crate::error::{Error, Result};

/// Periodic sampling lattice in one or three dimensions.
///
/// Samples sit at `x_j = -L/2 + jΔ` with `Δ = L/N`; the dual wavenumbers are
/// `k_m = 2πm/L` for `m ∈ {-N/2, …, N/2-1}`. Both position and frequency
/// arrays use the FFT's natural ordering, flattened as `(ix·N + iy)·N + iz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridSpec", into = "GridSpec")]
pub struct Grid {
    dim: usize,
    length: f64,
    points: usize,
}

#[derive(Serialize, Deserialize)]
struct GridSpec {
    dim: usize,
    length: f64,
    points: usize,
}

impl TryFrom<GridSpec> for Grid {
    type Error = Error;

    fn try_from(spec: GridSpec) -> Result<Self> {
        Grid::new(spec.dim, spec.length, spec.points)
    }
}

impl From<Grid> for GridSpec {
    fn from(g: Grid) -> Self {
        GridSpec {
            dim: g.dim,
            length: g.length,
            points: g.points,
        }
    }
}

impl Grid {
    pub fn new(dim: usize, length: f64, points: usize) -> Result<Self> {
        if dim != 1 && dim != 3 {
            return Err(Error::InvalidGrid(format!("dimension must be 1 or 3, got {dim}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("length must be positive, got {length}")));
        }
        if points < 2 || !points.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be a positive even integer, got {points}"
            )));
        }
        Ok(Self { dim, length, points })
    }

    pub fn line(length: f64, points: usize) -> Result<Self> {
        Self::new(1, length, points)
    }

    pub fn cube(length: f64, points: usize) -> Result<Self> {
        Self::new(3, length, points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Extent of the periodic box along each axis.
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Total number of samples, `N^dim`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.points as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn mode_spacing(&self) -> f64 {
        2.0 * PI / self.length
    }

    pub fn mode_volume(&self) -> f64 {
        self.mode_spacing().powi(self.dim as i32)
    }

    /// Number of field components carried on this grid.
    pub fn components(&self) -> usize {
        self.dim
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.spacing()
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.coordinate(i)).collect()
    }

    pub fn signed_mode(&self, i: usize) -> isize {
        if i < self.points / 2 {
            i as isize
        } else {
            i as isize - self.points as isize
        }
    }

    pub fn wavenumber(&self, i: usize) -> f64 {
        self.signed_mode(i) as f64 * self.mode_spacing()
    }

    pub fn axis_indices(&self, flat: usize) -> [usize; 3] {
        match self.dim {
            1 => [flat, 0, 0],
            _ => {
                let n = self.points;
                [flat / (n * n), (flat / n) % n, flat % n]
            }
        }
    }

    pub fn flat_index(&self, idx: [usize; 3]) -> usize {
        match self.dim {
            1 => idx[0],
            _ => (idx[0] * self.points + idx[1]) * self.points + idx[2],
        }
    }

    /// Sample position; unused axes are zero in 1D.
    pub fn position(&self, flat: usize) -> [f64; 3] {
        let idx = self.axis_indices(flat);
        match self.dim {
            1 => [self.coordinate(idx[0]), 0.0, 0.0],
            _ => [
                self.coordinate(idx[0]),
                self.coordinate(idx[1]),
                self.coordinate(idx[2]),
            ],
        }
    }

    pub fn wavevector(&self, flat: usize) -> [f64; 3] {
        let idx = self.axis_indices(flat);
        match self.dim {
            1 => [self.wavenumber(idx[0]), 0.0, 0.0],
            _ => [
                self.wavenumber(idx[0]),
                self.wavenumber(idx[1]),
                self.wavenumber(idx[2]),
            ],
        }
    }

    /// Flat storage index of the mode with signed indices `m`, if it exists.
    pub fn mode_flat_index(&self, m: [isize; 3]) -> Option<usize> {
        let half = (self.points / 2) as isize;
        let axes = if self.dim == 1 { 1 } else { 3 };
        let mut idx = [0usize; 3];
        for a in 0..axes {
            if m[a] < -half || m[a] >= half {
                return None;
            }
            idx[a] = m[a].rem_euclid(self.points as isize) as usize;
        }
        if self.dim == 1 && (m[1] != 0 || m[2] != 0) {
            return None;
        }
        Some(self.flat_index(idx))
    }

    /// Grid with the same spacing on a box `factor` times larger, centred on
    /// the same origin.
    pub fn extended(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return Err(Error::InvalidGrid("extension factor must be at least 1".into()));
        }
        Self::new(self.dim, self.length * factor as f64, self.points * factor)
    }

    pub fn wave_vectors(&self, units: &UnitsConfig) -> WaveVectorTable {
        WaveVectorTable::new(self, units)
    }
}

/// Per-mode wavevector, magnitude and frequency `ω_k = c|k|`.
#[derive(Debug, Clone)]
pub struct WaveVectorTable {
    pub k: Vec<[f64; 3]>,
    pub magnitude: Vec<f64>,
    pub omega: Vec<f64>,
}

impl WaveVectorTable {
    pub fn new(grid: &Grid, units: &UnitsConfig) -> Self {
        let k: Vec<[f64; 3]> = (0..grid.len()).map(|m| grid.wavevector(m)).collect();
        let magnitude: Vec<f64> = k.iter().map(norm3).collect();
        let omega = magnitude.iter().map(|m| units.c * m).collect();
        Self { k, magnitude, omega }
    }
}

pub(crate) fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}
