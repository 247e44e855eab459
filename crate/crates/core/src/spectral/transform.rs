use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{Domain, Grid, SpectralField};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// Position → frequency under `ṽ(k_m) = Δ^d (2π)^{-d/2} Σ_j v(x_j) e^{-ik_m·x_j}`.
///
/// A field already in the frequency domain is returned unchanged.
pub fn forward_transform(field: &SpectralField) -> SpectralField {
    if field.domain() == Domain::Frequency {
        return field.clone();
    }
    let grid = *field.grid();
    let scale = (grid.spacing() / (2.0 * PI).sqrt()).powi(grid.dim() as i32);
    let components = field
        .components()
        .iter()
        .map(|c| {
            let mut data = c.clone();
            fft_nd(&mut data, &grid, false);
            apply_phase(&mut data, &grid, scale);
            data
        })
        .collect();
    SpectralField::from_parts(grid, components, Domain::Frequency, field.is_transverse())
}

/// Exact inverse of [`forward_transform`]. A position-domain field is returned unchanged.
pub fn inverse_transform(field: &SpectralField) -> SpectralField {
    if field.domain() == Domain::Position {
        return field.clone();
    }
    let grid = *field.grid();
    let scale = (grid.mode_spacing() / (2.0 * PI).sqrt()).powi(grid.dim() as i32);
    let components = field
        .components()
        .iter()
        .map(|c| {
            let mut data = c.clone();
            apply_phase(&mut data, &grid, 1.0);
            fft_nd(&mut data, &grid, true);
            for z in data.iter_mut() {
                *z *= scale;
            }
            data
        })
        .collect();
    SpectralField::from_parts(grid, components, Domain::Position, field.is_transverse())
}

// e^{-ik_m·x_0} with x_0 = -L/2 per axis is (-1)^m, and (-1)^m = (-1)^i for
// the natural-order index i because N is even.
fn apply_phase(data: &mut [Complex64], grid: &Grid, scale: f64) {
    for (flat, z) in data.iter_mut().enumerate() {
        let idx = grid.axis_indices(flat);
        let parity = match grid.dim() {
            1 => idx[0],
            _ => idx[0] + idx[1] + idx[2],
        };
        let s = if parity % 2 == 0 { scale } else { -scale };
        *z *= s;
    }
}

fn fft_nd(data: &mut [Complex64], grid: &Grid, inverse: bool) {
    let n = grid.points();
    let fft = plan(n, inverse);
    // contiguous last axis: batch transform
    fft.process(data);
    if grid.dim() == 1 {
        return;
    }
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    // middle axis, stride n
    for ix in 0..n {
        for iz in 0..n {
            let base = ix * n * n + iz;
            for (j, l) in line.iter_mut().enumerate() {
                *l = data[base + j * n];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for (j, l) in line.iter().enumerate() {
                data[base + j * n] = *l;
            }
        }
    }
    // first axis, stride n²
    let stride = n * n;
    for base in 0..stride {
        for (j, l) in line.iter_mut().enumerate() {
            *l = data[base + j * stride];
        }
        fft.process_with_scratch(&mut line, &mut scratch);
        for (j, l) in line.iter().enumerate() {
            data[base + j * stride] = *l;
        }
    }
}
