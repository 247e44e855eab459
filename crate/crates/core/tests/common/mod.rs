//! Random corpora and independent quadrature oracles shared by the
//! integration tests and the acceptance runner.

#![allow(dead_code)]

use std::f64::consts::PI;

use photonloc::{transverse_project, Complex64, Domain, Grid, SpectralField};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// 1D field with random smooth spectrum on `1 ≤ |m| ≤ m_max`; zero mode empty.
pub fn random_line_field(rng: &mut ChaCha8Rng, grid: Grid, m_max: isize) -> SpectralField {
    let mut modes = vec![Complex64::new(0.0, 0.0); grid.len()];
    let width = m_max as f64 / 2.5;
    for m in -m_max..=m_max {
        if m == 0 {
            continue;
        }
        let idx = grid.mode_flat_index([m, 0, 0]).unwrap();
        modes[idx] = unit_complex(rng) * (-(m as f64 / width).powi(2)).exp();
    }
    SpectralField::new(grid, vec![modes], Domain::Frequency).unwrap().to_position()
}

/// Transverse 3D field with random amplitudes on `0 < |k| < k_cut`.
pub fn random_transverse_field(rng: &mut ChaCha8Rng, grid: Grid, k_cut: f64) -> SpectralField {
    let mut comps = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; 3];
    for flat in 1..grid.len() {
        let k = grid.wavevector(flat);
        let mag = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        if mag < k_cut {
            for c in comps.iter_mut() {
                c[flat] = unit_complex(rng);
            }
        }
    }
    let raw = SpectralField::new(grid, comps, Domain::Frequency).unwrap();
    transverse_project(&raw).unwrap().to_position().mark_transverse().unwrap()
}

/// Real transverse 3D field: real part of a random transverse field.
pub fn random_real_transverse_field(rng: &mut ChaCha8Rng, grid: Grid, k_cut: f64) -> SpectralField {
    random_transverse_field(rng, grid, k_cut).real_part().mark_transverse().unwrap()
}

/// Smooth compact bump `exp(-1/(1-s²))`, `s = (x-c)/w`.
pub fn bump(x: f64, centre: f64, width: f64) -> f64 {
    let s = (x - centre) / width;
    if s.abs() < 1.0 {
        (-1.0 / (1.0 - s * s)).exp()
    } else {
        0.0
    }
}

/// Sum of one to three random bumps inside `[-L/2, L/2]`.
pub fn random_compact_field(rng: &mut ChaCha8Rng, grid: Grid, pulse_length: f64) -> SpectralField {
    let count = rng.gen_range(1..=3);
    let parts: Vec<(f64, f64, f64)> = (0..count)
        .map(|_| {
            let width = rng.gen_range(0.1..0.2) * pulse_length;
            let centre = rng.gen_range(-0.5 * pulse_length + width..0.5 * pulse_length - width);
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            (centre, width, sign * rng.gen_range(0.5..1.5))
        })
        .collect();
    SpectralField::scalar_from_fn(grid, |x| {
        Complex64::new(parts.iter().map(|&(c, w, a)| a * bump(x, c, w)).sum(), 0.0)
    })
    .unwrap()
}

const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Composite 8-point Gauss–Legendre rule on `[a, b]` with `panels` panels.
pub fn gauss_legendre<T>(a: f64, b: f64, panels: usize, f: impl Fn(f64) -> T) -> T
where
    T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
{
    let h = (b - a) / panels as f64;
    let mut acc = T::default();
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            acc = acc + f(mid + 0.5 * h * x) * (0.5 * h * w);
        }
    }
    acc
}

/// Continuum transform `(2π)^{-1/2} ∫ cos²(πx/L) e^{-ikx} dx` over `[-L/2, L/2]`.
pub fn cos2_transform(k: f64, pulse_length: f64) -> f64 {
    let l = pulse_length;
    let q = k * l;
    let value = if q.abs() < 1e-6 {
        0.5 * l
    } else if (q.abs() - 2.0 * PI).abs() < 1e-6 {
        0.25 * l
    } else {
        l * (0.5 * q).sin() * (-4.0 * PI * PI) / (q * (q * q - 4.0 * PI * PI))
    };
    value / (2.0 * PI).sqrt()
}

/// Energy density of the normalized state `ψ ∝ (1 - i) cos²(πx/L)` on
/// `[-L/2, L/2]` at `x`, by direct quadrature of
/// `Σ± |(2π)^{-1/2} ∫_{±k>0} √(ħc|k|) ψ̃(k) e^{ikx} dk|²` (ħ = c = 1).
///
/// The `√k` endpoint is handled with `k = u²` on the first unit of `k`.
pub fn sin2_energy_oracle(x: f64, pulse_length: f64, k_max: f64) -> f64 {
    let norm = (3.0 / 8.0 * pulse_length).sqrt();
    let amp = |k: f64| cos2_transform(k, pulse_length) / norm;
    let integrand = |k: f64| Complex64::from_polar(k.sqrt() * amp(k), k * x);
    let head: Complex64 = gauss_legendre(0.0, 1.0, 64, |u| integrand(u * u) * (2.0 * u));
    let panels = (k_max * 8.0) as usize;
    let tail: Complex64 = gauss_legendre(1.0, k_max, panels, integrand);
    let g = (head + tail) / (2.0 * PI).sqrt();
    // ψ̃ is real and even, so the k < 0 branch is the conjugate of the k > 0 one
    2.0 * g.norm_sqr()
}

/// `ħ⟨ω⟩` of the packet `exp(-x²/4w²) e^{ik₀x}` by momentum-space quadrature
/// of `∫ ħc|k| |ψ̃(k)|² dk / ∫ |ψ̃(k)|² dk` with `|ψ̃|² ∝ exp(-2w²(k-k₀)²)`.
pub fn narrowband_energy_oracle(k0: f64, w: f64, hbar: f64, c: f64) -> f64 {
    let density = |k: f64| (-2.0 * w * w * (k - k0) * (k - k0)).exp();
    let span = 12.0 / w;
    let (a, b) = (k0 - span, k0 + span);
    let num = gauss_legendre(a, b, 4000, |k| hbar * c * k.abs() * density(k));
    let den = gauss_legendre(a, b, 4000, density);
    num / den
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// `max|a - b| / max|b|` on position samples.
pub fn rel(a: &SpectralField, b: &SpectralField) -> f64 {
    a.relative_error(b).unwrap()
}
