//! Localization diagnostics: support estimates, tail fits, antilocality
//! witnesses, helicity vanishing scans and the vector-potential-local state.
//!
//! Every "zero" here is relative to a floor: [`HARD_ZERO`] for exact
//! cancellation and [`PHYSICAL_ZERO`] for "vanishes at grid resolution".

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::{DetectorVolume, EnergyDensityMap};
use crate::representations::LpState;
use crate::spectral::{apply_frequency_power, helicity_apply, Domain, Grid, SpectralField, UnitsConfig};

pub const HARD_ZERO: f64 = 1e-14;
pub const PHYSICAL_ZERO: f64 = 1e-8;

/// Fraction of the half-domain, measured from the antipode, kept out of
/// scans and fits because periodic images contaminate it.
pub const WRAP_MARGIN: f64 = 0.1;

/// Minimum number of samples a tail window must contain.
pub const MIN_TAIL_SAMPLES: usize = 8;

/// Tolerance on `max|Λv ∓ v| / max|v|` (zero mode excluded) for a helicity eigenfield.
pub const EIGENFIELD_TOLERANCE: f64 = 1e-8;

const GAMMA_GRID: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportEstimate {
    pub region: DetectorVolume,
    pub threshold: f64,
    pub peak: f64,
    /// Largest modulus outside `region`.
    pub outside_max: f64,
}

impl SupportEstimate {
    /// Half-width of the region along the first axis.
    pub fn half_width(&self) -> f64 {
        match &self.region {
            DetectorVolume::Interval { hi, .. } => *hi,
            DetectorVolume::Box { hi, .. } => hi[0],
            DetectorVolume::Ball { radius, .. } => *radius,
        }
    }
}

/// Smallest origin-centred interval (1D) or box (3D) outside which
/// `|v| ≤ threshold · max|v|`.
pub fn support_estimate(field: &SpectralField, threshold: f64) -> Result<SupportEstimate> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidArgument(format!("threshold must lie in (0, 1), got {threshold}")));
    }
    let grid = *field.grid();
    let abs = field.to_position().pointwise_abs();
    let peak = abs.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::ZeroState);
    }
    let cut = threshold * peak;
    let axes = grid.dim();
    let mut half = [0.0f64; 3];
    for (flat, &a) in abs.iter().enumerate() {
        if a > cut {
            let p = grid.position(flat);
            for ax in 0..axes {
                half[ax] = half[ax].max(p[ax].abs());
            }
        }
    }
    let outside_max = abs
        .iter()
        .enumerate()
        .filter(|(flat, _)| {
            let p = grid.position(*flat);
            (0..axes).any(|ax| p[ax].abs() > half[ax])
        })
        .map(|(_, &a)| a)
        .fold(0.0, f64::max);
    let region = if axes == 1 {
        DetectorVolume::Interval { lo: -half[0], hi: half[0] }
    } else {
        DetectorVolume::Box {
            lo: [-half[0], -half[1], -half[2]],
            hi: half,
        }
    };
    Ok(SupportEstimate {
        region,
        threshold,
        peak,
        outside_max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailWindow {
    pub r_min: f64,
    pub r_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum TailModel {
    /// `C r^p`
    PowerLaw { exponent: f64, prefactor: f64 },
    /// `B exp(-A r^γ)`
    StretchedExponential { a: f64, gamma: f64, prefactor: f64 },
}

impl TailModel {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            TailModel::PowerLaw { exponent, prefactor } => prefactor * r.powf(exponent),
            TailModel::StretchedExponential { a, gamma, prefactor } => prefactor * (-a * r.powf(gamma)).exp(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelFit {
    pub model: TailModel,
    /// Coefficient of determination of the fit in log space, clamped to `[0, 1]`.
    pub goodness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub window: TailWindow,
    pub power_law: ModelFit,
    pub stretched: ModelFit,
    pub best: ModelFit,
    /// `(r, value)` pairs used in the fit, sorted by `r`.
    pub samples: Vec<(f64, f64)>,
}

impl TailFit {
    /// Power-law exponent of the dedicated power-law fit.
    pub fn exponent(&self) -> f64 {
        match self.power_law.model {
            TailModel::PowerLaw { exponent, .. } => exponent,
            _ => unreachable!(),
        }
    }

    /// `(r, value, best-model value)` rows.
    pub fn rows(&self) -> Vec<[f64; 3]> {
        self.samples
            .iter()
            .map(|&(r, v)| [r, v, self.best.model.eval(r)])
            .collect()
    }
}

// Least squares y = a + b t; returns (a, b, r²).
fn linear_fit(t: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = t.len() as f64;
    let mt = t.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
    for (ti, yi) in t.iter().zip(y) {
        stt += (ti - mt) * (ti - mt);
        sty += (ti - mt) * (yi - my);
        syy += (yi - my) * (yi - my);
    }
    let b = if stt > 0.0 { sty / stt } else { 0.0 };
    let a = my - b * mt;
    let ss_res: f64 = t
        .iter()
        .zip(y)
        .map(|(ti, yi)| {
            let e = yi - a - b * ti;
            e * e
        })
        .sum();
    let r2 = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else if ss_res == 0.0 {
        1.0
    } else {
        0.0
    };
    (a, b, r2)
}

fn stretched_at(gamma: f64, r: &[f64], logv: &[f64]) -> ModelFit {
    let t: Vec<f64> = r.iter().map(|x| x.powf(gamma)).collect();
    let (a, b, r2) = linear_fit(&t, logv);
    ModelFit {
        model: TailModel::StretchedExponential {
            a: -b,
            gamma,
            prefactor: a.exp(),
        },
        goodness: r2,
    }
}

/// Fits `C r^p` and `B exp(-A r^γ)` to radial samples.
///
/// The stretched exponential is scanned over γ ∈ {0.1, …, 1.0} and refined by
/// golden-section search around the best grid point.
pub fn fit_tail_samples(window: TailWindow, mut samples: Vec<(f64, f64)>) -> Result<TailFit> {
    samples.retain(|&(r, v)| r >= window.r_min && r <= window.r_max && v > 0.0 && v.is_finite());
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    if samples.len() < MIN_TAIL_SAMPLES {
        return Err(Error::InsufficientWindow(format!(
            "{} positive samples in [{}, {}], need {MIN_TAIL_SAMPLES}",
            samples.len(),
            window.r_min,
            window.r_max
        )));
    }
    let r: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let logv: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let logr: Vec<f64> = r.iter().map(|x| x.ln()).collect();

    let (a, b, r2) = linear_fit(&logr, &logv);
    let power_law = ModelFit {
        model: TailModel::PowerLaw {
            exponent: b,
            prefactor: a.exp(),
        },
        goodness: r2,
    };

    let coarse = GAMMA_GRID
        .iter()
        .map(|&g| stretched_at(g, &r, &logv))
        .max_by(|x, y| x.goodness.total_cmp(&y.goodness))
        .unwrap();
    let g0 = match coarse.model {
        TailModel::StretchedExponential { gamma, .. } => gamma,
        _ => unreachable!(),
    };
    let stretched = golden_refine(g0, &r, &logv, coarse);

    let best = if stretched.goodness > power_law.goodness {
        stretched
    } else {
        power_law
    };
    Ok(TailFit {
        window,
        power_law,
        stretched,
        best,
        samples,
    })
}

fn golden_refine(g0: f64, r: &[f64], logv: &[f64], start: ModelFit) -> ModelFit {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = ((g0 - 0.1).max(0.01), (g0 + 0.1).min(1.0));
    let score = |g: f64| stretched_at(g, r, logv);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = score(c);
    let mut fd = score(d);
    for _ in 0..60 {
        if fc.goodness > fd.goodness {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = score(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = score(d);
        }
    }
    [start, fc, fd]
        .into_iter()
        .max_by(|x, y| x.goodness.total_cmp(&y.goodness))
        .unwrap()
}

/// Fits the radial tail of an energy-density map inside `window`.
///
/// The window must stay clear of the wrap-around zone: `r_max ≤ 0.9 · L/2`.
pub fn tail_exponent_fit(map: &EnergyDensityMap, window: TailWindow) -> Result<TailFit> {
    let grid = map.grid;
    let limit = (1.0 - WRAP_MARGIN) * 0.5 * grid.length();
    if !(window.r_min > 0.0 && window.r_min < window.r_max) {
        return Err(Error::InsufficientWindow(format!(
            "window [{}, {}] is empty or touches the origin",
            window.r_min, window.r_max
        )));
    }
    if window.r_max > limit * (1.0 + 1e-12) {
        return Err(Error::InsufficientWindow(format!(
            "r_max = {} enters the wrap-around zone beyond {limit}",
            window.r_max
        )));
    }
    let samples = (0..grid.len())
        .map(|flat| {
            let p = grid.position(flat);
            ((p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt(), map.values[flat])
        })
        .collect();
    fit_tail_samples(window, samples)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntilocalityWitness {
    pub region: DetectorVolume,
    /// `max|v|` over the region.
    pub max_v: f64,
    /// `max|Ωv|` over the region.
    pub max_omega_v: f64,
    pub peak_v: f64,
    pub peak_omega_v: f64,
    /// Relative floor applied to each of the pair against its own peak.
    pub joint_floor: f64,
    /// At least one of the pair exceeds the floor in the region.
    pub holds: bool,
}

/// Evaluates `(v, Ωv)` on `region` (samples whose midpoint lies inside).
pub fn antilocality_witness(
    field: &SpectralField,
    region: &DetectorVolume,
    units: &UnitsConfig,
    floor_rel: f64,
) -> Result<AntilocalityWitness> {
    let grid = *field.grid();
    let weights = region.weights(&grid)?;
    let v = field.to_position().pointwise_abs();
    let peak_v = v.iter().copied().fold(0.0, f64::max);
    if peak_v == 0.0 {
        return Err(Error::ZeroState);
    }
    let omega_v = apply_frequency_power(field, 1.0, units)?.to_position().pointwise_abs();
    let peak_omega_v = omega_v.iter().copied().fold(0.0, f64::max);
    let mut max_v = 0.0f64;
    let mut max_omega_v = 0.0f64;
    for i in 0..grid.len() {
        if weights[i] >= 0.5 {
            max_v = max_v.max(v[i]);
            max_omega_v = max_omega_v.max(omega_v[i]);
        }
    }
    let holds = max_v > floor_rel * peak_v || max_omega_v > floor_rel * peak_omega_v;
    Ok(AntilocalityWitness {
        region: region.clone(),
        max_v,
        max_omega_v,
        peak_v,
        peak_omega_v,
        joint_floor: floor_rel,
        holds,
    })
}

/// Result of sliding a window over a field and recording the smallest
/// window maximum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub window_size: f64,
    pub windows: usize,
    /// Smallest window maximum, relative to the peak.
    pub min_window_max: f64,
    pub peak: f64,
    pub floor: f64,
    pub identically_zero: bool,
    /// Window attaining `min_window_max`, if any window was scanned.
    pub weakest_window: Option<DetectorVolume>,
    /// No window falls below the floor (or the field is identically zero).
    pub holds: bool,
}

// Periodic running maximum of width `w` along every axis; entry `i` covers
// samples `i..i+w` on each axis.
fn running_max(grid: &Grid, values: &[f64], w: usize) -> Vec<f64> {
    let n = grid.points();
    let mut cur = values.to_vec();
    for axis in 0..grid.dim() {
        let stride = match (grid.dim(), axis) {
            (1, _) => 1,
            (_, 0) => n * n,
            (_, 1) => n,
            _ => 1,
        };
        let mut next = vec![0.0; cur.len()];
        for flat in 0..cur.len() {
            let i = grid.axis_indices(flat)[axis];
            let base = flat - i * stride;
            let mut m = 0.0f64;
            for s in 0..w {
                m = m.max(cur[base + ((i + s) % n) * stride]);
            }
            next[flat] = m;
        }
        cur = next;
    }
    cur
}

fn scan_windows(grid: &Grid, values: &[f64], w: usize, peak: f64, extent: f64) -> (usize, f64, Option<DetectorVolume>) {
    let maxes = running_max(grid, values, w);
    let dx = grid.spacing();
    let limit = (1.0 - WRAP_MARGIN) * 0.5 * extent.min(grid.length());
    let half = 0.5 * w as f64 * dx;
    let mut count = 0;
    let mut best = f64::INFINITY;
    let mut where_ = None;
    for (flat, &m) in maxes.iter().enumerate() {
        let p = grid.position(flat);
        let centre: Vec<f64> = (0..grid.dim()).map(|a| p[a] - 0.5 * dx + half).collect();
        if centre.iter().any(|c| c.abs() + half > limit) {
            continue;
        }
        count += 1;
        if m < best {
            best = m;
            where_ = Some(centre);
        }
    }
    let region = where_.map(|c| {
        if grid.dim() == 1 {
            DetectorVolume::centered_interval(c[0], half)
        } else {
            DetectorVolume::Box {
                lo: [c[0] - half, c[1] - half, c[2] - half],
                hi: [c[0] + half, c[1] + half, c[2] + half],
            }
        }
    });
    let rel = if peak > 0.0 && count > 0 { best / peak } else { 0.0 };
    (count, rel, region)
}

fn window_samples(grid: &Grid, window_size: f64) -> Result<usize> {
    let w = (window_size / grid.spacing()).round() as usize;
    if w < 4 {
        return Err(Error::InvalidArgument(format!(
            "window of {window_size} spans fewer than 4 samples of spacing {}",
            grid.spacing()
        )));
    }
    Ok(w.min(grid.points()))
}

/// Checks that a helicity eigenfield vanishes on no window of width
/// `window_size`, at the [`PHYSICAL_ZERO`] floor.
///
/// `scale` is the grid-wide magnitude used to call the field identically
/// zero (`peak ≤ 1e-14 · scale`); it defaults to the field's own peak.
pub fn helicity_vanishing_scan(field: &SpectralField, window_size: f64, scale: Option<f64>) -> Result<LocalityReport> {
    helicity_vanishing_scan_within(field, window_size, scale, field.grid().length())
}

/// [`helicity_vanishing_scan`] restricted to the centred box of side
/// `extent`, e.g. the physical domain of a field computed on a padded grid.
/// The wrap margin is applied relative to `extent`.
pub fn helicity_vanishing_scan_within(
    field: &SpectralField,
    window_size: f64,
    scale: Option<f64>,
    extent: f64,
) -> Result<LocalityReport> {
    let grid = *field.grid();
    let w = window_samples(&grid, window_size)?;
    let abs = field.to_position().pointwise_abs();
    let peak = abs.iter().copied().fold(0.0, f64::max);
    let reference = scale.unwrap_or(peak);
    if peak == 0.0 || peak <= HARD_ZERO * reference {
        return Ok(LocalityReport {
            window_size,
            windows: 0,
            min_window_max: 0.0,
            peak,
            floor: PHYSICAL_ZERO,
            identically_zero: true,
            weakest_window: None,
            holds: true,
        });
    }
    // Λ² = 1 fails on the zero mode, so it is left out of the check
    let mut modes = field.to_frequency().into_components();
    for c in modes.iter_mut() {
        c[0] = Complex64::new(0.0, 0.0);
    }
    let nonzero = SpectralField::new(grid, modes, Domain::Frequency)?.with_transverse(field.is_transverse());
    let lambda_v = helicity_apply(&nonzero)?;
    let residual = [1.0, -1.0]
        .into_iter()
        .map(|h| Ok(lambda_v.max_abs_diff(&nonzero.scaled(Complex64::new(h, 0.0)))? / peak))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if residual > EIGENFIELD_TOLERANCE {
        return Err(Error::NotEigenfield { residual });
    }
    let (windows, rel, region) = scan_windows(&grid, &abs, w, peak, extent);
    Ok(LocalityReport {
        window_size,
        windows,
        min_window_max: rel,
        peak,
        floor: PHYSICAL_ZERO,
        identically_zero: false,
        weakest_window: region,
        holds: windows > 0 && rel > PHYSICAL_ZERO,
    })
}

/// Slides a window over `(v, Ωv)` and records, per window, the larger of the
/// two window maxima relative to their own peaks.
pub fn antilocality_scan(
    field: &SpectralField,
    window_size: f64,
    units: &UnitsConfig,
    floor_rel: f64,
) -> Result<LocalityReport> {
    let grid = *field.grid();
    let w = window_samples(&grid, window_size)?;
    let v = field.to_position().pointwise_abs();
    let peak_v = v.iter().copied().fold(0.0, f64::max);
    if peak_v == 0.0 {
        return Err(Error::ZeroState);
    }
    let ov = apply_frequency_power(field, 1.0, units)?.to_position().pointwise_abs();
    let peak_ov = ov.iter().copied().fold(0.0, f64::max);
    let joint: Vec<f64> = v
        .iter()
        .zip(&ov)
        .map(|(a, b)| (a / peak_v).max(if peak_ov > 0.0 { b / peak_ov } else { 0.0 }))
        .collect();
    let (windows, rel, region) = scan_windows(&grid, &joint, w, 1.0, grid.length());
    Ok(LocalityReport {
        window_size,
        windows,
        min_window_max: rel,
        peak: 1.0,
        floor: floor_rel,
        identically_zero: false,
        weakest_window: region,
        holds: windows > 0 && rel > floor_rel,
    })
}

/// LP state `ψ = Ω^{1/2}ξ` whose vector-potential image is compact, with the
/// recovery data attached.
#[derive(Debug, Clone)]
pub struct VectorPotentialState {
    pub state: LpState,
    /// `Ω^{-1/2}ψ` on the grid.
    pub recovered: SpectralField,
    /// `max|Ω^{-1/2}ψ - ξ|` inside and outside the region, relative to `max|ξ|`.
    pub deviation_inside: f64,
    pub deviation_outside: f64,
    /// `max|Ω^{-1/2}ψ|` outside the region relative to `max|ξ|`.
    pub recovered_outside: f64,
}

/// Support threshold applied to `ξ` before construction.
pub const SUPPORT_THRESHOLD: f64 = 1e-10;

pub fn vector_potential_localized_state(
    xi: &SpectralField,
    region: &DetectorVolume,
    units: &UnitsConfig,
) -> Result<VectorPotentialState> {
    let grid = *xi.grid();
    let weights = region.weights(&grid)?;
    let xi_pos = xi.to_position();
    let abs = xi_pos.pointwise_abs();
    let peak = abs.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::ZeroState);
    }
    let leak = abs
        .iter()
        .zip(&weights)
        .filter(|(_, &w)| w < 0.5)
        .map(|(&a, _)| a)
        .fold(0.0, f64::max)
        / peak;
    if leak > SUPPORT_THRESHOLD {
        return Err(Error::Support { leak });
    }
    // rejects a non-zero-mean profile before Ω^{1/2} silently drops its mean
    apply_frequency_power(&xi_pos, -0.5, units)?;
    let psi = apply_frequency_power(&xi_pos, 0.5, units)?;
    let state = LpState::new(psi, *units)?;
    let recovered = apply_frequency_power(state.psi(), -0.5, units)?.to_position();
    let diff = recovered.sub(&xi_pos)?.pointwise_abs();
    let rec_abs = recovered.pointwise_abs();
    let (mut inside, mut outside, mut rec_out) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..grid.len() {
        if weights[i] >= 0.5 {
            inside = inside.max(diff[i]);
        } else {
            outside = outside.max(diff[i]);
            rec_out = rec_out.max(rec_abs[i]);
        }
    }
    Ok(VectorPotentialState {
        state,
        recovered,
        deviation_inside: inside / peak,
        deviation_outside: outside / peak,
        recovered_outside: rec_out / peak,
    })
}
