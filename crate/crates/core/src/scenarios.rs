//! Example one-photon states built from a compact `sin²` pulse, and the
//! six-panel dataset contrasting their LP, BB and energy profiles.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::energy_density;
use crate::representations::{bb_from_lp, lp_from_potentials, normalize, BbState, EmFields, LpState, PhotonState};
use crate::spectral::{apply_frequency_power, Grid, SpectralField, UnitsConfig};

fn check_profile(grid: &Grid, pulse_length: f64) -> Result<()> {
    if grid.dim() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            found: grid.dim(),
        });
    }
    if !(pulse_length > 0.0 && pulse_length.is_finite()) {
        return Err(Error::InvalidArgument(format!("pulse length must be positive, got {pulse_length}")));
    }
    if pulse_length >= grid.length() {
        return Err(Error::ProfileTooWide {
            pulse: pulse_length,
            domain: grid.length(),
        });
    }
    Ok(())
}

fn unit_profile(grid: Grid, pulse_length: f64, shape: impl Fn(f64) -> f64) -> Result<SpectralField> {
    check_profile(&grid, pulse_length)?;
    let half = 0.5 * pulse_length;
    let values: Vec<f64> = grid
        .coordinates()
        .into_iter()
        .map(|x| if x.abs() <= half { shape(x) } else { 0.0 })
        .collect();
    let norm = (grid.spacing() * values.iter().map(|v| v * v).sum::<f64>()).sqrt();
    let values: Vec<f64> = values.iter().map(|v| v / norm).collect();
    SpectralField::from_real(grid, &values)
}

/// `sin²(πx/L + π/2)` on `[-L/2, L/2]`, zero outside, unit L² norm.
pub fn sin2_profile(grid: Grid, pulse_length: f64) -> Result<SpectralField> {
    let k = std::f64::consts::PI / pulse_length;
    unit_profile(grid, pulse_length, |x| (k * x + std::f64::consts::FRAC_PI_2).sin().powi(2))
}

/// Zero-mean companion of [`sin2_profile`]: `s - (4/3)s²` with
/// `s = sin²(πx/L + π/2)`, same support, unit L² norm.
///
/// Negative powers of `Ω` stay finite on it in one dimension.
pub fn sin2_balanced_profile(grid: Grid, pulse_length: f64) -> Result<SpectralField> {
    let k = std::f64::consts::PI / pulse_length;
    unit_profile(grid, pulse_length, |x| {
        let s = (k * x + std::f64::consts::FRAC_PI_2).sin().powi(2);
        s - 4.0 / 3.0 * s * s
    })
}

/// LP state `ψ ∝ A_comp - iE_comp` from a compact profile used for both
/// fields. The extended fields `E = Ω^{1/2}E_comp`, `A = Ω^{-1/2}A_comp` are
/// never formed: the powers of `Ω` cancel exactly inside `ψ`.
pub fn lp_compact_from_profile(profile: &SpectralField, units: &UnitsConfig) -> Result<LpState> {
    let pref = (units.eps0 / (2.0 * units.hbar)).sqrt();
    let psi = profile.sub(&profile.scaled(Complex64::new(0.0, 1.0)))?;
    normalize(&LpState::new(psi.scaled(Complex64::new(pref, 0.0)), *units)?)
}

/// LP state from `E = A = profile` through the full potential map.
pub fn lp_extended_from_profile(profile: &SpectralField, units: &UnitsConfig) -> Result<LpState> {
    let em = EmFields::new(profile.clone(), profile.clone())?;
    normalize(&lp_from_potentials(&em, units)?)
}

/// BB state from `E = profile`, `A = Ω^{-1} profile`; its `F` is
/// proportional to the profile. The profile must have zero mean.
pub fn bb_compact_from_profile(profile: &SpectralField, units: &UnitsConfig) -> Result<BbState> {
    let a = apply_frequency_power(profile, -1.0, units)?.to_position().real_part();
    let em = EmFields::new(profile.clone(), a)?;
    normalize(&bb_from_lp(&lp_from_potentials(&em, units)?)?)
}

/// LP-compact state on the `sin²` profile.
pub fn make_lp_compact(grid: Grid, pulse_length: f64, units: &UnitsConfig) -> Result<LpState> {
    lp_compact_from_profile(&sin2_profile(grid, pulse_length)?, units)
}

/// LP state with extended support, from zero-mean compact `E` and `A`.
pub fn make_lp_extended(grid: Grid, pulse_length: f64, units: &UnitsConfig) -> Result<LpState> {
    lp_extended_from_profile(&sin2_balanced_profile(grid, pulse_length)?, units)
}

/// BB-compact state on the zero-mean profile.
pub fn make_bb_compact(grid: Grid, pulse_length: f64, units: &UnitsConfig) -> Result<BbState> {
    bb_compact_from_profile(&sin2_balanced_profile(grid, pulse_length)?, units)
}

/// Normalized LP packet `exp(-x²/4w²) e^{ik₀x}` with `k₀ = ω₀/c` and
/// momentum spread `1/(2w) = rel_bandwidth · k₀`.
pub fn narrowband_packet(grid: Grid, omega0: f64, rel_bandwidth: f64, units: &UnitsConfig) -> Result<LpState> {
    if grid.dim() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            found: grid.dim(),
        });
    }
    if !(omega0 > 0.0 && rel_bandwidth > 0.0) {
        return Err(Error::InvalidArgument("centre frequency and bandwidth must be positive".into()));
    }
    let k0 = omega0 / units.c;
    let w = 1.0 / (2.0 * rel_bandwidth * k0);
    let kmax = std::f64::consts::PI / grid.spacing();
    if k0 + 8.0 * rel_bandwidth * k0 > kmax {
        return Err(Error::InvalidGrid(format!("grid resolves |k| < {kmax}, packet needs {k0}")));
    }
    if 8.0 * w > 0.5 * grid.length() {
        return Err(Error::ProfileTooWide {
            pulse: 16.0 * w,
            domain: grid.length(),
        });
    }
    let psi = SpectralField::scalar_from_fn(grid, |x| Complex64::from_polar((-x * x / (4.0 * w * w)).exp(), k0 * x))?;
    normalize(&LpState::new(psi, *units)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PanelState {
    LpCompact,
    LpExtended,
    BbCompact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curve {
    Lp,
    Bb,
    Energy,
}

/// One panel: moduli `|ψ|`, `|F|` and the energy density on a shared grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig2Panel {
    pub label: char,
    pub state: PanelState,
    pub scale: Scale,
    pub x: Vec<f64>,
    pub lp: Vec<f64>,
    pub bb: Vec<f64>,
    pub energy: Vec<f64>,
}

impl Fig2Panel {
    pub fn curve(&self, c: Curve) -> &[f64] {
        match c {
            Curve::Lp => &self.lp,
            Curve::Bb => &self.bb,
            Curve::Energy => &self.energy,
        }
    }

    /// Curve value at the sample nearest `x`.
    pub fn value_at(&self, c: Curve, x: f64) -> f64 {
        let i = self
            .x
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        self.curve(c)[i]
    }

    pub fn peak(&self, c: Curve) -> f64 {
        self.curve(c).iter().copied().fold(0.0, f64::max)
    }

    /// Whether the curve exceeds `floor · peak` at `±x`.
    pub fn extended_at(&self, c: Curve, x: f64, floor: f64) -> bool {
        let cut = floor * self.peak(c);
        self.value_at(c, x) > cut && self.value_at(c, -x) > cut
    }
}

/// Parameters of the six-panel dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fig2Scenario {
    pub grid_n: usize,
    pub domain_length: f64,
    pub pulse_length: f64,
    /// The states are computed on a box this many times larger with the same
    /// spacing and cropped back, which suppresses periodic images.
    pub padding: usize,
    pub units: UnitsConfig,
}

impl Default for Fig2Scenario {
    fn default() -> Self {
        Self {
            grid_n: 4096,
            domain_length: 16.0,
            pulse_length: 1.0,
            padding: 8,
            units: UnitsConfig::default(),
        }
    }
}

impl Fig2Scenario {
    pub fn validate(&self) -> Result<()> {
        self.units.validate()?;
        if self.grid_n < 1024 {
            return Err(Error::InvalidArgument(format!("grid needs at least 1024 points, got {}", self.grid_n)));
        }
        if self.domain_length < 16.0 * self.pulse_length {
            return Err(Error::InvalidArgument(format!(
                "domain {} must be at least 16 pulse lengths ({})",
                self.domain_length, self.pulse_length
            )));
        }
        if self.padding == 0 {
            return Err(Error::InvalidArgument("padding must be at least 1".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::line(self.domain_length, self.grid_n)
    }

    /// Grid the states are computed on.
    pub fn compute_grid(&self) -> Result<Grid> {
        self.grid()?.extended(self.padding)
    }
}

/// The three example states on the padded grid.
#[derive(Debug, Clone)]
pub struct Fig2States {
    pub lp_compact: LpState,
    pub lp_extended: LpState,
    pub bb_compact: BbState,
}

pub fn figure2_states(scenario: &Fig2Scenario) -> Result<Fig2States> {
    scenario.validate()?;
    let grid = scenario.compute_grid()?;
    let u = &scenario.units;
    Ok(Fig2States {
        lp_compact: make_lp_compact(grid, scenario.pulse_length, u)?,
        lp_extended: make_lp_extended(grid, scenario.pulse_length, u)?,
        bb_compact: make_bb_compact(grid, scenario.pulse_length, u)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig2Dataset {
    pub scenario: Fig2Scenario,
    /// Largest LP/BB route discrepancy of the energy density over the three states.
    pub path_discrepancy: f64,
    pub panels: Vec<Fig2Panel>,
}

impl Fig2Dataset {
    pub fn panel(&self, label: char) -> Option<&Fig2Panel> {
        self.panels.iter().find(|p| p.label == label)
    }
}

fn crop(values: Vec<f64>, offset: usize, n: usize) -> Vec<f64> {
    values[offset..offset + n].to_vec()
}

fn panel_curves<S: PhotonState>(state: &S, offset: usize, n: usize) -> Result<([Vec<f64>; 3], f64)> {
    let map = energy_density(state)?;
    let lp = state.lp_field()?.pointwise_abs();
    let bb = state.bb_field()?.pointwise_abs();
    Ok((
        [crop(lp, offset, n), crop(bb, offset, n), crop(map.values, offset, n)],
        map.path_discrepancy.unwrap_or(0.0),
    ))
}

/// Builds the three states and their curves; panels `a`–`c` are linear,
/// `d`–`f` repeat them on a log scale.
pub fn figure2_report(scenario: &Fig2Scenario) -> Result<Fig2Dataset> {
    let states = figure2_states(scenario)?;
    figure2_from_states(scenario, &states)
}

pub fn figure2_from_states(scenario: &Fig2Scenario, states: &Fig2States) -> Result<Fig2Dataset> {
    let grid = scenario.grid()?;
    let n = grid.points();
    let offset = (scenario.padding - 1) * n / 2;
    let x = grid.coordinates();

    let built = [
        (PanelState::LpCompact, panel_curves(&states.lp_compact, offset, n)?),
        (PanelState::LpExtended, panel_curves(&states.lp_extended, offset, n)?),
        (PanelState::BbCompact, panel_curves(&states.bb_compact, offset, n)?),
    ];
    let path_discrepancy = built.iter().map(|(_, (_, d))| *d).fold(0.0, f64::max);
    let mut panels = Vec::with_capacity(6);
    for (scale, labels) in [(Scale::Linear, ['a', 'b', 'c']), (Scale::Log, ['d', 'e', 'f'])] {
        for ((state, (curves, _)), label) in built.iter().zip(labels) {
            let [lp, bb, energy] = curves.clone();
            panels.push(Fig2Panel {
                label,
                state: *state,
                scale,
                x: x.clone(),
                lp,
                bb,
                energy,
            });
        }
    }
    Ok(Fig2Dataset {
        scenario: *scenario,
        path_discrepancy,
        panels,
    })
}
