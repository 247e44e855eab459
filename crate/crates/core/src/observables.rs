//! Normal-ordered energy density of a one-photon state, detector integrals and
//! the Knight comparison against the vacuum.
//!
//! The vacuum contribution is removed analytically, so the density is a sum
//! of squared moduli of helicity components:
//! `ħ|Ω^{1/2}ψ⁺|² + ħ|Ω^{1/2}ψ⁻|² = |F⁺|² + |F⁻|²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::representations::PhotonState;
use crate::spectral::{apply_frequency_power_unchecked, helicity_project, Grid, Helicity, SpectralField};

/// Side of a Knight probe cell, in samples per axis.
pub const PROBE_CELL_SAMPLES: usize = 8;

/// Default Knight floor relative to the peak density.
pub const DEFAULT_FLOOR_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyPath {
    Lp,
    Bb,
    Both,
}

/// Energy density sampled on a grid (energy per unit length or volume).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyDensityMap {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub source_path: EnergyPath,
    /// Largest pointwise gap between the LP and BB routes relative to the
    /// peak, when both were evaluated.
    pub path_discrepancy: Option<f64>,
}

impl EnergyDensityMap {
    pub fn vacuum(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
            source_path: EnergyPath::Both,
            path_discrepancy: Some(0.0),
        }
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Density at the sample nearest to `x` (1D).
    pub fn value_at(&self, x: f64) -> f64 {
        let g = &self.grid;
        let i = ((x + 0.5 * g.length()) / g.spacing()).round() as isize;
        let i = i.rem_euclid(g.points() as isize) as usize;
        self.values[i]
    }
}

fn helicity_density(field: &SpectralField, scale: f64) -> Result<Vec<f64>> {
    let mut out = vec![0.0; field.grid().len()];
    for h in [Helicity::Plus, Helicity::Minus] {
        let part = helicity_project(field, h)?.to_position();
        for (o, v) in out.iter_mut().zip(part.pointwise_norm_sq()) {
            *o += scale * v;
        }
    }
    Ok(out)
}

/// Energy density along both routes; the BB values are returned and the
/// discrepancy between routes is recorded.
pub fn energy_density<S: PhotonState>(state: &S) -> Result<EnergyDensityMap> {
    let units = state.units();
    let psi = state.lp_field()?;
    let half = apply_frequency_power_unchecked(&psi, 0.5, units);
    let via_lp = helicity_density(&half, units.hbar)?;
    let via_bb = helicity_density(&state.bb_field()?, 1.0)?;

    let peak = via_bb.iter().copied().fold(0.0, f64::max);
    let gap = via_lp
        .iter()
        .zip(&via_bb)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let discrepancy = if peak > 0.0 { gap / peak } else { gap };

    Ok(EnergyDensityMap {
        grid: *psi.grid(),
        values: via_bb,
        source_path: EnergyPath::Both,
        path_discrepancy: Some(discrepancy),
    })
}

/// `∫ ε(x) dx` over the whole periodic domain.
pub fn total_energy(map: &EnergyDensityMap) -> f64 {
    map.grid.cell_volume() * map.values.iter().sum::<f64>()
}

/// `ħ Re⟨ψ|Ωψ⟩`, evaluated on frequency samples.
pub fn lp_energy<S: PhotonState>(state: &S) -> Result<f64> {
    let units = state.units();
    let psi = state.lp_field()?.to_frequency();
    let grid = *psi.grid();
    let weights = psi.pointwise_norm_sq();
    let table = grid.wave_vectors(units);
    let sum: f64 = weights.iter().zip(&table.omega).map(|(w, o)| w * o).sum();
    Ok(units.hbar * grid.mode_volume() * sum)
}

/// Detector region. Bounds are in position units and must lie inside the
/// periodic box `[-L/2, L/2]^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum DetectorVolume {
    Interval { lo: f64, hi: f64 },
    Box { lo: [f64; 3], hi: [f64; 3] },
    Ball { center: [f64; 3], radius: f64 },
}

impl DetectorVolume {
    /// Interval `[center - half_width, center + half_width]`.
    pub fn centered_interval(center: f64, half_width: f64) -> Self {
        DetectorVolume::Interval {
            lo: center - half_width,
            hi: center + half_width,
        }
    }

    pub fn whole(grid: &Grid) -> Self {
        let h = 0.5 * grid.length();
        match grid.dim() {
            1 => DetectorVolume::Interval { lo: -h, hi: h },
            _ => DetectorVolume::Box {
                lo: [-h; 3],
                hi: [h; 3],
            },
        }
    }

    fn dim(&self) -> usize {
        match self {
            DetectorVolume::Interval { .. } => 1,
            _ => 3,
        }
    }

    /// Checks the shape against the grid dimension and domain.
    pub fn validate(&self, grid: &Grid) -> Result<()> {
        if self.dim() != grid.dim() {
            return Err(Error::Dimension {
                expected: grid.dim(),
                found: self.dim(),
            });
        }
        let h = 0.5 * grid.length();
        let slack = 1e-9 * grid.length();
        let inside = |lo: f64, hi: f64| lo.is_finite() && hi.is_finite() && lo <= hi && lo >= -h - slack && hi <= h + slack;
        let ok = match self {
            DetectorVolume::Interval { lo, hi } => inside(*lo, *hi),
            DetectorVolume::Box { lo, hi } => (0..3).all(|a| inside(lo[a], hi[a])),
            DetectorVolume::Ball { center, radius } => {
                *radius >= 0.0 && (0..3).all(|a| inside(center[a] - radius, center[a] + radius))
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::VolumeOutOfDomain(format!("{self:?} in a box of side {}", grid.length())))
        }
    }

    /// Per-sample overlap fractions with the volume, accounting for the
    /// periodic images of boundary cells.
    pub fn weights(&self, grid: &Grid) -> Result<Vec<f64>> {
        self.validate(grid)?;
        Ok(match self {
            DetectorVolume::Interval { lo, hi } => axis_weights(grid, *lo, *hi),
            DetectorVolume::Box { lo, hi } => {
                let w: Vec<Vec<f64>> = (0..3).map(|a| axis_weights(grid, lo[a], hi[a])).collect();
                (0..grid.len())
                    .map(|flat| {
                        let [i, j, k] = grid.axis_indices(flat);
                        w[0][i] * w[1][j] * w[2][k]
                    })
                    .collect()
            }
            DetectorVolume::Ball { center, radius } => {
                let d = grid.length();
                (0..grid.len())
                    .map(|flat| {
                        let p = grid.position(flat);
                        let r2: f64 = (0..3)
                            .map(|a| {
                                let delta = p[a] - center[a];
                                let delta = delta - d * (delta / d).round();
                                delta * delta
                            })
                            .sum();
                        if r2 <= radius * radius {
                            1.0
                        } else {
                            0.0
                        }
                    })
                    .collect()
            }
        })
    }
}

fn overlap(a0: f64, a1: f64, b0: f64, b1: f64) -> f64 {
    (a1.min(b1) - a0.max(b0)).max(0.0)
}

fn axis_weights(grid: &Grid, lo: f64, hi: f64) -> Vec<f64> {
    let dx = grid.spacing();
    let d = grid.length();
    (0..grid.points())
        .map(|i| {
            let x = grid.coordinate(i);
            let (c0, c1) = (x - 0.5 * dx, x + 0.5 * dx);
            let covered: f64 = [-d, 0.0, d]
                .iter()
                .map(|s| overlap(c0, c1, lo + s, hi + s))
                .sum();
            (covered / dx).min(1.0)
        })
        .collect()
}

/// Energy collected by a detector occupying `vol`.
pub fn detector_energy(map: &EnergyDensityMap, vol: &DetectorVolume) -> Result<f64> {
    let w = vol.weights(&map.grid)?;
    let sum: f64 = map.values.iter().zip(&w).map(|(v, w)| v * w).sum();
    Ok(map.grid.cell_volume() * sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Distinguishable,
    IndistinguishableAtFloor,
}

/// Outcome of probing the complement of a source volume.
///
/// `detector` is the probe cell with the largest mean density; `floor` is the
/// density floor times that cell's measure, so the verdict is
/// `Distinguishable` exactly when `detector_energy > floor`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnightReport {
    pub detector: DetectorVolume,
    pub detector_energy: f64,
    pub vacuum_energy: f64,
    pub verdict: Verdict,
    pub floor: f64,
    pub density_floor: f64,
    pub probe_cells: usize,
    pub distinguishable_cells: usize,
    pub complement_energy: f64,
}

struct Probe {
    bounds: ([f64; 3], [f64; 3]),
    energy: f64,
    measure: f64,
}

/// Compares every probe cell outside `source` with the vacuum (energy 0).
///
/// `floor` is a density; `None` uses `1e-12` times the peak density.
pub fn knight_locality_test(
    map: &EnergyDensityMap,
    source: &DetectorVolume,
    floor: Option<f64>,
) -> Result<KnightReport> {
    let grid = map.grid;
    let density_floor = match floor {
        Some(f) if f > 0.0 && f.is_finite() => f,
        Some(f) => return Err(Error::InvalidArgument(format!("floor must be positive, got {f}"))),
        None => DEFAULT_FLOOR_REL * map.peak(),
    };
    let inside = source.weights(&grid)?;
    let cell_volume = grid.cell_volume();
    let n = grid.points();
    let side = PROBE_CELL_SAMPLES.min(n);
    let per_axis = n / side;
    let axes = grid.dim();
    let cells = per_axis.pow(axes as u32);
    let dx = grid.spacing();

    let mut probes: Vec<Probe> = (0..cells)
        .map(|c| {
            let mut lo = [0.0; 3];
            let mut hi = [0.0; 3];
            let mut rest = c;
            for a in (0..axes).rev() {
                let cell_idx = rest % per_axis;
                rest /= per_axis;
                let first = cell_idx * side;
                let last = if cell_idx + 1 == per_axis { n } else { first + side };
                lo[a] = grid.coordinate(first) - 0.5 * dx;
                hi[a] = grid.coordinate(last - 1) + 0.5 * dx;
            }
            Probe {
                bounds: (lo, hi),
                energy: 0.0,
                measure: 0.0,
            }
        })
        .collect();

    for flat in 0..grid.len() {
        let idx = grid.axis_indices(flat);
        let mut cell = 0;
        for &i in idx.iter().take(axes) {
            cell = cell * per_axis + (i / side).min(per_axis - 1);
        }
        let w = 1.0 - inside[flat];
        probes[cell].energy += w * map.values[flat] * cell_volume;
        probes[cell].measure += w * cell_volume;
    }

    let full = cell_volume * (side as f64).powi(axes as i32);
    let usable: Vec<&Probe> = probes.iter().filter(|p| p.measure >= 0.5 * full).collect();
    let complement_energy = probes.iter().map(|p| p.energy).sum();
    let distinguishable_cells = usable
        .iter()
        .filter(|p| p.energy > density_floor * p.measure)
        .count();
    let best = usable
        .iter()
        .max_by(|a, b| (a.energy / a.measure).total_cmp(&(b.energy / b.measure)));

    let (detector, detector_energy, cell_floor) = match best {
        Some(p) => {
            let (lo, hi) = p.bounds;
            let vol = if axes == 1 {
                DetectorVolume::Interval { lo: lo[0], hi: hi[0] }
            } else {
                DetectorVolume::Box { lo, hi }
            };
            (vol, p.energy, density_floor * p.measure)
        }
        None => (source.clone(), 0.0, 0.0),
    };
    let verdict = if detector_energy > cell_floor {
        Verdict::Distinguishable
    } else {
        Verdict::IndistinguishableAtFloor
    };
    Ok(KnightReport {
        detector,
        detector_energy,
        vacuum_energy: 0.0,
        verdict,
        floor: cell_floor,
        density_floor,
        probe_cells: usable.len(),
        distinguishable_cells,
        complement_energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representations::{normalize, BbState, LpState};
    use crate::spectral::{plane_wave, Domain, UnitsConfig};
    use num_complex::Complex64;

    fn gaussian_packet(grid: Grid, k0: f64) -> SpectralField {
        SpectralField::scalar_from_fn(grid, |x| Complex64::from_polar((-x * x).exp(), k0 * x)).unwrap()
    }

    #[test]
    fn vacuum_map_is_exactly_zero() {
        let g = Grid::line(10.0, 128).unwrap();
        let s = LpState::new(SpectralField::zeros(g, Domain::Position), UnitsConfig::default()).unwrap();
        let map = energy_density(&s).unwrap();
        assert!(map.values.iter().all(|&v| v == 0.0));
        assert_eq!(total_energy(&map), 0.0);
        let report = knight_locality_test(&map, &DetectorVolume::centered_interval(0.0, 1.0), None).unwrap();
        assert_eq!(report.verdict, Verdict::IndistinguishableAtFloor);
    }

    #[test]
    fn whole_domain_detector_is_total_energy() {
        let g = Grid::line(20.0, 512).unwrap();
        let s = LpState::new(gaussian_packet(g, 5.0), UnitsConfig::default()).unwrap();
        let map = energy_density(&s).unwrap();
        let whole = detector_energy(&map, &DetectorVolume::whole(&g)).unwrap();
        assert!((whole - total_energy(&map)).abs() < 1e-12 * whole);
    }

    #[test]
    fn detector_energy_is_additive() {
        let g = Grid::line(20.0, 512).unwrap();
        let s = LpState::new(gaussian_packet(g, 5.0), UnitsConfig::default()).unwrap();
        let map = energy_density(&s).unwrap();
        let left = detector_energy(&map, &DetectorVolume::Interval { lo: -1.013, hi: 0.2718 }).unwrap();
        let right = detector_energy(&map, &DetectorVolume::Interval { lo: 0.2718, hi: 2.5 }).unwrap();
        let union = detector_energy(&map, &DetectorVolume::Interval { lo: -1.013, hi: 2.5 }).unwrap();
        assert!((left + right - union).abs() < 1e-12 * union);
        let empty = detector_energy(&map, &DetectorVolume::Interval { lo: 0.3, hi: 0.3 }).unwrap();
        assert_eq!(empty, 0.0);
    }

    #[test]
    fn out_of_domain_volume_is_rejected() {
        let map = EnergyDensityMap::vacuum(Grid::line(4.0, 16).unwrap());
        let vol = DetectorVolume::Interval { lo: -1.0, hi: 2.5 };
        assert!(matches!(detector_energy(&map, &vol), Err(Error::VolumeOutOfDomain(_))));
        let ball = DetectorVolume::Ball { center: [0.0; 3], radius: 1.0 };
        assert!(matches!(detector_energy(&map, &ball), Err(Error::Dimension { .. })));
    }

    #[test]
    fn ball_and_box_weights() {
        let g = Grid::cube(8.0, 16).unwrap();
        let ball = DetectorVolume::Ball { center: [0.0; 3], radius: 2.0 };
        let n: f64 = ball.weights(&g).unwrap().iter().sum::<f64>() * g.cell_volume();
        let exact = 4.0 / 3.0 * std::f64::consts::PI * 8.0;
        assert!((n - exact).abs() < 0.1 * exact);
        let cube = DetectorVolume::Box { lo: [-1.0; 3], hi: [1.0; 3] };
        let v: f64 = cube.weights(&g).unwrap().iter().sum::<f64>() * g.cell_volume();
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn plane_wave_energy_is_hbar_omega() {
        let g = Grid::cube(2.0 * std::f64::consts::PI, 8).unwrap();
        let u = UnitsConfig::new(0.5, 2.0, 1.0).unwrap();
        let s = normalize(&LpState::new(plane_wave(&g, [0, 3, 0], Helicity::Minus).unwrap(), u).unwrap()).unwrap();
        let map = energy_density(&s).unwrap();
        let expect = u.hbar * u.c * 3.0;
        assert!((total_energy(&map) - expect).abs() < 1e-10);
        assert!((lp_energy(&s).unwrap() - expect).abs() < 1e-10);
        assert!(map.path_discrepancy.unwrap() < 1e-12);
    }

    #[test]
    fn bb_state_density_matches_lp_route() {
        let g = Grid::line(20.0, 512).unwrap();
        let f = gaussian_packet(g, 12.0);
        let s = BbState::new(f, UnitsConfig::default()).unwrap();
        let map = energy_density(&s).unwrap();
        assert!(map.path_discrepancy.unwrap() < 1e-10);
        assert!((total_energy(&map) - lp_energy(&s).unwrap()).abs() < 1e-8 * total_energy(&map));
    }

    #[test]
    fn gaussian_packet_is_distinguishable_far_out() {
        let g = Grid::line(20.0, 512).unwrap();
        let s = LpState::new(gaussian_packet(g, 5.0), UnitsConfig::default()).unwrap();
        let map = energy_density(&s).unwrap();
        let r = knight_locality_test(&map, &DetectorVolume::centered_interval(0.0, 2.0), None).unwrap();
        assert_eq!(r.verdict, Verdict::Distinguishable);
        assert_eq!(r.vacuum_energy, 0.0);
        assert!(r.detector_energy > r.floor);
        assert!(r.probe_cells > 0);
        let high = knight_locality_test(&map, &DetectorVolume::centered_interval(0.0, 2.0), Some(1e6)).unwrap();
        assert_eq!(high.verdict, Verdict::IndistinguishableAtFloor);
    }
}
