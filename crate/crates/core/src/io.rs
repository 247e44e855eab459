//! State files (JSON) and data tables (CSV at 17 significant digits).
//!
//! A state file looks like
//!
//! ```json
//! {
//!   "representation": "lp",
//!   "units": { "hbar": 1.0, "c": 1.0, "eps0": 1.0 },
//!   "grid": { "dim": 1, "length": 16.0, "points": 4096 },
//!   "components": [ { "re": [0.0, ...], "im": [0.0, ...] } ]
//! }
//! ```
//!
//! with one component in 1D and three (x, y, z) in 3D, each holding
//! position samples in the grid's flat order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::locality::TailFit;
use crate::observables::EnergyDensityMap;
use crate::representations::{AnyState, BbState, LpState, PhotonState, Representation};
use crate::scenarios::Fig2Panel;
use crate::spectral::{Domain, Grid, SpectralField, UnitsConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentData {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub representation: Representation,
    pub units: UnitsConfig,
    pub grid: Grid,
    pub components: Vec<ComponentData>,
}

impl StateFile {
    pub fn from_state<S: PhotonState>(state: &S) -> Self {
        let field = state.field().to_position();
        Self {
            representation: state.representation(),
            units: *state.units(),
            grid: *field.grid(),
            components: field
                .components()
                .iter()
                .map(|c| ComponentData {
                    re: c.iter().map(|z| z.re).collect(),
                    im: c.iter().map(|z| z.im).collect(),
                })
                .collect(),
        }
    }

    pub fn into_state(self) -> Result<AnyState> {
        self.units
            .validate()
            .map_err(|e| Error::Schema(format!("units: {e}")))?;
        let mut comps = Vec::with_capacity(self.components.len());
        for (i, c) in self.components.into_iter().enumerate() {
            if c.re.len() != c.im.len() {
                return Err(Error::Schema(format!(
                    "component {i}: {} real and {} imaginary samples",
                    c.re.len(),
                    c.im.len()
                )));
            }
            comps.push(
                c.re.into_iter()
                    .zip(c.im)
                    .map(|(re, im)| Complex64::new(re, im))
                    .collect::<Vec<_>>(),
            );
        }
        let field = SpectralField::new(self.grid, comps, Domain::Position).map_err(|e| Error::Schema(e.to_string()))?;
        Ok(match self.representation {
            Representation::Lp => AnyState::Lp(LpState::new(field, self.units)?),
            Representation::Bb => AnyState::Bb(BbState::new(field, self.units)?),
        })
    }
}

pub fn write_state<S: PhotonState>(state: &S, w: impl Write) -> Result<()> {
    serde_json::to_writer(w, &StateFile::from_state(state))?;
    Ok(())
}

pub fn read_state(r: impl Read) -> Result<AnyState> {
    let file: StateFile = serde_json::from_reader(r).map_err(|e| Error::Schema(e.to_string()))?;
    file.into_state()
}

pub fn save_state<S: PhotonState>(state: &S, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_state(state, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load_state(path: &Path) -> Result<AnyState> {
    read_state(BufReader::new(File::open(path)?))
}

/// Shortest text that preserves all 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_rows<W: Write>(w: W, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    for row in rows {
        out.write_record(row.iter().map(|v| fmt_f64(*v)))?;
    }
    out.flush()?;
    Ok(())
}

fn position_columns(grid: &Grid) -> &'static [&'static str] {
    if grid.dim() == 1 {
        &["x"]
    } else {
        &["x", "y", "z"]
    }
}

fn position_row(grid: &Grid, flat: usize) -> Vec<f64> {
    let p = grid.position(flat);
    p[..grid.dim()].to_vec()
}

/// `x[, y, z], re_0, im_0, …` on position samples.
pub fn write_field_csv(field: &SpectralField, w: impl Write) -> Result<()> {
    let field = field.to_position();
    let grid = *field.grid();
    let names = ["x", "y", "z"];
    let mut header: Vec<String> = position_columns(&grid).iter().map(|s| s.to_string()).collect();
    for c in 0..field.n_components() {
        let suffix = if grid.dim() == 1 { String::new() } else { format!("_{}", names[c]) };
        header.push(format!("re{suffix}"));
        header.push(format!("im{suffix}"));
    }
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = (0..grid.len()).map(|flat| {
        let mut row = position_row(&grid, flat);
        for comp in field.components() {
            row.push(comp[flat].re);
            row.push(comp[flat].im);
        }
        row
    });
    write_rows(w, &header, rows)
}

/// `x[, y, z], value`.
pub fn write_map_csv(map: &EnergyDensityMap, w: impl Write) -> Result<()> {
    let grid = map.grid;
    let mut header = position_columns(&grid).to_vec();
    header.push("value");
    let rows = (0..grid.len()).map(|flat| {
        let mut row = position_row(&grid, flat);
        row.push(map.values[flat]);
        row
    });
    write_rows(w, &header, rows)
}

/// `x, lp, bb, energy`.
pub fn write_panel_csv(panel: &Fig2Panel, w: impl Write) -> Result<()> {
    let rows = (0..panel.x.len()).map(|i| vec![panel.x[i], panel.lp[i], panel.bb[i], panel.energy[i]]);
    write_rows(w, &["x", "lp", "bb", "energy"], rows)
}

/// `r, value, model`.
pub fn write_fit_csv(fit: &TailFit, w: impl Write) -> Result<()> {
    write_rows(w, &["r", "value", "model"], fit.rows().into_iter().map(|r| r.to_vec()))
}

/// Pretty JSON of any report type.
pub fn write_json<T: Serialize>(value: &T, w: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(w, value)?;
    Ok(())
}

/// Reads a CSV written by this module back into header and numeric rows.
pub fn read_csv(r: impl Read) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut rdr = csv::Reader::from_reader(r);
    let header = rdr.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| Error::Schema(format!("{s}: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}
