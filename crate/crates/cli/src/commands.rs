use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use photonloc::io::{load_state, save_state, write_fit_csv, write_json, write_map_csv, write_panel_csv};
use photonloc::locality::{
    antilocality_witness, support_estimate, tail_exponent_fit, AntilocalityWitness, TailFit, TailWindow,
};
use photonloc::scenarios::{figure2_from_states, figure2_states, Curve, Fig2Panel, Scale};
use photonloc::{
    apply_frequency_power, energy_density, knight_locality_test, lp_energy, total_energy, AnyState, DetectorVolume,
    EnergyDensityMap, Error, KnightReport, PhotonState, Representation,
};
use serde::Serialize;

use crate::args::{CommonArgs, Format, PlotKind};
use crate::svg::{LinePlot, Series};
use crate::CliError;

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>), CliError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    Ok((path, BufWriter::new(file)))
}

fn finish(path: PathBuf, mut w: BufWriter<File>, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    w.flush()?;
    written.push(path);
    Ok(())
}

fn write_text(dir: &Path, name: &str, text: &str, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let (path, mut w) = create(dir, name)?;
    w.write_all(text.as_bytes())?;
    finish(path, w, written)
}

/// SVG of a panel with the same values as its CSV.
pub fn panel_plot(panel: &Fig2Panel) -> LinePlot<'_> {
    let state = serde_json::to_value(panel.state)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default();
    let scale = match panel.scale {
        Scale::Linear => "linear",
        Scale::Log => "log",
    };
    LinePlot {
        title: format!("({}) {state}, {scale} scale", panel.label),
        x_label: "x".into(),
        y_label: "|psi|, |F|, energy density".into(),
        log_y: panel.scale == Scale::Log,
        series: [("|psi| (LP)", Curve::Lp), ("|F| (BB)", Curve::Bb), ("energy density", Curve::Energy)]
            .into_iter()
            .map(|(name, c)| Series {
                name,
                x: &panel.x,
                y: panel.curve(c),
            })
            .collect(),
    }
}

pub fn demo_fig2(args: &CommonArgs, save_states: bool) -> Result<(), CliError> {
    let scenario = args.scenario();
    let states = figure2_states(&scenario)?;
    let dataset = figure2_from_states(&scenario, &states)?;
    let dir = &args.output_dir;
    let mut written = Vec::new();

    match args.format {
        Format::Csv => {
            for p in &dataset.panels {
                let (path, mut w) = create(dir, &format!("fig2_panel_{}.csv", p.label))?;
                write_panel_csv(p, &mut w)?;
                finish(path, w, &mut written)?;
            }
        }
        Format::Json => {
            let (path, mut w) = create(dir, "fig2.json")?;
            write_json(&dataset, &mut w)?;
            finish(path, w, &mut written)?;
        }
    }
    if args.plot == PlotKind::Svg {
        for p in &dataset.panels {
            write_text(dir, &format!("fig2_panel_{}.svg", p.label), &panel_plot(p).render(), &mut written)?;
        }
    }
    if save_states {
        for (name, state) in [
            ("lp_compact", AnyState::from(states.lp_compact.clone())),
            ("lp_extended", AnyState::from(states.lp_extended.clone())),
            ("bb_compact", AnyState::from(states.bb_compact.clone())),
        ] {
            let path = dir.join(format!("fig2_state_{name}.json"));
            save_state(&state, &path)?;
            written.push(path);
        }
    }

    let l = scenario.pulse_length;
    println!("path discrepancy (LP vs BB energy route): {:.3e}", dataset.path_discrepancy);
    for p in dataset.panels.iter().filter(|p| p.scale == Scale::Linear) {
        let peak = p.peak(Curve::Energy);
        let min = p.energy.iter().copied().fold(f64::INFINITY, f64::min);
        println!(
            "panel {}: energy peak {:.6e}, min/peak {:.3e}, at x = 2L {:.3e} x peak",
            p.label,
            peak,
            min / peak,
            p.value_at(Curve::Energy, 2.0 * l) / peak
        );
    }
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn load(path: &Path) -> Result<AnyState, CliError> {
    load_state(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// Samples along the x axis through the origin (the whole map in 1D).
fn x_axis(map: &EnergyDensityMap) -> (Vec<f64>, Vec<f64>) {
    let g = map.grid;
    let n = g.points();
    let mid = if g.dim() == 1 { 0 } else { n / 2 };
    (0..n)
        .map(|i| {
            let flat = if g.dim() == 1 { i } else { g.flat_index([i, mid, mid]) };
            (g.coordinate(i), map.values[flat])
        })
        .unzip()
}

#[derive(Serialize)]
struct EnergyBundle<'a> {
    representation: Representation,
    total_energy: f64,
    lp_energy: f64,
    path_discrepancy: Option<f64>,
    map: &'a EnergyDensityMap,
}

pub fn energy(args: &CommonArgs, state_path: &Path) -> Result<(), CliError> {
    let state = load(state_path)?;
    let map = energy_density(&state)?;
    let total = total_energy(&map);
    let lp_total = lp_energy(&state)?;
    let dir = &args.output_dir;
    let mut written = Vec::new();
    match args.format {
        Format::Csv => {
            let (path, mut w) = create(dir, "energy.csv")?;
            write_map_csv(&map, &mut w)?;
            finish(path, w, &mut written)?;
        }
        Format::Json => {
            let (path, mut w) = create(dir, "energy.json")?;
            let bundle = EnergyBundle {
                representation: state.representation(),
                total_energy: total,
                lp_energy: lp_total,
                path_discrepancy: map.path_discrepancy,
                map: &map,
            };
            write_json(&bundle, &mut w)?;
            finish(path, w, &mut written)?;
        }
    }
    if args.plot == PlotKind::Svg {
        let (x, y) = x_axis(&map);
        let plot = LinePlot {
            title: format!("energy density of {}", state_path.display()),
            x_label: "x".into(),
            y_label: "energy density".into(),
            log_y: args.log_scale,
            series: vec![Series {
                name: "energy density",
                x: &x,
                y: &y,
            }],
        };
        write_text(dir, "energy.svg", &plot.render(), &mut written)?;
    }
    println!("total energy: {total:.12e}");
    println!("<hbar Omega>: {lp_total:.12e}");
    match map.path_discrepancy {
        Some(d) => println!("path discrepancy: {d:.3e}"),
        None => println!("path discrepancy: n/a"),
    }
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn parse_numbers(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Validation(format!("{what}: cannot parse `{t}` as a number")))
        })
        .collect()
}

pub fn parse_volume(text: &str) -> Result<DetectorVolume, CliError> {
    let v = parse_numbers(text, "--source-volume")?;
    match v.len() {
        2 => Ok(DetectorVolume::Interval { lo: v[0], hi: v[1] }),
        4 => Ok(DetectorVolume::Ball {
            center: [v[0], v[1], v[2]],
            radius: v[3],
        }),
        6 => Ok(DetectorVolume::Box {
            lo: [v[0], v[1], v[2]],
            hi: [v[3], v[4], v[5]],
        }),
        n => Err(CliError::Validation(format!(
            "--source-volume takes 2, 4 or 6 numbers, got {n}"
        ))),
    }
}

pub fn parse_window(text: &str) -> Result<TailWindow, CliError> {
    let v = parse_numbers(text, "--windows")?;
    if v.len() != 2 || !(v[0] > 0.0 && v[1] > v[0]) {
        return Err(CliError::Validation(format!("--windows expects `r_min,r_max` with 0 < r_min < r_max, got `{text}`")));
    }
    Ok(TailWindow { r_min: v[0], r_max: v[1] })
}

/// Vector potential `Ω^{-1/2}ψ` outside the source, relative to its peak.
#[derive(Serialize)]
struct PotentialSupport {
    outside_max: Option<f64>,
    floor: f64,
    localized: Option<bool>,
    note: Option<String>,
}

#[derive(Serialize)]
struct LocalityBundle {
    representation: Representation,
    source: DetectorVolume,
    knight: KnightReport,
    tail_fits: Vec<TailFit>,
    antilocality: AntilocalityWitness,
    vector_potential: PotentialSupport,
}

fn potential_support(state: &AnyState, source: &DetectorVolume, floor: f64) -> Result<PotentialSupport, CliError> {
    let none = |note: String| PotentialSupport {
        outside_max: None,
        floor,
        localized: None,
        note: Some(note),
    };
    let psi = state.lp_field()?;
    let potential = match apply_frequency_power(&psi, -0.5, state.units()) {
        Ok(p) => p.to_position().pointwise_abs(),
        Err(e @ Error::ZeroMode { .. }) => return Ok(none(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let weights = source.weights(psi.grid())?;
    let peak = potential.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(none("potential vanishes identically".into()));
    }
    let outside = potential
        .iter()
        .zip(&weights)
        .filter(|(_, &w)| w < 0.5)
        .map(|(&a, _)| a)
        .fold(0.0, f64::max)
        / peak;
    Ok(PotentialSupport {
        outside_max: Some(outside),
        floor,
        localized: Some(outside <= floor),
        note: None,
    })
}

fn witness_region(dim: usize, w: &TailWindow) -> DetectorVolume {
    if dim == 1 {
        DetectorVolume::Interval { lo: w.r_min, hi: w.r_max }
    } else {
        let h = 0.5 * (w.r_max - w.r_min);
        DetectorVolume::Box {
            lo: [w.r_min, -h, -h],
            hi: [w.r_max, h, h],
        }
    }
}

pub fn locality(
    args: &CommonArgs,
    state_path: &Path,
    source_volume: Option<&str>,
    windows: &[String],
) -> Result<(), CliError> {
    let state = load(state_path)?;
    let field = state.field().to_position();
    let grid = *field.grid();
    let source = match source_volume {
        Some(text) => parse_volume(text)?,
        None => support_estimate(&field, args.floor)?.region,
    };
    source.validate(&grid)?;
    let windows = if windows.is_empty() {
        vec![TailWindow {
            r_min: 2.0 * args.pulse_length,
            r_max: 6.0 * args.pulse_length,
        }]
    } else {
        windows.iter().map(|w| parse_window(w)).collect::<Result<_, _>>()?
    };

    let map = energy_density(&state)?;
    let knight = knight_locality_test(&map, &source, None)?;
    let tail_fits = windows
        .iter()
        .map(|w| tail_exponent_fit(&map, *w))
        .collect::<photonloc::Result<Vec<_>>>()?;
    let antilocality = antilocality_witness(&field, &witness_region(grid.dim(), &windows[0]), state.units(), args.nonzero_floor)?;
    let vector_potential = potential_support(&state, &source, args.floor)?;

    let dir = &args.output_dir;
    let mut written = Vec::new();
    let bundle = LocalityBundle {
        representation: state.representation(),
        source,
        knight,
        tail_fits,
        antilocality,
        vector_potential,
    };
    let (path, mut w) = create(dir, "locality.json")?;
    write_json(&bundle, &mut w)?;
    finish(path, w, &mut written)?;
    if args.format == Format::Csv {
        for (i, fit) in bundle.tail_fits.iter().enumerate() {
            let (path, mut w) = create(dir, &format!("tail_fit_{i}.csv"))?;
            write_fit_csv(fit, &mut w)?;
            finish(path, w, &mut written)?;
        }
    }

    let k = &bundle.knight;
    println!(
        "knight test: {:?} ({} of {} probe cells above floor, best cell energy {:.3e}, floor {:.3e})",
        k.verdict, k.distinguishable_cells, k.probe_cells, k.detector_energy, k.floor
    );
    for fit in &bundle.tail_fits {
        println!(
            "tail [{}, {}]: power-law exponent {:.3} (r2 {:.5}), best model {:?}",
            fit.window.r_min,
            fit.window.r_max,
            fit.exponent(),
            fit.power_law.goodness,
            fit.best.model
        );
    }
    let a = &bundle.antilocality;
    println!(
        "antilocality witness: holds={} (max|v| {:.3e}, max|Omega v| {:.3e} relative to peaks)",
        a.holds,
        a.max_v / a.peak_v,
        if a.peak_omega_v > 0.0 { a.max_omega_v / a.peak_omega_v } else { 0.0 }
    );
    match (&bundle.vector_potential.outside_max, &bundle.vector_potential.note) {
        (Some(m), _) => println!(
            "vector potential outside source: {m:.3e} x peak, localized={}",
            m <= &args.floor
        ),
        (None, Some(note)) => println!("vector potential: {note}"),
        _ => {}
    }
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}
