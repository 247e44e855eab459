//! Invariant suites behind `photonloc check`.

use std::cell::OnceCell;

use photonloc::locality::{
    antilocality_scan, antilocality_witness, helicity_vanishing_scan_within, support_estimate, tail_exponent_fit,
    vector_potential_localized_state, TailWindow,
};
use photonloc::representations::riemann_silberstein_residual;
use photonloc::scenarios::{
    figure2_from_states, figure2_states, narrowband_packet, sin2_balanced_profile, sin2_profile, Curve, Fig2Dataset,
    Fig2Scenario, Fig2States,
};
use photonloc::{
    apply_frequency_power, bb_from_em, bb_from_lp, bb_inner, curl, energy_density, evolve, helicity_apply,
    helicity_project, knight_locality_test, lp_energy, lp_from_bb, lp_from_potentials, lp_inner, total_energy,
    transverse_project, AnyState, Complex64, DetectorVolume, Domain, EmFields, EnergyDensityMap, Grid, Helicity,
    LpState, PhotonState, SpectralField, UnitsConfig, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::{CommonArgs, Suite};
use crate::CliError;

const OPERATOR_TOLERANCE: f64 = 1e-10;
const CUBE_POINTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: String,
    pub value: f64,
    pub bound: String,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub status: Status,
    pub note: Option<String>,
    pub checks: Vec<CheckLine>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        Self {
            suite,
            status: Status::Pass,
            note: None,
            checks: Vec::new(),
        }
    }

    fn below(&mut self, name: &str, value: f64, bound: f64) {
        self.push(name, value, format!("< {bound:.0e}"), value < bound);
    }

    fn above(&mut self, name: &str, value: f64, bound: f64) {
        self.push(name, value, format!("> {bound:.0e}"), value > bound);
    }

    fn push(&mut self, name: &str, value: f64, bound: String, pass: bool) {
        if !pass {
            self.status = Status::Fail;
        }
        self.checks.push(CheckLine {
            name: name.to_string(),
            value,
            bound,
            pass,
        });
    }

    fn error(&mut self, what: &str, e: impl std::fmt::Display) {
        self.status = Status::Fail;
        self.note = Some(format!("{what}: {e}"));
    }
}

struct Figure {
    scenario: Fig2Scenario,
    states: Fig2States,
    dataset: Fig2Dataset,
}

struct Context<'a> {
    args: &'a CommonArgs,
    units: UnitsConfig,
    figure: OnceCell<Result<Figure, String>>,
}

impl<'a> Context<'a> {
    fn line(&self) -> Grid {
        Grid::line(self.args.domain_length, self.args.grid_n).expect("validated grid")
    }

    fn figure(&self) -> Result<&Figure, &str> {
        self.figure
            .get_or_init(|| {
                let scenario = self.args.scenario();
                let states = figure2_states(&scenario).map_err(|e| e.to_string())?;
                let dataset = figure2_from_states(&scenario, &states).map_err(|e| e.to_string())?;
                Ok(Figure {
                    scenario,
                    states,
                    dataset,
                })
            })
            .as_ref()
            .map_err(String::as_str)
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

// Random spectrum on 1 ≤ |m| ≤ N/8, so the band limit follows the grid.
fn random_line_field(rng: &mut ChaCha8Rng, grid: Grid) -> SpectralField {
    let m_max = (grid.points() / 8).max(1) as isize;
    let width = m_max as f64 / 2.5;
    let mut modes = vec![Complex64::new(0.0, 0.0); grid.len()];
    for m in (-m_max..=m_max).filter(|&m| m != 0) {
        let idx = grid.mode_flat_index([m, 0, 0]).expect("mode on grid");
        modes[idx] = unit_complex(rng) * (-(m as f64 / width).powi(2)).exp();
    }
    SpectralField::new(grid, vec![modes], Domain::Frequency)
        .expect("line spectrum")
        .to_position()
}

fn random_transverse_field(rng: &mut ChaCha8Rng, grid: Grid) -> SpectralField {
    let k_cut = grid.points() as f64 * std::f64::consts::PI / (2.0 * grid.length());
    let mut comps = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; 3];
    for flat in 1..grid.len() {
        let k = grid.wavevector(flat);
        if (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt() < k_cut {
            for c in comps.iter_mut() {
                c[flat] = unit_complex(rng);
            }
        }
    }
    let raw = SpectralField::new(grid, comps, Domain::Frequency).expect("cube spectrum");
    transverse_project(&raw)
        .expect("3D field")
        .to_position()
        .mark_transverse()
        .expect("projected field")
}

fn rel(a: &SpectralField, b: &SpectralField) -> f64 {
    let scale = b.max_abs().max(a.max_abs());
    if scale == 0.0 {
        return 0.0;
    }
    a.max_abs_diff(b).unwrap_or(f64::INFINITY) / scale
}

fn bump(x: f64, centre: f64, width: f64) -> f64 {
    let s = (x - centre) / width;
    if s.abs() < 1.0 {
        (-1.0 / (1.0 - s * s)).exp()
    } else {
        0.0
    }
}

fn random_compact_field(rng: &mut ChaCha8Rng, grid: Grid, l: f64) -> SpectralField {
    let parts: Vec<(f64, f64, f64)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let width = rng.gen_range(0.1..0.2) * l;
            let centre = rng.gen_range(-0.5 * l + width..0.5 * l - width);
            (centre, width, rng.gen_range(-1.5..1.5))
        })
        .collect();
    SpectralField::scalar_from_fn(grid, |x| {
        Complex64::new(parts.iter().map(|&(c, w, a)| a * bump(x, c, w)).sum(), 0.0)
    })
    .expect("compact field")
}

fn operators(ctx: &Context) -> photonloc::Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Operators);
    let u = &ctx.units;
    let mut gen = rng(101);
    let line = ctx.line();
    let mut worst = [0.0f64; 4];
    for _ in 0..20 {
        let v = random_line_field(&mut gen, line);
        let lv = helicity_apply(&v)?;
        let p = helicity_project(&v, Helicity::Plus)?;
        let m = helicity_project(&v, Helicity::Minus)?;
        let half = apply_frequency_power(&v, 0.5, u)?;
        let errs = [
            rel(&helicity_apply(&lv)?, &v),
            rel(&helicity_project(&p, Helicity::Plus)?, &p).max(rel(&p.add(&m)?, &v)),
            rel(&apply_frequency_power(&half, 0.5, u)?, &apply_frequency_power(&v, 1.0, u)?),
            rel(&apply_frequency_power(&half, -0.5, u)?, &v),
        ];
        for (w, e) in worst.iter_mut().zip(errs) {
            *w = w.max(e);
        }
    }
    r.below("line: Lambda^2 = 1", worst[0], OPERATOR_TOLERANCE);
    r.below("line: projectors idempotent, complete", worst[1], OPERATOR_TOLERANCE);
    r.below("line: Omega^1/2 Omega^1/2 = Omega", worst[2], OPERATOR_TOLERANCE);
    r.below("line: Omega^-1/2 Omega^1/2 = 1", worst[3], OPERATOR_TOLERANCE);

    let cube = Grid::cube(8.0, CUBE_POINTS.min(ctx.args.grid_n))?;
    let mut worst = [0.0f64; 3];
    for _ in 0..5 {
        let v = random_transverse_field(&mut gen, cube);
        let lv = helicity_apply(&v)?;
        let omega_l = apply_frequency_power(&lv, 1.0, u)?;
        let errs = [
            rel(&helicity_apply(&lv)?, &v),
            rel(&curl(&v)?.scaled(Complex64::new(u.c, 0.0)), &omega_l),
            rel(&helicity_apply(&apply_frequency_power(&v, 1.0, u)?)?, &omega_l),
        ];
        for (w, e) in worst.iter_mut().zip(errs) {
            *w = w.max(e);
        }
    }
    r.below("cube: Lambda^2 = 1", worst[0], OPERATOR_TOLERANCE);
    r.below("cube: c curl = Omega Lambda", worst[1], OPERATOR_TOLERANCE);
    r.below("cube: Lambda Omega = Omega Lambda", worst[2], OPERATOR_TOLERANCE);
    Ok(r)
}

fn isomorphism(ctx: &Context) -> photonloc::Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Isomorphism);
    let u = ctx.units;
    let mut gen = rng(202);
    let line = ctx.line();
    let (mut round, mut inner) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let a = LpState::new(random_line_field(&mut gen, line), u)?;
        let b = LpState::new(random_line_field(&mut gen, line), u)?;
        let (fa, fb) = (bb_from_lp(&a)?, bb_from_lp(&b)?);
        round = round.max(rel(lp_from_bb(&fa)?.psi(), a.psi()));
        let gap = (bb_inner(&fa, &fb)? - lp_inner(&a, &b)? * u.hbar).norm();
        inner = inner.max(gap / (a.norm() * b.norm() * u.hbar));
    }
    r.below("BB -> LP -> BB round trip", round, 1e-11);
    r.below("hbar <psi|psi'> = <F|F'>", inner, 1e-10);

    let cube = Grid::cube(8.0, CUBE_POINTS.min(ctx.args.grid_n))?;
    let e = random_transverse_field(&mut gen, cube).real_part().mark_transverse()?;
    let a = random_transverse_field(&mut gen, cube).real_part().mark_transverse()?;
    let b = curl(&a)?.real_part().mark_transverse()?;
    let via_lp = bb_from_lp(&lp_from_potentials(&EmFields::new(e.clone(), a)?, &u)?)?;
    let via_em = bb_from_em(&e, &b, &u)?;
    r.below("potentials and fields agree", rel(via_lp.field(), via_em.field()), 1e-12);
    r.below("Riemann-Silberstein identity", riemann_silberstein_residual(&via_em, &e, &b)?, 1e-12);
    Ok(r)
}

fn energy(ctx: &Context) -> photonloc::Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Energy);
    let u = ctx.units;
    let mut gen = rng(303);
    let line = ctx.line();
    let mut states: Vec<AnyState> = (0..8)
        .map(|_| LpState::new(random_line_field(&mut gen, line), u).map(AnyState::from))
        .collect::<photonloc::Result<_>>()?;
    if let Ok(fig) = ctx.figure() {
        states.push(fig.states.lp_compact.clone().into());
        states.push(fig.states.lp_extended.clone().into());
        states.push(fig.states.bb_compact.clone().into());
    }
    let (mut paths, mut parseval, mut drift, mut back) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut negative = 0usize;
    for s in &states {
        let map = energy_density(s)?;
        negative += map.values.iter().filter(|&&v| v < 0.0).count();
        paths = paths.max(map.path_discrepancy.unwrap_or(0.0));
        let e0 = total_energy(&map);
        parseval = parseval.max((e0 - lp_energy(s)?).abs() / e0);
        for t in [0.37, 2.5] {
            let fwd = evolve(s, t);
            drift = drift.max((total_energy(&energy_density(&fwd)?) - e0).abs() / e0);
            back = back.max(rel(evolve(&fwd, -t).field(), s.field()));
        }
    }
    r.push("density nonnegative (negative samples)", negative as f64, "= 0".into(), negative == 0);
    r.below("LP route = BB route", paths, 1e-10);
    r.below("integral of density = <hbar Omega>", parseval, 1e-8);
    r.below("energy drift under evolution", drift, 1e-10);
    r.below("evolve(-t) evolve(t) = 1", back, 1e-12);

    let packet = narrowband_packet(Grid::line(64.0, 4096)?, 10.0, 0.05, &u)?;
    let expect = 10.0 * u.hbar;
    let total = total_energy(&energy_density(&packet)?);
    r.below("narrowband total vs hbar omega0 (relative)", (total - expect).abs() / expect, 5e-3);
    Ok(r)
}

fn scenarios(ctx: &Context) -> photonloc::Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Scenarios);
    let fig = match ctx.figure() {
        Ok(f) => f,
        Err(e) => {
            r.status = Status::Skip;
            r.note = Some(format!("figure scenario unavailable: {e}"));
            return Ok(r);
        }
    };
    let grid = fig.scenario.grid()?;
    let l = fig.scenario.pulse_length;
    let dx = grid.spacing();
    let panel = |label| fig.dataset.panel(label).expect("panel");
    let field = |label, c| SpectralField::from_real(grid, panel(label).curve(c));
    let floor = ctx.args.floor;
    let nz = ctx.args.nonzero_floor;

    let a_lp = support_estimate(&field('a', Curve::Lp)?, floor)?;
    r.below("(a) |psi| support half-width - L/2", (a_lp.half_width() - 0.5 * l).abs(), dx * 1.0001);
    let c_bb = support_estimate(&field('c', Curve::Bb)?, floor)?;
    r.below("(c) |F| support half-width - L/2", (c_bb.half_width() - 0.5 * l).abs(), dx * 1.0001);
    let extended = [('a', Curve::Bb), ('a', Curve::Energy), ('b', Curve::Lp), ('b', Curve::Bb), ('b', Curve::Energy), ('c', Curve::Lp), ('c', Curve::Energy)];
    let weakest = extended
        .iter()
        .map(|&(p, c)| {
            let pn = panel(p);
            pn.value_at(c, 2.0 * l).min(pn.value_at(c, -2.0 * l)) / pn.peak(c)
        })
        .fold(f64::INFINITY, f64::min);
    r.above("extended curves at |x| = 2L (relative)", weakest, nz);

    for (label, source) in [
        ('a', a_lp.region.clone()),
        ('b', DetectorVolume::centered_interval(0.0, 0.5 * l)),
        ('c', c_bb.region.clone()),
    ] {
        let map = EnergyDensityMap {
            grid,
            values: panel(label).energy.clone(),
            source_path: photonloc::EnergyPath::Both,
            path_discrepancy: None,
        };
        let min = map.values.iter().copied().fold(f64::INFINITY, f64::min);
        r.above(&format!("({label}) energy minimum"), min, 0.0);
        let k = knight_locality_test(&map, &source, None)?;
        let ok = k.verdict == Verdict::Distinguishable && k.distinguishable_cells == k.probe_cells;
        r.push(
            &format!("({label}) probe cells distinguishable"),
            k.distinguishable_cells as f64,
            format!("= {}", k.probe_cells),
            ok,
        );
    }
    Ok(r)
}

fn locality(ctx: &Context) -> photonloc::Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Locality);
    let u = ctx.units;
    let line = ctx.line();
    let l = ctx.args.pulse_length;
    let floor = ctx.args.floor;
    let nz = ctx.args.nonzero_floor;
    let mut gen = rng(404);

    let window = (l / 20.0).max(4.0 * line.spacing());
    let mut weakest = f64::INFINITY;
    for _ in 0..10 {
        let scan = antilocality_scan(&random_compact_field(&mut gen, line, l), window, &u, nz)?;
        weakest = weakest.min(if scan.windows > 0 { scan.min_window_max } else { 0.0 });
    }
    r.above("compact v: weakest joint window of (v, Omega v)", weakest, nz);

    let zone = DetectorVolume::Interval { lo: l, hi: 2.0 * l };
    let w = antilocality_witness(&sin2_profile(line, l)?, &zone, &u, nz)?;
    r.below("compact v: max|v| outside support (relative)", w.max_v / w.peak_v, floor);
    r.above("compact v: max|Omega v| outside support (relative)", w.max_omega_v / w.peak_omega_v, nz);

    let xi = sin2_balanced_profile(line, l)?;
    let built = vector_potential_localized_state(&xi, &DetectorVolume::centered_interval(0.0, 0.5 * l), &u)?;
    r.below("potential-local state: recovery deviation", built.deviation_inside.max(built.deviation_outside), floor);
    r.below("potential-local state: potential outside R", built.recovered_outside, floor);
    let map = energy_density(&built.state)?;
    r.above("potential-local state: density at distance 2L (relative)", map.value_at(2.5 * l) / map.peak(), nz * 1e-4);

    let Ok(fig) = ctx.figure() else {
        r.note = Some("figure scenario unavailable; tail and helicity checks skipped".into());
        return Ok(r);
    };
    let grid = fig.scenario.grid()?;
    let tail_map = EnergyDensityMap {
        grid,
        values: fig.dataset.panel('a').expect("panel a").energy.clone(),
        source_path: photonloc::EnergyPath::Both,
        path_discrepancy: None,
    };
    let fit = tail_exponent_fit(&tail_map, TailWindow { r_min: 2.0 * l, r_max: 6.0 * l })?;
    r.below("(a) tail exponent distance from -3", (fit.exponent() + 3.0).abs(), 0.3);

    let s = &fig.states;
    let fields = [
        s.lp_compact.psi().clone(),
        s.lp_compact.bb_field()?,
        s.lp_extended.psi().clone(),
        s.lp_extended.bb_field()?,
        s.bb_compact.lp_field()?,
        s.bb_compact.field().clone(),
    ];
    let mut hel_min = f64::INFINITY;
    let mut hel_ok = true;
    for f in &fields {
        let scale = f.max_abs();
        for h in [Helicity::Plus, Helicity::Minus] {
            let part = helicity_project(f, h)?;
            let rep = helicity_vanishing_scan_within(&part, 4.0 * f.grid().spacing(), Some(scale), fig.scenario.domain_length)?;
            hel_ok &= rep.identically_zero || rep.holds;
            if !rep.identically_zero {
                hel_min = hel_min.min(rep.min_window_max);
            }
        }
    }
    r.push("helicity components: smallest window max", hel_min, format!("> {nz:.0e}"), hel_ok);
    Ok(r)
}

fn run_suite(ctx: &Context, suite: Suite) -> SuiteReport {
    let result = match suite {
        Suite::Operators => operators(ctx),
        Suite::Isomorphism => isomorphism(ctx),
        Suite::Energy => energy(ctx),
        Suite::Scenarios => scenarios(ctx),
        Suite::Locality => locality(ctx),
    };
    result.unwrap_or_else(|e| {
        let mut r = SuiteReport::new(suite);
        r.error("error", e);
        r
    })
}

pub fn run_suites(args: &CommonArgs, suites: &[Suite]) -> Vec<SuiteReport> {
    let all = [Suite::Operators, Suite::Isomorphism, Suite::Energy, Suite::Scenarios, Suite::Locality];
    let ctx = Context {
        args,
        units: args.units(),
        figure: OnceCell::new(),
    };
    all.into_iter()
        .filter(|s| suites.is_empty() || suites.contains(s))
        .map(|s| run_suite(&ctx, s))
        .collect()
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Operators => "operators",
        Suite::Isomorphism => "isomorphism",
        Suite::Energy => "energy",
        Suite::Scenarios => "scenarios",
        Suite::Locality => "locality",
    }
}

pub fn run(args: &CommonArgs, suites: &[Suite]) -> Result<(), CliError> {
    let reports = run_suites(args, suites);
    println!("{:<12} {:<6} {:<58} {:>12}  bound", "suite", "status", "check", "value");
    for rep in &reports {
        let status = match rep.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        println!("{:<12} {:<6} {}", suite_name(rep.suite), status, rep.note.as_deref().unwrap_or(""));
        for c in &rep.checks {
            println!(
                "{:<12} {:<6} {:<58} {:>12.3e}  {}",
                "",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.value,
                c.bound
            );
        }
    }
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| r.status == Status::Fail)
        .map(|r| suite_name(r.suite))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("suites failed: {}", failed.join(", "))))
    }
}
