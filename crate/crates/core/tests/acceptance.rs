//! Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs at the default demo parameters (N = 4096, domain 16, L = 1,
//! ħ = c = ε0 = 1) unless a criterion states otherwise.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use photonloc::io::write_panel_csv;
use photonloc::locality::{
    antilocality_scan, antilocality_witness, helicity_vanishing_scan_within, support_estimate, tail_exponent_fit,
    vector_potential_localized_state, TailWindow, PHYSICAL_ZERO,
};
use photonloc::observables::EnergyPath;
use photonloc::scenarios::{figure2_report, figure2_states, narrowband_packet, sin2_balanced_profile, Curve, Fig2Dataset, Fig2Scenario, Fig2States};
use photonloc::*;

type Outcome = std::result::Result<String, String>;

fn check(ok: bool, what: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

struct Context {
    scenario: Fig2Scenario,
    states: Fig2States,
    dataset: Fig2Dataset,
}

impl Context {
    fn new() -> Self {
        let scenario = Fig2Scenario::default();
        let states = figure2_states(&scenario).expect("figure states");
        let dataset = figure2_report(&scenario).expect("figure dataset");
        Self {
            scenario,
            states,
            dataset,
        }
    }

    fn grid(&self) -> Grid {
        self.scenario.grid().unwrap()
    }

    fn panel_map(&self, label: char) -> EnergyDensityMap {
        EnergyDensityMap {
            grid: self.grid(),
            values: self.dataset.panel(label).unwrap().energy.clone(),
            source_path: EnergyPath::Both,
            path_discrepancy: None,
        }
    }

    fn curve_field(&self, label: char, curve: Curve) -> SpectralField {
        SpectralField::from_real(self.grid(), self.dataset.panel(label).unwrap().curve(curve)).unwrap()
    }
}

fn criterion_1() -> Outcome {
    let grid = Grid::cube(8.0, 64).unwrap();
    let units = UnitsConfig::new(1.0, 1.7, 1.0).unwrap();
    let k_cut = grid.points() as f64 * std::f64::consts::PI / (2.0 * grid.length());
    let mut rng = rng(1);
    let mut worst = 0.0f64;
    let fields = 50;
    for _ in 0..fields {
        let v = random_transverse_field(&mut rng, grid, k_cut);
        let lv = helicity_apply(&v).unwrap();
        let llv = helicity_apply(&lv).unwrap();
        let omega_v = apply_frequency_power(&v, 1.0, &units).unwrap();
        let curl_c = curl(&v).unwrap().scaled(Complex64::new(units.c, 0.0));
        let omega_l = apply_frequency_power(&lv, 1.0, &units).unwrap();
        let l_omega = helicity_apply(&omega_v).unwrap();
        let p = helicity_project(&v, Helicity::Plus).unwrap();
        let m = helicity_project(&v, Helicity::Minus).unwrap();
        let pp = helicity_project(&p, Helicity::Plus).unwrap();
        let pm = helicity_project(&m, Helicity::Plus).unwrap();
        let half = apply_frequency_power(&v, 0.5, &units).unwrap();
        let half_half = apply_frequency_power(&half, 0.5, &units).unwrap();
        let scale = v.max_abs();
        let errs = [
            rel(&llv, &v),
            rel(&curl_c, &omega_l),
            rel(&l_omega, &omega_l),
            rel(&pp, &p),
            rel(&p.add(&m).unwrap(), &v),
            pm.max_abs() / scale,
            rel(&half_half, &omega_v),
        ];
        worst = errs.iter().copied().fold(worst, f64::max);
    }
    check(worst < 1e-10, || format!("max rel err {worst:.2e} on {fields} fields"))?;
    Ok(format!("{fields} random transverse 64^3 fields, max rel err {worst:.2e}"))
}

fn criterion_2() -> Outcome {
    let units = UnitsConfig::new(2.5, 1.3, 0.7).unwrap();
    let mut rng = rng(2);
    let mut round = 0.0f64;
    let mut inner = 0.0f64;
    let line = Grid::line(16.0, 4096).unwrap();
    let cube = Grid::cube(8.0, 32).unwrap();
    let mut pairs = Vec::new();
    for _ in 0..20 {
        pairs.push((random_line_field(&mut rng, line, 300), random_line_field(&mut rng, line, 300)));
    }
    for _ in 0..5 {
        let k = 0.5 * std::f64::consts::PI * 32.0 / 8.0;
        pairs.push((
            random_transverse_field(&mut rng, cube, k),
            random_transverse_field(&mut rng, cube, k),
        ));
    }
    for (a, b) in pairs {
        let sa = LpState::new(a, units).unwrap();
        let sb = LpState::new(b, units).unwrap();
        let fa = bb_from_lp(&sa).unwrap();
        let fb = bb_from_lp(&sb).unwrap();
        round = round.max(rel(lp_from_bb(&fa).unwrap().psi(), sa.psi()));
        let lhs = bb_inner(&fa, &fb).unwrap();
        let rhs = lp_inner(&sa, &sb).unwrap() * units.hbar;
        inner = inner.max((lhs - rhs).norm() / (sa.norm() * sb.norm() * units.hbar));
    }
    check(round < 1e-11, || format!("round trip {round:.2e}"))?;
    check(inner < 1e-10, || format!("inner products {inner:.2e}"))?;
    Ok(format!("25 state pairs (1D and 3D): round trip {round:.2e}, inner-product gap {inner:.2e}"))
}

fn criterion_3(ctx: &Context) -> Outcome {
    let s = &ctx.states;
    let mut worst = [
        energy_density(&s.lp_compact).unwrap(),
        energy_density(&s.lp_extended).unwrap(),
        energy_density(&s.bb_compact).unwrap(),
    ]
    .iter()
    .map(|m| m.path_discrepancy.unwrap())
    .fold(0.0f64, f64::max);
    let fig = worst;
    let mut rng = rng(3);
    let line = Grid::line(16.0, 4096).unwrap();
    for i in 0..20 {
        let psi = random_line_field(&mut rng, line, 200 + 40 * i);
        let state = normalize(&LpState::new(psi, UnitsConfig::default()).unwrap()).unwrap();
        worst = worst.max(energy_density(&state).unwrap().path_discrepancy.unwrap());
    }
    check(worst < 1e-10, || format!("discrepancy {worst:.2e}"))?;
    Ok(format!("figure states {fig:.2e}, with 20 random states {worst:.2e}"))
}

fn criterion_4(ctx: &Context) -> Outcome {
    let mut parseval = 0.0f64;
    let s = &ctx.states;
    let pairs = [
        (total_energy(&energy_density(&s.lp_compact).unwrap()), lp_energy(&s.lp_compact).unwrap()),
        (total_energy(&energy_density(&s.lp_extended).unwrap()), lp_energy(&s.lp_extended).unwrap()),
        (total_energy(&energy_density(&s.bb_compact).unwrap()), lp_energy(&s.bb_compact).unwrap()),
    ];
    for (a, b) in pairs {
        parseval = parseval.max((a - b).abs() / b);
    }
    let mut rng = rng(4);
    let line = Grid::line(16.0, 4096).unwrap();
    for _ in 0..10 {
        let st = LpState::new(random_line_field(&mut rng, line, 400), UnitsConfig::default()).unwrap();
        let a = total_energy(&energy_density(&st).unwrap());
        let b = lp_energy(&st).unwrap();
        parseval = parseval.max((a - b).abs() / b);
    }
    check(parseval < 1e-8, || format!("Parseval gap {parseval:.2e}"))?;

    let units = UnitsConfig::default();
    let packet = narrowband_packet(line, 10.0, 0.05, &units).unwrap();
    let total = total_energy(&energy_density(&packet).unwrap());
    let (k0, rel_bw) = (10.0, 0.05);
    let oracle = narrowband_energy_oracle(k0, 1.0 / (2.0 * rel_bw * k0), units.hbar, units.c);
    check((total - 10.0).abs() < 0.05, || format!("narrowband total {total}"))?;
    check((total - oracle).abs() < 1e-6 * oracle, || format!("narrowband total {total} vs oracle {oracle}"))?;
    Ok(format!(
        "Parseval gap {parseval:.2e}; narrowband total {total:.6} (oracle {oracle:.6})"
    ))
}

fn criterion_5(ctx: &Context) -> Outcome {
    let dx = ctx.grid().spacing();
    let floor = PHYSICAL_ZERO;
    let support = |label, curve| support_estimate(&ctx.curve_field(label, curve), 1e-10).unwrap().half_width();
    let ext = |label: char, curve| ctx.dataset.panel(label).unwrap().extended_at(curve, 2.0, floor);

    let a_lp = support('a', Curve::Lp);
    check((a_lp - 0.5).abs() <= dx, || format!("(a) LP support half-width {a_lp}"))?;
    check(ext('a', Curve::Bb) && ext('a', Curve::Energy), || "(a) BB or energy not extended".into())?;
    check(
        ext('b', Curve::Lp) && ext('b', Curve::Bb) && ext('b', Curve::Energy),
        || "(b) a curve is not extended".into(),
    )?;
    let c_bb = support('c', Curve::Bb);
    check((c_bb - 0.5).abs() <= dx, || format!("(c) BB support half-width {c_bb}"))?;
    check(ext('c', Curve::Lp) && ext('c', Curve::Energy), || "(c) LP or energy not extended".into())?;
    Ok(format!(
        "(a) LP half-width {a_lp:.4}, (c) BB half-width {c_bb:.4} (spacing {dx:.4}); extended curves exceed 1e-8 x peak at |x| = 2"
    ))
}

fn criterion_6(ctx: &Context) -> Outcome {
    let mut minima = Vec::new();
    let mut cells = Vec::new();
    for (label, source) in [
        ('a', support_estimate(&ctx.curve_field('a', Curve::Lp), 1e-10).unwrap().region),
        ('b', DetectorVolume::centered_interval(0.0, 0.5 * ctx.scenario.pulse_length)),
        ('c', support_estimate(&ctx.curve_field('c', Curve::Bb), 1e-10).unwrap().region),
    ] {
        let map = ctx.panel_map(label);
        let min = map.values.iter().copied().fold(f64::INFINITY, f64::min);
        check(min > 0.0, || format!("({label}) energy minimum {min:e}"))?;
        let report = knight_locality_test(&map, &source, None).unwrap();
        check(report.verdict == Verdict::Distinguishable, || format!("({label}) Knight verdict {:?}", report.verdict))?;
        check(report.distinguishable_cells == report.probe_cells, || {
            format!("({label}) {} of {} probe cells above floor", report.distinguishable_cells, report.probe_cells)
        })?;
        minima.push(format!("{label}:{:.2e}", min / map.peak()));
        cells.push(report.probe_cells);
    }
    Ok(format!(
        "relative energy minima [{}]; every probe cell distinguishable ({:?} cells)",
        minima.join(", "),
        cells
    ))
}

fn criterion_7(ctx: &Context) -> Outcome {
    let l = ctx.scenario.pulse_length;
    let map = ctx.panel_map('a');
    let fit = tail_exponent_fit(&map, TailWindow { r_min: 2.0 * l, r_max: 6.0 * l }).unwrap();
    let p = fit.exponent();
    let xs: Vec<f64> = (0..=16).map(|i| 2.0 + 0.25 * i as f64).collect();
    let oracle: Vec<(f64, f64)> = xs.iter().map(|&x| (x, sin2_energy_oracle(x, l, 3000.0))).collect();
    let p_oracle = log_log_slope(&oracle);
    let at5 = ctx.dataset.panel('a').unwrap().value_at(Curve::Energy, 5.0);
    let o5 = sin2_energy_oracle(5.0, l, 3000.0);
    check((p + 3.0).abs() <= 0.3, || format!("fitted exponent {p:.3}"))?;
    check((p - p_oracle).abs() <= 0.3, || format!("fitted {p:.3} vs oracle {p_oracle:.3}"))?;
    check((at5 - o5).abs() < 0.05 * o5, || format!("density at x=5 {at5:e} vs oracle {o5:e}"))?;

    let g = Grid::line(64.0, 4096).unwrap();
    let synth = EnergyDensityMap {
        grid: g,
        values: g.coordinates().iter().map(|x| (-2.0 * x.abs().sqrt()).exp()).collect(),
        source_path: EnergyPath::Bb,
        path_discrepancy: None,
    };
    let sfit = tail_exponent_fit(&synth, TailWindow { r_min: 2.0, r_max: 25.0 }).unwrap();
    let (a, gamma) = match sfit.stretched.model {
        photonloc::locality::TailModel::StretchedExponential { a, gamma, .. } => (a, gamma),
        _ => unreachable!(),
    };
    check((gamma - 0.5).abs() <= 0.05 && (a - 2.0).abs() <= 0.1, || format!("stretched fit A={a:.3}, gamma={gamma:.3}"))?;
    Ok(format!(
        "panel (a) tail exponent {p:.3} (oracle {p_oracle:.3}, r2 {:.5}); synthetic stretched fit gamma {gamma:.3}, A {a:.3}",
        fit.power_law.goodness
    ))
}

fn criterion_8() -> Outcome {
    let grid = Grid::line(16.0, 4096).unwrap();
    let units = UnitsConfig::default();
    let xi = sin2_balanced_profile(grid, 1.0).unwrap();
    let region = DetectorVolume::centered_interval(0.0, 0.5);
    let built = vector_potential_localized_state(&xi, &region, &units).unwrap();
    check(built.deviation_inside < 1e-10, || format!("inside deviation {:.2e}", built.deviation_inside))?;
    check(built.deviation_outside < 1e-10, || format!("outside deviation {:.2e}", built.deviation_outside))?;
    let map = energy_density(&built.state).unwrap();
    let floor = 1e-12 * map.peak();
    let (left, right) = (map.value_at(-2.5), map.value_at(2.5));
    check(left > floor && right > floor, || format!("density at distance 2: {left:e}, {right:e}"))?;
    Ok(format!(
        "recovery deviation inside {:.2e}, outside {:.2e}; density at distance 2 is {:.2e} x peak",
        built.deviation_inside,
        built.deviation_outside,
        left.min(right) / map.peak()
    ))
}

fn criterion_9(ctx: &Context) -> Outcome {
    let grid = Grid::line(16.0, 4096).unwrap();
    let units = UnitsConfig::default();
    let l = 1.0;
    let mut rng = rng(9);
    let mut weakest = f64::INFINITY;
    for _ in 0..20 {
        let v = random_compact_field(&mut rng, grid, l);
        let scan = antilocality_scan(&v, l / 20.0, &units, PHYSICAL_ZERO).unwrap();
        check(scan.holds, || format!("vanishing window {:?}", scan.weakest_window))?;
        weakest = weakest.min(scan.min_window_max);
    }
    let profile = sin2_balanced_profile(grid, l).unwrap();
    let w = antilocality_witness(&profile, &DetectorVolume::Interval { lo: 1.0, hi: 2.0 }, &units, PHYSICAL_ZERO).unwrap();
    check(w.max_v < 1e-14 * w.peak_v && w.max_omega_v > 1e-4 * w.peak_omega_v && w.holds, || format!("{w:?}"))?;

    let s = &ctx.states;
    let extent = ctx.scenario.domain_length;
    let fields = [
        s.lp_compact.psi().clone(),
        s.lp_compact.bb_field().unwrap(),
        s.lp_extended.psi().clone(),
        s.lp_extended.bb_field().unwrap(),
        s.bb_compact.lp_field().unwrap(),
        s.bb_compact.field().clone(),
    ];
    let mut scans = 0;
    let mut helicity_min = f64::INFINITY;
    for f in &fields {
        let scale = f.max_abs();
        for h in [Helicity::Plus, Helicity::Minus] {
            let part = helicity_project(f, h).unwrap();
            let r = helicity_vanishing_scan_within(&part, 4.0 * f.grid().spacing(), Some(scale), extent).unwrap();
            check(!r.identically_zero && r.holds, || format!("helicity scan of field {} {h:?}: {r:?}", scans / 2))?;
            helicity_min = helicity_min.min(r.min_window_max);
            scans += 1;
        }
    }
    Ok(format!(
        "20 compact fields, weakest joint window {weakest:.2e}; {scans} helicity components, smallest window max {helicity_min:.2e}"
    ))
}

fn criterion_10(ctx: &Context) -> Outcome {
    let csv_bytes = |d: &Fig2Dataset| {
        let mut out = Vec::new();
        for p in &d.panels {
            write_panel_csv(p, &mut out).unwrap();
        }
        out
    };
    let again = figure2_report(&ctx.scenario).unwrap();
    check(csv_bytes(&again) == csv_bytes(&ctx.dataset), || "figure CSV differs between runs".into())?;
    let json = |d: &Fig2Dataset| serde_json::to_vec(d).unwrap();
    check(json(&again) == json(&ctx.dataset), || "figure JSON differs between runs".into())?;

    let mut norm_err = 0.0f64;
    let mut energy_err = 0.0f64;
    let mut back_err = 0.0f64;
    let mut run = |state: AnyState| {
        let e0 = total_energy(&energy_density(&state).unwrap());
        for t in [0.37, 2.5, 11.0] {
            let fwd = evolve(&state, t);
            norm_err = norm_err.max((fwd.norm() - state.norm()).abs() / state.norm());
            let e1 = total_energy(&energy_density(&fwd).unwrap());
            energy_err = energy_err.max((e1 - e0).abs() / e0);
            back_err = back_err.max(rel(evolve(&fwd, -t).field(), state.field()));
        }
    };
    let s = &ctx.states;
    run(s.lp_compact.clone().into());
    run(s.lp_extended.clone().into());
    run(s.bb_compact.clone().into());
    let mut rng = rng(10);
    let line = Grid::line(16.0, 4096).unwrap();
    for _ in 0..5 {
        run(LpState::new(random_line_field(&mut rng, line, 300), UnitsConfig::default()).unwrap().into());
    }
    check(norm_err < 1e-10, || format!("norm drift {norm_err:.2e}"))?;
    check(energy_err < 1e-10, || format!("energy drift {energy_err:.2e}"))?;
    check(back_err < 1e-12, || format!("evolve(-t) after evolve(t) off by {back_err:.2e}"))?;
    Ok(format!(
        "byte-identical reruns; norm drift {norm_err:.2e}, energy drift {energy_err:.2e}, reversal {back_err:.2e}"
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let ctx = Context::new();
    println!("figure states built in {:.1}s", start.elapsed().as_secs_f64());

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("operator algebra", Box::new(criterion_1)),
        ("LP/BB isomorphism", Box::new(criterion_2)),
        ("two-path energy equality", Box::new(|| criterion_3(&ctx))),
        ("Parseval energy", Box::new(|| criterion_4(&ctx))),
        ("figure truth table", Box::new(|| criterion_5(&ctx))),
        ("nonlocality floor", Box::new(|| criterion_6(&ctx))),
        ("tail quantification", Box::new(|| criterion_7(&ctx))),
        ("vector-potential-local state", Box::new(criterion_8)),
        ("lemma corroboration", Box::new(|| criterion_9(&ctx))),
        ("determinism and evolution", Box::new(|| criterion_10(&ctx))),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        criteria.len() - failures,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
