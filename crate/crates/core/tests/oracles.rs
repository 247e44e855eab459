mod common;

use common::*;
use photonloc::locality::{antilocality_witness, support_estimate, vector_potential_localized_state, PHYSICAL_ZERO};
use photonloc::representations::riemann_silberstein_residual;
use photonloc::scenarios::{
    make_bb_compact, make_lp_compact, make_lp_extended, narrowband_packet, sin2_balanced_profile, sin2_profile,
};
use photonloc::*;

#[test]
fn transform_of_sin2_profile_matches_closed_form() {
    let grid = Grid::line(16.0, 4096).unwrap();
    let profile = sin2_profile(grid, 1.0).unwrap();
    let norm = (3.0f64 / 8.0).sqrt();
    let spectrum = forward_transform(&profile);
    for m in [0isize, 1, 5, 16, 40, -7] {
        let idx = grid.mode_flat_index([m, 0, 0]).unwrap();
        let k = grid.wavenumber(idx);
        let expect = cos2_transform(k, 1.0) / norm;
        let got = spectrum.component(0)[idx];
        assert!((got.re - expect).abs() < 1e-5 * cos2_transform(0.0, 1.0), "m={m}: {got} vs {expect}");
        assert!(got.im.abs() < 1e-12);
    }
}

#[test]
fn compact_state_tail_matches_kernel_quadrature() {
    // free-space tail: compute on a box much longer than the probe point
    let grid = Grid::line(512.0, 131072).unwrap();
    let state = make_lp_compact(grid, 1.0, &UnitsConfig::default()).unwrap();
    let map = energy_density(&state).unwrap();
    for x in [2.0, 5.0] {
        let got = map.value_at(x);
        let oracle = sin2_energy_oracle(x, 1.0, 3000.0);
        assert!((got - oracle).abs() < 0.05 * oracle, "x={x}: {got:e} vs {oracle:e}");
    }
}

#[test]
fn narrowband_energy_matches_momentum_quadrature() {
    let units = UnitsConfig::new(1.0, 2.0, 1.0).unwrap();
    let grid = Grid::line(64.0, 4096).unwrap();
    let packet = narrowband_packet(grid, 10.0, 0.05, &units).unwrap();
    let k0 = 10.0 / units.c;
    let oracle = narrowband_energy_oracle(k0, 1.0 / (2.0 * 0.05 * k0), units.hbar, units.c);
    let total = total_energy(&energy_density(&packet).unwrap());
    assert!((total - oracle).abs() < 1e-6 * oracle, "{total} vs {oracle}");
    assert!((total - 10.0).abs() < 0.05);
}

#[test]
fn momentum_amplitudes_carry_the_norm() {
    let mut r = rng(11);
    let grid = Grid::cube(8.0, 16).unwrap();
    let v = random_transverse_field(&mut r, grid, 4.0);
    let amps = momentum_amplitudes(&v).unwrap();
    assert!((amps.norm_sq() - v.norm_sq()).abs() < 1e-12 * v.norm_sq());
    let back = synthesize_from_amplitudes(&amps, &grid).unwrap();
    assert!(rel(&back, &v) < 1e-12);
}

#[test]
fn potentials_and_fields_give_the_same_bb_state() {
    let mut r = rng(12);
    let grid = Grid::cube(8.0, 32).unwrap();
    let units = UnitsConfig::new(1.3, 0.8, 2.0).unwrap();
    let e = random_real_transverse_field(&mut r, grid, 6.0);
    let a = random_real_transverse_field(&mut r, grid, 6.0);
    let b = curl(&a).unwrap().real_part().mark_transverse().unwrap();
    let via_lp = bb_from_lp(&lp_from_potentials(&EmFields::new(e.clone(), a).unwrap(), &units).unwrap()).unwrap();
    let via_em = bb_from_em(&e, &b, &units).unwrap();
    assert!(rel(via_lp.field(), via_em.field()) < 1e-12);
    assert!(riemann_silberstein_residual(&via_em, &e, &b).unwrap() < 1e-12);
}

#[test]
fn figure_states_have_the_stated_shapes() {
    let grid = Grid::line(128.0, 32768).unwrap();
    let units = UnitsConfig::default();
    let two_l = 2.0;

    let a = make_lp_compact(grid, 1.0, &units).unwrap();
    let fa = a.bb_field().unwrap();
    let at = |f: &SpectralField, x: f64| {
        let i = ((x + 64.0) / grid.spacing()).round() as usize;
        f.component(0)[i].norm()
    };
    assert!(at(&fa, two_l) > PHYSICAL_ZERO * fa.max_abs());
    assert!(energy_density(&a).unwrap().value_at(two_l) > 0.0);

    let b = make_lp_extended(grid, 1.0, &units).unwrap();
    assert!((b.norm() - 1.0).abs() < 1e-12);
    assert!(at(b.psi(), two_l) > PHYSICAL_ZERO * b.psi().max_abs());

    let c = make_bb_compact(grid, 1.0, &units).unwrap();
    let sup = support_estimate(c.field(), 1e-10).unwrap();
    assert!((sup.half_width() - 0.5).abs() <= grid.spacing());
    let lp = lp_from_bb(&c).unwrap();
    assert!(at(lp.psi(), two_l) > PHYSICAL_ZERO * lp.psi().max_abs());
    assert!(energy_density(&c).unwrap().value_at(two_l) > 0.0);
}

#[test]
fn compact_states_are_distinguishable_outside_their_support() {
    let grid = Grid::line(16.0, 4096).unwrap();
    let units = UnitsConfig::default();
    let a = make_lp_compact(grid, 1.0, &units).unwrap();
    let src = support_estimate(a.psi(), 1e-10).unwrap().region;
    let r = knight_locality_test(&energy_density(&a).unwrap(), &src, None).unwrap();
    assert_eq!(r.verdict, Verdict::Distinguishable);

    let c = make_bb_compact(grid, 1.0, &units).unwrap();
    let src = support_estimate(c.field(), 1e-10).unwrap().region;
    let r = knight_locality_test(&energy_density(&c).unwrap(), &src, None).unwrap();
    assert_eq!(r.verdict, Verdict::Distinguishable);
}

#[test]
fn vector_potential_local_state_is_energy_nonlocal() {
    let grid = Grid::line(16.0, 4096).unwrap();
    let units = UnitsConfig::default();
    let xi = sin2_balanced_profile(grid, 1.0).unwrap();
    let region = DetectorVolume::centered_interval(0.0, 0.5);
    let built = vector_potential_localized_state(&xi, &region, &units).unwrap();
    assert!(built.recovered_outside < 1e-10);

    // the potential vanishes outside R while the pair (ψ, Ωψ) does not
    let outside = DetectorVolume::Interval { lo: 1.5, hi: 3.0 };
    let w = antilocality_witness(built.state.psi(), &outside, &units, PHYSICAL_ZERO).unwrap();
    assert!(w.holds);
    let map = energy_density(&built.state).unwrap();
    assert!(map.value_at(2.0) > 1e-12 * map.peak());
}

#[test]
fn sin2_profile_is_continuous_at_its_edges() {
    let grid = Grid::line(16.0, 4096).unwrap();
    let p = sin2_profile(grid, 1.0).unwrap();
    let dx = grid.spacing();
    let edge = grid.points() / 2 + 128;
    let inside = p.component(0)[edge - 1].re;
    let peak = p.max_abs();
    assert!(inside < 20.0 * dx * dx * peak);
}
