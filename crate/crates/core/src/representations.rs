//! Landau–Peierls and Białynicki-Birula single-photon pulse states.
//!
//! An LP state carries `ψ` with the plain inner product `∫ψ*·ψ'`; a BB state
//! carries `F = i√ħ Ω^{1/2} ψ` with `∫F*·Ω^{-1}F'`. Both evolve under the
//! same multiplier `e^{-iω_k t}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{
    apply_frequency_power, apply_frequency_power_unchecked, check_zero_mode, evolve_field, helicity_apply, helicity_project, transversality_residual,
    Domain, Helicity, SpectralField, UnitsConfig, TRANSVERSE_TOLERANCE,
};

/// Largest imaginary residual, relative to the peak, accepted for a real field.
pub const REALITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Lp,
    Bb,
}

fn check_real(field: &SpectralField) -> Result<()> {
    let residual = field.imag_residual();
    if residual >= REALITY_TOLERANCE {
        return Err(Error::NotReal { residual });
    }
    Ok(())
}

fn check_transverse(field: &SpectralField) -> Result<()> {
    if field.grid().dim() == 3 {
        let residual = transversality_residual(field);
        if residual >= TRANSVERSE_TOLERANCE {
            return Err(Error::Transversality { residual });
        }
    }
    Ok(())
}

fn same_setting(a: &SpectralField, ua: &UnitsConfig, b: &SpectralField, ub: &UnitsConfig) -> Result<()> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    if ua != ub {
        return Err(Error::UnitsMismatch);
    }
    Ok(())
}

/// Real electromagnetic data in Coulomb gauge: electric field `E`, vector
/// potential `A` and, optionally, the magnetic field `B`. When `B` is absent
/// it is derived as `∇×A` (3D only).
#[derive(Debug, Clone)]
pub struct EmFields {
    electric: SpectralField,
    potential: SpectralField,
    magnetic: Option<SpectralField>,
}

impl EmFields {
    pub fn new(electric: SpectralField, potential: SpectralField) -> Result<Self> {
        if electric.grid() != potential.grid() {
            return Err(Error::GridMismatch);
        }
        for f in [&electric, &potential] {
            check_real(f)?;
            check_transverse(f)?;
        }
        let electric = electric.to_position();
        let potential = potential.to_position();
        let flag = electric.grid().dim() == 3;
        Ok(Self {
            electric: electric.with_transverse(flag),
            potential: potential.with_transverse(flag),
            magnetic: None,
        })
    }

    pub fn with_magnetic(mut self, magnetic: SpectralField) -> Result<Self> {
        if magnetic.grid() != self.electric.grid() {
            return Err(Error::GridMismatch);
        }
        check_real(&magnetic)?;
        check_transverse(&magnetic)?;
        self.magnetic = Some(magnetic.to_position());
        Ok(self)
    }

    pub fn electric(&self) -> &SpectralField {
        &self.electric
    }

    pub fn potential(&self) -> &SpectralField {
        &self.potential
    }

    pub fn magnetic(&self) -> Result<SpectralField> {
        match &self.magnetic {
            Some(b) => Ok(b.clone()),
            None => Ok(crate::spectral::curl(&self.potential)?.to_position()),
        }
    }
}

/// Landau–Peierls state `ψ`, kept in the position domain.
#[derive(Debug, Clone, PartialEq)]
pub struct LpState {
    psi: SpectralField,
    units: UnitsConfig,
    norm: f64,
}

impl LpState {
    pub fn new(psi: SpectralField, units: UnitsConfig) -> Result<Self> {
        units.validate()?;
        check_transverse(&psi)?;
        let flag = psi.grid().dim() == 3;
        let psi = psi.to_position().with_transverse(flag);
        Ok(Self::from_checked(psi, units))
    }

    fn from_checked(psi: SpectralField, units: UnitsConfig) -> Self {
        let psi = psi.to_position();
        let norm = psi.norm_sq().sqrt();
        Self { psi, units, norm }
    }

    pub fn psi(&self) -> &SpectralField {
        &self.psi
    }
}

/// Białynicki-Birula state `F`, kept in the position domain.
///
/// Construction requires a negligible zero mode: the BB norm involves `Ω^{-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BbState {
    f: SpectralField,
    units: UnitsConfig,
    norm: f64,
}

impl BbState {
    pub fn new(f: SpectralField, units: UnitsConfig) -> Result<Self> {
        units.validate()?;
        check_transverse(&f)?;
        check_zero_mode(&f)?;
        let flag = f.grid().dim() == 3;
        Ok(Self::from_checked(f.with_transverse(flag), units))
    }

    fn from_checked(f: SpectralField, units: UnitsConfig) -> Self {
        let norm = bb_norm_sq(&f, &units).sqrt();
        Self {
            f: f.to_position(),
            units,
            norm,
        }
    }

    pub fn field(&self) -> &SpectralField {
        &self.f
    }
}

// ∫F*·Ω^{-1}F' on frequency samples, zero mode excluded.
fn bb_form(a: &SpectralField, b: &SpectralField, units: &UnitsConfig) -> Complex64 {
    let grid = *a.grid();
    let fa = a.to_frequency();
    let fb = b.to_frequency();
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 1..grid.len() {
        let k = grid.wavevector(m);
        let omega = units.c * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        let mut dot = Complex64::new(0.0, 0.0);
        for c in 0..fa.n_components() {
            dot += fa.component(c)[m].conj() * fb.component(c)[m];
        }
        acc += dot / omega;
    }
    acc * grid.mode_volume()
}

fn bb_norm_sq(f: &SpectralField, units: &UnitsConfig) -> f64 {
    bb_form(f, f, units).re
}

/// Common surface of LP and BB states.
pub trait PhotonState: Clone {
    fn representation(&self) -> Representation;

    /// The stored pulse function (`ψ` or `F`), position domain.
    fn field(&self) -> &SpectralField;

    fn units(&self) -> &UnitsConfig;

    /// Norm in the state's own inner product.
    fn norm(&self) -> f64;

    /// `ψ` of the same physical state.
    fn lp_field(&self) -> Result<SpectralField>;

    /// `F` of the same physical state.
    fn bb_field(&self) -> Result<SpectralField>;

    /// Same state kind and units with a new pulse function of identical
    /// structure (grid, transversality, zero mode). Recomputes the norm.
    fn with_field(&self, field: SpectralField) -> Self;
}

impl PhotonState for LpState {
    fn representation(&self) -> Representation {
        Representation::Lp
    }

    fn field(&self) -> &SpectralField {
        &self.psi
    }

    fn units(&self) -> &UnitsConfig {
        &self.units
    }

    fn norm(&self) -> f64 {
        self.norm
    }

    fn lp_field(&self) -> Result<SpectralField> {
        Ok(self.psi.clone())
    }

    fn bb_field(&self) -> Result<SpectralField> {
        Ok(lp_to_bb_field(&self.psi, &self.units))
    }

    fn with_field(&self, field: SpectralField) -> Self {
        let flag = self.psi.is_transverse();
        Self::from_checked(field.with_transverse(flag), self.units)
    }
}

impl PhotonState for BbState {
    fn representation(&self) -> Representation {
        Representation::Bb
    }

    fn field(&self) -> &SpectralField {
        &self.f
    }

    fn units(&self) -> &UnitsConfig {
        &self.units
    }

    fn norm(&self) -> f64 {
        self.norm
    }

    fn lp_field(&self) -> Result<SpectralField> {
        bb_to_lp_field(&self.f, &self.units)
    }

    fn bb_field(&self) -> Result<SpectralField> {
        Ok(self.f.clone())
    }

    fn with_field(&self, field: SpectralField) -> Self {
        let flag = self.f.is_transverse();
        Self::from_checked(field.with_transverse(flag), self.units)
    }
}

/// Either representation, as read from a state file.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyState {
    Lp(LpState),
    Bb(BbState),
}

impl From<LpState> for AnyState {
    fn from(s: LpState) -> Self {
        AnyState::Lp(s)
    }
}

impl From<BbState> for AnyState {
    fn from(s: BbState) -> Self {
        AnyState::Bb(s)
    }
}

impl PhotonState for AnyState {
    fn representation(&self) -> Representation {
        match self {
            AnyState::Lp(s) => s.representation(),
            AnyState::Bb(s) => s.representation(),
        }
    }

    fn field(&self) -> &SpectralField {
        match self {
            AnyState::Lp(s) => s.field(),
            AnyState::Bb(s) => s.field(),
        }
    }

    fn units(&self) -> &UnitsConfig {
        match self {
            AnyState::Lp(s) => s.units(),
            AnyState::Bb(s) => s.units(),
        }
    }

    fn norm(&self) -> f64 {
        match self {
            AnyState::Lp(s) => s.norm(),
            AnyState::Bb(s) => s.norm(),
        }
    }

    fn lp_field(&self) -> Result<SpectralField> {
        match self {
            AnyState::Lp(s) => s.lp_field(),
            AnyState::Bb(s) => s.lp_field(),
        }
    }

    fn bb_field(&self) -> Result<SpectralField> {
        match self {
            AnyState::Lp(s) => s.bb_field(),
            AnyState::Bb(s) => s.bb_field(),
        }
    }

    fn with_field(&self, field: SpectralField) -> Self {
        match self {
            AnyState::Lp(s) => AnyState::Lp(s.with_field(field)),
            AnyState::Bb(s) => AnyState::Bb(s.with_field(field)),
        }
    }
}

fn lp_to_bb_field(psi: &SpectralField, units: &UnitsConfig) -> SpectralField {
    let f = apply_frequency_power_unchecked(psi, 0.5, units);
    f.scaled(Complex64::new(0.0, units.hbar.sqrt())).to_position()
}

fn bb_to_lp_field(f: &SpectralField, units: &UnitsConfig) -> Result<SpectralField> {
    let psi = apply_frequency_power(f, -0.5, units)?;
    Ok(psi.scaled(Complex64::new(0.0, -1.0 / units.hbar.sqrt())).to_position())
}

/// `ψ = √(ε0/2ħ) [Ω^{1/2}A - iΩ^{-1/2}E]`.
pub fn lp_from_potentials(em: &EmFields, units: &UnitsConfig) -> Result<LpState> {
    units.validate()?;
    let a = apply_frequency_power(em.potential(), 0.5, units)?;
    let e = apply_frequency_power(em.electric(), -0.5, units)?;
    let pref = (units.eps0 / (2.0 * units.hbar)).sqrt();
    let psi = a.sub(&e.scaled(Complex64::new(0.0, 1.0)))?;
    LpState::new(psi.scaled(Complex64::new(pref, 0.0)), *units)
}

/// The isomorphism `F = i√ħ Ω^{1/2} ψ`.
pub fn bb_from_lp(lp: &LpState) -> Result<BbState> {
    let f = lp.bb_field()?;
    let flag = f.grid().dim() == 3;
    Ok(BbState::from_checked(f.with_transverse(flag), lp.units))
}

/// Inverse isomorphism `ψ = -i ħ^{-1/2} Ω^{-1/2} F`.
pub fn lp_from_bb(bb: &BbState) -> Result<LpState> {
    let psi = bb.lp_field()?;
    let flag = psi.grid().dim() == 3;
    Ok(LpState::from_checked(psi.with_transverse(flag), bb.units))
}

/// `F = √(ε0/2) (E + icΛB)` from real transverse `E` and `B`.
pub fn bb_from_em(electric: &SpectralField, magnetic: &SpectralField, units: &UnitsConfig) -> Result<BbState> {
    units.validate()?;
    if electric.grid() != magnetic.grid() {
        return Err(Error::GridMismatch);
    }
    for f in [electric, magnetic] {
        check_real(f)?;
        check_transverse(f)?;
    }
    let lb = helicity_apply(magnetic)?;
    let f = electric.add(&lb.scaled(Complex64::new(0.0, units.c)))?;
    BbState::new(f.scaled(Complex64::new((units.eps0 / 2.0).sqrt(), 0.0)), *units)
}

/// Riemann–Silberstein vector `F_RS = √(ε0/2) (E + icB)`.
pub fn riemann_silberstein_vector(
    electric: &SpectralField,
    magnetic: &SpectralField,
    units: &UnitsConfig,
) -> Result<SpectralField> {
    let f = electric.add(&magnetic.scaled(Complex64::new(0.0, units.c)))?;
    Ok(f.scaled(Complex64::new((units.eps0 / 2.0).sqrt(), 0.0)).to_position())
}

/// Positive- and negative-helicity parts of a field.
#[derive(Debug, Clone, PartialEq)]
pub struct HelicityPair {
    pub plus: SpectralField,
    pub minus: SpectralField,
}

impl HelicityPair {
    pub fn split(field: &SpectralField) -> Result<Self> {
        Ok(Self {
            plus: helicity_project(field, Helicity::Plus)?.to_position(),
            minus: helicity_project(field, Helicity::Minus)?.to_position(),
        })
    }

    pub fn get(&self, h: Helicity) -> &SpectralField {
        match h {
            Helicity::Plus => &self.plus,
            Helicity::Minus => &self.minus,
        }
    }

    pub fn sum(&self) -> Result<SpectralField> {
        self.plus.add(&self.minus)
    }
}

/// `(F^{(h+)}, F^{(h-)})`.
pub fn riemann_silberstein_split(bb: &BbState) -> Result<HelicityPair> {
    HelicityPair::split(&bb.f)
}

/// Largest relative violation of `F^{(h+)} = F_RS^{(h+)}` and
/// `F^{(h-)} = (F_RS^{(h-)})*` for a BB state built from real `E`, `B`.
pub fn riemann_silberstein_residual(
    bb: &BbState,
    electric: &SpectralField,
    magnetic: &SpectralField,
) -> Result<f64> {
    let pair = riemann_silberstein_split(bb)?;
    let rs = riemann_silberstein_vector(electric, magnetic, &bb.units)?.with_transverse(true);
    let rs_pair = HelicityPair::split(&rs)?;
    let scale = bb.f.max_abs();
    let plus = pair.plus.max_abs_diff(&rs_pair.plus)?;
    let minus = pair.minus.max_abs_diff(&rs_pair.minus.conj())?;
    Ok(plus.max(minus) / scale)
}

/// `⟨ψ|ψ'⟩_LP = ∫ψ*·ψ'`.
pub fn lp_inner(a: &LpState, b: &LpState) -> Result<Complex64> {
    same_setting(&a.psi, &a.units, &b.psi, &b.units)?;
    a.psi.inner(&b.psi)
}

/// `⟨F|F'⟩_BB = ∫F*·Ω^{-1}F'`.
pub fn bb_inner(a: &BbState, b: &BbState) -> Result<Complex64> {
    same_setting(&a.f, &a.units, &b.f, &b.units)?;
    check_zero_mode(&a.f)?;
    check_zero_mode(&b.f)?;
    Ok(bb_form(&a.f, &b.f, &a.units))
}

/// Rescales to unit norm in the state's own inner product.
pub fn normalize<S: PhotonState>(state: &S) -> Result<S> {
    let norm = state.norm();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::ZeroState);
    }
    Ok(state.with_field(state.field().scaled(Complex64::new(1.0 / norm, 0.0))))
}

/// Free evolution `i∂_t ψ = Ωψ`, the same multiplier for LP and BB states.
pub fn evolve<S: PhotonState>(state: &S, t: f64) -> S {
    let out = evolve_field(state.field(), t, state.units()).to_domain(Domain::Position);
    state.with_field(out)
}
