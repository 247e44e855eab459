use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operators::{transversality_residual, TRANSVERSE_TOLERANCE};
use super::transform::{forward_transform, inverse_transform};
use super::Grid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Position,
    Frequency,
}

/// Complex field sampled on a [`Grid`]: one component in 1D, three in 3D.
///
/// The `transverse` flag records that the field has been checked (or built)
/// to satisfy `k·ṽ(k) = 0`; it is only meaningful in 3D.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    components: Vec<Vec<Complex64>>,
    domain: Domain,
    transverse: bool,
}

impl SpectralField {
    pub fn new(grid: Grid, components: Vec<Vec<Complex64>>, domain: Domain) -> Result<Self> {
        if components.len() != grid.components() {
            return Err(Error::ComponentCount {
                dim: grid.dim(),
                expected: grid.components(),
                found: components.len(),
            });
        }
        if let Some(c) = components.iter().find(|c| c.len() != grid.len()) {
            return Err(Error::InvalidArgument(format!(
                "component has {} samples, grid has {}",
                c.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            components,
            domain,
            transverse: false,
        })
    }

    pub(crate) fn from_parts(
        grid: Grid,
        components: Vec<Vec<Complex64>>,
        domain: Domain,
        transverse: bool,
    ) -> Self {
        debug_assert_eq!(components.len(), grid.components());
        Self {
            grid,
            components,
            domain,
            transverse,
        }
    }

    pub fn zeros(grid: Grid, domain: Domain) -> Self {
        let components = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; grid.components()];
        Self::from_parts(grid, components, domain, grid.dim() == 3)
    }

    /// 1D position-domain field from a function of `x`.
    pub fn scalar_from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        if grid.dim() != 1 {
            return Err(Error::Dimension {
                expected: 1,
                found: grid.dim(),
            });
        }
        let values = (0..grid.len()).map(|i| f(grid.coordinate(i))).collect();
        Ok(Self::from_parts(grid, vec![values], Domain::Position, false))
    }

    /// 1D position-domain field with real samples.
    pub fn from_real(grid: Grid, values: &[f64]) -> Result<Self> {
        if grid.dim() != 1 {
            return Err(Error::Dimension {
                expected: 1,
                found: grid.dim(),
            });
        }
        let values = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self::new(grid, vec![values], Domain::Position)
    }

    /// 3D position-domain field from a function of the sample position.
    pub fn vector_from_fn(grid: Grid, f: impl Fn([f64; 3]) -> [Complex64; 3]) -> Result<Self> {
        if grid.dim() != 3 {
            return Err(Error::Dimension {
                expected: 3,
                found: grid.dim(),
            });
        }
        let mut components: Vec<Vec<Complex64>> = (0..3).map(|_| Vec::with_capacity(grid.len())).collect();
        for flat in 0..grid.len() {
            let v = f(grid.position(flat));
            for (c, comp) in components.iter_mut().enumerate() {
                comp.push(v[c]);
            }
        }
        Ok(Self::from_parts(grid, components, Domain::Position, false))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn is_transverse(&self) -> bool {
        self.transverse
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.components
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.components[c]
    }

    pub fn into_components(self) -> Vec<Vec<Complex64>> {
        self.components
    }

    /// Checks the transversality invariant and sets the flag.
    pub fn mark_transverse(mut self) -> Result<Self> {
        if self.grid.dim() == 3 {
            let residual = transversality_residual(&self);
            if residual >= TRANSVERSE_TOLERANCE {
                return Err(Error::Transversality { residual });
            }
        }
        self.transverse = self.grid.dim() == 3;
        Ok(self)
    }

    pub(crate) fn with_transverse(mut self, flag: bool) -> Self {
        self.transverse = flag && self.grid.dim() == 3;
        self
    }

    pub fn to_frequency(&self) -> SpectralField {
        forward_transform(self)
    }

    pub fn to_position(&self) -> SpectralField {
        inverse_transform(self)
    }

    pub fn to_domain(&self, domain: Domain) -> SpectralField {
        match domain {
            Domain::Position => self.to_position(),
            Domain::Frequency => self.to_frequency(),
        }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> SpectralField {
        let components = self
            .components
            .iter()
            .map(|c| c.iter().map(|&z| f(z)).collect())
            .collect();
        Self::from_parts(self.grid, components, self.domain, self.transverse)
    }

    pub fn scaled(&self, factor: Complex64) -> SpectralField {
        self.map(|z| z * factor)
    }

    pub fn conj(&self) -> SpectralField {
        // pointwise on position samples; in frequency space this is k -> -k plus conjugation
        let field = self.to_position();
        let out = field.map(|z| z.conj());
        out.with_transverse(self.transverse)
    }

    fn combine(&self, other: &SpectralField, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<SpectralField> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let other = other.to_domain(self.domain);
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
            .collect();
        Ok(Self::from_parts(
            self.grid,
            components,
            self.domain,
            self.transverse && other.transverse,
        ))
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.combine(other, |a, b| a - b)
    }

    /// `Σ_c |v_c|²` per sample, in whatever domain the field is stored.
    pub fn pointwise_norm_sq(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.grid.len()];
        for comp in &self.components {
            for (o, z) in out.iter_mut().zip(comp) {
                *o += z.norm_sqr();
            }
        }
        out
    }

    pub fn pointwise_abs(&self) -> Vec<f64> {
        self.pointwise_norm_sq().into_iter().map(f64::sqrt).collect()
    }

    /// Largest sample modulus in the stored domain.
    pub fn max_abs(&self) -> f64 {
        self.pointwise_norm_sq()
            .into_iter()
            .fold(0.0f64, f64::max)
            .sqrt()
    }

    /// Continuum-normalized `∫|v|²`, evaluated in the stored domain.
    pub fn norm_sq(&self) -> f64 {
        let weight = match self.domain {
            Domain::Position => self.grid.cell_volume(),
            Domain::Frequency => self.grid.mode_volume(),
        };
        weight * self.pointwise_norm_sq().iter().sum::<f64>()
    }

    /// Continuum-normalized `∫ a*·b` on position samples.
    pub fn inner(&self, other: &SpectralField) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let a = self.to_position();
        let b = other.to_position();
        let mut acc = Complex64::new(0.0, 0.0);
        for (ca, cb) in a.components.iter().zip(&b.components) {
            for (x, y) in ca.iter().zip(cb) {
                acc += x.conj() * y;
            }
        }
        Ok(acc * self.grid.cell_volume())
    }

    /// Largest pointwise distance between the position samples of two fields.
    pub fn max_abs_diff(&self, other: &SpectralField) -> Result<f64> {
        let a = self.to_position();
        Ok(a.sub(other)?.max_abs())
    }

    /// `max|a - b| / max|b|` on position samples; `max|a|` when `b` vanishes.
    pub fn relative_error(&self, reference: &SpectralField) -> Result<f64> {
        let diff = self.max_abs_diff(reference)?;
        let scale = reference.to_position().max_abs();
        Ok(if scale > 0.0 { diff / scale } else { diff })
    }

    /// Largest imaginary part of the position samples relative to the peak modulus.
    pub fn imag_residual(&self) -> f64 {
        let pos = self.to_position();
        let peak = pos.max_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let im = pos
            .components
            .iter()
            .flat_map(|c| c.iter().map(|z| z.im.abs()))
            .fold(0.0f64, f64::max);
        im / peak
    }

    /// Drops the imaginary part of the position samples.
    pub fn real_part(&self) -> SpectralField {
        let out = self.to_position().map(|z| Complex64::new(z.re, 0.0));
        out.with_transverse(self.transverse)
    }
}
