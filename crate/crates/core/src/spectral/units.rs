use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants used by the representation maps. Defaults to natural
/// units `ħ = c = ε0 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitsConfig {
    pub hbar: f64,
    pub c: f64,
    pub eps0: f64,
}

impl Default for UnitsConfig {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            c: 1.0,
            eps0: 1.0,
        }
    }
}

impl UnitsConfig {
    pub fn new(hbar: f64, c: f64, eps0: f64) -> Result<Self> {
        let units = Self { hbar, c, eps0 };
        units.validate()?;
        Ok(units)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("hbar", self.hbar), ("c", self.c), ("eps0", self.eps0)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidUnits(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}
