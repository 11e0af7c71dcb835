//! Physical constants used by every formula.
//!
//! Kernels are evaluated internally in the dimensionless frame where the rest
//! mass, the speed of light and the reduced Planck constant are all one.
//! `Units` converts lengths, momenta and energies in and out of that frame.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub mass: f64,
    pub c: f64,
    pub hbar: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self::natural()
    }
}

impl Units {
    pub const fn natural() -> Self {
        Units {
            mass: 1.0,
            c: 1.0,
            hbar: 1.0,
        }
    }

    pub fn new(mass: f64, c: f64, hbar: f64) -> Result<Self> {
        let units = Units { mass, c, hbar };
        units.validate()?;
        Ok(units)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("mass", self.mass), ("c", self.c), ("hbar", self.hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(
                    format!("units.{name}"),
                    "must be finite and > 0",
                ));
            }
        }
        Ok(())
    }

    pub fn with_c(self, c: f64) -> Self {
        Units { c, ..self }
    }

    pub fn with_hbar(self, hbar: f64) -> Self {
        Units { hbar, ..self }
    }

    /// μc, the momentum scale of the branch points.
    pub fn momentum_scale(&self) -> f64 {
        self.mass * self.c
    }

    /// μc², the rest energy.
    pub fn rest_energy(&self) -> f64 {
        self.mass * self.c * self.c
    }

    /// μc/ħ, the inverse reduced Compton length.
    pub fn compton_wavenumber(&self) -> f64 {
        self.mass * self.c / self.hbar
    }

    /// Dimensionless separation μcζ/ħ, keeping the sign of ζ.
    pub fn reduced_separation(&self, zeta: f64) -> f64 {
        self.compton_wavenumber() * zeta
    }

    /// Dimensionless potential V/μc².
    pub fn reduced_energy(&self, v: f64) -> f64 {
        v / self.rest_energy()
    }

    /// Lorentz factor √(1 + p²/μ²c²).
    pub fn gamma(&self, p: f64) -> f64 {
        (p / self.momentum_scale()).hypot(1.0)
    }

    /// Total free energy √(ħ²k²c² + μ²c⁴) at wavenumber `k`.
    pub fn energy_of_wavenumber(&self, k: f64) -> f64 {
        self.rest_energy() * self.gamma(self.hbar * k)
    }

    /// Group velocity ħk/μ of the non-relativistic carrier.
    pub fn carrier_velocity(&self, k: f64) -> f64 {
        self.hbar * k / self.mass
    }
}
