//! Special functions and the quadrature engines used by the kernels.
//!
//! Four integral families appear in the time-kernel factors and their
//! expectation values, and each has its own engine:
//!
//! * [`contour_circle_integral`]: trapezoid rule on a circle around the origin,
//! * [`laguerre_integral`]: Gauss–Laguerre for `∫₀^∞ e^{-y} g(y) dy`,
//! * [`branch_cut_integral`]: the `∫₁^∞ e^{-λy} √(y²-1)/y h(y) dy` family,
//! * [`fourier_sine_integral`]: oscillation-resolved panels with optional
//!   Abel damping for `∫₀^∞ sin(kζ) F(ζ) dζ`.

mod branch_cut;
mod contour;
mod fourier;
pub mod gauss;
mod laguerre;
mod special;

pub use branch_cut::branch_cut_integral;
pub use contour::contour_circle_integral;
pub use fourier::{fourier_sine_integral, Decay, SineTransform};
pub use laguerre::{growth_rate_probe, laguerre_integral};
pub use special::{bessel_j0, hyp0f1_one};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Node counts, truncations and tolerances for every integral family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    /// Initial trapezoid points on the contour circle (doubled until converged).
    pub contour_nodes: usize,
    /// Initial Gauss–Laguerre order (doubled once for the error estimate).
    pub laguerre_nodes: usize,
    /// Upper ζ cutoff in multiples of the packet width σ.
    pub zeta_truncation: f64,
    /// Gauss–Legendre nodes per oscillation period in sine integrals.
    pub nodes_per_oscillation: usize,
    /// Branch-cut integrals stop where `decay_rate·(y-1)` reaches this value.
    pub branch_cut_truncation: f64,
    pub rel_tolerance: f64,
    /// Abel damping rates ε (inverse length, before any caller scaling),
    /// strictly decreasing.
    pub abel_damping: Vec<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            contour_nodes: 64,
            laguerre_nodes: 64,
            zeta_truncation: 18.0,
            nodes_per_oscillation: 16,
            branch_cut_truncation: 40.0,
            rel_tolerance: 1e-10,
            abel_damping: vec![0.4, 0.2, 0.1, 0.05, 0.025],
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("contour_nodes", self.contour_nodes),
            ("laguerre_nodes", self.laguerre_nodes),
            ("nodes_per_oscillation", self.nodes_per_oscillation),
        ];
        for (name, n) in counts {
            if n < 8 {
                return Err(Error::invalid(format!("quadrature.{name}"), "must be >= 8"));
            }
        }
        if !(self.rel_tolerance > 0.0 && self.rel_tolerance <= 1e-2) {
            return Err(Error::invalid(
                "quadrature.rel_tolerance",
                "must lie in (0, 1e-2]",
            ));
        }
        if !(self.zeta_truncation >= 8.0 && self.zeta_truncation.is_finite()) {
            return Err(Error::invalid("quadrature.zeta_truncation", "must be >= 8"));
        }
        if !(self.branch_cut_truncation >= 8.0 && self.branch_cut_truncation.is_finite()) {
            return Err(Error::invalid(
                "quadrature.branch_cut_truncation",
                "must be >= 8",
            ));
        }
        if self.abel_damping.len() < 2
            || self.abel_damping.iter().any(|e| !(*e > 0.0 && e.is_finite()))
            || self.abel_damping.windows(2).any(|w| w[1] >= w[0])
        {
            return Err(Error::invalid(
                "quadrature.abel_damping",
                "need >= 2 positive, strictly decreasing rates",
            ));
        }
        Ok(())
    }

    pub fn with_tolerance(mut self, rel_tolerance: f64) -> Self {
        self.rel_tolerance = rel_tolerance;
        self
    }
}

/// A complex quadrature value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
}

impl ComplexResult {
    pub(crate) fn checked(value: Complex64, abs_error_estimate: f64) -> Result<Self> {
        if value.re.is_finite() && value.im.is_finite() && abs_error_estimate.is_finite() {
            Ok(ComplexResult {
                value,
                abs_error_estimate: abs_error_estimate.abs(),
            })
        } else {
            Err(Error::NonFinite("complex quadrature"))
        }
    }
}

/// A real quadrature value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
}

impl Estimate {
    pub fn new(value: f64, abs_error: f64) -> Self {
        Estimate {
            value,
            abs_error: abs_error.abs(),
        }
    }

    pub fn exact(value: f64) -> Self {
        Estimate {
            value,
            abs_error: 0.0,
        }
    }

    pub(crate) fn checked(self, context: &'static str) -> Result<Self> {
        if self.value.is_finite() && self.abs_error.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFinite(context))
        }
    }

    pub fn scale(self, factor: f64) -> Self {
        Estimate::new(self.value * factor, self.abs_error * factor)
    }

    /// Linear combination with errors added in absolute value.
    pub fn combine(self, a: f64, other: Estimate, b: f64) -> Self {
        Estimate::new(
            a * self.value + b * other.value,
            (a * self.abs_error).abs() + (b * other.abs_error).abs(),
        )
    }
}
