//! Incident wave packets ψ(q) = e^{ik₀q} φ(q) and the overlaps the
//! expectation values need.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::classical::SquareBarrier;
use crate::error::{Error, Result};

/// Minimum distance, in widths σ, between the packet centre and the barrier.
pub const SUPPORT_WIDTHS: f64 = 8.0;

/// A normalised incident packet with real envelope φ.
///
/// The time-kernel factors are affine in η, so expectation values only need
/// Φ(ζ) = ∫dη φ(η−ζ/2)φ(η+ζ/2) and its η-weighted version.
pub trait WavePacket: Send + Sync {
    /// Envelope φ(q).
    fn amplitude(&self, q: f64) -> f64;
    /// Carrier wavenumber k₀.
    fn carrier(&self) -> f64;
    /// Φ(ζ).
    fn overlap(&self, zeta: f64) -> f64;
    /// ∫dη η φ(η−ζ/2)φ(η+ζ/2).
    fn weighted_eta_overlap(&self, zeta: f64) -> f64;
    /// |ψ̃(k)|² with ψ̃(k) = (2π)^{-1/2}∫dq e^{-ikq}ψ(q).
    fn momentum_density(&self, k: f64) -> f64;
    /// ∫_κ^∞ |ψ̃(k)|² dk.
    fn mass_above(&self, kappa: f64) -> f64;
    /// Largest ζ at which Φ is still above ~1e-16.
    fn overlap_reach(&self, widths: f64) -> f64;
    /// Probability that the particle starts at q ≥ `edge`.
    fn position_tail(&self, edge: f64) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianPacket {
    pub q0: f64,
    pub sigma: f64,
    pub k0: f64,
}

impl GaussianPacket {
    pub fn new(q0: f64, sigma: f64, k0: f64) -> Result<Self> {
        let packet = GaussianPacket { q0, sigma, k0 };
        packet.validate()?;
        Ok(packet)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::invalid("packet.sigma", "must be finite and > 0"));
        }
        if !(self.q0.is_finite() && self.k0.is_finite()) {
            return Err(Error::invalid("packet", "q0 and k0 must be finite"));
        }
        Ok(())
    }

    /// Checks that the packet starts at least [`SUPPORT_WIDTHS`]·σ to the left
    /// of the barrier; returns the leaked probability.
    pub fn check_support(&self, barrier: &SquareBarrier) -> Result<f64> {
        let gap = barrier.a - self.q0;
        if gap < SUPPORT_WIDTHS * self.sigma {
            return Err(Error::invalid(
                "packet.q0",
                format!(
                    "packet centre must sit at least {SUPPORT_WIDTHS}σ = {} left of a = {}, got q0 = {}",
                    SUPPORT_WIDTHS * self.sigma,
                    barrier.a,
                    self.q0
                ),
            ));
        }
        Ok(self.position_tail(barrier.a))
    }

    /// ν₀ = ħk₀/μ.
    pub fn carrier_velocity(&self, units: &crate::units::Units) -> f64 {
        units.carrier_velocity(self.k0)
    }
}

impl WavePacket for GaussianPacket {
    fn amplitude(&self, q: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        (2.0 * PI * s2).powf(-0.25) * (-(q - self.q0).powi(2) / (4.0 * s2)).exp()
    }

    fn carrier(&self) -> f64 {
        self.k0
    }

    fn overlap(&self, zeta: f64) -> f64 {
        (-zeta * zeta / (8.0 * self.sigma * self.sigma)).exp()
    }

    fn weighted_eta_overlap(&self, zeta: f64) -> f64 {
        self.q0 * self.overlap(zeta)
    }

    fn momentum_density(&self, k: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        (2.0 * s2 / PI).sqrt() * (-2.0 * s2 * (k - self.k0).powi(2)).exp()
    }

    fn mass_above(&self, kappa: f64) -> f64 {
        // density is a normal law with standard deviation 1/(2σ)
        0.5 * erfc(2.0 * self.sigma * (kappa - self.k0) / std::f64::consts::SQRT_2)
    }

    fn overlap_reach(&self, widths: f64) -> f64 {
        widths * self.sigma
    }

    fn position_tail(&self, edge: f64) -> f64 {
        // |φ|² is normal with standard deviation σ
        0.5 * erfc((edge - self.q0) / (std::f64::consts::SQRT_2 * self.sigma))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gauss;
    use crate::units::Units;
    use approx::assert_relative_eq;

    fn packet() -> GaussianPacket {
        GaussianPacket::new(-30.0, 1.0, 2.0).unwrap()
    }

    #[test]
    fn overlap_examples() {
        let p = packet();
        assert_eq!(p.overlap(0.0), 1.0);
        assert_relative_eq!(p.overlap(2.0), 0.606_530_659_712_633_4, max_relative = 1e-15);
        assert_eq!(p.overlap(1.3), p.overlap(-1.3));
        assert_relative_eq!(p.weighted_eta_overlap(2.0), -18.195_919_791_379, max_relative = 1e-12);
        assert_eq!(GaussianPacket::new(0.0, 1.0, 2.0).unwrap().weighted_eta_overlap(0.7), 0.0);
    }

    #[test]
    fn overlap_matches_numerical_eta_integral() {
        let p = GaussianPacket::new(-3.0, 1.5, 1.0).unwrap();
        let rule = gauss::legendre(200);
        for zeta in [0.0, 1.0, 4.0] {
            let phi = gauss::legendre_sum(&rule, -30.0, 24.0, |eta| p.amplitude(eta - zeta / 2.0) * p.amplitude(eta + zeta / 2.0));
            let weighted = gauss::legendre_sum(&rule, -30.0, 24.0, |eta| {
                eta * p.amplitude(eta - zeta / 2.0) * p.amplitude(eta + zeta / 2.0)
            });
            assert_relative_eq!(phi, p.overlap(zeta), max_relative = 1e-12);
            assert_relative_eq!(weighted, p.weighted_eta_overlap(zeta), max_relative = 1e-12);
        }
    }

    #[test]
    fn momentum_density_normalised_and_consistent() {
        let p = GaussianPacket::new(-30.0, 2.0, 1.5).unwrap();
        let rule = gauss::legendre(200);
        let norm = gauss::legendre_sum(&rule, p.k0 - 5.0, p.k0 + 5.0, |k| p.momentum_density(k));
        assert_relative_eq!(norm, 1.0, max_relative = 1e-12);
        assert_relative_eq!(p.momentum_density(p.k0), (8.0 / PI).sqrt(), max_relative = 1e-15);
        // transform φ numerically and compare |ψ̃|²
        for k in [1.0, 1.5, 1.8] {
            let re = gauss::legendre_sum(&rule, -50.0, -10.0, |q| ((p.k0 - k) * q).cos() * p.amplitude(q));
            let im = gauss::legendre_sum(&rule, -50.0, -10.0, |q| ((p.k0 - k) * q).sin() * p.amplitude(q));
            let density = (re * re + im * im) / (2.0 * PI);
            assert_relative_eq!(density, p.momentum_density(k), max_relative = 1e-8);
        }
    }

    #[test]
    fn tail_above_cutoff() {
        let p = GaussianPacket::new(-200.0, 20.0, 0.6).unwrap();
        let mass = p.mass_above(1.118_033_988_749_895);
        assert!(mass > 0.0 && mass < 1e-80, "{mass}");
    }

    #[test]
    fn support_check() {
        let barrier = SquareBarrier::new(-5.0, -3.0, 0.5, &Units::natural()).unwrap();
        assert!(GaussianPacket::new(-30.0, 5.0, 2.0).unwrap().check_support(&barrier).is_err());
        let leak = GaussianPacket::new(-50.0, 5.0, 2.0).unwrap().check_support(&barrier).unwrap();
        assert!(leak < 1e-14);
    }
}
