//! Expected arrival times of wave packets and the barrier traversal time.
//!
//! Only imaginary parts of the complex expectation values are formed, which
//! keeps every integral absolutely convergent: with Φ the packet overlap,
//!
//! * Im Q_c* = k₀ ∫₀^∞ sin(k₀ζ) 𝒯_F(ζ) Φ(ζ) dζ
//! * Im R_c* = k₀ ∫₀^∞ sin(k₀ζ) 𝒯_B(−V0, ζ) Φ(ζ) dζ
//! * τ̄_F = −(μ/ħ) ∫₀^∞ sin(k₀ζ) 𝒯_F W dζ, W(ζ) = ∫dη η φφ
//! * τ̄_B = −(μ/ħ) ∫₀^∞ sin(k₀ζ) [𝒯_F (W + LΦ) − L 𝒯_B(−V0) Φ] dζ
//!
//! In momentum space the traversal time is t_c (R̃⁺ − R̃⁻), with
//! R̃^± = ∫_{κ_c}^∞ |ψ̃(±k)|² Ẽ_k / √((Ẽ_k − V0)² − μ²c⁴) dk.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::classical::SquareBarrier;
use crate::error::{Error, Result};
use crate::kernels::{barrier_factor, free_factor};
use crate::numerics::{fourier_sine_integral, gauss, Estimate, QuadratureSpec, SineTransform};
use crate::units::Units;
use crate::wavepacket::{GaussianPacket, WavePacket};

const MAX_SEGMENTS: usize = 2000;
/// 2σ²(k − k₀)² at which the momentum density is treated as zero.
const DENSITY_EXPONENT: f64 = 40.0;

/// Wavenumber and total free energy Ẽ_k = √(ħ²k²c² + μ²c⁴).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyPoint {
    pub k: f64,
    pub energy: f64,
}

impl EnergyPoint {
    pub fn new(k: f64, units: &Units) -> Self {
        EnergyPoint {
            k,
            energy: units.energy_of_wavenumber(k),
        }
    }
}

/// Relativistic cutoff κ_c = √((2μV0/ħ²)(V0/2μc² + 1)).
pub fn kappa_c(v0: f64, units: &Units) -> f64 {
    (2.0 * units.mass * v0 / (units.hbar * units.hbar) * (v0 / (2.0 * units.rest_energy()) + 1.0)).sqrt()
}

/// Non-relativistic cutoff κ = √(2μV0)/ħ.
pub fn kappa_nonrel(v0: f64, units: &Units) -> f64 {
    (2.0 * units.mass * v0).sqrt() / units.hbar
}

/// Photon crossing time t_c = L/c.
pub fn photon_time(barrier: &SquareBarrier, units: &Units) -> f64 {
    barrier.length() / units.c
}

/// Ẽ_k/√((Ẽ_k − V0)² − μ²c⁴) for k > κ_c, with the vanishing factor formed
/// as ħ²c²(k² − κ_c²)/(Ẽ_k + V0 + μc²).
fn crossing_factor(k_sq_minus_kc_sq: f64, energy: f64, v0: f64, units: &Units) -> f64 {
    let rest = units.rest_energy();
    let hc = units.hbar * units.c;
    let low = hc * hc * k_sq_minus_kc_sq / (energy + v0 + rest);
    energy / (low * (energy - v0 + rest)).sqrt()
}

/// Classical above-barrier traversal time τ̄_top(k) = t_c Ẽ_k/√((Ẽ_k − V0)² − μ²c⁴).
pub fn tau_top(k: f64, barrier: &SquareBarrier, units: &Units) -> Result<f64> {
    let kc = kappa_c(barrier.v0, units);
    if !(k.abs() > kc) {
        return Err(Error::Domain(format!(
            "tau_top needs |k| > kappa_c = {kc}, got {k}"
        )));
    }
    let energy = units.energy_of_wavenumber(k);
    let factor = crossing_factor((k.abs() - kc) * (k.abs() + kc), energy, barrier.v0, units);
    Ok(photon_time(barrier, units) * factor)
}

/// Which half of the momentum axis R̃ integrates over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

/// R̃^± = ∫_{κ_c}^∞ |ψ̃(±k)|² Ẽ_k/√((Ẽ_k − V0)² − μ²c⁴) dk.
///
/// With k = κ_c + u² the inverse square root at the cutoff cancels against
/// the Jacobian.
pub fn r_tilde_pm(
    packet: &GaussianPacket,
    barrier: &SquareBarrier,
    direction: Direction,
    units: &Units,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let kc = kappa_c(barrier.v0, units);
    if !(kc > 0.0) {
        return Err(Error::Domain("R̃ needs V0 > 0; it diverges logarithmically at V0 = 0".into()));
    }
    let centre = match direction {
        Direction::Forward => packet.k0,
        Direction::Backward => -packet.k0,
    };
    let width = (DENSITY_EXPONENT / 2.0).sqrt() / packet.sigma;
    let k_max = kc.max(centre) + width;
    let u_max = (k_max - kc).sqrt();
    let mut breakpoints = Vec::new();
    if centre > kc {
        let peak = (centre - kc).sqrt();
        breakpoints.push(peak);
        for s in [0.25, 0.5, 1.0, 2.0] {
            let lo = centre - s / packet.sigma;
            if lo > kc {
                breakpoints.push((lo - kc).sqrt());
            }
            breakpoints.push((centre + s / packet.sigma - kc).sqrt());
        }
    }
    // the density tail near the cutoff decays on the scale 1/(4σ²|κ_c − centre|)
    let tail = 1.0 / (4.0 * packet.sigma * packet.sigma * (kc - centre).abs().max(1e-12));
    let mut s = tail.sqrt();
    while s < u_max {
        breakpoints.push(s);
        s *= 2.0;
    }
    breakpoints.sort_by(f64::total_cmp);

    let hc = units.hbar * units.c;
    let rest = units.rest_energy();
    let v0 = barrier.v0;
    let density = |k: f64| match direction {
        Direction::Forward => packet.momentum_density(k),
        Direction::Backward => packet.momentum_density(-k),
    };
    let integrand = |u: f64| -> Result<f64> {
        let k = kc + u * u;
        let energy = units.energy_of_wavenumber(k);
        // 2u dk-Jacobian over u√(2κ_c + u²) from the root
        let ratio = (energy - v0 + rest) / (energy + v0 + rest);
        Ok(2.0 * density(k) * energy / (hc * ((2.0 * kc + u * u) * ratio).sqrt()))
    };
    gauss::adaptive(integrand, 0.0, u_max, &breakpoints, 0.0, spec.rel_tolerance, MAX_SEGMENTS)
}

/// Upper bound on R̃⁺ for a Gaussian centred below the cutoff (k₀ < κ_c).
///
/// Uses |ψ̃(κ_c + u²)|² ≤ |ψ̃(κ_c)|² e^{−4σ²(κ_c−k₀)u²}, Ẽ ≤ Ẽ(κ_c) + ħc u²,
/// 2κ_c + u² ≥ 2κ_c and the monotone energy ratio under the root.
pub fn instantaneity_bound(packet: &GaussianPacket, barrier: &SquareBarrier, units: &Units) -> Option<f64> {
    let scale = units.compton_wavenumber();
    let kc = kappa_c(barrier.v0, units) / scale;
    let k0 = packet.k0 / scale;
    let sigma = packet.sigma * scale;
    let v = barrier.v0 / units.rest_energy();
    let gap = kc - k0;
    if !(gap > 0.0) {
        return None;
    }
    let beta = 4.0 * sigma * sigma * gap;
    let e_c = 1.0 + v;
    let peak = (2.0 * sigma * sigma / PI).sqrt() * (-2.0 * sigma * sigma * gap * gap).exp();
    let gaussian = e_c * (PI / beta).sqrt() + PI.sqrt() / (2.0 * beta.powf(1.5));
    Some(peak * (e_c / (2.0 * kc)).sqrt() * gaussian)
}

fn check_packet(packet: &GaussianPacket, units: &Units) -> Result<()> {
    packet.validate()?;
    units.validate()?;
    if !(packet.k0 > 0.0) {
        return Err(Error::invalid("packet.k0", "carrier wavenumber must be > 0"));
    }
    Ok(())
}

fn sine_transform(packet: &GaussianPacket, units: &Units, spec: &QuadratureSpec, max_frequency: f64) -> SineTransform {
    SineTransform::intrinsic(packet.k0, packet.overlap_reach(spec.zeta_truncation))
        .with_max_frequency(max_frequency)
        .with_feature_length(1.0 / units.compton_wavenumber())
}

/// Im Q_c*.
pub fn q_c(packet: &GaussianPacket, units: &Units, spec: &QuadratureSpec) -> Result<Estimate> {
    check_packet(packet, units)?;
    let transform = sine_transform(packet, units, spec, 0.0);
    let integral = fourier_sine_integral(
        |z| Ok(free_factor(z, units, spec)?.value * packet.overlap(z)),
        &transform,
        spec,
    )?;
    Ok(integral.scale(packet.k0))
}

/// Im R_c*, the position-space route to the traversal time.
pub fn r_c_position(
    packet: &GaussianPacket,
    barrier: &SquareBarrier,
    units: &Units,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    check_packet(packet, units)?;
    let transform = sine_transform(packet, units, spec, kappa_c(barrier.v0, units));
    let integral = fourier_sine_integral(
        |z| Ok(barrier_factor(-barrier.v0, z, units, spec)?.value * packet.overlap(z)),
        &transform,
        spec,
    )?;
    Ok(integral.scale(packet.k0))
}

/// Which time-kernel factor an expectation value uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    Free,
    Barrier(SquareBarrier),
}

/// Expected arrival time at the origin, τ̄ = Im τ̄*.
///
/// The barrier kernel needs the packet entirely left of the barrier, where
/// the kernel is affine in η; this is checked.
pub fn expectation_toa(kernel: Kernel, packet: &GaussianPacket, units: &Units, spec: &QuadratureSpec) -> Result<Estimate> {
    check_packet(packet, units)?;
    let prefactor = -units.mass / units.hbar;
    match kernel {
        Kernel::Free => {
            let transform = sine_transform(packet, units, spec, 0.0);
            let integral = fourier_sine_integral(
                |z| Ok(free_factor(z, units, spec)?.value * packet.weighted_eta_overlap(z)),
                &transform,
                spec,
            )?;
            Ok(integral.scale(prefactor))
        }
        Kernel::Barrier(barrier) => {
            barrier.validate(units)?;
            packet.check_support(&barrier)?;
            let l = barrier.length();
            let transform = sine_transform(packet, units, spec, kappa_c(barrier.v0, units));
            let integral = fourier_sine_integral(
                |z| {
                    let tf = free_factor(z, units, spec)?.value;
                    let tb = barrier_factor(-barrier.v0, z, units, spec)?.value;
                    let phi = packet.overlap(z);
                    Ok(tf * (packet.weighted_eta_overlap(z) + l * phi) - l * tb * phi)
                },
                &transform,
                spec,
            )?;
            Ok(integral.scale(prefactor))
        }
    }
}

/// Error estimates and consistency checks attached to a report.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    pub tau_free_error: f64,
    pub tau_barrier_error: f64,
    pub q_c_error: f64,
    pub r_c_position_error: f64,
    pub r_tilde_plus_error: f64,
    pub r_tilde_minus_error: f64,
    /// |Im R_c* − (ν₀/c)(R̃⁺ − R̃⁻)| relative to the larger of the two, or to
    /// the position-route noise level (tolerance · |Im Q_c*|) when both are
    /// below it.
    pub route_gap: f64,
    /// |Δτ̄ − (L/ν₀)(Im Q_c* − Im R_c*)|.
    pub delta_identity_gap: f64,
    /// Probability that the packet starts at or right of a.
    pub support_leak: f64,
    /// Momentum probability above κ_c.
    pub mass_above_cutoff: f64,
    /// Analytic bound on t_c R̃⁺ when k₀ < κ_c.
    pub tau_trav_bound: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraversalReport {
    pub kappa_c: f64,
    pub tau_free: f64,
    pub tau_barrier: f64,
    pub delta_tau: f64,
    pub q_c: f64,
    pub r_c_position: f64,
    pub r_tilde_plus: f64,
    pub r_tilde_minus: f64,
    pub tau_trav: f64,
    pub t_c: f64,
    pub diagnostics: Diagnostics,
}

/// Every traversal quantity for one packet and barrier.
pub fn traversal_report(
    packet: &GaussianPacket,
    barrier: &SquareBarrier,
    units: &Units,
    spec: &QuadratureSpec,
) -> Result<TraversalReport> {
    spec.validate()?;
    barrier.validate(units)?;
    if barrier.v0 == 0.0 {
        return Err(Error::invalid("barrier.V0", "traversal quantities need V0 > 0"));
    }
    check_packet(packet, units)?;
    let support_leak = packet.check_support(barrier)?;

    let tau_free = expectation_toa(Kernel::Free, packet, units, spec)?;
    let tau_barrier = expectation_toa(Kernel::Barrier(*barrier), packet, units, spec)?;
    let q = q_c(packet, units, spec)?;
    let r = r_c_position(packet, barrier, units, spec)?;
    let plus = r_tilde_pm(packet, barrier, Direction::Forward, units, spec)?;
    let minus = r_tilde_pm(packet, barrier, Direction::Backward, units, spec)?;

    let t_c = photon_time(barrier, units);
    let r_tilde = plus.value - minus.value;
    let nu0 = packet.carrier_velocity(units);
    let momentum_route = nu0 / units.c * r_tilde;
    let route_scale = r
        .value
        .abs()
        .max(momentum_route.abs())
        .max(spec.rel_tolerance * q.value.abs())
        .max(f64::MIN_POSITIVE);
    let delta_tau = tau_free.value - tau_barrier.value;
    let l = barrier.length();
    let kc = kappa_c(barrier.v0, units);

    Ok(TraversalReport {
        kappa_c: kc,
        tau_free: tau_free.value,
        tau_barrier: tau_barrier.value,
        delta_tau,
        q_c: q.value,
        r_c_position: r.value,
        r_tilde_plus: plus.value,
        r_tilde_minus: minus.value,
        tau_trav: t_c * r_tilde,
        t_c,
        diagnostics: Diagnostics {
            tau_free_error: tau_free.abs_error,
            tau_barrier_error: tau_barrier.abs_error,
            q_c_error: q.abs_error,
            r_c_position_error: r.abs_error,
            r_tilde_plus_error: plus.abs_error,
            r_tilde_minus_error: minus.abs_error,
            route_gap: (r.value - momentum_route).abs() / route_scale,
            delta_identity_gap: (delta_tau - l / nu0 * (q.value - r.value)).abs(),
            support_leak,
            mass_above_cutoff: packet.mass_above(kc),
            tau_trav_bound: instantaneity_bound(packet, barrier, units).map(|b| t_c * b),
        },
    })
}

/// Traversal time in the non-relativistic limit,
/// (Lμ/ħ) ∫_κ^∞ (|ψ̃(k)|² − |ψ̃(−k)|²)/√(k² − κ²) dk with κ = √(2μV0)/ħ.
pub fn nonrel_traversal_target(
    packet: &GaussianPacket,
    barrier: &SquareBarrier,
    units: &Units,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let kappa = kappa_nonrel(barrier.v0, units);
    let width = (DENSITY_EXPONENT / 2.0).sqrt() / packet.sigma;
    let prefactor = barrier.length() * units.mass / units.hbar;
    let difference = |k: f64| packet.momentum_density(k) - packet.momentum_density(-k);
    let est = if kappa == 0.0 {
        let top = packet.k0.abs() + width;
        gauss::adaptive(
            |k| Ok(difference(k) / k),
            0.0,
            top,
            &[packet.k0.abs()],
            0.0,
            spec.rel_tolerance,
            MAX_SEGMENTS,
        )?
    } else {
        // k = κ cosh t
        let top = kappa.max(packet.k0.abs()) + width;
        let t_max = (top / kappa).acosh();
        let mut breaks = Vec::new();
        if packet.k0.abs() > kappa {
            breaks.push((packet.k0.abs() / kappa).acosh());
        }
        gauss::adaptive(
            |t| Ok(difference(kappa * t.cosh())),
            0.0,
            t_max,
            &breaks,
            0.0,
            spec.rel_tolerance,
            MAX_SEGMENTS,
        )?
    };
    Ok(est.scale(prefactor))
}

/// τ_trav along a sequence of scaled speeds of light and its approach to the
/// non-relativistic target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonrelRecord {
    pub c_values: Vec<f64>,
    pub tau_trav: Vec<f64>,
    pub target: f64,
    /// Slope of log|τ_trav − target| against log c.
    pub fitted_rate: f64,
}

pub fn nonrel_traversal(
    packet: &GaussianPacket,
    barrier: &SquareBarrier,
    units: &Units,
    c_scales: &[f64],
    spec: &QuadratureSpec,
) -> Result<NonrelRecord> {
    let target = nonrel_traversal_target(packet, barrier, units, spec)?.value;
    let mut c_values = Vec::with_capacity(c_scales.len());
    let mut tau = Vec::with_capacity(c_scales.len());
    for scale in c_scales {
        let scaled = units.with_c(units.c * scale);
        let plus = r_tilde_pm(packet, barrier, Direction::Forward, &scaled, spec)?;
        let minus = r_tilde_pm(packet, barrier, Direction::Backward, &scaled, spec)?;
        c_values.push(scaled.c);
        tau.push(photon_time(barrier, &scaled) * (plus.value - minus.value));
    }
    let errors: Vec<f64> = tau.iter().map(|t| (t - target).abs()).collect();
    Ok(NonrelRecord {
        fitted_rate: log_log_slope(&c_values, &errors),
        c_values,
        tau_trav: tau,
        target,
    })
}

/// Least-squares slope of ln y against ln x.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
