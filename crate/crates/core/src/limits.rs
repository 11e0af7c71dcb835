//! Limit checks: ħ → 0, c → ∞, V0 → 0, k₀ → ∞ and σ → ∞, each run as an
//! explicit parameter sequence with a power-law fit of the error.

use std::f64::consts::FRAC_1_PI;

use serde::{Deserialize, Serialize};

use crate::classical::{
    classical_barrier_toa_closed, free_toa, weyl_wigner_transform, ClassicalState, Region, SquareBarrier,
};
use crate::error::{Error, Result};
use crate::kernels::{free_factor, ThetaTable};
use crate::numerics::{branch_cut_integral, fourier_sine_integral, QuadratureSpec, SineTransform};
use crate::traversal::{
    kappa_c, kappa_nonrel, log_log_slope, nonrel_traversal, photon_time, q_c, r_c_position, r_tilde_pm,
    tau_top, traversal_report, Direction,
};
use crate::units::Units;
use crate::wavepacket::GaussianPacket;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitParameter {
    Hbar,
    C,
    V0,
    K0,
    Sigma,
}

/// The quantity a probe follows along its sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProbeKind {
    /// κ_c under c scaling → √(2μV0)/ħ.
    KappaC { v0: f64 },
    /// Phase-space function of the free kernel under ħ scaling → −μq₀γ/p₀.
    WeylFree { state: ClassicalState },
    /// Phase-space function of the far-side barrier kernel under ħ scaling →
    /// the closed-form barrier arrival time.
    WeylBarrier { state: ClassicalState, barrier: SquareBarrier },
    /// t_c R̃ under c scaling → non-relativistic traversal time.
    NonrelTraversal { packet: GaussianPacket, barrier: SquareBarrier },
    /// Δτ̄ as the barrier height goes to zero → 0.
    FreeReduction { packet: GaussianPacket, barrier: SquareBarrier },
    /// Im Q_c*/γ_{p₀} as k₀ grows → 1.
    HighEnergy { packet: GaussianPacket },
    /// t_c R̃ as σ grows → τ̄_top(k₀).
    Monochromatic { packet: GaussianPacket, barrier: SquareBarrier },
}

impl ProbeKind {
    pub fn parameter(&self) -> LimitParameter {
        match self {
            ProbeKind::KappaC { .. } | ProbeKind::NonrelTraversal { .. } => LimitParameter::C,
            ProbeKind::WeylFree { .. } | ProbeKind::WeylBarrier { .. } => LimitParameter::Hbar,
            ProbeKind::FreeReduction { .. } => LimitParameter::V0,
            ProbeKind::HighEnergy { .. } => LimitParameter::K0,
            ProbeKind::Monochromatic { .. } => LimitParameter::Sigma,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProbeKind::KappaC { .. } => "kappa_c_nonrelativistic",
            ProbeKind::WeylFree { .. } => "weyl_free_classical",
            ProbeKind::WeylBarrier { .. } => "weyl_barrier_classical",
            ProbeKind::NonrelTraversal { .. } => "traversal_nonrelativistic",
            ProbeKind::FreeReduction { .. } => "barrier_to_free",
            ProbeKind::HighEnergy { .. } => "free_factor_high_energy",
            ProbeKind::Monochromatic { .. } => "traversal_monochromatic",
        }
    }
}

/// What to run and how to judge it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSpec {
    pub kind: ProbeKind,
    /// Values of the limit parameter: multipliers of c for c-probes, ħ values
    /// for ħ-probes, and the raw V0, k₀ or σ otherwise.
    pub sequence: Vec<f64>,
    pub units: Units,
    pub quadrature: QuadratureSpec,
    /// Largest accepted error at the last sequence point, relative to |target|
    /// (absolute when the target is zero).
    pub tolerance: f64,
    /// Expected fitted rate and accepted deviation from it.
    pub expected_rate: Option<(f64, f64)>,
    /// Errors below this (relative) level count as converged when checking
    /// that errors decrease.
    pub noise_floor: f64,
}

/// Outcome of a probe. Failed probes keep their data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitProbe {
    pub name: String,
    pub parameter: LimitParameter,
    pub sequence: Vec<f64>,
    pub target: f64,
    /// Where the target comes from.
    pub target_source: String,
    pub observed: Vec<f64>,
    pub errors: Vec<f64>,
    pub fitted_rate: f64,
    pub passed: bool,
    pub message: String,
}

/// Weyl–Wigner phase-space function of the free kernel (q₀/2)𝒯_F at (q₀, p₀).
pub fn weyl_free(state: &ClassicalState, units: &Units, spec: &QuadratureSpec) -> Result<f64> {
    let q0 = state.q0;
    weyl_wigner_transform(
        |z| Ok(0.5 * q0 * free_factor(z, units, spec)?.value),
        state.p0,
        units,
        spec,
        None,
    )
}

/// Weyl–Wigner phase-space function of the far-side barrier kernel
/// ((q₀+L)/2)𝒯_F − (L/2)𝒯_B(−V0) at (q₀, p₀), q₀ < a.
///
/// The kernel is split as (q₀/2)𝒯_F + (L/2)(1 − ℱ_B) − (L/2)·C with C the
/// decaying branch-cut remainder. The free part goes through the Abel-damped
/// transform, C through the plain sine integral, and the non-decaying
/// oscillation ℱ_B through its θ-representation, where each cos(z*λ) has the
/// distributional sine transform κ/(κ² − z*²).
pub fn weyl_barrier(
    state: &ClassicalState,
    barrier: &SquareBarrier,
    units: &Units,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if Region::locate(state.q0, barrier) != Region::III {
        return Err(Error::invalid("state.q0", "must lie left of the barrier"));
    }
    let p0 = state.p0;
    if !(p0 > units.hbar * kappa_c(barrier.v0, units)) {
        return Err(Error::ForbiddenRegion {
            from: barrier.a,
            to: barrier.b,
        });
    }
    let l = barrier.length();
    let u = -barrier.v0 / units.rest_energy();
    let prefactor = -2.0 * units.mass / units.hbar;
    let k = p0 / units.hbar;
    let length_scale = 1.0 / units.compton_wavenumber();
    let kappa = p0 / units.momentum_scale();

    let free_part = weyl_free(state, units, spec)?;

    // ∫ sin(kζ) (1 − ℱ_B) dζ = 1/k − (ħ/μc)(1/π)∫dθ (w²/D) κ/(κ² − z*²)
    let table = ThetaTable::for_potential(u);
    let symbol = table.sine_symbol(kappa, spec.rel_tolerance)?;
    let oscillatory = 1.0 / k - length_scale * symbol;

    // C(λ) = (2/π)∫ e^{-λy}√(y²−1)/y (𝒢_B − 1) dy decays within λ ~ 40
    let remainder = |z: f64| -> Result<f64> {
        let lambda = units.reduced_separation(z);
        if lambda > 40.0 {
            return Ok(0.0);
        }
        let cut = branch_cut_integral(|y| Ok(crate::kernels::g_minus_one(u, y)), lambda, spec)?;
        Ok(2.0 * FRAC_1_PI * cut.value)
    };
    let transform = SineTransform::intrinsic(k, 45.0 * length_scale).with_feature_length(length_scale);
    let decaying = fourier_sine_integral(remainder, &transform, spec)?.value;

    Ok(free_part + prefactor * 0.5 * l * (oscillatory - decaying))
}

fn target_of(kind: &ProbeKind, units: &Units, spec: &QuadratureSpec) -> Result<(f64, &'static str)> {
    Ok(match kind {
        ProbeKind::KappaC { v0 } => (kappa_nonrel(*v0, units), "non-relativistic cutoff sqrt(2 mu V0)/hbar"),
        ProbeKind::WeylFree { state } => (free_toa(state, units), "classical free arrival time"),
        ProbeKind::WeylBarrier { state, barrier } => (
            classical_barrier_toa_closed(state, barrier, units)?,
            "closed-form classical barrier arrival time",
        ),
        ProbeKind::NonrelTraversal { packet, barrier } => (
            crate::traversal::nonrel_traversal_target(packet, barrier, units, spec)?.value,
            "non-relativistic momentum-space traversal time",
        ),
        ProbeKind::FreeReduction { .. } => (0.0, "identical kernels at V0 = 0"),
        ProbeKind::HighEnergy { .. } => (1.0, "Lorentz factor asymptote"),
        ProbeKind::Monochromatic { packet, barrier } => {
            (tau_top(packet.k0, barrier, units)?, "classical above-barrier traversal time")
        }
    })
}

fn observe(kind: &ProbeKind, x: f64, units: &Units, spec: &QuadratureSpec) -> Result<f64> {
    match kind {
        ProbeKind::KappaC { v0 } => Ok(kappa_c(*v0, &units.with_c(units.c * x))),
        ProbeKind::WeylFree { state } => weyl_free(state, &units.with_hbar(x), spec),
        ProbeKind::WeylBarrier { state, barrier } => weyl_barrier(state, barrier, &units.with_hbar(x), spec),
        ProbeKind::NonrelTraversal { packet, barrier } => {
            let record = nonrel_traversal(packet, barrier, units, &[x], spec)?;
            Ok(record.tau_trav[0])
        }
        ProbeKind::FreeReduction { packet, barrier } => {
            let lowered = barrier.with_height(x);
            Ok(traversal_report(packet, &lowered, units, spec)?.delta_tau)
        }
        ProbeKind::HighEnergy { packet } => {
            let moved = GaussianPacket { k0: x, ..*packet };
            let gamma = units.gamma(units.hbar * x);
            Ok(q_c(&moved, units, spec)?.value / gamma)
        }
        ProbeKind::Monochromatic { packet, barrier } => {
            let wide = GaussianPacket { sigma: x, ..*packet };
            let plus = r_tilde_pm(&wide, barrier, Direction::Forward, units, spec)?.value;
            let minus = r_tilde_pm(&wide, barrier, Direction::Backward, units, spec)?.value;
            Ok(photon_time(barrier, units) * (plus - minus))
        }
    }
}

/// Runs one probe. Quadrature failures are errors; a probe whose errors do
/// not behave is returned with `passed = false`.
pub fn run_limit_probe(spec: &ProbeSpec) -> Result<LimitProbe> {
    let seq = &spec.sequence;
    if seq.len() < 2 {
        return Err(Error::invalid("probe.sequence", "need at least two values"));
    }
    let increasing = seq.windows(2).all(|w| w[1] > w[0]);
    let decreasing = seq.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) {
        return Err(Error::invalid("probe.sequence", "must be strictly monotone"));
    }
    spec.quadrature.validate()?;
    spec.units.validate()?;
    let (target, source) = target_of(&spec.kind, &spec.units, &spec.quadrature)?;
    let observed = seq
        .iter()
        .map(|x| observe(&spec.kind, *x, &spec.units, &spec.quadrature))
        .collect::<Result<Vec<f64>>>()?;
    let errors: Vec<f64> = observed.iter().map(|o| (o - target).abs()).collect();
    let fitted_rate = log_log_slope(seq, &errors);

    let scale = if target == 0.0 { 1.0 } else { target.abs() };
    let floor = spec.noise_floor * scale;
    let mut problems = Vec::new();
    if errors.windows(2).any(|w| w[1] > w[0] && w[1] > floor) {
        problems.push("errors do not decrease along the sequence".to_string());
    }
    let last = *errors.last().expect("non-empty");
    if last > spec.tolerance * scale {
        problems.push(format!(
            "final error {last:.3e} exceeds {:.3e}",
            spec.tolerance * scale
        ));
    }
    if let Some((rate, band)) = spec.expected_rate {
        let all_above_floor = errors.iter().all(|e| *e > floor);
        if all_above_floor && !((fitted_rate - rate).abs() <= band) {
            problems.push(format!("fitted rate {fitted_rate:.3} not within {band} of {rate}"));
        }
    }
    let passed = problems.is_empty();
    Ok(LimitProbe {
        name: spec.kind.name().to_string(),
        parameter: spec.kind.parameter(),
        sequence: seq.clone(),
        target,
        target_source: source.to_string(),
        observed,
        errors,
        fitted_rate,
        passed,
        message: if passed { "ok".into() } else { problems.join("; ") },
    })
}

/// The probe set run by `validate`, in natural units around the given
/// barrier and packet.
pub fn standard_battery(
    barrier: &SquareBarrier,
    packet: &GaussianPacket,
    units: &Units,
    quadrature: &QuadratureSpec,
) -> Vec<ProbeSpec> {
    let make = |kind, sequence: Vec<f64>, tolerance, expected_rate, noise_floor| ProbeSpec {
        kind,
        sequence,
        units: *units,
        quadrature: quadrature.clone(),
        tolerance,
        expected_rate,
        noise_floor,
    };
    let state = ClassicalState {
        q0: barrier.a - 5.0 * barrier.length(),
        p0: 2.0 * units.hbar * kappa_c(barrier.v0, units).max(units.momentum_scale() / units.hbar * 0.5),
    };
    vec![
        make(
            ProbeKind::KappaC { v0: barrier.v0 },
            vec![10.0, 100.0, 1000.0],
            1e-5,
            Some((-2.0, 0.1)),
            1e-14,
        ),
        make(
            ProbeKind::WeylFree { state },
            vec![1.0, 0.5, 0.25],
            0.05,
            None,
            1e-6,
        ),
        make(
            ProbeKind::WeylBarrier { state, barrier: *barrier },
            vec![1.0, 0.5, 0.25],
            0.05,
            None,
            1e-6,
        ),
        make(
            ProbeKind::NonrelTraversal { packet: *packet, barrier: *barrier },
            vec![10.0, 100.0, 1000.0],
            1e-4,
            Some((-2.0, 0.1)),
            1e-12,
        ),
        make(
            ProbeKind::FreeReduction { packet: *packet, barrier: *barrier },
            vec![barrier.v0 / 4.0, barrier.v0 / 16.0, barrier.v0 / 64.0],
            // Δτ̄ is linear in V0; the last point sits at V0/64
            2.0 * barrier.length() / units.carrier_velocity(packet.k0),
            Some((1.0, 0.1)),
            1e-12,
        ),
        make(
            ProbeKind::HighEnergy { packet: *packet },
            vec![2.0, 4.0, 8.0],
            0.02,
            None,
            1e-3,
        ),
        make(
            ProbeKind::Monochromatic { packet: *packet, barrier: *barrier },
            vec![10.0, 20.0, 40.0],
            1e-2,
            Some((-2.0, 0.15)),
            1e-12,
        ),
    ]
}

/// Im R_c* against the classical index-of-refraction form
/// (p₀/μc) E_p/√((E_p − V0)² − μ²c⁴) at the packet's carrier.
pub fn refraction_index_check(
    packet: &GaussianPacket,
    barrier: &SquareBarrier,
    units: &Units,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let r = r_c_position(packet, barrier, units, spec)?.value;
    let p0 = units.hbar * packet.k0;
    let ior = p0 / units.momentum_scale() * tau_top(packet.k0, barrier, units)? / photon_time(barrier, units);
    Ok((r, ior))
}

#[cfg(test)]
mod tests {
    use super::*;

    const NAT: Units = Units::natural();

    fn setup() -> (SquareBarrier, GaussianPacket) {
        (
            SquareBarrier::new(-5.0, -3.0, 0.5, &NAT).unwrap(),
            GaussianPacket::new(-60.0, 5.0, 2.0).unwrap(),
        )
    }

    #[test]
    fn kappa_probe_rate() {
        let (b, p) = setup();
        let battery = standard_battery(&b, &p, &NAT, &QuadratureSpec::default());
        let probe = run_limit_probe(&battery[0]).unwrap();
        assert!(probe.passed, "{}", probe.message);
        assert!((probe.fitted_rate + 2.0).abs() < 0.01);
    }

    #[test]
    fn weyl_barrier_matches_closed_form() {
        let (b, _) = setup();
        let state = ClassicalState { q0: -15.0, p0: 2.0 };
        let target = classical_barrier_toa_closed(&state, &b, &NAT).unwrap();
        for hbar in [1.0, 0.3] {
            let w = weyl_barrier(&state, &b, &NAT.with_hbar(hbar), &QuadratureSpec::default()).unwrap();
            assert!((w - target).abs() < 1e-7 * target.abs(), "{hbar}: {w} vs {target}");
        }
    }

    #[test]
    fn weyl_barrier_rejects_bad_states() {
        let (b, _) = setup();
        let q = QuadratureSpec::default();
        assert!(weyl_barrier(&ClassicalState { q0: -4.0, p0: 2.0 }, &b, &NAT, &q).is_err());
        assert!(matches!(
            weyl_barrier(&ClassicalState { q0: -15.0, p0: 0.5 }, &b, &NAT, &q),
            Err(Error::ForbiddenRegion { .. })
        ));
    }

    #[test]
    fn failing_probe_keeps_data() {
        let (b, p) = setup();
        let mut spec = standard_battery(&b, &p, &NAT, &QuadratureSpec::default()).remove(0);
        spec.tolerance = 1e-12;
        let probe = run_limit_probe(&spec).unwrap();
        assert!(!probe.passed);
        assert_eq!(probe.observed.len(), 3);
        assert!(probe.message.contains("final error"));
    }

    #[test]
    fn sequence_must_be_monotone() {
        let (b, p) = setup();
        let mut spec = standard_battery(&b, &p, &NAT, &QuadratureSpec::default()).remove(0);
        spec.sequence = vec![10.0, 5.0, 20.0];
        assert!(run_limit_probe(&spec).is_err());
        spec.sequence = vec![10.0];
        assert!(run_limit_probe(&spec).is_err());
    }
}
