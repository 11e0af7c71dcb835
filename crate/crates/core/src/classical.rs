//! Classical relativistic time of arrival at the origin.
//!
//! Times come from the quantization-ready rewriting of the inverted
//! Hamiltonian,
//!
//! t = −sgn(p) √(μ/2) γ_p ∫ₓ^{q₀} dq′ [p²/2μ + U (γ_p + U/2μc²)]^{-1/2},
//! U = V(q₀) − V(q′),
//!
//! which is what the time-kernel factors quantize and what their ħ → 0 limit
//! reproduces. [`crtoa_hamiltonian`] integrates the literal inverted
//! Hamiltonian instead; the two agree when no potential step is crossed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{fourier_sine_integral, QuadratureSpec, SineTransform};
use crate::units::Units;

/// V(q) = V0 on (a, b), zero elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareBarrier {
    pub a: f64,
    pub b: f64,
    #[serde(alias = "V0")]
    pub v0: f64,
}

impl SquareBarrier {
    pub fn new(a: f64, b: f64, v0: f64, units: &Units) -> Result<Self> {
        let barrier = SquareBarrier { a, b, v0 };
        barrier.validate(units)?;
        Ok(barrier)
    }

    /// Checks a < b < 0 and 0 ≤ V0 < μc². V0 = 0 is allowed for kernel
    /// evaluation; the traversal quantities need V0 > 0.
    pub fn validate(&self, units: &Units) -> Result<()> {
        if !(self.a.is_finite() && self.b.is_finite() && self.a < self.b && self.b < 0.0) {
            return Err(Error::invalid(
                "barrier",
                format!("require a < b < 0, got a = {}, b = {}", self.a, self.b),
            ));
        }
        if !(self.v0 >= 0.0 && self.v0 < units.rest_energy()) {
            return Err(Error::invalid(
                "barrier.V0",
                format!("require 0 <= V0 < mu c^2 = {}, got {}", units.rest_energy(), self.v0),
            ));
        }
        Ok(())
    }

    /// L = b − a.
    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// Same geometry at a different height. Used for V0 → 0 sequences, so
    /// the height is not validated.
    pub fn with_height(self, v0: f64) -> Self {
        SquareBarrier { v0, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalState {
    pub q0: f64,
    pub p0: f64,
}

/// A potential that is constant between breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstant {
    /// Sorted interior breakpoints.
    edges: Vec<f64>,
    /// `values[i]` holds on (edges[i-1], edges[i]); one more value than edges.
    values: Vec<f64>,
}

impl PiecewiseConstant {
    pub fn zero() -> Self {
        PiecewiseConstant {
            edges: Vec::new(),
            values: vec![0.0],
        }
    }

    pub fn new(edges: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != edges.len() + 1 {
            return Err(Error::invalid("potential", "need one more value than edges"));
        }
        if edges.windows(2).any(|w| w[1] <= w[0]) || edges.iter().any(|e| !e.is_finite()) {
            return Err(Error::invalid("potential", "edges must be finite and increasing"));
        }
        Ok(PiecewiseConstant { edges, values })
    }

    pub fn from_barrier(barrier: &SquareBarrier) -> Self {
        PiecewiseConstant {
            edges: vec![barrier.a, barrier.b],
            values: vec![0.0, barrier.v0, 0.0],
        }
    }

    /// Value at `q`; on an edge the value of the segment to the right.
    pub fn value_at(&self, q: f64) -> f64 {
        let i = self.edges.partition_point(|e| *e <= q);
        self.values[i]
    }

    /// Constant pieces covering [lo, hi] as (from, to, value).
    fn pieces(&self, lo: f64, hi: f64) -> Vec<(f64, f64, f64)> {
        let mut cuts = vec![lo];
        cuts.extend(self.edges.iter().copied().filter(|e| *e > lo && *e < hi));
        cuts.push(hi);
        cuts.windows(2)
            .map(|w| (w[0], w[1], self.value_at(0.5 * (w[0] + w[1]))))
            .collect()
    }
}

/// γ_p = √(1 + p²/μ²c²).
pub fn gamma_of_p(p: f64, units: &Units) -> f64 {
    units.gamma(p)
}

/// Free arrival time −μq₀γ/p₀ at the origin.
pub fn free_toa(state: &ClassicalState, units: &Units) -> f64 {
    -units.mass * state.q0 * units.gamma(state.p0) / state.p0
}

/// Arrival time at `arrival_x` by segment-exact integration of the
/// quantization-ready form (see module docs).
pub fn crtoa_quadrature(
    state: &ClassicalState,
    potential: &PiecewiseConstant,
    arrival_x: f64,
    units: &Units,
) -> Result<f64> {
    check_state(state)?;
    let (p, mu) = (state.p0, units.mass);
    let gamma = units.gamma(p);
    let v_start = potential.value_at(state.q0);
    let sign = if arrival_x <= state.q0 { 1.0 } else { -1.0 };
    let (lo, hi) = (arrival_x.min(state.q0), arrival_x.max(state.q0));
    let mut integral = 0.0;
    for (from, to, v) in potential.pieces(lo, hi) {
        let u = v_start - v;
        let bracket = p * p / (2.0 * mu) + u * (gamma + u / (2.0 * units.rest_energy()));
        if bracket <= 0.0 {
            return Err(Error::ForbiddenRegion { from, to });
        }
        integral += (to - from) / bracket.sqrt();
    }
    Ok(-p.signum() * (mu / 2.0).sqrt() * gamma * sign * integral)
}

/// Arrival time from the literal inverted Hamiltonian,
/// −sgn(p)∫ₓ^{q₀} dq′/c (1 − μ²c⁴/(H − V(q′))²)^{-1/2}.
pub fn crtoa_hamiltonian(
    state: &ClassicalState,
    potential: &PiecewiseConstant,
    arrival_x: f64,
    units: &Units,
) -> Result<f64> {
    check_state(state)?;
    let rest = units.rest_energy();
    let energy = rest * units.gamma(state.p0) + potential.value_at(state.q0);
    let sign = if arrival_x <= state.q0 { 1.0 } else { -1.0 };
    let (lo, hi) = (arrival_x.min(state.q0), arrival_x.max(state.q0));
    let mut integral = 0.0;
    for (from, to, v) in potential.pieces(lo, hi) {
        let kinetic = energy - v;
        let ratio = rest / kinetic;
        if kinetic <= rest {
            return Err(Error::ForbiddenRegion { from, to });
        }
        integral += (to - from) / (units.c * (1.0 - ratio * ratio).sqrt());
    }
    Ok(-state.p0.signum() * sign * integral)
}

fn check_state(state: &ClassicalState) -> Result<()> {
    if !(state.q0.is_finite() && state.p0.is_finite()) || state.p0 == 0.0 {
        return Err(Error::invalid("state", "need finite q0 and nonzero finite p0"));
    }
    Ok(())
}

/// γ/√((γ − V0/μc²)² − 1): barrier-crossing time per unit L/c when climbing
/// onto the barrier.
pub fn t_minus(p: f64, v0: f64, units: &Units) -> Result<f64> {
    step_factor(p, -v0, units)
}

/// γ/√((γ + V0/μc²)² − 1): crossing time per unit length/c after stepping
/// down off the barrier.
pub fn t_plus(p: f64, v0: f64, units: &Units) -> Result<f64> {
    step_factor(p, v0, units)
}

fn step_factor(p: f64, shift: f64, units: &Units) -> Result<f64> {
    let gamma = units.gamma(p);
    let g = gamma + shift / units.rest_energy();
    let d = g * g - 1.0;
    if d <= 0.0 {
        return Err(Error::ForbiddenRegion {
            from: f64::NAN,
            to: f64::NAN,
        });
    }
    Ok(gamma / d.sqrt())
}

/// Which part of the line a position lies in relative to the barrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    /// η > b, between barrier and detector.
    I,
    /// a ≤ η ≤ b, on the barrier.
    II,
    /// η < a, on the far side.
    III,
}

impl Region {
    pub fn locate(x: f64, barrier: &SquareBarrier) -> Region {
        if x > barrier.b {
            Region::I
        } else if x >= barrier.a {
            Region::II
        } else {
            Region::III
        }
    }
}

/// Closed-form barrier arrival time for p₀ > 0, by region of q₀.
///
/// * III: −μ(q₀+L)γ/p₀ + (L/c)·t⁻
/// * II: −μ(q₀−b)γ/p₀ − (b/c)·t⁺
/// * I: −μq₀γ/p₀
pub fn classical_barrier_toa_closed(
    state: &ClassicalState,
    barrier: &SquareBarrier,
    units: &Units,
) -> Result<f64> {
    check_state(state)?;
    let (q0, p0) = (state.q0, state.p0);
    let gamma = units.gamma(p0);
    let mu = units.mass;
    let forbidden = || Error::ForbiddenRegion {
        from: barrier.a,
        to: barrier.b,
    };
    match Region::locate(q0, barrier) {
        Region::I => Ok(free_toa(state, units)),
        Region::II => {
            let tp = t_plus(p0, barrier.v0, units).map_err(|_| forbidden())?;
            Ok(-mu * (q0 - barrier.b) * gamma / p0 - barrier.b / units.c * tp)
        }
        Region::III => {
            let l = barrier.length();
            let tm = t_minus(p0, barrier.v0, units).map_err(|_| forbidden())?;
            Ok(-mu * (q0 + l) * gamma / p0 + l / units.c * tm)
        }
    }
}

/// Phase-space function of a time-kernel factor T̃(q₀, ζ):
/// −(2μ/ħ) ∫₀^∞ sin(p₀ζ/ħ) T̃(q₀, ζ) dζ in the Abel sense.
///
/// `kernel` must be real and even in ζ. `feature_length` is the smallest
/// structure of the kernel near ζ = 0 (the reduced Compton length ħ/μc for
/// the kernels in this crate).
pub fn weyl_wigner_transform<K>(
    kernel: K,
    p0: f64,
    units: &Units,
    spec: &QuadratureSpec,
    transform_tolerance: Option<f64>,
) -> Result<f64>
where
    K: Fn(f64) -> Result<f64> + Sync,
{
    let k = p0 / units.hbar;
    if !(k > 0.0) {
        return Err(Error::invalid("p0", "Weyl–Wigner transform needs p0 > 0"));
    }
    let mut transform = SineTransform::abel(k, 0.1 * k).with_feature_length(1.0 / units.compton_wavenumber());
    if let Some(tol) = transform_tolerance {
        transform = transform.with_extrapolation_tolerance(tol);
    }
    let integral = fourier_sine_integral(kernel, &transform, spec)?;
    Ok(-2.0 * units.mass / units.hbar * integral.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const NAT: Units = Units::natural();

    fn sample_barrier() -> SquareBarrier {
        SquareBarrier::new(-5.0, -3.0, 0.5, &NAT).unwrap()
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma_of_p(0.0, &NAT), 1.0);
        assert_relative_eq!(gamma_of_p(1.0, &NAT), 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(gamma_of_p(0.75, &NAT), 1.25, max_relative = 1e-15);
    }

    #[test]
    fn free_examples() {
        let s = ClassicalState { q0: -10.0, p0: 1.0 };
        let t = crtoa_quadrature(&s, &PiecewiseConstant::zero(), 0.0, &NAT).unwrap();
        assert_relative_eq!(t, 10.0 * 2f64.sqrt(), max_relative = 1e-14);
        let fast = ClassicalState { q0: -10.0, p0: 1e8 };
        assert_relative_eq!(free_toa(&fast, &NAT), 10.0, max_relative = 1e-12);
    }

    #[test]
    fn worked_barrier_value() {
        let s = ClassicalState { q0: -10.0, p0: 2.0 };
        let barrier = sample_barrier();
        let closed = classical_barrier_toa_closed(&s, &barrier, &NAT).unwrap();
        let quad = crtoa_quadrature(&s, &PiecewiseConstant::from_barrier(&barrier), 0.0, &NAT).unwrap();
        assert_relative_eq!(closed, 12.095_592_551_2, max_relative = 1e-10);
        assert_relative_eq!(closed, quad, max_relative = 1e-13);
        // the literal Hamiltonian weights the barrier segment by γ − V0 instead of γ
        let literal = crtoa_hamiltonian(&s, &PiecewiseConstant::from_barrier(&barrier), 0.0, &NAT).unwrap();
        assert_relative_eq!(literal, 11.390_935_83, max_relative = 1e-9);
    }

    #[test]
    fn region_two_matches_quadrature() {
        let barrier = sample_barrier();
        let s = ClassicalState { q0: -4.0, p0: 1.5 };
        let closed = classical_barrier_toa_closed(&s, &barrier, &NAT).unwrap();
        let quad = crtoa_quadrature(&s, &PiecewiseConstant::from_barrier(&barrier), 0.0, &NAT).unwrap();
        assert_relative_eq!(closed, quad, max_relative = 1e-13);
    }

    #[test]
    fn below_barrier_is_forbidden() {
        let barrier = sample_barrier();
        let s = ClassicalState { q0: -10.0, p0: 0.5 };
        assert!(matches!(
            classical_barrier_toa_closed(&s, &barrier, &NAT),
            Err(Error::ForbiddenRegion { .. })
        ));
        assert!(matches!(
            crtoa_quadrature(&s, &PiecewiseConstant::from_barrier(&barrier), 0.0, &NAT),
            Err(Error::ForbiddenRegion { from, to }) if from == -5.0 && to == -3.0
        ));
    }

    #[test]
    fn step_factor_ordering() {
        for p in [1.2, 2.0, 5.0] {
            let free = NAT.gamma(p) / p;
            let tm = t_minus(p, 0.5, &NAT).unwrap();
            let tp = t_plus(p, 0.5, &NAT).unwrap();
            assert!(tm > free && free > tp);
        }
    }

    #[test]
    fn abel_leading_part() {
        // T̃ = (q0/2)·1 gives −μq0/p0
        let spec = QuadratureSpec::default();
        let t = weyl_wigner_transform(|_| Ok(-5.0), 1.0, &NAT, &spec, None).unwrap();
        assert_relative_eq!(t, 10.0, max_relative = 1e-8);
    }

    #[test]
    fn barrier_validation() {
        assert!(SquareBarrier::new(-3.0, -5.0, 0.5, &NAT).is_err());
        assert!(SquareBarrier::new(-5.0, -3.0, 1.0, &NAT).is_err());
        assert!(SquareBarrier::new(-5.0, 1.0, 0.5, &NAT).is_err());
        assert!(SquareBarrier::new(-5.0, -3.0, -0.1, &NAT).is_err());
        assert!(SquareBarrier::new(-5.0, -3.0, 0.0, &NAT).is_ok());
        assert_eq!(sample_barrier().length(), 2.0);
    }
}
