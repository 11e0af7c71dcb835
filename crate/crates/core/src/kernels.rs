//! Time-kernel factors of the free particle and of the square barrier.
//!
//! All factors depend on the separation only through λ = μc|ζ|/ħ and on the
//! potential only through U = V/μc², and are evaluated in those reduced
//! variables.
//!
//! * 𝒯_F(λ) = 1 + (2/π) ∫₁^∞ e^{-λy} √(y²−1)/y dy
//! * 𝒢_B(U, y) = Re (1 − U²/y² + 2iU√(y²−1)/y²)^{-1/2}
//! * ℱ_B(U, λ) = (1/π) ∫₀^π (w²/D) cos(λ√(w²−1)) dθ with
//!   c² = (1 + cos θ)/2, D = √(1 − U² sin²θ/4), w = D − U c²
//! * 𝒯_B(U, λ) = ℱ_B + (2/π) ∫₁^∞ e^{-λy} √(y²−1)/y 𝒢_B(U, y) dy
//!
//! The θ-integral for ℱ_B comes from the contour/Laguerre representation
//! (available as [`f_factor_contour`]) by doing the y-integral in closed form
//! and collecting the residue of the pole that moves with θ. The contour
//! representation only converges for small |U|; the θ-integral is exact for
//! every |U| < 1.

use std::collections::HashMap;
use std::f64::consts::{FRAC_2_PI, PI};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classical::{Region, SquareBarrier};
use crate::error::{Error, Result};
use crate::numerics::{
    branch_cut_integral, contour_circle_integral, hyp0f1_one, laguerre_integral, QuadratureSpec,
};
use crate::units::Units;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// Below this λ the free factor uses its small-argument expansion.
const SMALL_LAMBDA: f64 = 1e-3;
/// Above this λ the branch-cut term is below 1e-17.
const LARGE_LAMBDA: f64 = 40.0;
/// Coarsest trapezoid grid on [0, π] for ℱ_B.
const BASE_NODES: usize = 16;
const MAX_LEVELS: usize = 18;
/// Contour radii (in units of μc) tried by the literal ℱ_B evaluation.
const CONTOUR_RADII: [f64; 4] = [0.5, 0.7, 0.85, 0.95];

/// (η, ζ) with η = (q+q′)/2 and ζ = q − q′.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelPoint {
    pub eta: f64,
    pub zeta: f64,
}

/// A real kernel value, the imaginary part left over by its complex
/// ingredients, and an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: f64,
    pub im_residual: f64,
    pub abs_error: f64,
}

impl KernelValue {
    fn real(value: f64, abs_error: f64) -> Self {
        KernelValue {
            value,
            im_residual: 0.0,
            abs_error,
        }
    }

    fn combine(self, a: f64, other: KernelValue, b: f64) -> Self {
        KernelValue {
            value: a * self.value + b * other.value,
            im_residual: (a * self.im_residual).abs() + (b * other.im_residual).abs(),
            abs_error: (a * self.abs_error).abs() + (b * other.abs_error).abs(),
        }
    }
}

fn reduced(zeta: f64, units: &Units) -> Result<f64> {
    if !zeta.is_finite() {
        return Err(Error::NonFinite("kernel separation"));
    }
    if zeta == 0.0 {
        return Err(Error::SingularPoint);
    }
    Ok(units.reduced_separation(zeta.abs()))
}

fn reduced_potential(v0: f64, units: &Units) -> Result<f64> {
    let u = units.reduced_energy(v0);
    if !(u.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "|V0|/μc² must be < 1, got {u}"
        )));
    }
    Ok(u)
}

/// 𝒯_F at reduced separation λ > 0.
pub fn free_factor_reduced(lambda: f64, spec: &QuadratureSpec) -> Result<KernelValue> {
    if lambda < SMALL_LAMBDA {
        // 2/(πλ) − (λ/π)(ln(λ/2) + γ_E − 3/2), next term O(λ³ ln λ)
        let value = FRAC_2_PI / lambda - lambda / PI * ((0.5 * lambda).ln() + EULER_GAMMA - 1.5);
        let next = lambda.powi(3) * (1.0 + lambda.ln().abs());
        return Ok(KernelValue::real(value, next));
    }
    if lambda > LARGE_LAMBDA {
        return Ok(KernelValue::real(1.0, (-lambda).exp()));
    }
    let cut = branch_cut_integral(|_| Ok(1.0), lambda, spec)?;
    Ok(KernelValue::real(1.0 + FRAC_2_PI * cut.value, FRAC_2_PI * cut.abs_error))
}

/// Free time-kernel factor 𝒯_F(ζ).
pub fn free_factor(zeta: f64, units: &Units, spec: &QuadratureSpec) -> Result<KernelValue> {
    free_factor_reduced(reduced(zeta, units)?, spec)
}

/// 𝒢_B − 1 from both terms; their sum is real up to rounding.
///
/// With a = 1 + δ, a^{-1/2} − 1 = −δ/(√a (1 + √a)), which keeps full relative
/// accuracy as δ → 0 at large y.
fn g_sum_minus_one(u: f64, y: f64) -> Complex64 {
    let s = (y * y - 1.0).max(0.0).sqrt();
    let re = -(u / y) * (u / y);
    let im = 2.0 * s / (y * y) * u;
    let term = |delta: Complex64| {
        let root = (1.0 + delta).sqrt();
        -delta / (root * (1.0 + root))
    };
    0.5 * (term(Complex64::new(re, im)) + term(Complex64::new(re, -im)))
}

/// Real part of 𝒢_B − 1 at reduced potential U.
pub fn g_minus_one(u: f64, y: f64) -> f64 {
    g_sum_minus_one(u, y).re
}

fn g_sum(u: f64, y: f64) -> Complex64 {
    1.0 + g_sum_minus_one(u, y)
}

/// 𝒢_B(U, y) for y ≥ 1; the imaginary part of the summed terms is reported
/// as `im_residual`.
pub fn g_factor(v0: f64, y: f64, units: &Units) -> Result<KernelValue> {
    let u = reduced_potential(v0, units)?;
    if !(y >= 1.0) {
        return Err(Error::Domain(format!("calG_B needs y >= 1, got {y}")));
    }
    let g = g_sum(u, y);
    Ok(KernelValue {
        value: g.re,
        im_residual: g.im,
        abs_error: 0.0,
    })
}

/// Trapezoid tables for ℱ_B at one value of U.
///
/// Level 0 is the full grid of `BASE_NODES` intervals on [0, π] with the end
/// nodes half-weighted; level ℓ holds only the nodes new at `BASE_NODES·2^ℓ`.
/// Each node stores (w²/D·weight, w² − 1).
#[derive(Debug)]
pub struct ThetaTable {
    u: f64,
    levels: Vec<OnceLock<Vec<(f64, f64)>>>,
}

impl ThetaTable {
    fn new(u: f64) -> Self {
        ThetaTable {
            u,
            levels: (0..=MAX_LEVELS).map(|_| OnceLock::new()).collect(),
        }
    }

    /// Shared table for U, built on first use and immutable afterwards.
    pub fn for_potential(u: f64) -> Arc<ThetaTable> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<ThetaTable>>>> = OnceLock::new();
        let map = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = map.lock().expect("theta table cache poisoned");
        Arc::clone(
            guard
                .entry(u.to_bits())
                .or_insert_with(|| Arc::new(ThetaTable::new(u))),
        )
    }

    fn node(&self, theta: f64, weight: f64) -> (f64, f64) {
        let u = self.u;
        let (sin, cos) = theta.sin_cos();
        let c2 = 0.5 * (1.0 + cos);
        let q = 0.25 * u * u * sin * sin;
        let d = (1.0 - q).sqrt();
        let w = d - u * c2;
        // w − 1 without cancellation: D − 1 = −q/(1 + D)
        let w_minus_one = -u * c2 - q / (1.0 + d);
        (weight * w * w / d, w_minus_one * (w + 1.0))
    }

    fn level(&self, l: usize) -> &[(f64, f64)] {
        self.levels[l].get_or_init(|| {
            if l == 0 {
                (0..=BASE_NODES)
                    .map(|j| {
                        let weight = if j == 0 || j == BASE_NODES { 0.5 } else { 1.0 };
                        self.node(PI * j as f64 / BASE_NODES as f64, weight)
                    })
                    .collect()
            } else {
                let n = BASE_NODES << l;
                (0..n / 2)
                    .map(|j| self.node(PI * (2 * j + 1) as f64 / n as f64, 1.0))
                    .collect()
            }
        })
    }

    /// Largest |w² − 1|^{1/2} over θ, reached at θ = 0 where w = 1 − U.
    pub fn max_wavenumber(&self) -> f64 {
        let u = self.u;
        (u * u - 2.0 * u).abs().sqrt()
    }

    /// (1/π)∫₀^π (w²/D) κ/(κ² − (w² − 1)) dθ, the sine transform in λ of
    /// ℱ_B at wavenumber κ taken in the Abel sense. Needs κ above
    /// [`ThetaTable::max_wavenumber`].
    pub fn sine_symbol(&self, kappa: f64, rel_tolerance: f64) -> Result<f64> {
        let top = self.max_wavenumber();
        if !(kappa > top) || self.u > 0.0 {
            return Err(Error::Domain(format!(
                "sine symbol needs U <= 0 and kappa > {top}, got U = {}, kappa = {kappa}",
                self.u
            )));
        }
        let mut sum = 0.0;
        let mut previous: Option<f64> = None;
        for l in 0..=MAX_LEVELS {
            for &(amp, zsq) in self.level(l) {
                sum += amp * kappa / (kappa * kappa - zsq);
            }
            let current = sum / (BASE_NODES << l) as f64;
            if let Some(prev) = previous {
                if (current - prev).abs() <= rel_tolerance * current.abs() {
                    return Ok(current);
                }
            }
            previous = Some(current);
        }
        Err(Error::Accuracy {
            last: sum / (BASE_NODES << MAX_LEVELS) as f64,
            previous: previous.unwrap_or(f64::NAN),
        })
    }

    /// ℱ_B(U, λ) by the trapezoid rule, doubling until successive grids
    /// agree to `rel_tolerance`.
    pub fn evaluate(&self, lambda: f64, rel_tolerance: f64) -> Result<KernelValue> {
        let growth = if self.u > 0.0 { self.max_wavenumber() * lambda } else { 0.0 };
        if growth > 700.0 {
            return Err(Error::Overflow { exponent: growth });
        }
        let term = |(amp, zsq): (f64, f64)| -> f64 {
            if zsq >= 0.0 {
                amp * (zsq.sqrt() * lambda).cos()
            } else {
                amp * ((-zsq).sqrt() * lambda).cosh()
            }
        };
        let min_nodes = (2.0 * self.max_wavenumber() * lambda).max(32.0);
        let mut sum = 0.0;
        let mut scale = 0.0;
        let mut previous: Option<f64> = None;
        for l in 0..=MAX_LEVELS {
            for &node in self.level(l) {
                let t = term(node);
                sum += t;
                scale += t.abs();
            }
            let n = (BASE_NODES << l) as f64;
            let current = sum / n;
            if n >= min_nodes {
                if let Some(prev) = previous {
                    let diff = (current - prev).abs();
                    let floor = 1e-15 * scale / n;
                    if diff <= (rel_tolerance * scale / n).max(floor) {
                        return Ok(KernelValue::real(current, diff.max(floor)));
                    }
                }
            }
            previous = Some(current);
        }
        Err(Error::Accuracy {
            last: sum / (BASE_NODES << MAX_LEVELS) as f64,
            previous: previous.unwrap_or(f64::NAN),
        })
    }
}

/// ℱ_B(U, λ) in reduced variables; even in λ.
pub fn f_factor_reduced(u: f64, lambda: f64, spec: &QuadratureSpec) -> Result<KernelValue> {
    if !(u.abs() < 1.0) {
        return Err(Error::Domain(format!("|U| must be < 1, got {u}")));
    }
    if u == 0.0 {
        return Ok(KernelValue::real(1.0, 0.0));
    }
    ThetaTable::for_potential(u).evaluate(lambda.abs(), spec.rel_tolerance)
}

/// ℱ_B(V0, ζ). Finite at ζ = 0.
pub fn f_factor(v0: f64, zeta: f64, units: &Units, spec: &QuadratureSpec) -> Result<KernelValue> {
    let u = reduced_potential(v0, units)?;
    if !zeta.is_finite() {
        return Err(Error::NonFinite("kernel separation"));
    }
    f_factor_reduced(u, units.reduced_separation(zeta.abs()), spec)
}

/// ℱ_B(V0, ζ) from its defining contour/Laguerre representation,
///
/// ∫₀^∞ dy e^{-y} ∮ dz/(2πi z) √(1+z²) ₀F₁(;1; (U/2)(λ − iy/z)² (√(1+z²) + U/2)),
///
/// with z in units of μc on a circle of radius r < 1. The Laguerre integrand
/// grows like e^{(2/r)√(|U|P/2) y}, so this only converges for small |U|.
/// Radii from 0.5 up to 0.95 are tried in turn; the returned error is the
/// divergence of the last radius if none converges.
pub fn f_factor_contour(
    v0: f64,
    zeta: f64,
    units: &Units,
    spec: &QuadratureSpec,
    radius: Option<f64>,
) -> Result<KernelValue> {
    let u = reduced_potential(v0, units)?;
    let lambda = units.reduced_separation(zeta);
    let radii: Vec<f64> = match radius {
        Some(r) if r > 0.0 && r < 1.0 => vec![r],
        Some(r) => {
            return Err(Error::Domain(format!(
                "contour radius must lie in (0, μc), got {r}·μc"
            )))
        }
        None => CONTOUR_RADII.to_vec(),
    };
    let mut last_err = Error::Divergence { rate: f64::INFINITY };
    for r in radii {
        let inner = |y: f64| -> Result<Complex64> {
            let res = contour_circle_integral(
                |z| {
                    let root = (1.0 + z * z).sqrt();
                    let shift = Complex64::new(lambda, 0.0) - Complex64::i() * y / z;
                    let arg = 0.5 * u * shift * shift * (root + 0.5 * u);
                    Ok(root * hyp0f1_one(arg)? / z)
                },
                r,
                spec,
            )?;
            Ok(res.value)
        };
        match laguerre_integral(inner, spec) {
            Ok(res) => {
                return Ok(KernelValue {
                    value: res.value.re,
                    im_residual: res.value.im,
                    abs_error: res.abs_error_estimate,
                })
            }
            Err(e @ (Error::Divergence { .. } | Error::Overflow { .. } | Error::Accuracy { .. })) => last_err = e,
            Err(e) => return Err(e),
        }
    }
    Err(last_err)
}

/// 𝒯_B(U, λ) in reduced variables.
///
/// Written as ℱ_B + (𝒯_F − 1) + (2/π)∫(𝒢_B − 1)…, so the 1/λ singularity is
/// carried entirely by the free factor and U = 0 reduces to 𝒯_F exactly.
pub fn barrier_factor_reduced(u: f64, lambda: f64, spec: &QuadratureSpec) -> Result<KernelValue> {
    let free = free_factor_reduced(lambda, spec)?;
    let f = f_factor_reduced(u, lambda, spec)?;
    if u == 0.0 {
        return Ok(free);
    }
    let mut correction = KernelValue::default();
    if lambda <= LARGE_LAMBDA {
        let residual = std::cell::Cell::new(0.0f64);
        let cut = branch_cut_integral(
            |y| {
                let g = g_sum_minus_one(u, y);
                residual.set(residual.get().max(g.im.abs()));
                Ok(g.re)
            },
            lambda,
            spec,
        )?;
        // |∫ e^{-λy}√(y²−1)/y · Im| ≤ max|Im| · (𝒯_F − 1)·π/2
        let bound = residual.get() * (free.value - 1.0).abs() * PI / 2.0;
        correction = KernelValue {
            value: FRAC_2_PI * cut.value,
            im_residual: FRAC_2_PI * bound,
            abs_error: FRAC_2_PI * cut.abs_error,
        };
    }
    Ok(KernelValue {
        value: f.value + (free.value - 1.0) + correction.value,
        im_residual: f.im_residual + correction.im_residual,
        abs_error: f.abs_error + free.abs_error + correction.abs_error,
    })
}

/// Barrier time-kernel factor 𝒯_B(V0, ζ); `v0` is signed.
pub fn barrier_factor(v0: f64, zeta: f64, units: &Units, spec: &QuadratureSpec) -> Result<KernelValue> {
    let u = reduced_potential(v0, units)?;
    barrier_factor_reduced(u, reduced(zeta, units)?, spec)
}

/// Barrier time-kernel factor T̃_B(η, ζ), dispatched on the region of η.
///
/// * I (η > b): (η/2)𝒯_F
/// * II (a ≤ η ≤ b): ((η−b)/2)𝒯_F + (b/2)𝒯_B(V0)
/// * III (η < a): ((η+L)/2)𝒯_F − (L/2)𝒯_B(−V0)
pub fn barrier_tkf(
    point: KernelPoint,
    barrier: &SquareBarrier,
    units: &Units,
    spec: &QuadratureSpec,
) -> Result<KernelValue> {
    let KernelPoint { eta, zeta } = point;
    if !eta.is_finite() {
        return Err(Error::NonFinite("kernel mean coordinate"));
    }
    let free = free_factor(zeta, units, spec)?;
    match Region::locate(eta, barrier) {
        Region::I => Ok(free.combine(0.5 * eta, KernelValue::default(), 0.0)),
        Region::II => {
            let b = barrier.b;
            let tb = barrier_factor(barrier.v0, zeta, units, spec)?;
            Ok(free.combine(0.5 * (eta - b), tb, 0.5 * b))
        }
        Region::III => {
            let l = barrier.length();
            let tb = barrier_factor(-barrier.v0, zeta, units, spec)?;
            Ok(free.combine(0.5 * (eta + l), tb, -0.5 * l))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const NAT: Units = Units::natural();

    #[test]
    fn free_factor_limits() {
        let spec = QuadratureSpec::default();
        assert_eq!(free_factor(0.0, &NAT, &spec), Err(Error::SingularPoint));
        assert_relative_eq!(free_factor(100.0, &NAT, &spec).unwrap().value, 1.0);
        let at_one = free_factor(1.0, &NAT, &spec).unwrap().value;
        assert_relative_eq!(at_one, 1.0 + FRAC_2_PI * 0.273_620_752_026_116, max_relative = 1e-11);
        assert_eq!(free_factor(-0.7, &NAT, &spec), free_factor(0.7, &NAT, &spec));
    }

    #[test]
    fn small_argument_form_joins_quadrature() {
        let spec = QuadratureSpec::default().with_tolerance(1e-12);
        let lambda = 0.999_999 * SMALL_LAMBDA;
        let cut = branch_cut_integral(|_| Ok(1.0), lambda, &spec).unwrap().value;
        let series = free_factor_reduced(lambda, &spec).unwrap().value;
        let direct = 1.0 + FRAC_2_PI * cut;
        assert_relative_eq!(series, direct, max_relative = 1e-8);
    }

    #[test]
    fn g_factor_values() {
        assert_relative_eq!(g_factor(0.0, 3.0, &NAT).unwrap().value, 1.0);
        let at_one = g_factor(0.5, 1.0, &NAT).unwrap();
        assert_relative_eq!(at_one.value, 1.154_700_538_379_251_7, max_relative = 1e-15);
        assert!(at_one.im_residual.abs() < 1e-16);
        assert_relative_eq!(g_factor(0.5, 1e8, &NAT).unwrap().value, 1.0, max_relative = 1e-12);
        assert!(g_factor(0.5, 0.5, &NAT).is_err());
    }

    #[test]
    fn f_factor_trivial_and_even() {
        let spec = QuadratureSpec::default();
        assert_eq!(f_factor(0.0, 2.0, &NAT, &spec).unwrap().value, 1.0);
        for v0 in [-0.5, 0.25] {
            let a = f_factor(v0, 3.0, &NAT, &spec).unwrap().value;
            let b = f_factor(v0, -3.0, &NAT, &spec).unwrap().value;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn contour_representation_agrees_for_small_potential() {
        let spec = QuadratureSpec::default();
        for v0 in [-0.05, 0.05] {
            let reduced = f_factor(v0, 1.0, &NAT, &spec).unwrap().value;
            let contour = f_factor_contour(v0, 1.0, &NAT, &spec, None).unwrap();
            assert!((reduced - contour.value).abs() < 1e-7, "{v0}: {reduced} vs {contour:?}");
        }
    }

    #[test]
    fn contour_representation_diverges_for_large_potential() {
        let spec = QuadratureSpec::default();
        let err = f_factor_contour(-0.5, 1.0, &NAT, &spec, Some(0.5)).unwrap_err();
        assert!(matches!(err, Error::Divergence { rate } if rate >= 1.0));
    }

    #[test]
    fn barrier_factor_reduces_to_free() {
        let spec = QuadratureSpec::default();
        for zeta in [0.01, 0.5, 1.0, 7.0] {
            let tb = barrier_factor(0.0, zeta, &NAT, &spec).unwrap().value;
            let tf = free_factor(zeta, &NAT, &spec).unwrap().value;
            assert_eq!(tb, tf);
        }
    }

    #[test]
    fn tkf_regions() {
        let spec = QuadratureSpec::default();
        let barrier = SquareBarrier::new(-5.0, -3.0, 0.5, &NAT).unwrap();
        let tf = free_factor(1.0, &NAT, &spec).unwrap().value;
        let region_one = barrier_tkf(KernelPoint { eta: -1.0, zeta: 1.0 }, &barrier, &NAT, &spec).unwrap();
        assert_relative_eq!(region_one.value, -0.5 * tf);
        let flat = barrier.with_height(0.0);
        for eta in [-4.0, -10.0] {
            let v = barrier_tkf(KernelPoint { eta, zeta: 1.0 }, &flat, &NAT, &spec).unwrap();
            assert_relative_eq!(v.value, 0.5 * eta * tf, max_relative = 1e-14);
        }
    }

    #[test]
    fn large_separation_drops_branch_term() {
        let spec = QuadratureSpec::default();
        let tb = barrier_factor(-0.5, 60.0, &NAT, &spec).unwrap().value;
        let f = f_factor(-0.5, 60.0, &NAT, &spec).unwrap().value;
        assert_eq!(tb, f);
    }
}
