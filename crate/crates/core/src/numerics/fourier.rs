use std::f64::consts::PI;

use rayon::prelude::*;

use super::{gauss, Estimate, QuadratureSpec};
use crate::error::{Error, Result};

/// e^{-εζ} falls below 1e-17 at ζ = 39/ε.
const ABEL_REACH: f64 = 39.0;
const MAX_REFINEMENTS: usize = 3;
const MAX_GRADING_LEVELS: usize = 60;

/// How the integrand `F` of a sine integral dies off at large ζ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// `F` is negligible beyond `cutoff`.
    Intrinsic { cutoff: f64 },
    /// `F` does not decay; the integral is taken in the Abel sense, with the
    /// damping rates of [`QuadratureSpec::abel_damping`] multiplied by `scale`.
    Abel { scale: f64 },
}

/// Parameters of `∫₀^∞ sin(kζ) F(ζ) dζ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineTransform {
    pub k: f64,
    pub decay: Decay,
    /// Highest oscillation frequency carried by `F` itself.
    pub max_frequency: f64,
    /// Smallest length scale of `F` near ζ = 0; panels are graded down to
    /// well below it.
    pub feature_length: f64,
    /// Accepted spread of the ε → 0 extrapolation in Abel mode, absolute.
    /// `None` uses √rel_tolerance relative to the result: the spread is the
    /// change from dropping the smallest rate, which overstates the error of
    /// the full extrapolant by orders of magnitude.
    pub extrapolation_tolerance: Option<f64>,
}

impl SineTransform {
    pub fn intrinsic(k: f64, cutoff: f64) -> Self {
        SineTransform {
            k,
            decay: Decay::Intrinsic { cutoff },
            max_frequency: 0.0,
            feature_length: f64::INFINITY,
            extrapolation_tolerance: None,
        }
    }

    pub fn abel(k: f64, scale: f64) -> Self {
        SineTransform {
            decay: Decay::Abel { scale },
            ..Self::intrinsic(k, 0.0)
        }
    }

    pub fn with_max_frequency(mut self, omega: f64) -> Self {
        self.max_frequency = omega;
        self
    }

    pub fn with_feature_length(mut self, length: f64) -> Self {
        self.feature_length = length;
        self
    }

    pub fn with_extrapolation_tolerance(mut self, tol: f64) -> Self {
        self.extrapolation_tolerance = Some(tol);
        self
    }
}

/// `∫₀^∞ sin(kζ) F(ζ) dζ`.
///
/// The range is cut into panels one period long (of the faster of `k` and
/// `max_frequency`), with the first panel graded geometrically toward ζ = 0 so
/// that `F ~ 1/ζ` and logarithmic terms are resolved; `F` is never evaluated
/// at ζ = 0. Each panel is integrated by Gauss–Legendre on the whole panel and
/// on its two halves; the difference is the error estimate. The node count is
/// doubled if the estimate misses the tolerance.
///
/// In [`Decay::Abel`] mode the integral is formed for every damping rate ε and
/// extrapolated to ε = 0 by Neville's polynomial scheme.
pub fn fourier_sine_integral<F>(f: F, transform: &SineTransform, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let k = transform.k;
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("sine integral needs k > 0, got {k}")));
    }
    let rates: Vec<f64> = match transform.decay {
        Decay::Intrinsic { cutoff } => {
            if !(cutoff > 0.0 && cutoff.is_finite()) {
                return Err(Error::Domain(format!("sine integral cutoff {cutoff} must be > 0")));
            }
            vec![0.0]
        }
        Decay::Abel { scale } => {
            if !(scale > 0.0 && scale.is_finite()) {
                return Err(Error::Domain(format!("Abel scale {scale} must be > 0")));
            }
            spec.abel_damping.iter().map(|e| e * scale).collect()
        }
    };
    let upper = match transform.decay {
        Decay::Intrinsic { cutoff } => cutoff,
        Decay::Abel { .. } => ABEL_REACH / rates.iter().copied().fold(f64::INFINITY, f64::min),
    };
    let panels = panels(transform, upper);

    let mut n = spec.nodes_per_oscillation;
    let mut last = None;
    for _ in 0..=MAX_REFINEMENTS {
        let sums = panel_sums(&f, k, &panels, n, &rates)?;
        let pass = sums
            .iter()
            .all(|s| s.error <= spec.rel_tolerance * s.l1.max(f64::MIN_POSITIVE));
        last = Some(sums);
        if pass {
            break;
        }
        n *= 2;
    }
    let sums = last.expect("at least one pass");
    if let Some(bad) = sums
        .iter()
        .find(|s| s.error > spec.rel_tolerance * s.l1.max(f64::MIN_POSITIVE))
    {
        return Err(Error::Accuracy {
            last: bad.fine,
            previous: bad.coarse,
        });
    }

    match transform.decay {
        Decay::Intrinsic { .. } => Estimate::new(sums[0].fine, sums[0].error).checked("sine integral"),
        Decay::Abel { .. } => {
            let values: Vec<f64> = sums.iter().map(|s| s.fine).collect();
            let full = neville_at_zero(&rates, &values);
            let reduced = neville_at_zero(&rates[..rates.len() - 1], &values[..values.len() - 1]);
            let spread = (full - reduced).abs();
            let tol = transform
                .extrapolation_tolerance
                .unwrap_or(spec.rel_tolerance.sqrt() * full.abs());
            if spread > tol {
                return Err(Error::Accuracy {
                    last: full,
                    previous: reduced,
                });
            }
            let quad_err = sums.iter().map(|s| s.error).fold(0.0, f64::max);
            Estimate::new(full, spread + quad_err).checked("Abel sine integral")
        }
    }
}

fn panels(transform: &SineTransform, upper: f64) -> Vec<(f64, f64)> {
    let freq = transform.k.max(transform.max_frequency);
    let width = (2.0 * PI / freq).min(upper);
    let depth = if transform.feature_length.is_finite() && transform.feature_length > 0.0 {
        (width / (1e-3 * transform.feature_length)).log2().ceil().max(0.0) as usize
    } else {
        0
    };
    let levels = depth.clamp(12, MAX_GRADING_LEVELS);

    let mut out = Vec::new();
    let mut lo = width * 0.5f64.powi(levels as i32);
    out.push((0.0, lo));
    for _ in 0..levels {
        out.push((lo, 2.0 * lo));
        lo *= 2.0;
    }
    let mut a = width;
    while a < upper {
        let b = (a + width).min(upper);
        out.push((a, b));
        a = b;
    }
    out
}

struct PanelSum {
    fine: f64,
    coarse: f64,
    error: f64,
    l1: f64,
}

fn panel_sums<F>(f: &F, k: f64, panels: &[(f64, f64)], n: usize, rates: &[f64]) -> Result<Vec<PanelSum>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let rule = gauss::legendre(n);
    // per panel: n coarse nodes, then n + n on the two halves
    let mut nodes = Vec::with_capacity(panels.len() * 3 * n);
    let mut weights = Vec::with_capacity(nodes.capacity());
    for &(a, b) in panels {
        let m = 0.5 * (a + b);
        for (lo, hi) in [(a, b), (a, m), (m, b)] {
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                nodes.push(mid + half * x);
                weights.push(w * half);
            }
        }
    }
    let values: Vec<f64> = nodes
        .par_iter()
        .map(|&z| {
            let v = f(z)?;
            if v.is_finite() {
                Ok((k * z).sin() * v)
            } else {
                Err(Error::NonFinite("sine integrand"))
            }
        })
        .collect::<Result<_>>()?;

    let mut out = Vec::with_capacity(rates.len());
    for &eps in rates {
        let (mut fine, mut coarse, mut error, mut l1) = (0.0, 0.0, 0.0, 0.0);
        for (p, chunk) in values.chunks(3 * n).enumerate() {
            let base = p * 3 * n;
            let mut c = 0.0;
            let mut fi = 0.0;
            for (j, v) in chunk.iter().enumerate() {
                let i = base + j;
                let damped = if eps > 0.0 { v * (-eps * nodes[i]).exp() } else { *v };
                if j < n {
                    c += weights[i] * damped;
                } else {
                    fi += weights[i] * damped;
                    l1 += (weights[i] * damped).abs();
                }
            }
            fine += fi;
            coarse += c;
            error += (fi - c).abs();
        }
        out.push(PanelSum {
            fine,
            coarse,
            error,
            l1,
        });
    }
    Ok(out)
}

/// Value at x = 0 of the polynomial through `(xs[i], ys[i])`.
fn neville_at_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn laplace_sine() {
        let spec = QuadratureSpec::default();
        let r = fourier_sine_integral(|z| Ok((-z).exp()), &SineTransform::intrinsic(1.0, 60.0), &spec).unwrap();
        assert_relative_eq!(r.value, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn dirichlet_through_abel() {
        let spec = QuadratureSpec::default();
        for k in [0.5, 2.0, 7.0] {
            let r = fourier_sine_integral(|z| Ok(1.0 / z), &SineTransform::abel(k, 0.1 * k), &spec).unwrap();
            assert_relative_eq!(r.value, PI / 2.0, max_relative = 1e-8);
        }
    }

    #[test]
    fn constant_through_abel() {
        let spec = QuadratureSpec::default();
        let r = fourier_sine_integral(|_| Ok(1.0), &SineTransform::abel(2.0, 0.2), &spec).unwrap();
        assert_relative_eq!(r.value, 0.5, max_relative = 1e-9);
    }

    #[test]
    fn abel_spread_is_reported() {
        let spec = QuadratureSpec::default();
        // large damping relative to k ruins the extrapolation
        let err = fourier_sine_integral(|_| Ok(1.0), &SineTransform::abel(0.5, 20.0), &spec);
        assert!(matches!(err, Err(Error::Accuracy { .. })));
    }

    #[test]
    fn neville_reproduces_polynomials() {
        let xs = [0.4, 0.2, 0.1, 0.05];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - x + 2.0 * x * x * x).collect();
        assert_relative_eq!(neville_at_zero(&xs, &ys), 3.0, max_relative = 1e-13);
    }
}
