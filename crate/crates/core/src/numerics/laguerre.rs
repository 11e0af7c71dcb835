use num_complex::Complex64;

use super::{gauss, ComplexResult, QuadratureSpec};
use crate::error::{Error, Result};

const MAX_ORDER: usize = 512;
const PROBE_WINDOWS: [(f64, f64); 2] = [(20.0, 30.0), (50.0, 60.0)];

/// Exponential growth rate of |g(y)|, estimated from the maxima over two
/// sampling windows. A rate ≥ 1 means `∫ e^{-y} g(y) dy` diverges.
pub fn growth_rate_probe<G>(g: &G) -> Result<f64>
where
    G: Fn(f64) -> Result<Complex64>,
{
    let window_max = |(lo, hi): (f64, f64)| -> Result<f64> {
        let mut best = 0.0f64;
        for i in 0..=20 {
            let y = lo + (hi - lo) * i as f64 / 20.0;
            best = best.max(g(y)?.norm());
        }
        Ok(best)
    };
    let near = window_max(PROBE_WINDOWS[0])?;
    let far = window_max(PROBE_WINDOWS[1])?;
    if !far.is_finite() {
        return Ok(f64::INFINITY);
    }
    if near == 0.0 || far == 0.0 {
        return Ok(0.0);
    }
    let span = 0.5 * (PROBE_WINDOWS[1].0 + PROBE_WINDOWS[1].1) - 0.5 * (PROBE_WINDOWS[0].0 + PROBE_WINDOWS[0].1);
    Ok((far / near).ln() / span)
}

/// `∫₀^∞ e^{-y} g(y) dy` by Gauss–Laguerre, doubling the order until two
/// successive orders agree to `spec.rel_tolerance`.
pub fn laguerre_integral<G>(g: G, spec: &QuadratureSpec) -> Result<ComplexResult>
where
    G: Fn(f64) -> Result<Complex64>,
{
    let rate = growth_rate_probe(&g)?;
    if rate >= 1.0 {
        return Err(Error::Divergence { rate });
    }
    let apply = |n: usize| -> Result<Complex64> {
        let rule = gauss::laguerre(n);
        let mut sum = Complex64::new(0.0, 0.0);
        for (y, w) in rule.nodes.iter().zip(&rule.weights) {
            if *w == 0.0 {
                continue;
            }
            sum += *w * g(*y)?;
        }
        Ok(sum)
    };
    let mut n = spec.laguerre_nodes.max(8);
    let mut previous = apply(n)?;
    loop {
        n *= 2;
        let current = apply(n)?;
        let diff = (current - previous).norm();
        if diff <= spec.rel_tolerance * current.norm().max(1e-300) || diff <= 1e-15 {
            return ComplexResult::checked(current, diff);
        }
        if n >= MAX_ORDER {
            return Err(Error::Accuracy {
                last: current.norm(),
                previous: previous.norm(),
            });
        }
        previous = current;
    }
}
