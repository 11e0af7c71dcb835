use super::{gauss, Estimate, QuadratureSpec};
use crate::error::{Error, Result};

/// e^{-λ} underflows past this.
const UNDERFLOW: f64 = 708.0;
const MAX_SEGMENTS: usize = 4000;

/// `∫₁^∞ e^{-λy} (√(y²−1)/y) h(y) dy` for decay rate λ > 0.
///
/// With y = 1 + u² the endpoint square root becomes the smooth factor
/// `2u²√(2+u²)/(1+u²)`. The factor e^{-λ} is pulled out and the u-range is
/// cut where e^{-λu²} drops below the truncation level; geometric breakpoints
/// cover the scale 1/√λ so small decay rates are resolved too.
pub fn branch_cut_integral<H>(h: H, decay_rate: f64, spec: &QuadratureSpec) -> Result<Estimate>
where
    H: Fn(f64) -> Result<f64>,
{
    let lambda = decay_rate;
    if !(lambda > 0.0) || lambda.is_nan() {
        return Err(Error::Domain(format!(
            "branch-cut decay rate must be > 0, got {lambda}"
        )));
    }
    if lambda > UNDERFLOW {
        return Ok(Estimate::exact(0.0));
    }
    let reach = spec
        .branch_cut_truncation
        .max((1e3 / spec.rel_tolerance).ln());
    let u_max = (reach / lambda).sqrt();
    let mut breakpoints = Vec::new();
    let mut x = u_max;
    for _ in 0..24 {
        x *= 0.5;
        breakpoints.push(x);
    }
    breakpoints.reverse();
    let integrand = |u: f64| -> Result<f64> {
        let u2 = u * u;
        let jac = 2.0 * u2 * (2.0 + u2).sqrt() / (1.0 + u2);
        Ok((-lambda * u2).exp() * jac * h(1.0 + u2)?)
    };
    let est = gauss::adaptive(integrand, 0.0, u_max, &breakpoints, 0.0, spec.rel_tolerance, MAX_SEGMENTS)?;
    est.scale((-lambda).exp()).checked("branch-cut integral")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn golden_at_unit_decay() {
        let spec = QuadratureSpec::default().with_tolerance(1e-13);
        let r = branch_cut_integral(|_| Ok(1.0), 1.0, &spec).unwrap();
        assert_relative_eq!(r.value, 0.273_620_752_026_116, max_relative = 1e-12);
    }

    #[test]
    fn monotone_and_vanishing() {
        let spec = QuadratureSpec::default();
        let a = branch_cut_integral(|_| Ok(1.0), 0.5, &spec).unwrap().value;
        let b = branch_cut_integral(|_| Ok(1.0), 2.0, &spec).unwrap().value;
        assert!(a > b && b > 0.0);
        assert_eq!(branch_cut_integral(|_| Ok(1.0), 1e4, &spec).unwrap().value, 0.0);
    }

    #[test]
    fn small_decay_rate_matches_leading_behaviour() {
        // ∫ e^{-λy}√(y²−1)/y dy = 1/λ − π/2 + O(λ ln λ)
        let spec = QuadratureSpec::default();
        let lambda = 1e-4;
        let r = branch_cut_integral(|_| Ok(1.0), lambda, &spec).unwrap().value;
        assert!((r - (1.0 / lambda - std::f64::consts::FRAC_PI_2)).abs() < 1e-2);
    }

    #[test]
    fn rejects_nonpositive_decay() {
        let spec = QuadratureSpec::default();
        assert!(matches!(
            branch_cut_integral(|_| Ok(1.0), 0.0, &spec),
            Err(Error::Domain(_))
        ));
    }
}
