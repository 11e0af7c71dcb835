//! ₀F₁(;1;z) and the Bessel function J₀.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest exponent we let through before reporting overflow (ln f64::MAX ≈ 709.8,
/// minus room for the algebraic prefactor).
const MAX_EXPONENT: f64 = 700.0;

/// Cancellation allowed in the power series, as the log of the ratio between
/// the largest term and the result.
const SERIES_CANCELLATION: f64 = 10.0;

/// ₀F₁(;1;z) = Σ zⁿ/(n!)² = I₀(2√z) = J₀(2√(−z)).
///
/// The power series (with compensated summation) is used wherever its terms do
/// not cancel badly, which includes the whole positive real axis. Elsewhere the
/// value comes from J₀(2√(−z)) by Miller's backward recurrence. Both sides are
/// entire in z, so there is no branch choice involved.
pub fn hyp0f1_one(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("hyp0f1_one argument {z} is not finite")));
    }
    let sqrt_z = z.sqrt();
    let exponent = 2.0 * sqrt_z.re.abs();
    if exponent > MAX_EXPONENT {
        return Err(Error::Overflow { exponent });
    }
    // terms peak near e^{2√|z|}, the result is about e^{2|Re √z|}
    let loss = 2.0 * z.norm().sqrt() - exponent;
    if z.norm() <= 4.0 || loss <= SERIES_CANCELLATION {
        Ok(series(z))
    } else {
        Ok(j0_miller(2.0 * (-z).sqrt()))
    }
}

/// Bessel function of the first kind, order zero, for real argument.
pub fn bessel_j0(x: f64) -> f64 {
    if x.abs() < 4.0 {
        series(Complex64::new(-0.25 * x * x, 0.0)).re
    } else {
        j0_miller(Complex64::new(x, 0.0)).re
    }
}

fn series(z: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Neumaier::default();
    sum.add(term);
    let mut n = 0.0f64;
    loop {
        n += 1.0;
        term *= z / (n * n);
        sum.add(term);
        // past the peak the terms fall faster than geometrically
        if n * n > z.norm() && term.norm() <= 1e-17 * sum.value().norm() {
            break;
        }
        if term.norm() == 0.0 {
            break;
        }
    }
    sum.value()
}

#[derive(Default)]
struct Neumaier {
    re: (f64, f64),
    im: (f64, f64),
}

impl Neumaier {
    fn add(&mut self, x: Complex64) {
        fn step(acc: &mut (f64, f64), x: f64) {
            let t = acc.0 + x;
            if acc.0.abs() >= x.abs() {
                acc.1 += (acc.0 - t) + x;
            } else {
                acc.1 += (x - t) + acc.0;
            }
            acc.0 = t;
        }
        step(&mut self.re, x.re);
        step(&mut self.im, x.im);
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// J₀(w) by backward recurrence from an order well beyond |w|.
///
/// Normalised with 1 = J₀ + 2ΣJ₂ₖ when w is near the real axis and with
/// cos w = J₀ + 2Σ(−1)ᵏJ₂ₖ otherwise, so the normalising sum never cancels.
fn j0_miller(w: Complex64) -> Complex64 {
    let r = w.norm();
    if r < 1e-8 {
        return 1.0 - 0.25 * w * w;
    }
    let mut start = (r + 25.0 + (60.0 * r).sqrt()) as usize;
    start += start % 2;
    let two_over_w = 2.0 / w;
    let mut next = Complex64::new(0.0, 0.0);
    let mut current = Complex64::new(1e-30, 0.0);
    let mut plain = Complex64::new(0.0, 0.0);
    let mut alternating = Complex64::new(0.0, 0.0);
    for k in (1..=start).rev() {
        // current holds J_k, compute J_{k-1}
        let prev = two_over_w * k as f64 * current - next;
        next = current;
        current = prev;
        let order = k - 1;
        if order > 0 && order % 2 == 0 {
            plain += 2.0 * current;
            if order % 4 == 0 {
                alternating += 2.0 * current;
            } else {
                alternating -= 2.0 * current;
            }
        }
        if current.norm() > 1e200 {
            current *= 1e-200;
            next *= 1e-200;
            plain *= 1e-200;
            alternating *= 1e-200;
        }
    }
    let j0 = current;
    if w.im.abs() <= 1.0 {
        j0 / (plain + j0)
    } else {
        j0 / (alternating + j0) * w.cos()
    }
}
