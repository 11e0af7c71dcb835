//! Reference computations used to produce and check the golden values.
//!
//! Everything here is deliberately written apart from the production paths:
//! double-exponential quadrature instead of Gauss rules, an exact rational
//! series instead of the float ₀F₁, and the plain inverse square roots for
//! 𝒢_B. The routines are slow and only meant for seeding and tests.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Float, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::classical::{crtoa_quadrature, ClassicalState, PiecewiseConstant, SquareBarrier};
use crate::error::{Error, Result};
use crate::traversal::{kappa_c, kappa_nonrel, photon_time};
use crate::units::Units;
use crate::wavepacket::{GaussianPacket, WavePacket};

const MAX_LEVELS: u32 = 12;
/// Beyond this |t| the double-exponential maps leave f64 range.
const T_MAX: f64 = 6.5;

/// Tanh-sinh quadrature on [a, b].
///
/// The integrand receives (x, x − a, b − x) with the endpoint distances
/// computed without cancellation, so integrable endpoint singularities can be
/// written in terms of them.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, rel_tolerance: f64) -> Result<f64>
where
    F: Fn(f64, f64, f64) -> f64,
{
    let half = 0.5 * (b - a);
    let level_sum = |h: f64, offset: bool| -> f64 {
        let mut sum = 0.0;
        let start = if offset { h } else { 0.0 };
        let step = if offset { 2.0 * h } else { h };
        let mut t = start;
        while t <= T_MAX {
            let s = FRAC_PI_2 * t.sinh();
            let weight = FRAC_PI_2 * t.cosh() / s.cosh().powi(2);
            // distance of the node from the nearer endpoint, over `half`
            let near = 2.0 / ((2.0 * s).exp() + 1.0);
            if near * half == 0.0 {
                break;
            }
            let far = 2.0 - near;
            let right = f(b - half * near, half * far, half * near);
            let value = if t == 0.0 {
                right
            } else {
                right + f(a + half * near, half * near, half * far)
            };
            sum += weight * value;
            t += step;
        }
        sum
    };
    double_exponential(level_sum, half, rel_tolerance)
}

/// Exp-sinh quadrature on [a, ∞). The integrand receives (x, x − a).
pub fn exp_sinh<F>(f: F, a: f64, rel_tolerance: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    let level_sum = |h: f64, offset: bool| -> f64 {
        let mut sum = 0.0;
        let (start, step) = if offset { (h, 2.0 * h) } else { (0.0, h) };
        let mut t = start;
        while t <= T_MAX {
            for sign in [1.0, -1.0] {
                if t == 0.0 && sign < 0.0 {
                    continue;
                }
                let s = FRAC_PI_2 * (sign * t).sinh();
                let dist = s.exp();
                if dist == 0.0 || !dist.is_finite() {
                    continue;
                }
                let weight = FRAC_PI_2 * t.cosh() * dist;
                let value = f(a + dist, dist);
                if value != 0.0 {
                    sum += weight * value;
                }
            }
            t += step;
        }
        sum
    };
    double_exponential(level_sum, 1.0, rel_tolerance)
}

fn double_exponential<S>(level_sum: S, scale: f64, rel_tolerance: f64) -> Result<f64>
where
    S: Fn(f64, bool) -> f64,
{
    let mut h = 0.5;
    let mut sum = level_sum(h, false);
    let mut previous = scale * h * sum;
    for _ in 0..MAX_LEVELS {
        h *= 0.5;
        sum += level_sum(h, true);
        let current = scale * h * sum;
        if !current.is_finite() {
            return Err(Error::NonFinite("double-exponential quadrature"));
        }
        if (current - previous).abs() <= rel_tolerance * current.abs() {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::Accuracy {
        last: scale * h * sum,
        previous,
    })
}

/// Exact value of Σ_{n≤N} zⁿ/(n!)² for the binary value of z, rounded once.
/// Also returns a bound on the omitted tail relative to the result.
pub fn exact_hyp0f1(z: Complex64, terms: usize) -> Result<(Complex64, f64)> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("exact series needs a finite argument".into()));
    }
    let (re, re_exp) = dyadic(z.re);
    let (im, im_exp) = dyadic(z.im);
    // z = (A + iB) / 2^e
    let e = (-re_exp).max(-im_exp).max(0);
    let a = re << (re_exp + e) as usize;
    let b = im << (im_exp + e) as usize;
    let n_max = terms;
    // numerator_n = Zⁿ 2^{e(N−n)} (N!/n!)², accumulated from n = N down
    let mut factor_sq = BigInt::from(1u8); // (N!/n!)²
    let mut powers = Vec::with_capacity(n_max + 1);
    let (mut pr, mut pi) = (BigInt::from(1u8), BigInt::zero());
    for _ in 0..=n_max {
        powers.push((pr.clone(), pi.clone()));
        let nr = &pr * &a - &pi * &b;
        let ni = &pr * &b + &pi * &a;
        pr = nr;
        pi = ni;
    }
    let (mut num_re, mut num_im) = (BigInt::zero(), BigInt::zero());
    for n in (0..=n_max).rev() {
        let shift = (e as usize) * (n_max - n);
        let (zr, zi) = &powers[n];
        num_re += (zr * &factor_sq) << shift;
        num_im += (zi * &factor_sq) << shift;
        factor_sq *= BigInt::from(n * n);
    }
    let mut fact = BigInt::from(1u8);
    for k in 1..=n_max {
        fact *= BigInt::from(k);
    }
    let den = (&fact * &fact) << ((e as usize) * n_max);
    let value = Complex64::new(ratio(&num_re, &den), ratio(&num_im, &den));
    // next term, times a geometric factor for the rest once terms decrease
    let r = z.norm();
    let mut next = 1.0f64;
    for k in 1..=n_max + 1 {
        next *= r / (k as f64 * k as f64);
    }
    let q = r / ((n_max + 2) as f64).powi(2);
    let tail = if q < 1.0 { next / (1.0 - q) } else { f64::INFINITY };
    Ok((value, tail / value.norm().max(f64::MIN_POSITIVE)))
}

fn dyadic(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let (mantissa, exponent, sign) = x.integer_decode();
    (BigInt::from(mantissa) * BigInt::from(sign), exponent as i64)
}

fn ratio(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = den.bits() as i64 - num.abs().bits() as i64 + 64;
    let scaled = if shift >= 0 {
        (num << shift as usize) / den
    } else {
        num / (den << (-shift) as usize)
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-shift as i32)
}

/// ∫₁^∞ e^{-λy} √(y²−1)/y h(y) dy by exp-sinh.
pub fn branch_cut_oracle<H>(h: H, lambda: f64, rel_tolerance: f64) -> Result<f64>
where
    H: Fn(f64) -> f64,
{
    if !(lambda > 0.0) {
        return Err(Error::Domain("decay rate must be > 0".into()));
    }
    // factor e^{-λ} out so the integrand stays O(1) near the endpoint
    let inner = exp_sinh(
        |y, d| {
            let decay = (-lambda * d).exp();
            if decay == 0.0 {
                return 0.0;
            }
            decay * (d * (2.0 + d)).sqrt() / y * h(y)
        },
        1.0,
        rel_tolerance,
    )?;
    Ok((-lambda).exp() * inner)
}

/// 𝒢_B − 1 from the plain complex inverse square roots.
pub fn g_minus_one_direct(u: f64, y: f64) -> f64 {
    let s = (y * y - 1.0).max(0.0).sqrt();
    let delta = Complex64::new(-(u * u) / (y * y), 2.0 * u * s / (y * y));
    let root = |d: Complex64| 1.0 / (1.0 + d).sqrt();
    (0.5 * (root(delta) + root(delta.conj())) - 1.0).re
}

/// 𝒯_F at reduced separation λ.
pub fn free_factor_oracle(lambda: f64, rel_tolerance: f64) -> Result<f64> {
    Ok(1.0 + FRAC_2_PI * branch_cut_oracle(|_| 1.0, lambda, rel_tolerance)?)
}

/// ℱ_B(U, λ) from the power series of the cosine in λ, summed inside a
/// tanh-sinh quadrature over θ: Σₙ (−1)ⁿ λ²ⁿ/(2n)! (1/π)∫ (w²/D)(w²−1)ⁿ dθ.
pub fn f_factor_series(u: f64, lambda: f64, terms: usize, rel_tolerance: f64) -> Result<f64> {
    let integral = tanh_sinh(
        |theta, _, _| {
            let (sin, cos) = theta.sin_cos();
            let c2 = 0.5 * (1.0 + cos);
            let d = (1.0 - 0.25 * u * u * sin * sin).sqrt();
            let w = d - u * c2;
            let x = -lambda * lambda * (w * w - 1.0);
            let mut term = 1.0;
            let mut sum = 1.0;
            for n in 1..=terms {
                term *= x / ((2 * n - 1) * (2 * n)) as f64;
                sum += term;
            }
            w * w / d * sum
        },
        0.0,
        PI,
        rel_tolerance,
    )?;
    Ok(integral / PI)
}

/// 𝒯_B(U, λ) assembled from the oracles above.
pub fn barrier_factor_oracle(u: f64, lambda: f64, rel_tolerance: f64) -> Result<f64> {
    let free = free_factor_oracle(lambda, rel_tolerance)?;
    let f = f_factor_series(u, lambda, 60, rel_tolerance)?;
    let g = branch_cut_oracle(|y| g_minus_one_direct(u, y), lambda, rel_tolerance)?;
    Ok(f + (free - 1.0) + FRAC_2_PI * g)
}

/// ∫_{κ_c}^{k_max} |ψ̃(±k)|² Ẽ_k/√((Ẽ_k − V0)² − μ²c⁴) dk by tanh-sinh in k.
pub fn r_tilde_oracle(
    packet: &GaussianPacket,
    barrier: &SquareBarrier,
    forward: bool,
    units: &Units,
    rel_tolerance: f64,
) -> Result<f64> {
    let kc = kappa_c(barrier.v0, units);
    let centre = if forward { packet.k0 } else { -packet.k0 };
    let top = kc.max(centre) + 12.0 / packet.sigma;
    let rest = units.rest_energy();
    let hc = units.hbar * units.c;
    let v0 = barrier.v0;
    let integrand = |k: f64, from_cut: f64| {
        let density = packet.momentum_density(if forward { k } else { -k });
        let energy = units.energy_of_wavenumber(k);
        // (Ẽ − V0)² − μ²c⁴ = ħ²c²(k − κ_c)(k + κ_c)(Ẽ − V0 + μc²)/(Ẽ + V0 + μc²)
        let root = hc * (from_cut * (k + kc) * (energy - v0 + rest) / (energy + v0 + rest)).sqrt();
        density * energy / root
    };
    // split at the peak so the nodes cluster on both sides of it
    let mut edges = vec![kc];
    if centre > kc {
        edges.push(centre);
    }
    edges.push(top);
    let mut total = 0.0;
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        total += tanh_sinh(
            |k, da, _| integrand(k, if lo == kc { da } else { k - kc }),
            lo,
            hi,
            rel_tolerance,
        )?;
    }
    Ok(total)
}

/// t_c(R̃⁺ − R̃⁻) from [`r_tilde_oracle`].
pub fn tau_trav_oracle(
    packet: &GaussianPacket,
    barrier: &SquareBarrier,
    units: &Units,
    rel_tolerance: f64,
) -> Result<f64> {
    let plus = r_tilde_oracle(packet, barrier, true, units, rel_tolerance)?;
    let minus = r_tilde_oracle(packet, barrier, false, units, rel_tolerance)?;
    Ok(photon_time(barrier, units) * (plus - minus))
}

/// (Lμ/ħ)∫_κ^∞ (|ψ̃(k)|² − |ψ̃(−k)|²)/√(k² − κ²) dk by tanh-sinh in k.
pub fn nonrel_target_oracle(
    packet: &GaussianPacket,
    barrier: &SquareBarrier,
    units: &Units,
    rel_tolerance: f64,
) -> Result<f64> {
    let kappa = kappa_nonrel(barrier.v0, units);
    let top = kappa.max(packet.k0.abs()) + 12.0 / packet.sigma;
    let mut edges = vec![kappa];
    if packet.k0.abs() > kappa {
        edges.push(packet.k0.abs());
    }
    edges.push(top);
    let mut total = 0.0;
    for w in edges.windows(2) {
        let lo = w[0];
        total += tanh_sinh(
            |k, da, _| {
                let gap = if lo == kappa { da } else { k - kappa };
                (packet.momentum_density(k) - packet.momentum_density(-k)) / (gap * (k + kappa)).sqrt()
            },
            lo,
            w[1],
            rel_tolerance,
        )?;
    }
    Ok(barrier.length() * units.mass / units.hbar * total)
}

/// One frozen reference value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Golden {
    pub name: String,
    pub value: f64,
    /// Accepted relative deviation of the production routine.
    pub tolerance: f64,
    pub oracle: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenSet {
    pub version: String,
    pub goldens: Vec<Golden>,
}

impl GoldenSet {
    pub fn get(&self, name: &str) -> Option<&Golden> {
        self.goldens.iter().find(|g| g.name == name)
    }

    pub fn value(&self, name: &str) -> Result<f64> {
        self.get(name)
            .map(|g| g.value)
            .ok_or_else(|| Error::invalid("goldens", format!("missing entry {name}")))
    }

    pub fn read(path: &Path) -> Result<GoldenSet> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid("goldens", format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::invalid("goldens", format!("{}: {e}", path.display())))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("goldens serialise");
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| Error::invalid("goldens", e.to_string()))?;
        }
        std::fs::write(path, text + "\n").map_err(|e| Error::invalid("goldens", format!("{}: {e}", path.display())))
    }
}

/// Location of the checked-in golden file.
pub fn default_golden_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("goldens").join("derived.json")
}

/// Reference scenario shared by the goldens, examples and the sample config.
pub fn reference_scenario() -> (SquareBarrier, GaussianPacket, Units) {
    let units = Units::natural();
    (
        SquareBarrier { a: -5.0, b: -3.0, v0: 0.5 },
        GaussianPacket { q0: -50.0, sigma: 5.0, k0: 2.0 },
        units,
    )
}

/// Recomputes every golden from the oracles. Takes a few seconds.
pub fn compute_goldens() -> Result<GoldenSet> {
    const TOL: f64 = 1e-13;
    let (barrier, packet, units) = reference_scenario();
    let mut goldens = Vec::new();
    let mut push = |name: &str, value: f64, tolerance: f64, oracle: &str| {
        goldens.push(Golden {
            name: name.into(),
            value,
            tolerance,
            oracle: oracle.into(),
        })
    };

    let series = "exact rational series, 200 terms";
    for (name, z) in [
        ("hyp0f1_z_1", Complex64::new(1.0, 0.0)),
        ("hyp0f1_z_minus_1", Complex64::new(-1.0, 0.0)),
        ("hyp0f1_z_minus_50", Complex64::new(-50.0, 0.0)),
        ("hyp0f1_z_50", Complex64::new(50.0, 0.0)),
    ] {
        push(name, exact_hyp0f1(z, 200)?.0.re, 1e-12, series);
    }
    let z = Complex64::new(-20.0, 12.0);
    let value = exact_hyp0f1(z, 200)?.0;
    push("hyp0f1_z_offaxis_re", value.re, 1e-10, series);
    push("hyp0f1_z_offaxis_im", value.im, 1e-10, series);

    let q1 = branch_cut_oracle(|_| 1.0, 1.0, TOL)?;
    push("branch_cut_unit", q1, 1e-10, "exp-sinh quadrature");
    push("free_factor_lambda_1", 1.0 + FRAC_2_PI * q1, 1e-10, "exp-sinh quadrature");
    push(
        "free_factor_lambda_0_01",
        free_factor_oracle(0.01, TOL)?,
        1e-10,
        "exp-sinh quadrature",
    );
    push(
        "f_factor_u_0_25_lambda_1",
        f_factor_series(0.25, 1.0, 40, TOL)?,
        1e-9,
        "cosine power series, 40 terms, tanh-sinh in theta",
    );
    push(
        "f_factor_u_minus_0_5_lambda_3",
        f_factor_series(-0.5, 3.0, 60, TOL)?,
        1e-9,
        "cosine power series, 60 terms, tanh-sinh in theta",
    );
    let tb = barrier_factor_oracle(-0.5, 1.0, TOL)?;
    push("barrier_factor_u_minus_0_5_lambda_1", tb, 1e-9, "assembled from series and exp-sinh oracles");
    let eta = -10.0;
    let l = barrier.length();
    let free = free_factor_oracle(1.0, TOL)?;
    push(
        "tkf_region_three_eta_minus_10_lambda_1",
        0.5 * (eta + l) * free - 0.5 * l * tb,
        1e-9,
        "assembled from series and exp-sinh oracles",
    );

    let potential = PiecewiseConstant::from_barrier(&barrier);
    let worked = crtoa_quadrature(&ClassicalState { q0: -10.0, p0: 2.0 }, &potential, 0.0, &units)?;
    push("classical_barrier_worked", worked, 1e-10, "segment quadrature");

    push(
        "tau_top_k0_2",
        photon_time(&barrier, &units) * {
            let e = units.energy_of_wavenumber(2.0);
            e / ((e - barrier.v0).powi(2) - 1.0).sqrt()
        },
        1e-12,
        "direct arithmetic",
    );
    push(
        "tau_trav_reference",
        tau_trav_oracle(&packet, &barrier, &units, TOL)?,
        1e-8,
        "tanh-sinh in k",
    );
    push(
        "nonrel_target_reference",
        nonrel_target_oracle(&packet, &barrier, &units, TOL)?,
        1e-8,
        "tanh-sinh in k",
    );
    Ok(GoldenSet {
        version: env!("CARGO_PKG_VERSION").into(),
        goldens,
    })
}

/// Recomputes the goldens and writes them to `path`.
pub fn seed_goldens(path: &Path) -> Result<GoldenSet> {
    let set = compute_goldens()?;
    set.write(path)?;
    Ok(set)
}
