use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{Euclid, Float};

use super::{Theta, TwistedAlgebraElement};
use crate::heisenberg::unit;
use crate::{Error, Result};

pub const DEFAULT_TRUNCATION: usize = 32;
pub const DEFAULT_QUADRATURE_POINTS: usize = 4096;

/// Construction parameters for [`rieffel_projection_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RieffelParams {
    /// Fourier modes `-K..=K` kept for each coefficient function.
    pub truncation: usize,
    /// Sample points for the Fourier coefficients.
    pub quadrature_points: usize,
    /// Width of the transition intervals relative to `min(θ, 1-θ)`.
    pub width: f64,
}

impl Default for RieffelParams {
    fn default() -> Self {
        RieffelParams {
            truncation: DEFAULT_TRUNCATION,
            quadrature_points: DEFAULT_QUADRATURE_POINTS,
            width: 0.9,
        }
    }
}

/// Smooth step from 0 to 1 on `[0, 1]`, with `s(1 - t) = 1 - s(t)`.
fn smooth_step(t: f64) -> f64 {
    let psi = |t: f64| if t > 0.0 { Float::exp(-1.0 / t) } else { 0.0 };
    let t = t.clamp(0.0, 1.0);
    let (a, b) = (psi(t), psi(1.0 - t));
    a / (a + b)
}

/// The pair `(f, g)` on the circle `R/Z`: `f` rises on `[0, ε]`, equals 1 on
/// `[ε, θ]`, falls on `[θ, θ + ε]`; `g = sqrt(f(1 - f))` on the falling part.
fn bumps(x: f64, theta: f64, eps: f64) -> (f64, f64) {
    let x = Euclid::rem_euclid(&x, &1.0);
    if x < eps {
        let s = smooth_step(x / eps);
        (Float::powi(Float::sin(PI / 2.0 * s), 2), 0.0)
    } else if x <= theta {
        (1.0, 0.0)
    } else if x < theta + eps {
        let s = smooth_step((x - theta) / eps);
        let (sin, cos) = (Float::sin(PI / 2.0 * s), Float::cos(PI / 2.0 * s));
        (cos * cos, sin * cos)
    } else {
        (0.0, 0.0)
    }
}

/// `ĥ_k = ∫₀¹ h(x) e^{-2πikx} dx` for `|k| ≤ K` by the periodic trapezoid rule.
fn fourier(samples: &[f64], k_max: usize) -> Vec<(i64, Complex64)> {
    let n = samples.len();
    (-(k_max as i64)..=k_max as i64)
        .map(|k| {
            let sum: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, v)| unit(-((k * j as i64).rem_euclid(n as i64) as f64) / n as f64) * v)
                .sum();
            (k, sum / n as f64)
        })
        .collect()
}

/// [`rieffel_projection_with`] at the default parameters.
pub fn rieffel_projection(theta: f64) -> Result<TwistedAlgebraElement> {
    rieffel_projection_with(theta, RieffelParams::default())
}

/// A self-adjoint element `p = u₂ g(u₁) + f(u₁) + g(u₁) u₂*` of A_θ with
/// `τ(p) = θ`, close to a projection.
///
/// `f` and `g` are smooth bumps on the circle with `f(x + θ) = 1 - f(x)` on
/// the rising interval, truncated to their first Fourier modes.
pub fn rieffel_projection_with(theta: f64, params: RieffelParams) -> Result<TwistedAlgebraElement> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::OutOfRange(format!("θ = {theta} must lie in (0, 1)")));
    }
    if params.quadrature_points < 2 * params.truncation + 1 || !(params.width > 0.0 && params.width < 1.0) {
        return Err(Error::OutOfRange(format!("invalid parameters {params:?}")));
    }
    let eps = params.width * theta.min(1.0 - theta);
    let n = params.quadrature_points;
    let (fs, gs): (Vec<f64>, Vec<f64>) = (0..n).map(|j| bumps(j as f64 / n as f64, theta, eps)).unzip();

    let th = Theta::rotation(theta)?;
    let in_u1 = |coeffs: Vec<(i64, Complex64)>| {
        TwistedAlgebraElement::from_terms(&th, coeffs.into_iter().map(|(k, c)| (vec![k, 0], c)))
    };
    let f = in_u1(fourier(&fs, params.truncation))?;
    let g = in_u1(fourier(&gs, params.truncation))?;
    let u2 = TwistedAlgebraElement::generator(&th, 2)?;
    let lower = u2.convolve(&g)?;
    let upper = g.convolve(&u2.involution())?;
    lower.add(&f)?.add(&upper)
}
