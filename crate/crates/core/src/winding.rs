//! Winding numbers of loops sampled in Tᵏ.
//!
//! A loop is given by `N ≥ 3` samples per component, either as points on
//! the unit circle or as raw phases in radians. The winding number is the
//! sum of principal-branch phase increments, including the closing step
//! from the last sample back to the first, divided by 2π.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{Euclid, Float};

use crate::{Error, Result};

/// Largest allowed deviation of the accumulated phase from a multiple of 2π.
pub const INTEGRALITY_TOLERANCE: f64 = 1e-6;

pub const MIN_SAMPLES: usize = 3;

/// Steps within this distance of π count as aliased: their sign is noise.
const STEP_MARGIN: f64 = 1e-9;

/// Reduces an angle to `(-π, π]`.
fn principal(delta: f64) -> f64 {
    let r = Euclid::rem_euclid(&delta, &(2.0 * PI));
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Winding number of one component given by phases in radians.
pub fn winding_from_phases(phases: &[f64], component: usize) -> Result<i64> {
    if phases.len() < MIN_SAMPLES {
        return Err(Error::Invalid(alloc::format!(
            "component {component} has {} samples, at least {MIN_SAMPLES} are needed",
            phases.len()
        )));
    }
    if let Some(k) = phases.iter().position(|p| !p.is_finite()) {
        return Err(Error::Invalid(alloc::format!(
            "component {component}, sample {k} is not finite"
        )));
    }
    let n = phases.len();
    let mut total = 0.0;
    for k in 0..n {
        let step = principal(phases[(k + 1) % n] - phases[k]);
        if step.abs() >= PI - STEP_MARGIN {
            return Err(Error::Aliasing { component, sample: k });
        }
        total += step;
    }
    let turns = total / (2.0 * PI);
    let rounded = Float::round(turns);
    if (turns - rounded).abs() > INTEGRALITY_TOLERANCE {
        return Err(Error::NonIntegralWinding {
            component,
            value: turns,
        });
    }
    Ok(rounded as i64)
}

/// Winding number of one component given by points of the unit circle.
pub fn winding_of_samples(samples: &[Complex64], component: usize) -> Result<i64> {
    if let Some(k) = samples.iter().position(|z| !z.norm().is_finite() || z.norm() <= 0.0) {
        return Err(Error::Invalid(alloc::format!(
            "component {component}, sample {k} has no phase"
        )));
    }
    let phases: Vec<f64> = samples.iter().map(|z| z.arg()).collect();
    winding_from_phases(&phases, component)
}

/// Per-component winding numbers of a loop in Tᵏ given as `N` points, each
/// with `k` coordinates.
pub fn winding_of_loop(points: &[Vec<Complex64>]) -> Result<Vec<i64>> {
    let k = points.first().map_or(0, Vec::len);
    if points.iter().any(|p| p.len() != k) {
        return Err(Error::ShapeMismatch("loop points have different dimensions".into()));
    }
    (0..k)
        .map(|c| {
            let comp: Vec<Complex64> = points.iter().map(|p| p[c]).collect();
            winding_of_samples(&comp, c)
        })
        .collect()
}

/// Per-component winding numbers of a loop given by phases in radians.
pub fn winding_of_phase_loop(points: &[Vec<f64>]) -> Result<Vec<i64>> {
    let k = points.first().map_or(0, Vec::len);
    if points.iter().any(|p| p.len() != k) {
        return Err(Error::ShapeMismatch("loop points have different dimensions".into()));
    }
    (0..k)
        .map(|c| {
            let comp: Vec<f64> = points.iter().map(|p| p[c]).collect();
            winding_from_phases(&comp, c)
        })
        .collect()
}
