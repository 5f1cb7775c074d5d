use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use super::{clock_shift, CMatrix, ClockShiftRep};
use crate::heisenberg::unit;
use crate::{Error, Result};

/// Samples of a function on a uniform grid `a, a + h, …, b`; the function is
/// taken to vanish outside `[a, b]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    start: f64,
    end: f64,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(start: f64, end: f64, values: Vec<Complex64>) -> Result<Self> {
        if values.len() < 2 || !start.is_finite() || !end.is_finite() || end <= start {
            return Err(Error::OutOfRange(format!(
                "{} samples on [{start}, {end}]",
                values.len()
            )));
        }
        Ok(SampledFunction { start, end, values })
    }

    /// Samples `f` at `n` points spanning `[start, end]`.
    pub fn from_fn(start: f64, end: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        if n < 2 {
            return Err(Error::OutOfRange(format!("{n} samples")));
        }
        let h = (end - start) / (n - 1) as f64;
        Self::new(start, end, (0..n).map(|k| f(start + k as f64 * h)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> f64 {
        (self.end - self.start) / (self.values.len() - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Four-point Lagrange interpolation, zero outside the grid.
    pub fn eval(&self, x: f64) -> Complex64 {
        let h = self.step();
        let t = (x - self.start) / h;
        let last = self.values.len() - 1;
        if t < -1e-9 || t > last as f64 + 1e-9 {
            return Complex64::new(0.0, 0.0);
        }
        let k = (Float::floor(t) as i64).clamp(0, last as i64);
        if (t - k as f64).abs() < 1e-12 {
            return self.values[k as usize];
        }
        let base = (k - 1).clamp(0, last as i64 - 3.min(last as i64));
        let nodes: Vec<i64> = (base..base + 4).filter(|&j| j <= last as i64).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for &j in &nodes {
            let mut w = 1.0;
            for &l in &nodes {
                if l != j {
                    w *= (t - l as f64) / (j - l) as f64;
                }
            }
            acc += self.values[j as usize] * w;
        }
        acc
    }

    fn same_grid(&self, other: &Self) -> bool {
        self.values.len() == other.values.len() && self.start == other.start && self.end == other.end
    }

    /// `∫|f|²` by the trapezoid rule.
    pub fn norm_sqr(&self) -> f64 {
        trapezoid(
            self.step(),
            self.values.iter().map(|v| Complex64::new(v.norm_sqr(), 0.0)),
        )
        .re
    }
}

fn trapezoid(h: f64, values: impl ExactSizeIterator<Item = Complex64>) -> Complex64 {
    let n = values.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, v) in values.enumerate() {
        let w = if k == 0 || k + 1 == n { 0.5 } else { 1.0 };
        acc += v * w;
    }
    acc * h
}

/// `⟨ξ, η⟩_{m,n}(θ) = (θ + 1) ∫ conj(ξ(x + mθ + m)) η(x) e^{-2πinx} dx`.
pub fn module_inner_product(
    xi: &SampledFunction,
    eta: &SampledFunction,
    theta: f64,
    m: i64,
    n: i64,
) -> Result<Complex64> {
    if !xi.same_grid(eta) {
        return Err(Error::GridMismatch);
    }
    let shift = m as f64 * (theta + 1.0);
    let integrand = (0..eta.len()).map(|k| {
        let x = eta.point(k);
        xi.eval(x + shift).conj() * eta.values[k] * unit(-(n as f64) * x)
    });
    Ok(trapezoid(eta.step(), integrand) * (theta + 1.0))
}

/// `Σ_{|m|,|n| ≤ cutoff} ⟨ξ, ξ⟩_{m,n} · V^n U^m` in the clock-shift
/// representation at `θ = p/q`.
pub fn gram_matrix(xi: &SampledFunction, p: i64, q: i64, cutoff: i64) -> Result<CMatrix> {
    let rep: ClockShiftRep = clock_shift(p, q)?;
    let theta = rep.theta();
    let mut g = CMatrix::zeros(rep.dim(), rep.dim());
    for m in -cutoff..=cutoff {
        for n in -cutoff..=cutoff {
            let c = module_inner_product(xi, xi, theta, m, n)?;
            g += rep.shift_clock(n, m) * c;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nctorus::hermitian_eigenvalues;
    use num_traits::Float;

    fn gaussian(n: usize) -> SampledFunction {
        SampledFunction::from_fn(-12.0, 12.0, n, |x| Complex64::new(Float::exp(-x * x / 2.0), 0.0)).unwrap()
    }

    #[test]
    fn zero_mode_is_scaled_norm() {
        let xi = gaussian(4096);
        let exact = Float::sqrt(core::f64::consts::PI);
        for theta in [0.25, 1.0 / 3.0] {
            let v = module_inner_product(&xi, &xi, theta, 0, 0).unwrap();
            assert!((v.re - (theta + 1.0) * exact).abs() < 1e-6);
            assert!(v.im.abs() < 1e-12);
            assert!((xi.norm_sqr() - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn modes_decay_and_converge() {
        let coarse = gaussian(4096);
        let fine = gaussian(8191);
        let theta = 0.25;
        let mut prev = f64::INFINITY;
        for n in 0..4 {
            let a = module_inner_product(&coarse, &coarse, theta, 1, n).unwrap();
            let b = module_inner_product(&fine, &fine, theta, 1, n).unwrap();
            assert!((a - b).norm() < 1e-6, "mode {n}: {a} vs {b}");
            assert!(a.norm() < prev);
            prev = a.norm();
        }
    }

    #[test]
    fn interpolation_is_cubic_exact() {
        let s = SampledFunction::from_fn(0.0, 3.0, 31, |x| Complex64::new(x * x * x - 2.0 * x, x)).unwrap();
        for x in [0.05, 0.73, 1.5, 2.97] {
            let v = s.eval(x);
            assert!((v - Complex64::new(x * x * x - 2.0 * x, x)).norm() < 1e-12);
        }
        assert_eq!(s.eval(3.5), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn grid_mismatch() {
        assert_eq!(
            module_inner_product(&gaussian(100), &gaussian(101), 0.3, 0, 0),
            Err(Error::GridMismatch)
        );
    }

    #[test]
    fn gram_matrix_is_positive() {
        let xi = gaussian(4096);
        for (p, q) in [(1, 3), (1, 4), (2, 5)] {
            let g = gram_matrix(&xi, p, q, 6).unwrap();
            assert!((&g - g.adjoint()).norm() < 1e-6);
            let ev = hermitian_eigenvalues(&g);
            assert!(ev[0] >= -1e-6, "{p}/{q}: {ev:?}");
        }
    }
}
