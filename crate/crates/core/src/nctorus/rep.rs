use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Float;

use super::TwistedAlgebraElement;
use crate::heisenberg::unit;
use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// The clock and shift unitaries at `θ = p/q`: `U = diag(ζ^k)` with
/// `ζ = e^{2πip/q}` and `V e_k = e_{k+1}`, so that `UV = ζ VU`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClockShiftRep {
    p: i64,
    q: i64,
    u: CMatrix,
    v: CMatrix,
}

pub fn clock_shift(p: i64, q: i64) -> Result<ClockShiftRep> {
    if q < 1 || p.gcd(&q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let d = q as usize;
    let u = CMatrix::from_fn(d, d, |r, c| {
        if r == c {
            unit((p * r as i64).rem_euclid(q) as f64 / q as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let v = CMatrix::from_fn(d, d, |r, c| {
        Complex64::new(if r == (c + 1) % d { 1.0 } else { 0.0 }, 0.0)
    });
    Ok(ClockShiftRep { p, q, u, v })
}

impl ClockShiftRep {
    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn theta(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn dim(&self) -> usize {
        self.q as usize
    }

    pub fn clock(&self) -> &CMatrix {
        &self.u
    }

    pub fn shift(&self) -> &CMatrix {
        &self.v
    }

    /// `‖UV - e^{2πip/q} VU‖`.
    pub fn relation_residual(&self) -> f64 {
        let z = unit(self.p as f64 / self.q as f64);
        operator_norm(&(&self.u * &self.v - (&self.v * &self.u) * z))
    }

    /// `V^a U^b`, entry `(k + a, k)` equal to `ζ^{bk}`.
    pub fn shift_clock(&self, a: i64, b: i64) -> CMatrix {
        let q = self.q;
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for k in 0..q {
            let phase = (self.p * b).rem_euclid(q) * k % q;
            m[((k + a).rem_euclid(q) as usize, k as usize)] = unit(phase as f64 / q as f64);
        }
        m
    }
}

/// The image of `f` under `u₁ ↦ V`, `u₂ ↦ U`, so `δ_{(a,b)} ↦ V^a U^b`.
///
/// Requires rank two and `Θ₁₂ = p/q` up to `1e-12`.
pub fn represent(f: &TwistedAlgebraElement, rep: &ClockShiftRep) -> Result<CMatrix> {
    if f.rank() != 2 {
        return Err(Error::ParameterMismatch(format!(
            "rank {} elements have no clock-shift image",
            f.rank()
        )));
    }
    let theta = f.theta().entries()[0];
    if (theta - rep.theta()).abs() > 1e-12 {
        return Err(Error::ParameterMismatch(format!(
            "element has θ = {theta}, representation has {}/{}",
            rep.p, rep.q
        )));
    }
    let d = rep.dim();
    let mut out = CMatrix::zeros(d, d);
    for (m, c) in f.terms() {
        out += rep.shift_clock(m[0], m[1]) * c;
    }
    Ok(out)
}

/// Spectral norm, the square root of the top eigenvalue of `A†A`.
pub fn operator_norm(a: &CMatrix) -> f64 {
    let h = a.adjoint() * a;
    Float::sqrt(hermitian_eigenvalues(&h).last().copied().unwrap_or(0.0).max(0.0))
}

/// Eigenvalues of the Hermitian part `(A + A†)/2`, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let h = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nctorus::Theta;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_rep() {
        let r = clock_shift(0, 1).unwrap();
        assert_eq!(r.clock(), &CMatrix::identity(1, 1));
        assert_eq!(r.shift(), &CMatrix::identity(1, 1));
    }

    #[test]
    fn relation_holds() {
        for (p, q) in [(1, 3), (2, 5), (-3, 7), (5, 12)] {
            assert!(clock_shift(p, q).unwrap().relation_residual() <= 1e-12);
        }
        assert_eq!(clock_shift(2, 4), Err(Error::NotCoprime { p: 2, q: 4 }));
        assert_eq!(clock_shift(1, 0), Err(Error::NotCoprime { p: 1, q: 0 }));
    }

    #[test]
    fn generators_and_unit() {
        let r = clock_shift(1, 3).unwrap();
        let th = Theta::rotation(1.0 / 3.0).unwrap();
        let id = represent(&TwistedAlgebraElement::one(&th), &r).unwrap();
        assert_eq!(id, CMatrix::identity(3, 3));
        let u1 = represent(&TwistedAlgebraElement::generator(&th, 1).unwrap(), &r).unwrap();
        let u2 = represent(&TwistedAlgebraElement::generator(&th, 2).unwrap(), &r).unwrap();
        assert!((u1 - r.shift()).norm() < 1e-15);
        assert!((u2 - r.clock()).norm() < 1e-15);
        assert!(represent(&TwistedAlgebraElement::one(&Theta::rotation(0.5).unwrap()), &r).is_err());
    }

    #[test]
    fn shift_clock_matches_powers() {
        let r = clock_shift(2, 5).unwrap();
        let pw = |m: &CMatrix, k: i64| {
            let base = if k < 0 { m.adjoint() } else { m.clone() };
            (0..k.abs()).fold(CMatrix::identity(5, 5), |acc, _| acc * &base)
        };
        for a in -6..=6 {
            for b in -6..=6 {
                let direct = pw(r.shift(), a) * pw(r.clock(), b);
                assert!((r.shift_clock(a, b) - direct).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn represent_is_star_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, q) in [(1, 2), (1, 3), (2, 5), (3, 8)] {
            let r = clock_shift(p, q).unwrap();
            let th = Theta::rotation(p as f64 / q as f64).unwrap();
            let mut random = || {
                let terms = (0..5).map(|_| {
                    (
                        alloc::vec![rng.gen_range(-4..=4), rng.gen_range(-4..=4)],
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    )
                });
                TwistedAlgebraElement::from_terms(&th, terms.collect::<Vec<_>>()).unwrap()
            };
            for _ in 0..20 {
                let (f, g) = (random(), random());
                let lhs = represent(&f.convolve(&g).unwrap(), &r).unwrap();
                let rhs = represent(&f, &r).unwrap() * represent(&g, &r).unwrap();
                assert!(operator_norm(&(lhs - rhs)) <= 1e-10);
                let adj = represent(&f.involution(), &r).unwrap();
                assert!(operator_norm(&(adj - represent(&f, &r).unwrap().adjoint())) <= 1e-10);
            }
        }
    }
}
