//! Finitely supported elements of the twisted group algebra C*(Zⁿ, ω_Θ)
//! and their finite-dimensional shadows at rational parameters.
//!
//! The basis element at `m ∈ Zⁿ` is the normally ordered product
//! `δ_m = u₁^{m₁} ⋯ u_n^{m_n}`, and `δ_a * δ_b = ω_Θ(a, b) δ_{a+b}` with
//! `ω_Θ(a, b) = exp(2πi⟨Θa, b⟩)`, so that `u_j u_i = e^{2πiΘ_{ij}} u_i u_j`.

mod inner_product;
mod rep;
mod rieffel;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::heisenberg::{cocycle_exponent, unit};
use crate::pairs::{pair_count, pairs};
use crate::{Error, Result};

pub use inner_product::{gram_matrix, module_inner_product, SampledFunction};
pub use rep::{clock_shift, hermitian_eigenvalues, operator_norm, represent, CMatrix, ClockShiftRep};
pub use rieffel::{
    rieffel_projection, rieffel_projection_with, RieffelParams, DEFAULT_QUADRATURE_POINTS, DEFAULT_TRUNCATION,
};

/// A real strictly upper-triangular `n × n` matrix, stored over pairs in
/// lexicographic order.
#[derive(Clone, PartialEq, Debug)]
pub struct Theta {
    n: usize,
    entries: Vec<f64>,
}

impl Theta {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 || entries.len() != pair_count(n) {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for Θ of rank {n}",
                entries.len()
            )));
        }
        if entries.iter().any(|t| !t.is_finite()) {
            return Err(Error::OutOfRange("Θ entries must be finite".into()));
        }
        Ok(Theta { n, entries })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, vec![0.0; pair_count(n)])
    }

    /// The rotation parameter `θ = Θ₁₂` in rank two.
    pub fn rotation(theta: f64) -> Result<Self> {
        Self::new(2, vec![theta])
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `Θ_{ij}` for one-based `i < j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        pairs(self.n)
            .into_iter()
            .zip(&self.entries)
            .find(|(p, _)| p.i() == i && p.j() == j)
            .map_or(0.0, |(_, t)| *t)
    }

    pub fn cocycle(&self, a: &[i64], b: &[i64]) -> Complex64 {
        unit(cocycle_exponent(self.n, &self.entries, a, b).expect("lengths checked by callers"))
    }
}

/// A finitely supported function `Zⁿ → C`; zero coefficients are dropped.
#[derive(Clone, PartialEq)]
pub struct TwistedAlgebraElement {
    theta: Theta,
    coeffs: BTreeMap<Vec<i64>, Complex64>,
}

impl TwistedAlgebraElement {
    pub fn zero(theta: &Theta) -> Self {
        TwistedAlgebraElement {
            theta: theta.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    /// `c · δ_m`.
    pub fn monomial(theta: &Theta, m: &[i64], c: Complex64) -> Result<Self> {
        let mut out = Self::zero(theta);
        out.add_term(m, c)?;
        Ok(out)
    }

    /// The unit `δ₀`.
    pub fn one(theta: &Theta) -> Self {
        Self::monomial(theta, &vec![0; theta.n], Complex64::new(1.0, 0.0)).expect("length matches")
    }

    /// The generator `u_i = δ_{f_i}`, one-based.
    pub fn generator(theta: &Theta, i: usize) -> Result<Self> {
        if i == 0 || i > theta.n {
            return Err(Error::IndexOutOfRange(format!("u{i} for rank {}", theta.n)));
        }
        let mut m = vec![0; theta.n];
        m[i - 1] = 1;
        Self::monomial(theta, &m, Complex64::new(1.0, 0.0))
    }

    pub fn from_terms<I>(theta: &Theta, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Complex64)>,
    {
        let mut out = Self::zero(theta);
        for (m, c) in terms {
            out.add_term(&m, c)?;
        }
        Ok(out)
    }

    pub fn add_term(&mut self, m: &[i64], c: Complex64) -> Result<()> {
        if m.len() != self.theta.n {
            return Err(Error::ShapeMismatch(format!("index {m:?} for rank {}", self.theta.n)));
        }
        let slot = self.coeffs.entry(m.to_vec()).or_insert_with(Complex64::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(m);
        }
        Ok(())
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    pub fn rank(&self) -> usize {
        self.theta.n
    }

    pub fn coefficient(&self, m: &[i64]) -> Complex64 {
        self.coeffs.get(m).copied().unwrap_or_else(Complex64::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], Complex64)> + '_ {
        self.coeffs.iter().map(|(m, c)| (m.as_slice(), *c))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    fn same_theta(&self, other: &Self) -> Result<()> {
        if self.theta != other.theta {
            return Err(Error::ThetaMismatch);
        }
        Ok(())
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let mut out = Self::zero(&self.theta);
        for (m, c) in &self.coeffs {
            out.add_term(m, c * k).expect("same rank");
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_theta(other)?;
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(m, *c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `(f * g)(s) = Σ_t f(t) g(s - t) ω_Θ(t, s - t)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.same_theta(other)?;
        let mut out = Self::zero(&self.theta);
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                let s: Vec<i64> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(&s, x * y * self.theta.cocycle(a, b))?;
            }
        }
        Ok(out)
    }

    /// `f*(s) = conj(ω_Θ(s, -s)) · conj(f(-s))`.
    pub fn involution(&self) -> Self {
        let mut out = Self::zero(&self.theta);
        for (m, c) in &self.coeffs {
            let s: Vec<i64> = m.iter().map(|x| -x).collect();
            let w = self.theta.cocycle(&s, m);
            out.add_term(&s, (w * c).conj()).expect("same rank");
        }
        out
    }

    /// `Σ |f(m)|`, an upper bound for the C*-norm.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// Largest coefficient distance to `other`.
    pub fn max_distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.coeffs.values().fold(0.0, |a, c| a.max(c.norm())))
    }

    /// The canonical trace `τ(f) = f(0)`.
    pub fn trace(&self) -> Complex64 {
        self.coefficient(&vec![0; self.theta.n])
    }
}

/// Free function form of [`TwistedAlgebraElement::convolve`].
pub fn twisted_convolve(f: &TwistedAlgebraElement, g: &TwistedAlgebraElement) -> Result<TwistedAlgebraElement> {
    f.convolve(g)
}

/// Free function form of [`TwistedAlgebraElement::involution`].
pub fn twisted_involution(f: &TwistedAlgebraElement) -> TwistedAlgebraElement {
    f.involution()
}

impl fmt::Debug for TwistedAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}
