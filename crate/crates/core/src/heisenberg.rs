//! The group H_n = Z_n × Zⁿ and the automorphisms induced by GL_n(Z).
//!
//! `Z_n` is the group of strictly upper-triangular integer matrices, stored
//! as a vector over index pairs. The product is
//! `(M, m)·(K, l) = (M + K + η(m, l), m + l)` with `η(m, l)_{ij} = l_i m_j`
//! for `i < j`. Generators are `x_i = (0, f_i)` (written `U_i`) and the
//! central `y_{ij} = (e_{ij}, 0)` (written `V_{i,j}`).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{Float, One, Zero};

use crate::intmat::{factor_unimodular, Generator, IntMatrix, UnimodularFactorization};
use crate::pairs::{pair_count, pairs, PairIndex};
use crate::{Error, Result};

/// The exponent `c` in `x_i x_j = y_{ij}^c x_j x_i` (`i < j`) forced by the
/// group law.
pub const COMMUTATOR_EXPONENT: i32 = -1;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HeisenbergElement {
    n: usize,
    /// `M_{ij}` in lexicographic pair order.
    central: Vec<BigInt>,
    vector: Vec<BigInt>,
}

/// `η(m, l)` truncated to `i < j`.
fn eta(n: usize, m: &[BigInt], l: &[BigInt]) -> Vec<BigInt> {
    pairs(n).into_iter().map(|p| &l[p.i() - 1] * &m[p.j() - 1]).collect()
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::OutOfRange("rank must be positive".into()));
    }
    Ok(())
}

impl HeisenbergElement {
    pub fn identity(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(HeisenbergElement {
            n,
            central: vec![BigInt::zero(); pair_count(n)],
            vector: vec![BigInt::zero(); n],
        })
    }

    pub fn new(n: usize, central: Vec<BigInt>, vector: Vec<BigInt>) -> Result<Self> {
        check_n(n)?;
        if central.len() != pair_count(n) || vector.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "central part of length {} and vector of length {} for rank {n}",
                central.len(),
                vector.len()
            )));
        }
        Ok(HeisenbergElement { n, central, vector })
    }

    /// Builds `(M, m)` from a full `n × n` matrix that must vanish on and
    /// below the diagonal.
    pub fn from_matrix(central: &IntMatrix, vector: Vec<BigInt>) -> Result<Self> {
        let n = vector.len();
        if central.shape() != (n, n) {
            return Err(Error::ShapeMismatch(format!(
                "central matrix {:?} for rank {n}",
                central.shape()
            )));
        }
        for r in 0..n {
            for c in 0..=r {
                if !central.get(r, c).is_zero() {
                    return Err(Error::Invalid("central part must be strictly upper triangular".into()));
                }
            }
        }
        let entries = pairs(n)
            .into_iter()
            .map(|p| central.get(p.i() - 1, p.j() - 1).clone())
            .collect();
        Self::new(n, entries, vector)
    }

    /// `x_i = (0, f_i)`, one-based.
    pub fn x(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange(format!("U{i} for rank {n}")));
        }
        let mut e = Self::identity(n)?;
        e.vector[i - 1] = BigInt::one();
        Ok(e)
    }

    /// `y_{ij} = (e_{ij}, 0)`.
    pub fn y(n: usize, p: PairIndex) -> Result<Self> {
        let mut e = Self::identity(n)?;
        e.central[p.position(n)] = BigInt::one();
        Ok(e)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn central(&self) -> &[BigInt] {
        &self.central
    }

    pub fn central_entry(&self, p: PairIndex) -> &BigInt {
        &self.central[p.position(self.n)]
    }

    /// The central part as an `n × n` strictly upper-triangular matrix.
    pub fn central_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.n, self.n);
        for (p, c) in pairs(self.n).into_iter().zip(&self.central) {
            m.set(p.i() - 1, p.j() - 1, c.clone());
        }
        m
    }

    pub fn vector(&self) -> &[BigInt] {
        &self.vector
    }

    pub fn is_identity(&self) -> bool {
        self.central.iter().all(Zero::is_zero) && self.vector.iter().all(Zero::is_zero)
    }

    pub fn is_central(&self) -> bool {
        self.vector.iter().all(Zero::is_zero)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::RankMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let e = eta(self.n, &self.vector, &other.vector);
        let central = self
            .central
            .iter()
            .zip(&other.central)
            .zip(e)
            .map(|((a, b), c)| a + b + c)
            .collect();
        let vector = self.vector.iter().zip(&other.vector).map(|(a, b)| a + b).collect();
        Ok(HeisenbergElement {
            n: self.n,
            central,
            vector,
        })
    }

    /// `(M, m)⁻¹ = (-M + η(m, m), -m)`.
    pub fn inverse(&self) -> Self {
        let e = eta(self.n, &self.vector, &self.vector);
        HeisenbergElement {
            n: self.n,
            central: self.central.iter().zip(e).map(|(a, c)| c - a).collect(),
            vector: self.vector.iter().map(|a| -a).collect(),
        }
    }

    /// `(M, m)^k = (kM + k(k-1)/2 · η(m, m), km)` for every integer `k`.
    pub fn pow(&self, k: &BigInt) -> Self {
        let tri: BigInt = k * (k - 1) / 2;
        let e = eta(self.n, &self.vector, &self.vector);
        HeisenbergElement {
            n: self.n,
            central: self.central.iter().zip(e).map(|(a, c)| k * a + &tri * c).collect(),
            vector: self.vector.iter().map(|a| k * a).collect(),
        }
    }

    /// `a b a⁻¹ b⁻¹`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.multiply(other)?
            .multiply(&self.inverse())?
            .multiply(&other.inverse())
    }

    /// The canonical word `∏ V_{i,j}^{M_{ij}} · U_1^{m_1} ⋯ U_n^{m_n}`,
    /// which evaluates back to `self`.
    pub fn to_word(&self) -> GeneratorWord {
        let mut tokens = Vec::new();
        for (p, c) in pairs(self.n).into_iter().zip(&self.central) {
            if !c.is_zero() {
                tokens.push(Token::V {
                    i: p.i(),
                    j: p.j(),
                    exp: c.clone(),
                });
            }
        }
        for (i, k) in self.vector.iter().enumerate() {
            if !k.is_zero() {
                tokens.push(Token::U {
                    i: i + 1,
                    exp: k.clone(),
                });
            }
        }
        GeneratorWord { n: self.n, tokens }
    }
}

impl fmt::Debug for HeisenbergElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let mut first = true;
        for (p, c) in pairs(self.n).into_iter().zip(&self.central) {
            if !c.is_zero() {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "{c}·e{p}")?;
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ", [")?;
        for (i, k) in self.vector.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "])")
    }
}

/// A letter of a generator word. Indices are one-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    U {
        i: usize,
        exp: BigInt,
    },
    /// Always stored with `i < j`; `V_{j,i}` is read as `V_{i,j}⁻¹`.
    V {
        i: usize,
        j: usize,
        exp: BigInt,
    },
}

impl Token {
    fn element(&self, n: usize) -> Result<HeisenbergElement> {
        match self {
            Token::U { i, exp } => Ok(HeisenbergElement::x(n, *i)?.pow(exp)),
            Token::V { i, j, exp } => Ok(HeisenbergElement::y(n, PairIndex::new(n, *i, *j)?)?.pow(exp)),
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, exp) = match self {
            Token::U { i, exp } => (format!("U{i}"), exp),
            Token::V { i, j, exp } => (format!("V{i},{j}"), exp),
        };
        if exp.is_one() {
            write!(f, "{name}")
        } else {
            write!(f, "{name}^{exp}")
        }
    }
}

/// A word in the generators `U_i`, `V_{i,j}` of H_n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorWord {
    n: usize,
    tokens: Vec<Token>,
}

impl GeneratorWord {
    pub fn new(n: usize, tokens: Vec<Token>) -> Result<Self> {
        check_n(n)?;
        for t in &tokens {
            let ok = match t {
                Token::U { i, .. } => (1..=n).contains(i),
                Token::V { i, j, .. } => *i >= 1 && i < j && *j <= n,
            };
            if !ok {
                return Err(Error::IndexOutOfRange(format!("{t} for rank {n}")));
            }
        }
        Ok(GeneratorWord { n, tokens })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    /// Parses whitespace-separated letters such as `U1 U2 U1^-1 V1,2^3`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let tokens = text.split_whitespace().map(parse_token).collect::<Result<Vec<_>>>()?;
        Self::new(n, tokens)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// Concatenation.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::RankMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut tokens = self.tokens.clone();
        tokens.extend(other.tokens.iter().cloned());
        Ok(GeneratorWord { n: self.n, tokens })
    }

    /// The abelianized exponent vector `λ(w)`.
    pub fn abelianization(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.n];
        for t in &self.tokens {
            if let Token::U { i, exp } = t {
                v[i - 1] += exp;
            }
        }
        v
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.tokens.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

fn parse_token(s: &str) -> Result<Token> {
    let bad = || Error::Parse(format!("cannot read generator {s:?}"));
    let (base, exp) = match s.split_once('^') {
        Some((b, e)) => (b, BigInt::from_str(e).map_err(|_| bad())?),
        None => (s, BigInt::one()),
    };
    let index = |t: &str| t.parse::<usize>().map_err(|_| bad());
    if let Some(rest) = base.strip_prefix('U') {
        return Ok(Token::U { i: index(rest)?, exp });
    }
    if let Some(rest) = base.strip_prefix('V') {
        let (a, b) = rest.split_once(',').ok_or_else(bad)?;
        let (a, b) = (index(a)?, index(b)?);
        return match a.cmp(&b) {
            core::cmp::Ordering::Less => Ok(Token::V { i: a, j: b, exp }),
            core::cmp::Ordering::Greater => Ok(Token::V { i: b, j: a, exp: -exp }),
            core::cmp::Ordering::Equal => Err(bad()),
        };
    }
    Err(bad())
}

/// Evaluates a word to the element `(C, k)`.
///
/// Maintains the collected form `∏ y^C · x_1^{k_1} ⋯ x_n^{k_n}`: appending
/// `x_i^e` moves it left past `x_j^{k_j}` for `j > i`, which contributes
/// `y_{ij}^{k_j e}`.
pub fn normal_form(w: &GeneratorWord) -> HeisenbergElement {
    let n = w.n;
    let mut c = vec![BigInt::zero(); pair_count(n)];
    let mut k = vec![BigInt::zero(); n];
    for t in &w.tokens {
        match t {
            Token::U { i, exp } => {
                for j in i + 1..=n {
                    let pos = PairIndex::new(n, *i, j).expect("validated word").position(n);
                    c[pos] += &k[j - 1] * exp;
                }
                k[i - 1] += exp;
            }
            Token::V { i, j, exp } => {
                c[PairIndex::new(n, *i, *j).expect("validated word").position(n)] += exp;
            }
        }
    }
    HeisenbergElement {
        n,
        central: c,
        vector: k,
    }
}

/// Left fold of [`HeisenbergElement::multiply`] over the letters.
pub fn evaluate(w: &GeneratorWord) -> Result<HeisenbergElement> {
    let mut acc = HeisenbergElement::identity(w.n)?;
    for t in &w.tokens {
        acc = acc.multiply(&t.element(w.n)?)?;
    }
    Ok(acc)
}

fn check_theta(n: usize, theta_len: usize, a: &[i64], b: &[i64]) -> Result<()> {
    if theta_len != pair_count(n) || a.len() != n || b.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "Θ with {theta_len} entries and vectors of length {}, {} for rank {n}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// `⟨Θa, b⟩ = Σ_{i<j} Θ_{ij} a_j b_i`, the pairing of Θ with `η(a, b)`.
/// `theta` lists `Θ_{ij}` in lexicographic pair order.
pub fn cocycle_exponent(n: usize, theta: &[f64], a: &[i64], b: &[i64]) -> Result<f64> {
    check_theta(n, theta.len(), a, b)?;
    Ok(pairs(n)
        .into_iter()
        .zip(theta)
        .map(|(p, t)| t * (a[p.j() - 1] as f64) * (b[p.i() - 1] as f64))
        .sum())
}

/// Exact version of [`cocycle_exponent`] for rational Θ.
pub fn cocycle_exponent_exact(n: usize, theta: &[Rational64], a: &[i64], b: &[i64]) -> Result<Rational64> {
    check_theta(n, theta.len(), a, b)?;
    Ok(pairs(n)
        .into_iter()
        .zip(theta)
        .map(|(p, t)| t * Rational64::from_integer(a[p.j() - 1] * b[p.i() - 1]))
        .fold(Rational64::zero(), |x, y| x + y))
}

/// `ω_Θ(a, b) = exp(2πi⟨Θa, b⟩)`, the character `χ_Θ` evaluated on
/// `η(a, b)`.
pub fn transgression_cocycle(n: usize, theta: &[f64], a: &[i64], b: &[i64]) -> Result<Complex64> {
    Ok(unit(cocycle_exponent(n, theta, a, b)?))
}

/// `exp(2πi t)` with `t` reduced modulo 1 first.
pub fn unit(t: f64) -> Complex64 {
    let r = t - Float::round(t);
    Complex64::from_polar(1.0, 2.0 * core::f64::consts::PI * r)
}

/// The automorphism Υ_Ψ of H_n induced by `Ψ ∈ GL_n(Z)`.
///
/// Ψ is factored into generators `F_1 ⋯ F_r` and `Υ_Ψ = Υ_{F_1} ∘ ⋯ ∘ Υ_{F_r}`,
/// where `Υ_{E_{k,l}(m)}` sends `U_k ↦ U_l^{-m} U_k` and `Υ_{Ψ_σ}` sends
/// `U_i ↦ U_{σ(i)}`, fixing the other `U`. Since H_n is free 2-step
/// nilpotent on the `U_i`, the images of the `U_i` determine the map and
/// `V_{i,j}` goes to the commutator `[Υ(U_j), Υ(U_i)]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UpsilonAutomorphism {
    psi: IntMatrix,
    factorization: UnimodularFactorization,
    /// `Υ(x_i)` for `i = 1..=n`.
    images: Vec<HeisenbergElement>,
}

/// Applies the homomorphism with `x_i ↦ images[i]` to `(C, k)`.
fn apply_images(images: &[HeisenbergElement], g: &HeisenbergElement) -> Result<HeisenbergElement> {
    let n = g.n;
    let mut acc = HeisenbergElement::identity(n)?;
    for (p, c) in pairs(n).into_iter().zip(&g.central) {
        if !c.is_zero() {
            let (xi, xj) = (&images[p.i() - 1], &images[p.j() - 1]);
            acc = acc.multiply(&xj.commutator(xi)?.pow(c))?;
        }
    }
    for (x, k) in images.iter().zip(&g.vector) {
        if !k.is_zero() {
            acc = acc.multiply(&x.pow(k))?;
        }
    }
    Ok(acc)
}

fn generator_images(n: usize, g: &Generator) -> Result<Vec<HeisenbergElement>> {
    let mut images = (1..=n)
        .map(|i| HeisenbergElement::x(n, i))
        .collect::<Result<Vec<_>>>()?;
    match g {
        Generator::Elementary { row, col, factor } => {
            let xl = HeisenbergElement::x(n, col + 1)?.pow(&-factor);
            images[*row] = xl.multiply(&images[*row])?;
        }
        Generator::Permutation(sigma) => {
            for (i, &s) in sigma.iter().enumerate() {
                images[i] = HeisenbergElement::x(n, s + 1)?;
            }
        }
    }
    Ok(images)
}

impl UpsilonAutomorphism {
    pub fn from_factorization(factorization: UnimodularFactorization) -> Result<Self> {
        let n = factorization.rank();
        check_n(n)?;
        let mut images = (1..=n)
            .map(|i| HeisenbergElement::x(n, i))
            .collect::<Result<Vec<_>>>()?;
        for g in factorization.factors().iter().rev() {
            let table = generator_images(n, g)?;
            images = images.iter().map(|z| apply_images(&table, z)).collect::<Result<_>>()?;
        }
        Ok(UpsilonAutomorphism {
            psi: factorization.product(),
            factorization,
            images,
        })
    }

    pub fn psi(&self) -> &IntMatrix {
        &self.psi
    }

    pub fn factorization(&self) -> &UnimodularFactorization {
        &self.factorization
    }

    pub fn rank(&self) -> usize {
        self.psi.rows()
    }

    /// `Υ(U_i)`, one-based.
    pub fn image_u(&self, i: usize) -> Result<&HeisenbergElement> {
        self.images
            .get(i.wrapping_sub(1))
            .ok_or_else(|| Error::IndexOutOfRange(format!("U{i} for rank {}", self.rank())))
    }

    /// `Υ(V_{i,j}) = [Υ(U_j), Υ(U_i)]`.
    pub fn image_v(&self, p: PairIndex) -> Result<HeisenbergElement> {
        self.images[p.j() - 1].commutator(&self.images[p.i() - 1])
    }

    pub fn apply(&self, g: &HeisenbergElement) -> Result<HeisenbergElement> {
        if g.n != self.rank() {
            return Err(Error::RankMismatch {
                left: self.rank(),
                right: g.n,
            });
        }
        apply_images(&self.images, g)
    }

    pub fn apply_word(&self, w: &GeneratorWord) -> Result<HeisenbergElement> {
        self.apply(&normal_form(w))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        let images = other.images.iter().map(|z| self.apply(z)).collect::<Result<_>>()?;
        let mut factors = self.factorization.factors().to_vec();
        factors.extend(other.factorization.factors().iter().cloned());
        let factorization = UnimodularFactorization::new(self.rank(), factors)?;
        Ok(UpsilonAutomorphism {
            psi: self.psi.matmul(&other.psi)?,
            factorization,
            images,
        })
    }

    /// The inverse automorphism, built from the inverted factorization.
    pub fn inverse(&self) -> Result<Self> {
        Self::from_factorization(self.factorization.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, z)| {
            z.central.iter().all(Zero::is_zero)
                && z.vector
                    .iter()
                    .enumerate()
                    .all(|(k, v)| if k == i { v.is_one() } else { v.is_zero() })
        })
    }

    /// Whether the images satisfy the defining relations
    /// `x_j x_i = y_{ij} x_i x_j` and centrality of `y_{ij}`.
    pub fn relations_hold(&self) -> Result<bool> {
        let n = self.rank();
        for p in pairs(n) {
            let (xi, xj) = (&self.images[p.i() - 1], &self.images[p.j() - 1]);
            let y = self.image_v(p)?;
            if xj.multiply(xi)? != y.multiply(&xi.multiply(xj)?)? {
                return Ok(false);
            }
            for x in &self.images {
                if !y.commutator(x)?.is_identity() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The generator table as canonical words: `U_i ↦ …` then `V_{i,j} ↦ …`.
    pub fn word_table(&self) -> Result<Vec<(String, GeneratorWord)>> {
        let n = self.rank();
        let mut out: Vec<(String, GeneratorWord)> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, z)| (format!("U{}", i + 1), z.to_word()))
            .collect();
        for p in pairs(n) {
            out.push((format!("V{},{}", p.i(), p.j()), self.image_v(p)?.to_word()));
        }
        Ok(out)
    }
}

/// Builds Υ_Ψ; fails with [`Error::NotUnimodular`] unless `Ψ ∈ GL_n(Z)`.
pub fn upsilon(psi: &IntMatrix) -> Result<UpsilonAutomorphism> {
    UpsilonAutomorphism::from_factorization(factor_unimodular(psi)?)
}

/// `ᵗΨ⁻¹ v`, the expected vector part of `Υ_Ψ` applied to an element with
/// vector part `v`.
pub fn contragredient(psi: &IntMatrix, v: &[BigInt]) -> Result<Vec<BigInt>> {
    psi.inverse_unimodular()?.transpose().mul_vec(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn elem(n: usize, c: &[i64], v: &[i64]) -> HeisenbergElement {
        HeisenbergElement::new(n, big(c), big(v)).unwrap()
    }

    #[test]
    fn product_of_generators() {
        let x1 = HeisenbergElement::x(2, 1).unwrap();
        let x2 = HeisenbergElement::x(2, 2).unwrap();
        assert_eq!(x2.multiply(&x1).unwrap(), elem(2, &[1], &[1, 1]));
        assert_eq!(x1.multiply(&x2).unwrap(), elem(2, &[0], &[1, 1]));
    }

    #[test]
    fn commutator_convention() {
        let w = GeneratorWord::parse(2, "U1 U2 U1^-1 U2^-1").unwrap();
        let expected = elem(2, &[COMMUTATOR_EXPONENT as i64], &[0, 0]);
        assert_eq!(normal_form(&w), expected);
        assert_eq!(evaluate(&w).unwrap(), expected);
        assert!(normal_form(&GeneratorWord::empty(3).unwrap()).is_identity());
    }

    #[test]
    fn parse_and_display() {
        let w = GeneratorWord::parse(3, "U1 U2 U1^-1 V1,2^3 V3,2").unwrap();
        assert_eq!(w.to_string(), "U1 U2 U1^-1 V1,2^3 V2,3^-1");
        assert!(GeneratorWord::parse(2, "U3").is_err());
        assert!(GeneratorWord::parse(2, "V1,1").is_err());
        assert!(GeneratorWord::parse(2, "W1").is_err());
        assert!(GeneratorWord::parse(2, "U1^x").is_err());
        assert_eq!(w.abelianization(), big(&[0, 1, 0]));
    }

    #[test]
    fn pow_matches_repeated_product() {
        let g = elem(3, &[2, -1, 4], &[1, -2, 3]);
        let mut acc = HeisenbergElement::identity(3).unwrap();
        for k in 0..6 {
            assert_eq!(g.pow(&BigInt::from(k)), acc);
            acc = acc.multiply(&g).unwrap();
        }
        assert!(g.multiply(&g.inverse()).unwrap().is_identity());
        assert_eq!(g.pow(&BigInt::from(-3)), g.inverse().pow(&BigInt::from(3)));
    }

    #[test]
    fn cocycle_commutation_ratio() {
        let theta = [0.1, 0.25, -0.4, 0.7, 0.05, 0.33];
        for p in pairs(4) {
            let mut ei = [0i64; 4];
            let mut ej = [0i64; 4];
            ei[p.i() - 1] = 1;
            ej[p.j() - 1] = 1;
            let ratio = transgression_cocycle(4, &theta, &ej, &ei).unwrap()
                / transgression_cocycle(4, &theta, &ei, &ej).unwrap();
            assert!((ratio - unit(theta[p.position(4)])).norm() < 1e-12);
        }
        assert_eq!(
            transgression_cocycle(2, &[0.0], &[3, 4], &[-1, 7]).unwrap(),
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn upsilon_identity_and_elementary() {
        assert!(upsilon(&IntMatrix::identity(3)).unwrap().is_identity());
        // E_{1,3}(2): U1 ↦ U3^-2 U1
        let psi = IntMatrix::from_i64(3, 3, &[1, 0, 2, 0, 1, 0, 0, 0, 1]);
        let ups = upsilon(&psi).unwrap();
        let expected = normal_form(&GeneratorWord::parse(3, "U3^-2 U1").unwrap());
        assert_eq!(*ups.image_u(1).unwrap(), expected);
        assert_eq!(*ups.image_u(2).unwrap(), HeisenbergElement::x(3, 2).unwrap());
        assert_eq!(*ups.image_u(3).unwrap(), HeisenbergElement::x(3, 3).unwrap());
        assert!(ups.relations_hold().unwrap());
    }

    #[test]
    fn upsilon_rejects_singular() {
        assert_eq!(upsilon(&IntMatrix::diagonal(&[2, 1])), Err(Error::NotUnimodular));
    }

    #[test]
    fn permutation_degree_equivariance() {
        // the images x_i ↦ x_{σ(i)} transform degrees by ᵗΨ_σ⁻¹
        let sigma = vec![2, 0, 1];
        let f = UnimodularFactorization::new(3, vec![Generator::Permutation(sigma)]).unwrap();
        let ups = UpsilonAutomorphism::from_factorization(f).unwrap();
        for i in 1..=3 {
            let x = HeisenbergElement::x(3, i).unwrap();
            assert_eq!(
                ups.image_u(i).unwrap().vector(),
                contragredient(ups.psi(), x.vector()).unwrap()
            );
        }
    }

    fn element(n: usize) -> impl Strategy<Value = HeisenbergElement> {
        (
            proptest::collection::vec(-20i64..=20, pair_count(n)),
            proptest::collection::vec(-20i64..=20, n),
        )
            .prop_map(move |(c, v)| elem(n, &c, &v))
    }

    fn triple() -> impl Strategy<Value = (HeisenbergElement, HeisenbergElement, HeisenbergElement)> {
        (1usize..=5).prop_flat_map(|n| (element(n), element(n), element(n)))
    }

    fn word(n: usize) -> impl Strategy<Value = GeneratorWord> {
        let letter = prop_oneof![
            (1..=n, -3i64..=3).prop_map(|(i, e)| Token::U {
                i,
                exp: BigInt::from(e)
            }),
            (1..=n, 1..=n, -3i64..=3).prop_map(|(i, j, e)| {
                let exp = BigInt::from(e);
                match i.cmp(&j) {
                    core::cmp::Ordering::Less => Token::V { i, j, exp },
                    core::cmp::Ordering::Greater => Token::V { i: j, j: i, exp },
                    core::cmp::Ordering::Equal => Token::U { i, exp },
                }
            }),
        ];
        proptest::collection::vec(letter, 0..12).prop_map(move |ts| GeneratorWord::new(n, ts).unwrap())
    }

    proptest! {
        #[test]
        fn group_axioms((a, b, c) in triple()) {
            let n = a.rank();
            let id = HeisenbergElement::identity(n).unwrap();
            prop_assert_eq!(a.multiply(&b).unwrap().multiply(&c).unwrap(), a.multiply(&b.multiply(&c).unwrap()).unwrap());
            prop_assert_eq!(a.multiply(&id).unwrap(), a.clone());
            prop_assert_eq!(id.multiply(&a).unwrap(), a.clone());
            prop_assert!(a.multiply(&a.inverse()).unwrap().is_identity());
            prop_assert!(a.inverse().multiply(&a).unwrap().is_identity());
        }

        #[test]
        fn central_elements_commute((a, _, _) in triple(), i in 0usize..10, j in 0usize..10) {
            let n = a.rank();
            prop_assume!(n >= 2);
            let (i, j) = (i % n + 1, j % n + 1);
            prop_assume!(i < j);
            let y = HeisenbergElement::y(n, PairIndex::new(n, i, j).unwrap()).unwrap();
            prop_assert_eq!(y.multiply(&a).unwrap(), a.multiply(&y).unwrap());
        }

        #[test]
        fn normal_form_matches_fold(w in (2usize..=4).prop_flat_map(word)) {
            let nf = normal_form(&w);
            prop_assert_eq!(&nf, &evaluate(&w).unwrap());
            prop_assert_eq!(nf.vector(), &w.abelianization()[..]);
            prop_assert_eq!(normal_form(&nf.to_word()), nf);
        }

        #[test]
        fn cocycle_identity(
            theta in proptest::collection::vec((-7i64..=7, 1i64..=9), 3),
            a in proptest::collection::vec(-5i64..=5, 3),
            b in proptest::collection::vec(-5i64..=5, 3),
            c in proptest::collection::vec(-5i64..=5, 3),
        ) {
            let theta: Vec<Rational64> = theta.into_iter().map(|(p, q)| Rational64::new(p, q)).collect();
            let add = |x: &[i64], y: &[i64]| x.iter().zip(y).map(|(s, t)| s + t).collect::<Vec<_>>();
            let w = |x: &[i64], y: &[i64]| cocycle_exponent_exact(3, &theta, x, y).unwrap();
            // exact in the exponent, not only modulo 1
            prop_assert_eq!(w(&a, &b) + w(&add(&a, &b), &c), w(&b, &c) + w(&a, &add(&b, &c)));
        }
    }
}
