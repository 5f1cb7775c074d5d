//! The monodromy action of loops in the base on Λ*(Zⁿ).
//!
//! A principal Tⁿ-bundle with classifying winding data `W` (one row per
//! index pair, one column per loop generator) acts on the K-theory of the
//! fibre by `∏_{i<j} M_{i,j}^{(W·γ)_{i,j}}`. Every `M_{i,j}` preserves the
//! grading, so matrices are kept as an even and an odd block.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exterior::{graded_basis, BasisOrder, ExteriorElement, IndexSet};
use crate::intmat::IntMatrix;
use crate::pairs::{pair_count, pairs, PairIndex};
use crate::{Error, Result};

/// Largest rank for which dense `2ⁿ⁻¹ × 2ⁿ⁻¹` blocks are built.
pub const MAX_DENSE_RANK: usize = 12;

/// A grading-preserving integer matrix on Λ*(Zⁿ).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonodromyMatrix {
    n: usize,
    order: BasisOrder,
    even: IntMatrix,
    odd: IntMatrix,
}

fn check_dense_rank(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DENSE_RANK {
        return Err(Error::OutOfRange(format!("rank {n} must lie in 1..={MAX_DENSE_RANK}")));
    }
    Ok(())
}

impl MonodromyMatrix {
    pub fn identity(n: usize, order: BasisOrder) -> Result<Self> {
        check_dense_rank(n)?;
        let (even, odd) = graded_basis(n, order)?;
        Ok(MonodromyMatrix {
            n,
            order,
            even: IntMatrix::identity(even.len()),
            odd: IntMatrix::identity(odd.len()),
        })
    }

    /// Assembles a matrix from its blocks, checking their sizes.
    pub fn from_blocks(n: usize, order: BasisOrder, even: IntMatrix, odd: IntMatrix) -> Result<Self> {
        check_dense_rank(n)?;
        let half = 1usize << (n - 1);
        if even.shape() != (half, half) || odd.shape() != (half, half) {
            return Err(Error::ShapeMismatch(format!(
                "blocks {:?} and {:?} for rank {n}",
                even.shape(),
                odd.shape()
            )));
        }
        Ok(MonodromyMatrix { n, order, even, odd })
    }

    /// The linear map `f` on basis elements, written in `order`.
    fn from_action(n: usize, order: BasisOrder, f: impl Fn(IndexSet) -> Vec<(IndexSet, BigInt)>) -> Result<Self> {
        check_dense_rank(n)?;
        let (even, odd) = graded_basis(n, order)?;
        let block = |basis: &[IndexSet]| {
            let pos: BTreeMap<IndexSet, usize> = basis.iter().enumerate().map(|(k, s)| (*s, k)).collect();
            let mut m = IntMatrix::zeros(basis.len(), basis.len());
            for (c, s) in basis.iter().enumerate() {
                for (t, coeff) in f(*s) {
                    let r = pos[&t];
                    let v = m.get(r, c) + coeff;
                    m.set(r, c, v);
                }
            }
            m
        };
        Ok(MonodromyMatrix {
            n,
            order,
            even: block(&even),
            odd: block(&odd),
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> BasisOrder {
        self.order
    }

    pub fn even(&self) -> &IntMatrix {
        &self.even
    }

    pub fn odd(&self) -> &IntMatrix {
        &self.odd
    }

    /// Even and odd basis subsets indexing the blocks.
    pub fn basis(&self) -> (Vec<IndexSet>, Vec<IndexSet>) {
        graded_basis(self.n, self.order).expect("rank checked on construction")
    }

    /// The full `2ⁿ × 2ⁿ` matrix, even basis first then odd.
    pub fn full(&self) -> IntMatrix {
        self.even.direct_sum(&self.odd)
    }

    pub fn is_identity(&self) -> bool {
        self.even.is_identity() && self.odd.is_identity()
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::RankMismatch {
                left: self.n,
                right: other.n,
            });
        }
        if self.order != other.order {
            return Err(Error::Invalid(format!(
                "basis orders {} and {} differ",
                self.order.tag(),
                other.order.tag()
            )));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(MonodromyMatrix {
            n: self.n,
            order: self.order,
            even: self.even.matmul(&other.even)?,
            odd: self.odd.matmul(&other.odd)?,
        })
    }

    /// `self - I`.
    pub fn nilpotent_part(&self) -> Self {
        let id = Self::identity(self.n, self.order).expect("rank checked on construction");
        MonodromyMatrix {
            n: self.n,
            order: self.order,
            even: self.even.checked_sub(&id.even).expect("same shape"),
            odd: self.odd.checked_sub(&id.odd).expect("same shape"),
        }
    }

    /// Whether `(M - I)^{n+1} = 0`.
    pub fn is_unipotent(&self) -> bool {
        let nil = self.nilpotent_part();
        let k = self.n as u64 + 1;
        nil.even.pow(k).map(|m| m.is_zero()).unwrap_or(false) && nil.odd.pow(k).map(|m| m.is_zero()).unwrap_or(false)
    }

    /// Exact inverse of a unipotent matrix: `Σ_r (-N)^r`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unipotent() {
            return Err(Error::Invalid("inverse is only provided for unipotent matrices".into()));
        }
        let minus_n = self.nilpotent_part();
        let minus_n = MonodromyMatrix {
            even: minus_n.even.neg(),
            odd: minus_n.odd.neg(),
            ..minus_n
        };
        let mut acc = Self::identity(self.n, self.order)?;
        let mut term = acc.clone();
        for _ in 0..self.n {
            term = term.matmul(&minus_n)?;
            if term.even.is_zero() && term.odd.is_zero() {
                break;
            }
            acc.even = acc.even.checked_add(&term.even)?;
            acc.odd = acc.odd.checked_add(&term.odd)?;
        }
        Ok(acc)
    }

    /// `M^k` for any integer `k`; negative powers need `M` unipotent.
    pub fn pow(&self, k: &BigInt) -> Result<Self> {
        let base = if k.is_negative() { self.inverse()? } else { self.clone() };
        let mut e = k.abs();
        let mut acc = Self::identity(self.n, self.order)?;
        let mut sq = base;
        let two = BigInt::from(2);
        while !e.is_zero() {
            if (&e % &two).is_one() {
                acc = acc.matmul(&sq)?;
            }
            e /= &two;
            if !e.is_zero() {
                sq = sq.matmul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Applies the matrix to an element of Λ*(Zⁿ).
    pub fn apply(&self, x: &ExteriorElement) -> Result<ExteriorElement> {
        if x.rank() != self.n {
            return Err(Error::RankMismatch {
                left: self.n,
                right: x.rank(),
            });
        }
        let (even_basis, odd_basis) = self.basis();
        let mut terms = Vec::new();
        for (m, basis) in [(&self.even, &even_basis), (&self.odd, &odd_basis)] {
            let image = m.mul_vec(&x.coordinates(basis))?;
            terms.extend(basis.iter().copied().zip(image));
        }
        ExteriorElement::from_terms(self.n, terms)
    }
}

/// `M_{i,j} e_J = e_J + (-1)^m e_{J∖{i,j}}` when `{i,j} ⊆ J`, where `m`
/// counts the elements of `J` strictly between `i` and `j`; otherwise
/// `e_J` is fixed.
pub fn basic_generator(n: usize, p: PairIndex, order: BasisOrder) -> Result<MonodromyMatrix> {
    check_dense_rank(n)?;
    let (i, j) = (p.i(), p.j());
    if j > n {
        return Err(Error::IndexOutOfRange(format!("pair {p} for rank {n}")));
    }
    let ij = IndexSet::from_increasing(&[i, j])?;
    MonodromyMatrix::from_action(n, order, |s| {
        let mut image = alloc::vec![(s, BigInt::one())];
        if s.union(ij) == s {
            let sign = if s.count_between(i, j) % 2 == 0 { 1 } else { -1 };
            image.push((s.without(ij), BigInt::from(sign)));
        }
        image
    })
}

/// `I + k·(M_{i,j} - I)`, which equals `M_{i,j}^k` since `(M_{i,j} - I)² = 0`.
fn generator_power(n: usize, p: PairIndex, k: &BigInt, order: BasisOrder) -> Result<MonodromyMatrix> {
    let g = basic_generator(n, p, order)?;
    let nil = g.nilpotent_part();
    let id = MonodromyMatrix::identity(n, order)?;
    Ok(MonodromyMatrix {
        even: id.even.checked_add(&nil.even.scale(k))?,
        odd: id.odd.checked_add(&nil.odd.scale(k))?,
        ..id
    })
}

fn check_winding(n: usize, w: &IntMatrix) -> Result<()> {
    if w.rows() != pair_count(n) {
        return Err(Error::ShapeMismatch(format!(
            "winding matrix has {} rows, rank {n} needs {}",
            w.rows(),
            pair_count(n)
        )));
    }
    Ok(())
}

/// The pair exponents `W·γ`.
pub fn pair_exponents(n: usize, w: &IntMatrix, gamma: &[BigInt]) -> Result<Vec<BigInt>> {
    check_winding(n, w)?;
    w.mul_vec(gamma)
}

/// `∏_{i<j} M_{i,j}^{(W·γ)_{i,j}}`.
pub fn representation(n: usize, w: &IntMatrix, gamma: &[BigInt], order: BasisOrder) -> Result<MonodromyMatrix> {
    let u = pair_exponents(n, w, gamma)?;
    let mut acc = MonodromyMatrix::identity(n, order)?;
    for (p, k) in pairs(n).into_iter().zip(&u) {
        if !k.is_zero() {
            acc = acc.matmul(&generator_power(n, p, k, order)?)?;
        }
    }
    Ok(acc)
}

/// Whether the monodromy is trivial, i.e. `W = 0`.
pub fn is_trivial(n: usize, w: &IntMatrix) -> Result<bool> {
    check_winding(n, w)?;
    Ok(w.is_zero())
}

/// Whether `M_{W₁+W₂}(γ) = M_{W₁}(γ) · M_{W₂}(γ)`.
pub fn additivity_check(n: usize, w1: &IntMatrix, w2: &IntMatrix, gamma: &[BigInt]) -> Result<bool> {
    let sum = w1.checked_add(w2)?;
    let lhs = representation(n, &sum, gamma, BasisOrder::Lex)?;
    let rhs = representation(n, w1, gamma, BasisOrder::Lex)?.matmul(&representation(n, w2, gamma, BasisOrder::Lex)?)?;
    Ok(lhs == rhs)
}
