//! The exterior algebra Λ*(Zⁿ) with exact integer coefficients.
//!
//! Basis elements are `e_J = e_{i₁} ∧ … ∧ e_{i_k}` for strictly increasing
//! index sets `J`; under `e_i ↦ [u_i]` this ring is K*(C(Tⁿ)), with the
//! even part in K₀ and the odd part in K₁.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Largest supported number of generators.
pub const MAX_RANK: usize = 63;

/// A subset of `{1, …, n}`, stored as a bit mask (index `i` is bit `i - 1`).
///
/// Ordered by size first, then lexicographically on the increasing index
/// list, which is the default basis order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct IndexSet(u64);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    /// Builds a set from one-based indices. Duplicates are rejected.
    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &i in indices {
            if i == 0 || i > MAX_RANK {
                return Err(Error::IndexOutOfRange(alloc::format!("generator index {i}")));
            }
            let b = 1u64 << (i - 1);
            if bits & b != 0 {
                return Err(Error::Invalid(alloc::format!("repeated index {i}")));
            }
            bits |= b;
        }
        Ok(IndexSet(bits))
    }

    /// Like [`IndexSet::from_indices`] but also requires strictly increasing input.
    pub fn from_increasing(indices: &[usize]) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid(alloc::format!(
                "index list {indices:?} is not strictly increasing"
            )));
        }
        Self::from_indices(indices)
    }

    pub const fn from_bits(bits: u64) -> Self {
        IndexSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_even(self) -> bool {
        self.len() % 2 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_RANK).contains(&i) && self.0 & (1u64 << (i - 1)) != 0
    }

    /// Largest index, or 0 for the empty set.
    pub fn max_index(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// Increasing list of one-based indices.
    pub fn indices(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut bits = self.0;
        while bits != 0 {
            out.push(bits.trailing_zeros() as usize + 1);
            bits &= bits - 1;
        }
        out
    }

    pub fn union(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 | other.0)
    }

    pub fn intersects(self, other: IndexSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn without(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 & !other.0)
    }

    /// Number of elements strictly between `i` and `j` (`i < j`).
    pub fn count_between(self, i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        // bits i .. j-2 hold indices i+1 .. j-1
        let width = j - i - 1;
        if width == 0 {
            return 0;
        }
        let mask = ((1u64 << width) - 1) << i;
        (self.0 & mask).count_ones() as usize
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.len().cmp(&other.len()) {
            Ordering::Equal => {
                let diff = self.0 ^ other.0;
                if diff == 0 {
                    Ordering::Equal
                } else if self.0 & (diff & diff.wrapping_neg()) != 0 {
                    // the smallest index where the lists diverge belongs to self
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            o => o,
        }
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.indices().into_iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// Sign of `e_J ∧ e_K = sign · e_{J ∪ K}`; zero when the sets meet.
///
/// The sign is the parity of the number of pairs `(j, k) ∈ J × K` with
/// `j > k`, i.e. of the permutation sorting the concatenated index list.
pub fn wedge_sign(j: IndexSet, k: IndexSet) -> i32 {
    if j.intersects(k) {
        return 0;
    }
    let mut inversions = 0u32;
    let mut bits = k.0;
    while bits != 0 {
        let pos = bits.trailing_zeros();
        let above = if pos >= 63 { 0 } else { !((1u64 << (pos + 1)) - 1) };
        inversions += (j.0 & above).count_ones();
        bits &= bits - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Coordinate order for matrices over the exterior basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BasisOrder {
    /// By size, then lexicographically.
    #[default]
    Lex,
    /// Rank 3 only: even part `(∅, {1,2}, {2,3}, {1,3})`, then odd part
    /// `({1}, {2}, {3}, {1,2,3})`.
    Rank3Graded,
}

impl BasisOrder {
    pub fn tag(self) -> &'static str {
        match self {
            BasisOrder::Lex => "lex",
            BasisOrder::Rank3Graded => "rank3-graded",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "lex" => Some(BasisOrder::Lex),
            "rank3-graded" => Some(BasisOrder::Rank3Graded),
            _ => None,
        }
    }
}

fn check_rank(n: usize) -> Result<()> {
    if n == 0 || n > MAX_RANK {
        return Err(Error::OutOfRange(alloc::format!("rank {n} must lie in 1..={MAX_RANK}")));
    }
    Ok(())
}

/// Even and odd basis subsets of Λ*(Zⁿ) in the requested order.
pub fn graded_basis(n: usize, order: BasisOrder) -> Result<(Vec<IndexSet>, Vec<IndexSet>)> {
    check_rank(n)?;
    match order {
        BasisOrder::Lex => {
            let (even, odd) = lex_basis(n).into_iter().partition(|s| s.is_even());
            Ok((even, odd))
        }
        BasisOrder::Rank3Graded => {
            if n != 3 {
                return Err(Error::OutOfRange(alloc::format!(
                    "the rank-3 graded basis needs n = 3, got {n}"
                )));
            }
            let s = |bits| IndexSet::from_bits(bits);
            Ok((
                alloc::vec![s(0b000), s(0b011), s(0b110), s(0b101)],
                alloc::vec![s(0b001), s(0b010), s(0b100), s(0b111)],
            ))
        }
    }
}

/// All `2ⁿ` basis subsets. For [`BasisOrder::Rank3Graded`] the even part
/// comes first.
pub fn basis(n: usize, order: BasisOrder) -> Result<Vec<IndexSet>> {
    match order {
        BasisOrder::Lex => {
            check_rank(n)?;
            Ok(lex_basis(n))
        }
        BasisOrder::Rank3Graded => {
            let (mut even, odd) = graded_basis(n, order)?;
            even.extend(odd);
            Ok(even)
        }
    }
}

fn lex_basis(n: usize) -> Vec<IndexSet> {
    let mut all: Vec<IndexSet> = (0..(1u64 << n)).map(IndexSet).collect();
    all.sort();
    all
}

/// An element of Λ*(Zⁿ) in canonical sparse form: no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExteriorElement {
    rank: usize,
    terms: BTreeMap<IndexSet, BigInt>,
}

impl ExteriorElement {
    pub fn zero(rank: usize) -> Result<Self> {
        check_rank(rank)?;
        Ok(ExteriorElement {
            rank,
            terms: BTreeMap::new(),
        })
    }

    /// The unit `e_∅ = [1]`.
    pub fn one(rank: usize) -> Result<Self> {
        Self::basis_element(rank, IndexSet::EMPTY)
    }

    /// The generator `e_i` (one-based).
    pub fn generator(rank: usize, i: usize) -> Result<Self> {
        Self::basis_element(rank, IndexSet::from_indices(&[i])?)
    }

    pub fn basis_element(rank: usize, set: IndexSet) -> Result<Self> {
        Self::from_terms(rank, [(set, BigInt::one())])
    }

    /// Sums the given terms; coefficients of repeated sets are added and
    /// zero results dropped.
    pub fn from_terms<I, C>(rank: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (IndexSet, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero(rank)?;
        for (set, c) in terms {
            if set.max_index() > rank {
                return Err(Error::IndexOutOfRange(alloc::format!("{set:?} in rank {rank}")));
            }
            out.add_term(set, c.into());
        }
        Ok(out)
    }

    fn add_term(&mut self, set: IndexSet, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(set).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&set);
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `e_J` (zero when absent).
    pub fn coefficient(&self, set: IndexSet) -> BigInt {
        self.terms.get(&set).cloned().unwrap_or_default()
    }

    /// Nonzero terms in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (IndexSet, &BigInt)> + '_ {
        self.terms.iter().map(|(s, c)| (*s, c))
    }

    fn check_same_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_rank(other)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(*s, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return ExteriorElement {
                rank: self.rank,
                terms: BTreeMap::new(),
            };
        }
        ExteriorElement {
            rank: self.rank,
            terms: self.terms.iter().map(|(s, c)| (*s, c * k)).collect(),
        }
    }

    /// Bilinear extension of `e_J ∧ e_K = sign(J, K) · e_{J ∪ K}`.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_same_rank(other)?;
        let mut out = ExteriorElement {
            rank: self.rank,
            terms: BTreeMap::new(),
        };
        for (j, a) in &self.terms {
            for (k, b) in &other.terms {
                match wedge_sign(*j, *k) {
                    0 => {}
                    1 => out.add_term(j.union(*k), a * b),
                    _ => out.add_term(j.union(*k), -(a * b)),
                }
            }
        }
        Ok(out)
    }

    /// Splits into the parts of even and odd degree.
    pub fn grade_split(&self) -> (Self, Self) {
        let (even, odd): (BTreeMap<_, _>, BTreeMap<_, _>) = self
            .terms
            .iter()
            .map(|(s, c)| (*s, c.clone()))
            .partition(|(s, _)| s.is_even());
        (
            ExteriorElement {
                rank: self.rank,
                terms: even,
            },
            ExteriorElement {
                rank: self.rank,
                terms: odd,
            },
        )
    }

    /// Coordinates with respect to `basis`; terms outside it are ignored.
    pub fn coordinates(&self, basis: &[IndexSet]) -> Vec<BigInt> {
        basis.iter().map(|s| self.coefficient(*s)).collect()
    }
}

impl Neg for &ExteriorElement {
    type Output = ExteriorElement;

    fn neg(self) -> ExteriorElement {
        ExteriorElement {
            rank: self.rank,
            terms: self.terms.iter().map(|(s, c)| (*s, -c)).collect(),
        }
    }
}

/// # Panics
/// On rank mismatch; use [`ExteriorElement::checked_add`] otherwise.
impl Add for &ExteriorElement {
    type Output = ExteriorElement;

    fn add(self, rhs: &ExteriorElement) -> ExteriorElement {
        self.checked_add(rhs).expect("exterior elements of different rank")
    }
}

/// # Panics
/// On rank mismatch; use [`ExteriorElement::checked_sub`] otherwise.
impl Sub for &ExteriorElement {
    type Output = ExteriorElement;

    fn sub(self, rhs: &ExteriorElement) -> ExteriorElement {
        self.checked_sub(rhs).expect("exterior elements of different rank")
    }
}

impl fmt::Debug for ExteriorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ(Z^{})[", self.rank)?;
        for (k, (s, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}·e{s:?}")?;
        }
        f.write_str("]")
    }
}
