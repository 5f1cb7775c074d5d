//! Index pairs `(i, j)` with `1 <= i < j <= n`.
//!
//! Every vector or matrix indexed by pairs uses the lexicographic order
//! `(1,2), (1,3), …, (1,n), (2,3), …, (n-1,n)`.

use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// A pair of one-based indices `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairIndex {
    i: usize,
    j: usize,
}

impl PairIndex {
    /// Builds the pair `(i, j)` for rank `n`. Indices are one-based.
    pub fn new(n: usize, i: usize, j: usize) -> Result<Self> {
        if i == 0 || i >= j || j > n {
            return Err(Error::IndexOutOfRange(alloc::format!("pair ({i}, {j}) for rank {n}")));
        }
        Ok(PairIndex { i, j })
    }

    pub fn i(self) -> usize {
        self.i
    }

    pub fn j(self) -> usize {
        self.j
    }

    /// Zero-based position of the pair in lexicographic order.
    pub fn position(self, n: usize) -> usize {
        // pairs with first index < i come first
        let before: usize = (1..self.i).map(|a| n - a).sum();
        before + (self.j - self.i - 1)
    }

    /// Inverse of [`PairIndex::position`].
    pub fn from_position(n: usize, mut pos: usize) -> Result<Self> {
        for i in 1..n {
            let run = n - i;
            if pos < run {
                return Ok(PairIndex { i, j: i + 1 + pos });
            }
            pos -= run;
        }
        Err(Error::IndexOutOfRange(alloc::format!(
            "pair position beyond {} for rank {n}",
            pair_count(n)
        )))
    }
}

impl fmt::Display for PairIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// `n(n-1)/2`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// All pairs of rank `n` in lexicographic order.
pub fn pairs(n: usize) -> Vec<PairIndex> {
    let mut out = Vec::with_capacity(pair_count(n));
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(PairIndex { i, j });
        }
    }
    out
}
