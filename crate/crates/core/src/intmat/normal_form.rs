use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{div_floor, IntMatrix};

/// Row-style Hermite normal form `h = u · m`.
///
/// `h` is in row echelon form; each pivot is positive and the entries
/// above it lie in `[0, pivot)`. Zero rows sit at the bottom. `u` is
/// unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub rank: usize,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
}

pub fn hnf(m: &IntMatrix) -> Hnf {
    let (rows, cols) = m.shape();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        while let Some(p) = min_nonzero_in_col(&h, c, r) {
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut reduced = true;
            for i in r + 1..rows {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = -div_floor(h.get(i, c), h.get(r, c));
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                if !h.get(i, c).is_zero() {
                    reduced = false;
                }
            }
            if reduced {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -div_floor(h.get(i, c), h.get(r, c));
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    Hnf { h, u, rank: r, pivots }
}

fn min_nonzero_in_col(m: &IntMatrix, c: usize, from: usize) -> Option<usize> {
    (from..m.rows())
        .filter(|&i| !m.get(i, c).is_zero())
        .min_by(|&a, &b| m.get(a, c).abs().cmp(&m.get(b, c).abs()))
}

/// Smith normal form `s = u · m · v` with `s` diagonal, nonnegative and
/// `s[i][i] | s[i+1][i+1]`. `u` and `v` are unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl Snf {
    /// The invariant factors `d₁ | d₂ | …` (the nonzero diagonal).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }
}

pub fn snf(m: &IntMatrix) -> Snf {
    let (rows, cols) = m.shape();
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_nonzero_in_block(&s, t) else {
            break;
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = -div_floor(s.get(i, t), s.get(t, t));
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= s.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = -div_floor(s.get(t, j), s.get(t, t));
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= s.get(t, j).is_zero();
            }
            if !clean {
                // a smaller remainder is left in row t or column t; make it the pivot
                let best_row = (t + 1..rows)
                    .filter(|&i| !s.get(i, t).is_zero())
                    .min_by(|&a, &b| s.get(a, t).abs().cmp(&s.get(b, t).abs()));
                let best_col = (t + 1..cols)
                    .filter(|&j| !s.get(t, j).is_zero())
                    .min_by(|&a, &b| s.get(t, a).abs().cmp(&s.get(t, b).abs()));
                match (best_row, best_col) {
                    (Some(i), Some(j)) if s.get(t, j).abs() < s.get(i, t).abs() => {
                        s.swap_cols(t, j);
                        v.swap_cols(t, j);
                    }
                    (Some(i), _) => {
                        s.swap_rows(t, i);
                        u.swap_rows(t, i);
                    }
                    (None, Some(j)) => {
                        s.swap_cols(t, j);
                        v.swap_cols(t, j);
                    }
                    (None, None) => unreachable!("unclean pivot without remainders"),
                }
                continue;
            }
            let pivot = s.get(t, t).clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(s.get(i, j) % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    Snf { s, u, v, rank: t }
}

fn min_nonzero_in_block(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            let x = m.get(i, j);
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < m.get(bi, bj).abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}
