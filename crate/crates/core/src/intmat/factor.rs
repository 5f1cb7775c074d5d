use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;
use crate::{Error, Result};

/// A generator of GL_n(Z) used in factorizations. Indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `E_{row,col}(factor) = I + factor · e_{row,col}`, `row != col`.
    Elementary { row: usize, col: usize, factor: BigInt },
    /// `Ψ_σ = (δ_{i,σ(j)})`, i.e. column `j` is the unit vector `e_{σ(j)}`.
    Permutation(Vec<usize>),
}

impl Generator {
    pub fn elementary(row: usize, col: usize, factor: impl Into<BigInt>) -> Self {
        Generator::Elementary {
            row,
            col,
            factor: factor.into(),
        }
    }

    /// The transposition of `a` and `b` in rank `n`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut sigma: Vec<usize> = (0..n).collect();
        sigma.swap(a, b);
        Generator::Permutation(sigma)
    }

    pub fn matrix(&self, n: usize) -> Result<IntMatrix> {
        let mut m = IntMatrix::identity(n);
        match self {
            Generator::Elementary { row, col, factor } => {
                if *row == *col || *row >= n || *col >= n {
                    return Err(Error::IndexOutOfRange(alloc::format!(
                        "elementary ({row}, {col}) in rank {n}"
                    )));
                }
                m.set(*row, *col, factor.clone());
            }
            Generator::Permutation(sigma) => {
                check_permutation(sigma, n)?;
                m = IntMatrix::zeros(n, n);
                for (j, &s) in sigma.iter().enumerate() {
                    m.set(s, j, BigInt::one());
                }
            }
        }
        Ok(m)
    }

    pub fn inverse(&self) -> Generator {
        match self {
            Generator::Elementary { row, col, factor } => Generator::Elementary {
                row: *row,
                col: *col,
                factor: -factor,
            },
            Generator::Permutation(sigma) => {
                let mut inv = alloc::vec![0; sigma.len()];
                for (j, &s) in sigma.iter().enumerate() {
                    inv[s] = j;
                }
                Generator::Permutation(inv)
            }
        }
    }

    /// Left multiplication `m ← g · m`.
    fn apply_left(&self, m: &mut IntMatrix) {
        match self {
            Generator::Elementary { row, col, factor } => m.add_row_multiple(*row, *col, factor),
            Generator::Permutation(sigma) => {
                let old = m.clone();
                for (j, &s) in sigma.iter().enumerate() {
                    for c in 0..m.cols() {
                        m.set(s, c, old.get(j, c).clone());
                    }
                }
            }
        }
    }
}

pub(crate) fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    let mut seen = alloc::vec![false; n];
    if sigma.len() != n {
        return Err(Error::Invalid(alloc::format!(
            "permutation of length {} in rank {n}",
            sigma.len()
        )));
    }
    for &s in sigma {
        if s >= n || seen[s] {
            return Err(Error::Invalid(alloc::format!("{sigma:?} is not a permutation")));
        }
        seen[s] = true;
    }
    Ok(())
}

/// An ordered list of generators whose product is the factored matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodularFactorization {
    n: usize,
    factors: Vec<Generator>,
}

impl UnimodularFactorization {
    pub fn new(n: usize, factors: Vec<Generator>) -> Result<Self> {
        for g in &factors {
            g.matrix(n)?;
        }
        Ok(UnimodularFactorization { n, factors })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[Generator] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Multiplies the factors in order.
    pub fn product(&self) -> IntMatrix {
        let mut acc = IntMatrix::identity(self.n);
        for g in self.factors.iter().rev() {
            g.apply_left(&mut acc);
        }
        acc
    }

    /// Factorization of the inverse: reversed order, inverted generators.
    pub fn inverse(&self) -> Self {
        UnimodularFactorization {
            n: self.n,
            factors: self.factors.iter().rev().map(Generator::inverse).collect(),
        }
    }
}

/// Writes a unimodular matrix as a product of elementary and permutation
/// matrices.
///
/// Row reduction to the identity uses elementary operations only, after a
/// single transposition when `det = -1`; the recorded operations are then
/// inverted. In rank one only `[1]` is a product of these generators.
pub fn factor_unimodular(psi: &IntMatrix) -> Result<UnimodularFactorization> {
    if !psi.is_square() {
        return Err(Error::NotUnimodular);
    }
    let n = psi.rows();
    let det = psi.det()?;
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular);
    }
    if n == 1 {
        return if det.is_one() {
            Ok(UnimodularFactorization { n, factors: Vec::new() })
        } else {
            Err(Error::NotFactorable)
        };
    }

    let mut a = psi.clone();
    let mut ops: Vec<Generator> = Vec::new();
    let mut apply = |g: Generator, a: &mut IntMatrix| {
        g.apply_left(a);
        ops.push(g);
    };

    if det.is_negative() {
        apply(Generator::transposition(n, 0, 1), &mut a);
    }

    for c in 0..n {
        loop {
            let p = (c..n)
                .filter(|&i| !a.get(i, c).is_zero())
                .min_by(|&x, &y| a.get(x, c).abs().cmp(&a.get(y, c).abs()))
                .expect("unimodular matrix has a nonzero pivot candidate");
            if p != c {
                let g = if a.get(c, c).is_zero() {
                    Generator::elementary(c, p, 1)
                } else {
                    let q = a.get(c, c) / a.get(p, c);
                    Generator::elementary(c, p, -q)
                };
                apply(g, &mut a);
                continue;
            }
            let mut done = true;
            for i in c + 1..n {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let q = a.get(i, c) / a.get(c, c);
                apply(Generator::elementary(i, c, -q), &mut a);
                done &= a.get(i, c).is_zero();
            }
            if done {
                break;
            }
        }
    }

    // upper triangular with ±1 on the diagonal
    for c in (0..n).rev() {
        for i in 0..c {
            if a.get(i, c).is_zero() {
                continue;
            }
            let q = a.get(i, c) * a.get(c, c);
            apply(Generator::elementary(i, c, -q), &mut a);
        }
    }

    // det is now +1, so the -1 entries come in pairs; -I₂ = R² with
    // R = E_ij(1) E_ji(-1) E_ij(1)
    let negatives: Vec<usize> = (0..n).filter(|&i| a.get(i, i).is_negative()).collect();
    for pair in negatives.chunks(2) {
        let (i, j) = (pair[0], pair[1]);
        for (r, c, f) in [(i, j, 1), (j, i, -1), (i, j, 2), (j, i, -1), (i, j, 1)] {
            apply(Generator::elementary(r, c, f), &mut a);
        }
    }
    debug_assert!(a.is_identity());

    // L_s ⋯ L_1 ψ = I, so ψ = L_1⁻¹ ⋯ L_s⁻¹
    let factors = ops.iter().map(Generator::inverse).collect();
    Ok(UnimodularFactorization { n, factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn elementary_is_its_own_factorization() {
        let e = IntMatrix::from_i64(2, 2, &[1, 3, 0, 1]);
        let f = factor_unimodular(&e).unwrap();
        assert_eq!(f.factors(), &[Generator::elementary(0, 1, 3)]);
    }

    #[test]
    fn swap_is_a_single_permutation() {
        let s = IntMatrix::from_i64(2, 2, &[0, 1, 1, 0]);
        let f = factor_unimodular(&s).unwrap();
        assert_eq!(f.factors(), &[Generator::Permutation(vec![1, 0])]);
    }

    #[test]
    fn reconstructs_small_examples() {
        for data in [
            vec![2, 1, 1, 1],
            vec![-1, 0, 0, 1],
            vec![-1, 0, 0, -1],
            vec![0, -1, 1, 0],
            vec![5, 8, 3, 5],
        ] {
            let m = IntMatrix::from_i64(2, 2, &data);
            let f = factor_unimodular(&m).unwrap();
            assert_eq!(f.product(), m);
            assert_eq!(f.inverse().product(), m.inverse_unimodular().unwrap());
        }
    }

    #[test]
    fn rejects_non_unimodular() {
        assert_eq!(
            factor_unimodular(&IntMatrix::diagonal(&[2, 1])),
            Err(Error::NotUnimodular)
        );
        assert_eq!(factor_unimodular(&IntMatrix::zeros(2, 3)), Err(Error::NotUnimodular));
        assert_eq!(
            factor_unimodular(&IntMatrix::diagonal(&[-1])),
            Err(Error::NotFactorable)
        );
        assert!(factor_unimodular(&IntMatrix::identity(1)).unwrap().is_empty());
    }

    #[test]
    fn random_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let n = rng.gen_range(2..=5);
            let mut m = IntMatrix::identity(n);
            for _ in 0..rng.gen_range(0..12) {
                let g = if rng.gen_bool(0.8) {
                    let r = rng.gen_range(0..n);
                    let c = (r + rng.gen_range(1..n)) % n;
                    Generator::elementary(r, c, rng.gen_range(-4..=4))
                } else {
                    Generator::transposition(n, rng.gen_range(0..n), rng.gen_range(0..n))
                };
                m = &g.matrix(n).unwrap() * &m;
            }
            let f = factor_unimodular(&m).unwrap();
            assert_eq!(f.product(), m);
            let bits = m.max_abs().bits().max(1) as usize;
            assert!(
                f.len() <= 4 * n * n * (bits + 2) + 5 * n,
                "{} factors for {m:?}",
                f.len()
            );
        }
    }

    #[test]
    fn permutation_matrix_convention() {
        // column j is e_{σ(j)}
        let g = Generator::Permutation(vec![2, 0, 1]);
        let m = g.matrix(3).unwrap();
        assert_eq!(m, IntMatrix::from_i64(3, 3, &[0, 1, 0, 0, 0, 1, 1, 0, 0]));
        assert_eq!(&g.inverse().matrix(3).unwrap() * &m, IntMatrix::identity(3));
    }
}
