use alloc::format;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{hnf, snf, IntMatrix};
use crate::{Error, Result};

fn same_shape(a: &IntMatrix, b: &IntMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    Ok(())
}

/// A unimodular `G` with `b = G · a`, if one exists.
pub fn gl_orbit_witness(a: &IntMatrix, b: &IntMatrix) -> Result<Option<IntMatrix>> {
    same_shape(a, b)?;
    let ha = hnf(a);
    let hb = hnf(b);
    if ha.h != hb.h {
        return Ok(None);
    }
    // u_a a = u_b b  ⟹  b = u_b⁻¹ u_a a
    let g = hb.u.inverse_unimodular()?.matmul(&ha.u)?;
    debug_assert_eq!(&g * a, *b);
    Ok(Some(g))
}

pub fn gl_orbit_equal(a: &IntMatrix, b: &IntMatrix) -> Result<bool> {
    same_shape(a, b)?;
    Ok(hnf(a).h == hnf(b).h)
}

/// A matrix `S` with `det S = -1` and `S · a = a`.
///
/// Exists exactly when the rows of `a` are linearly dependent. Built as
/// `U⁻¹ D U` where the last rows of the Smith transform `U` span the left
/// kernel of `a` and `D = diag(1, …, 1, -1)`.
pub fn determinant_flip_stabilizer(a: &IntMatrix) -> Result<Option<IntMatrix>> {
    let f = snf(a);
    let k = a.rows();
    if f.rank == k {
        return Ok(None);
    }
    let mut d = IntMatrix::identity(k);
    d.set(k - 1, k - 1, -BigInt::one());
    let s = f.u.inverse_unimodular()?.matmul(&d)?.matmul(&f.u)?;
    debug_assert_eq!(&s * a, *a);
    Ok(Some(s))
}

/// A `G` with `det G = 1` and `b = G · a`, if one exists.
pub fn sl_orbit_witness(a: &IntMatrix, b: &IntMatrix) -> Result<Option<IntMatrix>> {
    let Some(g) = gl_orbit_witness(a, b)? else {
        return Ok(None);
    };
    if g.det()?.is_one() {
        return Ok(Some(g));
    }
    // over Q the transform is unique when the rows of a are independent
    Ok(determinant_flip_stabilizer(a)?.map(|s| &g * &s))
}

pub fn sl_orbit_equal(a: &IntMatrix, b: &IntMatrix) -> Result<bool> {
    Ok(sl_orbit_witness(a, b)?.is_some())
}

/// Recovers `X ∈ GL_n(Z)` with `v = X · w` from a conjugacy witness
/// `T ∈ GL_{n+1}(Z)` satisfying
/// `T · [[1, ᵗv], [0, I]] = [[1, ᵗw], [0, I]] · T`.
///
/// Writing `T = [[a, ᵗx], [y, Y]]`, the identity forces `y = 0` as soon as
/// `v ≠ 0`; then `a = ±1` and `X = a · ᵗY`.
pub fn conjugating_block(v: &[BigInt], w: &[BigInt], t: &IntMatrix) -> Result<IntMatrix> {
    let n = v.len();
    if w.len() != n || t.shape() != (n + 1, n + 1) {
        return Err(Error::ShapeMismatch(format!(
            "vectors of length {} and {}, witness {:?}",
            n,
            w.len(),
            t.shape()
        )));
    }
    if !t.is_unimodular() {
        return Err(Error::MalformedWitness(format!("{t:?} is not in GL_{}(Z)", n + 1)));
    }
    let unipotent = |u: &[BigInt]| {
        let mut m = IntMatrix::identity(n + 1);
        for (j, x) in u.iter().enumerate() {
            m.set(0, j + 1, x.clone());
        }
        m
    };
    if t * &unipotent(v) != &unipotent(w) * t {
        return Err(Error::MalformedWitness(format!("{t:?} does not conjugate v to w")));
    }

    let x = if v.iter().all(Zero::is_zero) {
        IntMatrix::identity(n)
    } else {
        let a = t.get(0, 0).clone();
        let mut x = IntMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                x.set(r, c, &a * t.get(c + 1, r + 1));
            }
        }
        x
    };
    let xw = x.mul_vec(w)?;
    if xw != v || !x.is_unimodular() {
        return Err(Error::MalformedWitness(format!(
            "recovered block {x:?} does not map w to v"
        )));
    }
    Ok(x)
}
