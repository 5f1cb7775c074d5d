//! Exact invariants of noncommutative principal torus bundles.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! - [`exterior`]: the graded ring Λ*(Zⁿ) with integer coefficients, the
//!   model of K*(C(Tⁿ)).
//! - [`intmat`]: arbitrary-precision integer matrices, Hermite and Smith
//!   normal forms, unimodular factorization and left GL/SL orbit decisions.
//! - [`monodromy`]: the action of loops in the base on Λ*(Zⁿ) built from
//!   winding data.
//! - [`heisenberg`]: the group H_n, its word normal form, the transgression
//!   cocycle and the automorphisms induced by GL_n(Z).
//! - [`nctorus`]: finitely supported elements of the twisted group algebra
//!   C*(Zⁿ, ω_Θ), clock-and-shift representations at rational parameters,
//!   Rieffel projections and the Hilbert-module inner product.
//! - [`bundles`]: classification descriptors and the decision procedures
//!   (K-bundle triviality, RKK comparison, classical T-duals).
//! - [`winding`]: winding numbers of sampled loops in T^k.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod bundles;
mod error;
pub mod exterior;
pub mod heisenberg;
pub mod intmat;
pub mod monodromy;
pub mod nctorus;
pub mod pairs;
pub mod winding;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_complex::Complex64;
pub use num_rational::Rational64;
