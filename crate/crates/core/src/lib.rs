//! Exact and numerical machinery for entire functions `f` whose derivative
//! and a constant-coefficient linear differential polynomial `L(f)` share a
//! function `α` with `f`, in the case where
//!
//! ```text
//! f' = λe^{cz} f + (1 - λe^{cz}) α,      L(f) = a_n λ^n e^{ncz} f + (1 - a_n λ^n e^{ncz}) α.
//! ```
//!
//! The crate is split into an exact half and a floating-point half:
//!
//! * [`stirling`] and [`coefftab`] compute Stirling numbers and the auxiliary
//!   coefficient families over arbitrary-precision integers;
//! * [`symalg`] is a small exponential-polynomial algebra over the parameter
//!   ring `Q[c, c^-1, λ, a_n]` that builds `f^(n) = A_n f + B_n`, the
//!   coefficient constraint `C_1 = 0`, and the order `n-1` linear ODE for `α`;
//! * [`closedform`] and [`numeric`] are generic over a [`Real`] scalar and
//!   evaluate, integrate and verify those objects in the complex plane.
//!
//! Concrete `f64` aliases live at the crate root.

pub mod closedform;
pub mod coefftab;
pub mod error;
pub mod identities;
pub mod numeric;
pub mod scalar;
pub mod stirling;
pub mod symalg;

pub use error::{Error, Result};
pub use scalar::Real;

/// Exact coefficient scalar.
pub type Rat = num_rational::BigRational;
/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;

pub type Params64 = numeric::Params<f64>;
pub type PathSpec64 = numeric::PathSpec<f64>;
pub type ResidualReport64 = numeric::ResidualReport<f64>;
pub type N2Solution64 = closedform::N2Solution<f64>;
pub type PotentialSpec64 = closedform::PotentialSpec<f64>;
