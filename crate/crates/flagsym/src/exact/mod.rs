//! Exact arithmetic: rationals, weights, matrices, polynomials, Pfaffians.

pub mod half;
pub mod matrix;
pub mod modp;
pub mod pfaffian;
pub mod poly;
pub mod rational;
pub mod sparse;

pub use half::HalfWeight;
pub use matrix::{kernel_basis, RatMatrix};
pub use pfaffian::{pfaffian, skew_kernel, PfaffError, SkewKernel, SubPfaffians};
pub use poly::{Monomial, MultiPoly};
pub use rational::Rational;
