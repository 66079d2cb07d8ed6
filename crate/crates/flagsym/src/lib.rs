//! Symplectic flag symbols, their prolongation algebras and flat models,
//! computed in exact rational arithmetic.

pub mod exact;
pub mod lie;
pub mod symbol;
pub mod subspace;
pub mod tanaka;
pub mod flag;
pub mod prolong;
pub mod abnormal;
