//! Abnormal extremals of flat models and the round trip between flag
//! symbols and curves of flags.

pub mod curve;
pub mod goh;

pub use curve::{
    extended_flag_at_zero, extract_flag_symbol, extract_from_flag_curve, flat_curve, random_symplectic, ExtractError,
    FlagCurve, JacobiCurve,
};

pub use goh::{
    characteristic_direction, degeneracy_locus, goh_matrix, locus_checks, AbnormalError, DegeneracyLocus, Direction,
    GohMatrix, LocusCheck,
};
