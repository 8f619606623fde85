//! Gauss–Kuzmin frequencies of continued-fraction digit strings and their
//! permutation symmetries.
//!
//! The frequency with which a digit string `a = (a1, ..., an)` occurs in the
//! continued fraction expansion of a typical real number is a logarithm of a
//! rational number fixed by the convergent matrix of `a`. This crate computes
//! it exactly, finds permutations of `a` other than the reversal that share
//! it, builds infinite families of such strings, and runs the exhaustive
//! census of exceptional digit sets.

pub mod census;
pub mod cf;
pub mod cli;
pub mod error;
pub mod families;
pub mod fast;
pub mod lab;
pub mod measure;
pub mod symmetry;

pub use cf::{
    convergent_matrix, digits_of_rational, digits_of_real, digits_of_real_exact, evaluate,
    extend_matrix, fundamental_interval, ConvergentMatrix, DigitString, Extension,
    FundamentalInterval,
};
pub use error::{Error, Result};
pub use measure::{
    chi, gk_measure_of_interval, measure_equal, pgk_exact, pgk_float, CharacteristicNumber,
    LogRatio,
};
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
