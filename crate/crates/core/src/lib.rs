//! Fitting ideals and their shifts over truncated Iwasawa-type group rings
//! `(ℤ/pᵏ)[T₁…T_d][Δ]` with Δ finite abelian.

pub mod apps;
pub mod arith;
pub mod complexes;
pub mod error;
pub mod fitting;
pub mod groupring;
pub mod ideals;
pub mod linalg;
pub mod shifts;

pub use error::{Error, Result};
