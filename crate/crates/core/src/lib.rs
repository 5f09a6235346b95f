//! Exact and certified arithmetic for absolute heights, Pisot and
//! pseudo-Pisot classification, root-of-unity equivalence classes and
//! desk-scale searches over finitely generated multiplicative groups.

pub mod certify;
pub mod classify;
pub mod error;
pub mod exact;
pub mod gamma;
pub mod harness;
pub mod heights;

pub use error::{Error, Result};
