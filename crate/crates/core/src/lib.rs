//! Finite (semi-)simplicial sets and the 2-Segal toolkit built on them.
//!
//! Everything is exact: simplicial data are finite tables, algebras carry
//! integer or arbitrary-precision rational coefficients.

pub mod constructions;
pub mod error;
pub mod group;
pub mod groupoids;
pub mod hall;
pub mod operadic;
pub mod par;
pub mod pentagon;
pub mod polygeom;
pub mod segal_check;
pub mod sset_core;

pub use error::{Error, Result};
pub use sset_core::{Bounds, IndexCollection, Kind, TruncatedSimplicialSet};

/// Arbitrary-precision rational used wherever division can occur.
pub type Rational = num_rational::BigRational;
