//! Exact construction and verification of covariant modules in the
//! coinvariant algebra of finite real reflection groups.

pub mod algebra;
pub mod cache;
pub mod coinvariants;
pub mod covariant;
pub mod differentials;
pub mod error;
pub mod group;
pub mod lie_bridge;
pub mod little_adjoint;
pub mod molien;
pub mod report;
pub mod suite;

pub use error::{Error, Result};
