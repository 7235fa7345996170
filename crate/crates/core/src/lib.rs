//! Exact computations with real places of function fields over ordered
//! Hahn-type fields: value groups, balls, cuts, and the places they induce.

pub mod balls;
pub mod cli;
pub mod cuts;
pub mod embed;
pub mod error;
pub mod linalg;
pub mod ordfield;
pub mod places;
pub mod quad;
pub mod ratfun;
pub mod sampling;
pub mod valgroup;

pub use error::{Error, Result};
