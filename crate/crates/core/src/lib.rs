//! Exact arithmetic in number fields, fractional ideals and elliptic curves,
//! with executable checks of the lemmas behind the diophantine definition of
//! `O_F` inside `O_K`, and certificates that can be replayed independently.

pub mod arith;
pub mod error;
pub mod matrix;
pub mod poly;
pub mod numfield;
pub mod ideals;
pub mod elliptic;
pub mod lemmas;
pub mod certify;
pub mod config;
pub mod report;

pub use error::{Error, Result};
