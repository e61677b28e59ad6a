//! Explicit finite quotients of finitely generated matrix groups over
//! rational function fields: word-ball growth, certified injectivity
//! pipelines with cardinality bounds, and empirical minimal-quotient search.

pub mod cli;
pub mod error;
pub mod galois;
pub mod girth;
pub mod matgroup;
pub mod numbers;
pub mod poly;
pub mod survival;

pub use error::{Error, Result};
