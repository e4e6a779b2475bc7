//! Certifying Kummer-Vandiver type counterexamples over `F_q[T]` through
//! Artin-Schreier base change.

pub mod carlitz;
pub mod error;
pub mod fields;
pub mod lfunc;
pub mod polyring;
pub mod search;
pub mod vandiver;
pub mod witt;

pub use error::{Error, Result};
