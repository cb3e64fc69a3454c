//! Exact enumeration of series-parallel matroids by cardinality and rank.

pub mod cli;
pub mod combinum;
pub mod error;
pub mod oracle;
pub mod poly;
pub mod powerseries;
pub mod spcounts;
pub mod verify;

pub use error::{Error, Result};
