//! NaN inputs are rejected with negated comparisons (`!(x > 0.0)`) throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod cli;
pub mod error;
pub mod kernels;
pub mod limits;
pub mod numerics;
pub mod oracle;
pub mod traversal;
pub mod units;
pub mod wavepacket;

pub use error::{Error, Result};
pub use units::Units;
