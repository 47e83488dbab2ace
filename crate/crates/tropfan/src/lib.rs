#![no_std]
//! Exact computations with stacky fans and their birational classes.
//!
//! Everything is over `BigInt`; there is no floating point anywhere in this
//! crate. The `std` feature only adds `std::error::Error` impls.

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod arrangement;
pub mod cone;
mod display;
pub mod error;
pub mod fan;
pub mod lattice;
pub mod linalg;
pub mod minimal;
pub mod trop;

pub use cone::{Cone, PointPosition, RatPoint};
pub use error::{Error, Result};
pub use fan::{FanMorphismData, Report, StackyCone, StackyFan, Violation};
pub use lattice::{Index, Sublattice};
pub use linalg::{ivec, IntVector};
pub use minimal::{MinimalFan, SublatticeColoring};
pub use trop::{AVStackyFan, PolarizedBase};
