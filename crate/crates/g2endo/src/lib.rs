//! Exact tools for bounding and certifying the geometric endomorphism ring of
//! the Jacobian of a genus-2 curve `y² = f(x)` over ℚ.

pub mod arith;
pub mod covers;
pub mod endotests;
pub mod error;
pub mod finitefield;
pub mod intpoly;
pub mod moduli;
pub mod numfield;
pub mod pipeline;
pub mod qforms;

pub use error::{Error, Result};
