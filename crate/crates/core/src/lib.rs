//! Exact dg-module calculus over finite-dimensional algebras: perfect
//! modules, Hochschild classes, Serre duality and the Riemann-Roch pairing.

pub mod algebra;
pub mod blocked;
pub mod catalog;
pub mod complex;
pub mod duality;
pub mod error;
pub mod hochschild;
pub mod linalg;
pub mod io;
pub mod module;
pub mod pairing;
pub mod random;

pub use error::{Error, Result};
