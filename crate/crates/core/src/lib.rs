//! Exact laboratory for word-map statistics on small finite groups.
//!
//! * [`ffpoly`]: finite fields, polynomial factorization, and the linear,
//!   unitary and self-dual characteristic-polynomial families.
//! * [`genfun`]: truncated Euler products and factor-count distributions.
//! * [`words`]: free-group words, parsing and evaluation.
//! * [`grouplab`]: enumerable permutation and matrix groups, classes,
//!   power-map fibers and brute-force word-map distributions.
//! * [`charlab`]: character tables, zeta functions and Frobenius-formula
//!   distributions.

pub mod budget;
pub mod charlab;
pub(crate) mod decimal;
pub mod error;
pub mod ffpoly;
pub mod genfun;
pub mod grouplab;
pub mod numtheory;
pub mod words;

pub use budget::Budget;
pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
