//! Desk-scale combinatorics of numbers.
//!
//! Exact rational densities of eventually periodic integer sets, thickness
//! and syndeticity structure with verifiable witnesses, finite
//! embeddability, density-embedding certificates, Ramsey-type extraction and
//! searches, a partition-regularity laboratory for diophantine equations,
//! and the canonical-form calculus on coefficient strings.
//!
//! Everything is finite and checkable: operations either return exact
//! values on representations where the answer is decidable, or windowed
//! results paired with witnesses that an independent scan can re-verify.

pub mod density;
pub mod error;
pub mod intsets;
pub mod jin;
pub mod limits;
mod parallel;
pub mod prcalc;
pub mod ramsey;
pub mod rational;
pub mod strcalc;
pub mod structure;

pub use error::{Error, Result};
pub use intsets::{parse_set_spec, IntegerSet, WindowSample};
pub use limits::Limits;
pub use rational::Rational;
