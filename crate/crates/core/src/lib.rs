//! Finite-resource information broadcasting: how well can many observers,
//! each reading a thermal pointer, agree on a system observable and reproduce
//! its statistics?
//!
//! The crate is organised around three layers:
//!
//! * closed-form bounds on agreement and bias for thermal pointers
//!   ([`bounds`], [`partition`]), together with the coarse-graining
//!   construction that restores ideal agreement exponentially fast
//!   ([`coarsegrain`], [`fit`]);
//! * an efficient block-diagonal simulator for the central-spin pure-dephasing
//!   model with optimal two-branch discrimination ([`spinstar`], [`numerics`]);
//! * a dense small-scale reference that builds the optimal broadcast unitary
//!   explicitly and measures everything from the evolved state ([`oracle`]).
//!
//! All probability-vector plumbing lives in [`prob`].

pub mod bounds;
pub mod coarsegrain;
mod comb;
pub mod error;
pub mod fit;
pub mod numerics;
pub mod oracle;
pub mod partition;
pub mod prob;
pub mod repro;
pub mod spinstar;

pub use error::{Error, Result};
pub use prob::{total_variation, AVector, ProbVector};
