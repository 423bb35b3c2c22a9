//! DNF approximation of Boolean functions.
//!
//! This crate builds disjunctive-normal-form approximators for Boolean
//! functions over {0,1}^n and measures how well they do against exhaustive
//! (or sampled) evaluation:
//!
//! - [`boolfn`] — truth tables as packed bitsets, input indexing, function
//!   generators, monotone-structure utilities.
//! - [`dnf`] — terms (sub-cubes), DNF formulas, fast evaluation by sub-cube
//!   stamping, and the normalized disagreement metric.
//! - [`universal`] — the two-stage randomized construction that works for
//!   every Boolean function: flip a random subset of the 0-inputs, then
//!   cover with all 1-monochromatic special sub-cubes.
//! - [`parity`] — exact parity DNFs and the block-split parity approximator.
//! - [`majority`] — random monotone DNFs for majority, sampled Talagrand
//!   style, with an exact acceptance-probability oracle.
//! - [`monotone`] — level decomposition of monotone functions into regular
//!   slices, sampled lower approximators per slice, and their composition.
//! - [`oracle`] — independent brute-force verifiers (slow evaluation, exact
//!   error, Monte Carlo error, tiny-n exact minimum DNF) used to cross-check
//!   everything else. Oracle code deliberately shares no evaluation path
//!   with the fast implementations.
//! - [`rng`] — the repo's fixed 64-bit mixing function and the seeded
//!   generator every randomized construction draws from.
//!
//! All randomized operations are pure functions of their seed, so runs are
//! reproducible bit for bit.

pub mod boolfn;
pub mod dnf;
mod error;
pub mod majority;
pub mod monotone;
pub mod oracle;
pub mod parity;
pub mod rng;
pub mod universal;

pub use boolfn::{BitString, TruthTable};
pub use dnf::{ApproxReport, Dnf, ParamRecord, Term};
pub use error::{Error, Result};
