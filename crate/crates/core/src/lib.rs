//! Global linear complexity analysis for nonlinear filter generators.
//!
//! A filter generator applies a Boolean function with a unique term of
//! maximum order `k` to the stages of a maximal-length LFSR of length `L`.
//! This crate computes a lower bound on the global linear complexity of the
//! resulting keystream using only bitwise logic on `L`-bit strings, and
//! provides the tools needed to check that bound independently:
//!
//! * [`bits`]: `L`-bit strings standing for cyclotomic cosets modulo
//!   `2^L - 1`, canonical forms and the fixed-distance cosets.
//! * [`lb`]: the lower-bound algorithm (masks, quasi fixed-distance
//!   candidate sets, elimination passes and the degeneration sweep).
//! * [`gf2m`]: arithmetic in `GF(2^L)`, primitivity testing and the root
//!   presence determinant for a single coset.
//! * [`keystream`]: LFSR generation, filtering and Berlekamp-Massey.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bits;
mod error;
pub mod gf2m;
pub mod keystream;
pub mod lb;
pub mod num;

pub use bits::{BitString, CosetClass, FdcEntry, FdcTable};
pub use error::{Error, Result};
pub use gf2m::{FieldElement, Gf2m, PhaseSet, PolyMod};
pub use keystream::{BmResult, FilterSpec, LfsrSpec};
pub use lb::{BoundReport, Mode, Order, SetRecord, SweepOutcome};

/// Largest register length supported by the single-word bit strings.
pub const MAX_LEN: u32 = 64;
