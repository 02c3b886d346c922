//! Symbolic sets of integers, h-fold sumsets and product sets, and the
//! intersection sets `H(A_q) = { h : hA = ⋂ hA_q }` of decreasing families.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and the randomized verification suites live in the `intersets`
//! companion crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod arith;
pub mod continuum;
pub mod families;
pub mod groups;
pub mod hset;
pub mod intset;
pub mod lattice;
pub mod plane;
pub mod sumset;
pub mod window;

pub use families::{Family, FamilyError, FamilySpec, ModulusChain, TailCertificate};
pub use hset::{AnalyzerConfig, HReport, HStatus, HVerdict, Witness};
pub use intset::{IntSet, Unit};
pub use sumset::{Mode, RepCount, SumsetResult};
pub use window::{Membership3, Window, WindowError};

/// Arbitrary precision integer used for every set element and parameter.
pub type Int = num_bigint::BigInt;
