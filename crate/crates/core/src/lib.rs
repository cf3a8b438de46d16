//! Sieve-driven prime-pair constructions with exact counting identities and
//! explicit analytic bounds.
//!
//! The crate is organised around an immutable [`sieve::PrimeTable`]:
//!
//! * [`sieve`]: segmented prime generation, π(x)/p_n queries, and exact
//!   interval coprimality counts by residue marking.
//! * [`interval`]: the shifted-window divisibility discrepancy, its
//!   `5|J|²/8` bound, and the h-sum identity for non-coprime counts.
//! * [`fold`]: residue-class selections for folded pair conditions
//!   `m(m-r)`, CRT shift-interval search, and twin/Goldbach pair counts.
//! * [`identities`]: full-period brute-force evaluation of the totient
//!   product identities, with closed forms kept as exact rationals.
//! * [`bounds`]: Dusart's explicit π upper bound and the derived q/v/j
//!   sequences, Chebyshev θ, Mertens products and the Nicolas ratio.
//!
//! Every counting routine here is exact; every claimed identity is evaluated
//! on both sides, and a disagreement is reported rather than papered over.

// `m % p == 0` is divisibility notation throughout, and the negated float
// comparisons are domain guards that must also reject NaN.
#![allow(clippy::manual_is_multiple_of, clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod fold;
pub mod identities;
pub mod interval;
pub mod sieve;

pub use error::{Error, Result};
pub use sieve::{IntervalSpec, PrimeTable};
