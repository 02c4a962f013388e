//! Exact enumeration of permutations restricted by length-3 patterns.
//!
//! `S_n(R;T)` is the set of permutations of `1..=n` that avoid every pattern
//! in `R` and contain each pattern of the multiset `T` exactly as many times
//! as it is listed. This crate provides
//!
//! * occurrence counting and the avoidance / exact-containment predicates ([`perm`]),
//! * the reversal / complement / inverse symmetry group ([`symmetry`]),
//! * a brute-force oracle over `S_n` ([`enumerate`]),
//! * a ledger of closed forms for every two-pattern restriction ([`formulas`]),
//! * direct constructions of five families ([`generators`]),
//! * empirical almost-Wilf classification ([`classify`]).
//!
//! ```
//! use permpat::{formulas, Oracle, RestrictionSpec};
//!
//! let spec: RestrictionSpec = "(∅;{132,213})".parse().unwrap();
//! let brute = Oracle::default().count(7, &spec).unwrap();
//! let entry = formulas::lookup(&spec).unwrap();
//! assert_eq!(entry.eval(7).unwrap(), Some(brute));
//! ```

pub mod classify;
pub mod enumerate;
pub mod error;
pub mod formulas;
pub mod generators;
pub mod perm;
pub mod spec;
pub mod symmetry;

pub use enumerate::{Method, Oracle, SequenceRecord};
pub use error::{Error, Result};
pub use perm::{Pattern, Permutation};
pub use spec::RestrictionSpec;
pub use symmetry::SymmetryOp;
