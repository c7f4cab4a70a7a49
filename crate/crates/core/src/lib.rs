//! Exact computational algebra for groups with periodic cohomology and the
//! quaternionic orders that control cancellation of their projective modules.
//!
//! The crate is organised around a handful of interlocking calculators:
//!
//! - [`periodic_groups`] — structural parameters for the classical families
//!   of groups with periodic cohomology, their type classification, binary
//!   polyhedral quotient detection and the quaternionic multiplicity m_H.
//! - [`cyclotomic`], [`characters`], [`fields`] — an exact arithmetic
//!   substrate: cyclotomic polynomials, elements of Q(zeta_e), Dirichlet
//!   characters, generalized Bernoulli numbers and discriminants of the real
//!   cyclotomic fields Q(zeta_m)^+.
//! - [`mass_formula`] — the Eichler mass formula over totally real fields,
//!   the Eichler constant ei_K, cancellation obstruction tests and certified
//!   class-set lower bounds.
//! - [`orders`] — the quotient orders Lambda_{n1,...,nk} of Z[Q_4n], the
//!   prime-power-ratio graph, and the complete stably-free-cancellation
//!   classifier.
//! - [`finite_ring`] — brute-force unit groups and double cosets in finite
//!   quotient rings F_p[x]/(f) and 2x2 matrix rings over them, driving the
//!   Milnor-square fibre computations for Q_28, Lambda_{2,18} and
//!   Lambda_{10,30}.
//! - [`swan`] — Swan-module arithmetic, graded fork classes with group
//!   actions, and the cancellation/counting predicates.
//!
//! Everything is exact: rationals are arbitrary precision, transcendental
//! quantities (powers of pi, square roots) are handled as outward-rounded
//! rational intervals, and every enumeration is deterministic.
//!
//! The `parallel` feature (on by default) routes the large sweeps through
//! rayon; with `--no-default-features` the same entry points run
//! sequentially. Each sweep also has an always-sequential `*_seq` twin so
//! the two schedules can be compared directly (see `benches/sweeps.rs`).

pub mod arith;
pub mod characters;
pub mod cyclotomic;
pub mod error;
pub mod fields;
pub mod finite_ring;
pub mod fixtures;
pub mod mass_formula;
pub mod orders;
pub mod periodic_groups;
pub mod poly;
pub mod rational;
pub mod swan;
pub mod verify;

pub(crate) mod exec;

pub use error::{Error, Result};
