//! Exact computations with cohomology rings of closed manifolds: zero-divisor
//! cup-length bounds for topological complexity, cup-length bounds for
//! Lusternik–Schnirelmann category, explicit nonzero-product witnesses,
//! Poincaré-duality checks and an admissibility classifier for manifolds
//! whose topological complexity could be at most 3.
//!
//! Rings are finite and given by a homogeneous basis plus a multiplication
//! table ([`graded`]). [`kunneth`] builds `H*(M) ⊗ H*(M)` with Koszul signs,
//! [`bounds`] computes nilpotency of the ideal of zero divisors, [`classify`]
//! runs the admissibility decision procedure and [`catalog`] holds reference
//! manifolds with their expected values.

pub mod bounds;
pub mod catalog;
pub mod classify;
pub mod cli;
pub mod graded;
pub mod kunneth;
pub mod scalars;

pub use graded::{Element, GradedError, GradedRing, RingBuilder};
pub use kunneth::SquareRing;
pub use scalars::{CoefficientRing, Scalar};
