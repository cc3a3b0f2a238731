//! Exact arithmetic for heights of rational points on projective space,
//! semigroup orbits of endomorphisms, and multiplicative dependence
//! relations `Q1^r = u * Q2^s` modulo a finitely generated group.
//!
//! Everything number-theoretic is computed over the rationals with
//! arbitrary-precision integers; floating point appears only as a final
//! projection of exact data (heights in nats). The crate is organized as:
//!
//! * [`arith`] — factorization, places of **Q**, normalized absolute values;
//! * [`projective`] — canonical points of projective N-space and the
//!   coordinatewise multiplicative structure;
//! * [`poly`] — sparse homogeneous forms with exact evaluation;
//! * [`heights`] — global and local heights with respect to hypersurface
//!   divisors, carried as exact prime-exponent data;
//! * [`dynamics`] — endomorphisms, semigroup words, orbit enumeration and
//!   canonical-height estimation;
//! * [`multdep`] — Smith normal form, integer kernels and the multiplicative
//!   dependence solver;
//! * [`experiments`] — scenario-driven scans with deterministic JSON/CSV
//!   reports.

pub mod arith;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod heights;
pub mod multdep;
pub mod poly;
pub mod projective;

pub use error::{Error, Result};
