//! Construction and verification of [n, 9, n-9]_q near-MDS codes from plane
//! elliptic curves, lifted into PG(8,q) through a degree-3 Veronese-style
//! embedding whose first coordinate carries the curve's defining cubic.
//!
//! The crate is organized around the pipeline:
//!
//! * [`field`] — exact GF(p^h) arithmetic, p >= 5 prime, h in {1, 2};
//! * [`geom`] — PG(m,q) points and exact linear algebra (rank, RREF, kernels);
//! * [`curves`] — elliptic curves in Weierstrass and Hesse form, rational
//!   points, j-invariants, trisecants, triangle normalization;
//! * [`lift`] — the embedding, the lifted track in the hyperplane X0 = 0, and
//!   the cubic-curve/hyperplane dictionary;
//! * [`verify`] — the (n;9,7)-set conditions and code parameters;
//! * [`complete`] — the completeness engines: the exhaustive good-hyperplane
//!   scan for small q and the special-point elimination for q >= 121;
//! * [`catalog`] — batch commands, reproduction suites and the JSON-lines
//!   result catalog backing the CLI.

pub mod catalog;
pub mod combos;
pub mod complete;
pub mod curves;
pub mod error;
pub mod field;
pub mod geom;
pub mod lift;
pub mod verify;

pub use error::{Error, Result};
