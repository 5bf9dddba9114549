//! Completeness of a lifted track: is any point of Sigma addable?
//!
//! Two engines share this module: [`smallq`] runs the exhaustive
//! good-hyperplane scan over all of PG(8,q) (q <= 13 by default), and
//! [`largeq`] eliminates the finitely many special-point candidate classes
//! for q >= 121 with killer cubics.

pub mod largeq;
pub mod smallq;

use serde::{Deserialize, Serialize};

/// Outcome of a completeness decision. `Unknown` can only come from the
/// large-q engine: its elimination criterion is sufficient, not necessary,
/// so a surviving class never certifies incompleteness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Complete,
    Extendable,
    Unknown,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Complete => "complete",
            Verdict::Extendable => "extendable",
            Verdict::Unknown => "unknown",
        }
    }
}
