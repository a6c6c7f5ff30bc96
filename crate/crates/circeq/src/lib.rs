//! Exact equivalence deciders for sparse 0/1 circulant matrices.
//!
//! A 0/1 circulant of order `n` is determined by the residue set `S ⊆ Z/nZ`
//! carried on its top row. This crate decides, with exact integer arithmetic
//! throughout, whether two such matrices are related by
//!
//! * an affine map `x ↦ ux + v` on residue sets (`gcd(u, n) = 1`),
//! * row and column permutations (`B = PAQ`),
//! * permutation similarity of the autocorrelations `AAᵀ`,
//! * equality of autocorrelation eigenvalue multisets (computed exactly as
//!   canonical cyclotomic integers, never as floats), or
//! * conjugation (`B = PAP⁻¹`).
//!
//! Positive answers always come with an explicit witness that has been
//! re-verified by exact matrix or residue arithmetic. The `verify` module
//! re-runs, from scratch, a battery of classification claims about these
//! relations; the `cli` module exposes everything as a command-line tool.
//!
//! Numeric kernels are generic over an exact scalar (see [`coeff::Coeff`]).
//! The default instantiation is arbitrary-precision ([`Int`]); bounded
//! enumerations may use the machine-word aliases after the cross-validation
//! tests that justify them.

#![forbid(unsafe_code)]

pub mod arith;
pub mod cli;
pub mod coeff;
pub mod cyclotomic;
pub mod error;
pub mod families;
pub mod linalg;
pub mod matgraph;
pub mod poly;
pub mod report;
pub mod residue;
pub mod search;
pub mod spectra;
pub mod verify;

/// Default arbitrary-precision integer scalar.
pub type Int = num_bigint::BigInt;
/// Default exact rational scalar.
pub type Rat = num_rational::BigRational;
/// Machine-word integer scalar for bounded enumerations.
pub type FastInt = i64;
/// Machine-word rational scalar for bounded linear algebra.
pub type FastRat = num_rational::Rational64;

pub use error::{CircError, Result};
pub use residue::{AffineMap, DifferenceMultiset, ResidueSet};

/// Outcome of an equivalence decision, carrying a witness on the positive side.
///
/// `Inconclusive` is reserved for budgeted searches that ran out of nodes; it
/// is never a verdict. Constructors for the positive case re-check the witness
/// and abort on mismatch, so an `Equivalent` value can be trusted downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Equivalent(W),
    Inequivalent,
    Inconclusive { explored: u64 },
}

impl<W> Verdict<W> {
    /// Wrap a witness after re-verification; panics if the check fails.
    ///
    /// Deciders pass the result of recomputing the claimed identity. A failure
    /// here is a bug in the decider, not a property of the input, hence the
    /// hard abort.
    pub fn equivalent_checked(witness: W, verified: bool) -> Self {
        assert!(verified, "witness failed re-verification; decider is buggy");
        Verdict::Equivalent(witness)
    }

    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent(_))
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::Inconclusive { .. })
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Equivalent(w) => Some(w),
            _ => None,
        }
    }

    /// The decided boolean, or `None` when the budget ran out.
    pub fn decided(&self) -> Option<bool> {
        match self {
            Verdict::Equivalent(_) => Some(true),
            Verdict::Inequivalent => Some(false),
            Verdict::Inconclusive { .. } => None,
        }
    }
}

/// Default node budget for the backtracking isomorphism searches.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Environment variable that overrides [`DEFAULT_NODE_BUDGET`] in the CLI.
pub const BUDGET_ENV_VAR: &str = "CIRCEQ_BUDGET";
