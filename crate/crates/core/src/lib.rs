//! Exact arithmetic for the closed unit disc over a p-adic field, viewed as an
//! adic space: valuations with values in totally ordered abelian groups,
//! classification of points into types 1/2/3/5, rational subsets and
//! specialization, and rational localization of Huber-ring descriptors.
//!
//! Everything is computed over the rational subfield of `ℂ_p` with
//! arbitrary-precision integers; no floating point enters any decision.
//! Truncated power series carry an explicit tail certificate, and every
//! norm either returns an exact value or refuses with `UncertainTail`.
//!
//! Module layout, bottom up:
//!
//! * [`scalar`] — primes, extended integers, p-adic valuation and residues of
//!   rationals.
//! * [`ordgroup`] — the value groups `p^ℚ`, `p^ℚ·r^ℤ` and `p^ℚ × (1/2)^ℤ`
//!   (lexicographic), with exact comparison, cofinality and convex subgroups.
//! * [`ffield`] — arithmetic in `𝔽_{p^k}`, polynomials over it, and
//!   order-of-vanishing valuations on `𝔽_{p^k}(t)`.
//! * [`tate`] — truncated Tate series, Gauss-type norms, recentering,
//!   max-term reductions, Newton polygons.
//! * [`points`] — the catalog of finitely presented disc points, evaluation
//!   `f ↦ |f(x)|`, and classification.
//! * [`topology`] — rational subsets, membership, open ideals, closures and
//!   specialization.
//! * [`huber`] — ring descriptors with pairs of definition, boundedness
//!   predicates, rational localization, the continuity criterion, and the
//!   integral-elements witness.

pub mod error;
pub mod ffield;
pub mod huber;
pub mod ordgroup;
pub mod points;
pub mod scalar;
pub mod tate;
pub mod topology;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
