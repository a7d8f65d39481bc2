//! Berezin-transform numerics on finite reproducing-kernel models.
//!
//! The crate computes Berezin symbols, Berezin numbers and norms, numerical
//! radii and a family of published upper bounds for block operator matrices,
//! over four kernel models: finite standard, finite general, a truncated
//! Hardy-space model on the unit disk, and direct sums of those. Finite
//! models evaluate all supremum-type quantities exactly (the oracle used by
//! the verification harness); Hardy models use a polar grid followed by
//! golden-section refinement and report certified lower estimates with their
//! witnesses.
//!
//! Modules:
//! - [`linalg`]: dense complex matrices, Jacobi Hermitian eigensolver,
//!   spectral functions, operator norm, numerical radius.
//! - [`block`]: block operator matrices and assembly.
//! - [`rkhs`]: kernel models and the named Hardy-space operators.
//! - [`berezin`]: symbol / number / norm / infimum estimation.
//! - [`bounds`]: one operation per upper bound, plus the published baselines
//!   they are compared against.
//! - [`verify`]: seeded random ensembles, inequality checking against the
//!   exact finite-model oracle, lemma property suites, bound comparison.
//! - [`reproduce`]: the worked-example suite with pinned reference values.
//!
//! Grid sweeps, eigensolver batches and fuzz trials are data-parallel via
//! rayon under the default `parallel` feature; disabling it falls back to
//! sequential loops with bit-identical results.

pub mod berezin;
pub mod block;
pub mod bounds;
pub mod linalg;
pub mod par;
pub mod reproduce;
pub mod rkhs;
pub mod verify;


pub use berezin::{BerezinEstimate, SearchSpec, Witness};
pub use block::BlockMatrix;
pub use bounds::{BoundId, BoundParams, BoundReport, BoundValue, Verdict};

pub use linalg::{CMatrix, HermEig, LinalgError};
pub use rkhs::{HardyKind, RkhsModel, RkhsPoint};
pub use verify::{Ensemble, FuzzSummary, InstanceSpec};

