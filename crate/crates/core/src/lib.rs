//! Convexity certification engine for the redundancy-scheduling polynomial
//! family `f_d`.
//!
//! For a fixed degree `d`, the engine proves that `f_d` — the homogeneous
//! degree-`d` polynomial in variables indexed by the edges of the complete
//! graph `K_n`, with coefficients built from cardinalities of edge unions —
//! is convex over the standard simplex *for every* `n` at once. The Hessian
//! of `f_d` decomposes into coefficient matrices indexed by multigraphs with
//! `d−2` edges; for each multigraph, positive semidefiniteness of the whole
//! `n`-indexed matrix family reduces to one scalar condition and two constant
//! matrices whose size and entries are independent of `n`. Those constant
//! objects are certified exactly in rational arithmetic.
//!
//! The crate is organized around that pipeline:
//!
//! * [`combinatorics`] — edges, exponent vectors, permutation actions;
//! * [`multigraphs`] — enumeration up to isomorphism and canonical labeling;
//! * [`coefficients`] — exact rational coefficient recurrence with memoization;
//! * [`hessian`] — Hessian coefficient matrices and brute-force oracles;
//! * [`repset`] — representative vectors and compression (test oracle);
//! * [`reduction`] — the constant blocks `B1`, `B2` and the scalar condition;
//! * [`psdcert`] — exact LDLᵀ certificates and Jacobi eigenvalues;
//! * [`pipeline`] — per-degree orchestration, reports, certificates.

pub mod combinatorics;
pub mod coefficients;
pub mod error;
pub mod hessian;
pub mod multigraphs;
pub mod pipeline;
pub mod psdcert;
pub mod rational;
pub mod reduction;
pub mod repset;

pub use error::Error;
pub use rational::Rational;

/// Convenient result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
