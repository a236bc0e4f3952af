//! Numerical laboratory for ground states of the weighted nonlocal equation
//!
//! ```text
//! -(-Δ)^s u + |x|^a |u|^(q-2) u = |x|^b |u|^(p-2) u
//! ```
//!
//! on balls (with the function killed outside) and on truncated whole space.
//! The crate computes radial and unrestricted ground-state levels m(R) and
//! M(R), demonstrates the gap M(R) < m(R) on large balls, and measures
//! empirical constants for the radial decay (Strauss), Hölder, weighted
//! Sobolev, and Gagliardo-Nirenberg inequalities with their explicit
//! exponents.
//!
//! Module map:
//!
//! * [`params`] — parameter tuple, closed-form exponents, admissibility
//!   report, the two-term minimization rule, and an exact-rational mirror.
//! * [`bessel`] / [`quadrature`] — special-function and integration bricks.
//! * [`radial`] — radial profiles, Hankel transform plans, spectral
//!   Gagliardo seminorm, weighted norms, frequency splits, and the Strauss /
//!   Hölder ratio evaluators.
//! * [`grid`] — the killed nonlocal energy on a two-dimensional Cartesian
//!   grid: normalization constant, exterior kernel, pair-sum and
//!   convolution Gagliardo forms, gradients, angular-average projection.
//! * [`solver`] — projected-gradient minimization of the constrained
//!   Rayleigh quotients defining m(R), M(R), m(∞).
//! * [`experiments`] — reproducible experiment harness: R-sweeps, translated
//!   bump decay, cut-off convergence, inequality surveys.
//! * [`config`] / [`io`] — key = value run configuration, CSV and binary
//!   serialization, run manifests.
//!
//! The mdbook under `book/` walks through the same machinery chapter by
//! chapter; its code snippets compile and run as doc-tests.

pub mod bessel;
pub mod config;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod io;
pub mod params;
pub mod quadrature;
pub mod radial;
pub mod solver;

pub use error::{Error, Result};
pub use params::{exponents, optimize_two_term, validate, AdmissibilityReport, ExponentSet, ProblemParams};
