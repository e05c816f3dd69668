//! Polyhedral outer approximation of spectrahedra.
//!
//! A spectrahedron is the solution set of a linear matrix inequality
//! `A0 + x1*A1 + ... + xn*An ⪰ 0`. This crate computes polyhedra `P ⊇ C`
//! whose vertices lie within `eps` of `C` and whose recession cone lies
//! within `delta` of the recession cone of `C` in the truncated Hausdorff
//! distance. Compact spectrahedra are handled by a cutting scheme that
//! refines a simplex with supporting halfspaces until every vertex is
//! certified to be close to `C`.
//!
//! Module map:
//! - [`linalg`]: dense symmetric matrices, eigenpairs, SPD solves.
//! - [`spectra`]: the [`Spectrahedron`] model (membership, recession cone, slices).
//! - [`sdp`]: the two subproblem solvers (linear maximisation, boundary hit with dual).
//! - [`polyc`]: polyhedral calculus (double description, facets, Minkowski sums).
//! - [`projection`]: Euclidean projection onto `conv V + cone D`.
//! - [`metrics`]: distances, Hausdorff and truncated Hausdorff, diagnostics.
//! - [`approx`]: the cutting scheme and the `(eps, delta)` driver.
//! - [`io`]: JSON problem and result files.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod error;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod polyc;
pub mod projection;
pub mod sampling;
pub mod sdp;
pub mod spectra;

pub use approx::{
    cone_approximation, cutting_scheme, eda_approximation, ApproxCertificate, ApproxParams,
    ConeApproximation, CuttingOptions, CuttingResult, EdaResult, RunStats,
};
pub use error::{Error, Result};
pub use linalg::SymMatrix;
pub use polyc::{HRep, Polyhedron, VRep};
pub use sdp::SupportCut;
pub use spectra::{SliceChart, Spectrahedron};

/// Tolerance for incidence decisions in polyhedral computations.
pub const TAU_GEO: f64 = 1e-7;

/// Upper end of the eigenvalue window that counts as "on the boundary".
pub const TAU_BOUNDARY: f64 = 1e-6;
