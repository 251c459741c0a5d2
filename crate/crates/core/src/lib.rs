//! High-order reconstruction of piecewise smooth surfaces and feature curves
//! from linear triangulations.
//!
//! The crate is organised bottom-up:
//!
//! * [`mesh`]: triangle meshes with half-edge connectivity, k-ring stencils,
//!   feature graphs, uniform refinement and OBJ I/O.
//! * [`geometry`]: analytic test geometries with closest-point oracles and
//!   mesh generators.
//! * [`wls`]: weighted least squares core (Wendland weights, generalized
//!   Vandermonde assembly, truncated QR with column pivoting).
//! * [`surface`]: local frames, vertex fittings and the CMF / WALF /
//!   H-CMF / H-WALF projections.
//! * [`curve`]: the same machinery for feature and boundary polylines.
//! * [`elements`]: degree-p parametric triangles and iterative feature-aware
//!   node placement.
//! * [`harness`]: error norms, convergence studies and reporting.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod curve;
pub mod elements;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod mesh;
pub mod surface;
pub mod wls;

pub use error::{Error, Result};

/// Points and directions in 3D.
pub type Vec3 = nalgebra::Vector3<f64>;
