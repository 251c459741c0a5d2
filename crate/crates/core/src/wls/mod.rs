//! Weighted least squares: weights, generalized Vandermonde assembly with
//! geometric scaling, and truncated QR with column pivoting.

mod assemble;
mod basis;
mod qrcp;
mod weights;

pub use assemble::{assemble_curve_system, assemble_system, RowKind, WlsSystem};
pub(crate) use basis::powers;
pub use basis::{monomial_count, MonomialBasis2D};
pub use qrcp::{solve_truncated_qrcp, FitResult};
pub use weights::{
    inverse_distance_weight, rho_constant, rho_neighbor_index, safeguard_theta, stencil_radius_rho, wendland_weight,
    WeightScheme,
};

/// Default condition-number limit for truncation.
pub const DEFAULT_COND_LIMIT: f64 = 1e8;
