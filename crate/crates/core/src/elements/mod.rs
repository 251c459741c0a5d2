//! Degree-p parametric triangles, feature-aware node placement and
//! high-order mesh assembly.

mod element;
mod highorder;
mod nodes;

pub use element::{
    evaluate_element, ifa_intermediate_degree, ifa_level_chain, inverse_area_measure, ParametricElement,
};
pub use highorder::{
    build_feature_aware_element, build_high_order_mesh, reconstruct_high_order_mesh, ElementConfig, HighOrderMesh,
    NodeProjector, OracleProjector, ReconstructionProjector, Strategy,
};
pub use nodes::{lagrange_shape, NodeFamily, NodeSet};
