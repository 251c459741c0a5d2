use std::sync::Arc;

use nalgebra::Matrix3x2;

use super::nodes::NodeSet;
use crate::{Error, Result, Vec3};

/// Degree-p parametric triangle `x(ξ) = Σ N_i(ξ) x_i`.
#[derive(Debug, Clone)]
pub struct ParametricElement {
    pub nodes: Arc<NodeSet>,
    pub positions: Vec<Vec3>,
}

impl ParametricElement {
    pub fn new(nodes: Arc<NodeSet>, positions: Vec<Vec3>) -> Result<Self> {
        if positions.len() != nodes.len() {
            return Err(Error::Argument(format!(
                "element needs {} node positions, got {}",
                nodes.len(),
                positions.len()
            )));
        }
        Ok(ParametricElement { nodes, positions })
    }

    pub fn degree(&self) -> usize {
        self.nodes.degree()
    }

    /// Position and Jacobian `[∂x/∂ξ | ∂x/∂η]` at `xi`.
    pub fn evaluate(&self, xi: [f64; 2]) -> (Vec3, Matrix3x2<f64>) {
        let (n, g) = self.nodes.shape(xi);
        let mut x = Vec3::zeros();
        let mut j = Matrix3x2::zeros();
        for (i, p) in self.positions.iter().enumerate() {
            x += p * n[i];
            for d in 0..3 {
                j[(d, 0)] += g[i][0] * p[d];
                j[(d, 1)] += g[i][1] * p[d];
            }
        }
        (x, j)
    }

    pub fn position(&self, xi: [f64; 2]) -> Vec3 {
        self.evaluate(xi).0
    }
}

/// Position and Jacobian of `elem` at `xi`.
pub fn evaluate_element(elem: &ParametricElement, xi: [f64; 2]) -> (Vec3, Matrix3x2<f64>) {
    elem.evaluate(xi)
}

/// `1/√det(JᵀJ)`; infinite where the Jacobian is rank deficient.
pub fn inverse_area_measure(elem: &ParametricElement, xi: [f64; 2]) -> f64 {
    let (_, j) = elem.evaluate(xi);
    let det = (j.transpose() * j).determinant();
    if det > 0.0 {
        1.0 / det.sqrt()
    } else {
        f64::INFINITY
    }
}

/// Intermediate degree `2^(⌈log₂ p⌉ − 1)` for IFA node placement.
pub fn ifa_intermediate_degree(p: usize) -> usize {
    if p <= 1 {
        return 1;
    }
    let ceil_log2 = usize::BITS - (p - 1).leading_zeros();
    1 << (ceil_log2 - 1)
}

/// Successive intermediate degrees below `p`, down to 1.
pub fn ifa_level_chain(p: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut q = p;
    while q > 1 {
        q = ifa_intermediate_degree(q);
        out.push(q);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intermediate_degrees() {
        let q: Vec<usize> = (2..=9).map(ifa_intermediate_degree).collect();
        assert_eq!(q, vec![1, 2, 2, 4, 4, 4, 4, 8]);
        assert_eq!(ifa_level_chain(6), vec![4, 2, 1]);
        assert_eq!(ifa_level_chain(2), vec![1]);
        assert_eq!(ifa_level_chain(8), vec![4, 2, 1]);
    }

    #[test]
    fn affine_elements() {
        let ns = Arc::new(NodeSet::equispaced(1).unwrap());
        let e = ParametricElement::new(ns, vec![Vec3::zeros(), Vec3::x(), Vec3::y()]).unwrap();
        assert!((inverse_area_measure(&e, [0.3, 0.3]) - 1.0).abs() < 1e-15);
        let ns = Arc::new(NodeSet::equispaced(4).unwrap());
        let pos = (0..ns.len())
            .map(|i| {
                let [x, y] = ns.coords()[i];
                Vec3::new(2.0 * x, 2.0 * y, 0.0)
            })
            .collect();
        let e = ParametricElement::new(ns, pos).unwrap();
        assert!((inverse_area_measure(&e, [0.1, 0.7]) - 0.25).abs() < 1e-12);
    }
}
