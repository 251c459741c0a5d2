use std::path::Path;

use nalgebra::DMatrix;

use crate::wls::{monomial_count, MonomialBasis2D};
use crate::{Error, Result};

/// Node families on the reference triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeFamily {
    Equispaced,
    /// Loaded from a node table.
    Table,
}

type EdgeRule<'r> = (&'r dyn Fn(&[f64; 2]) -> bool, &'r dyn Fn(&[f64; 2]) -> f64);

const COND_LIMIT: f64 = 1e12;
const TOL: f64 = 1e-10;

// Monomials are taken in coordinates centered at the centroid and scaled to
// unit radius.
const CENTER: f64 = 1.0 / 3.0;
const SCALE: f64 = 1.5;

fn local(xi: [f64; 2]) -> [f64; 2] {
    [(xi[0] - CENTER) * SCALE, (xi[1] - CENTER) * SCALE]
}

/// Nodes of a degree-p triangle in natural coordinates `(ξ, η)` on the
/// reference triangle (0,0)-(1,0)-(0,1), ordered corners, edge 0 (v0→v1),
/// edge 1 (v1→v2), edge 2 (v2→v0), interior. Holds the inverse of the
/// monomial Vandermonde for evaluating the Lagrange basis.
#[derive(Debug, Clone)]
pub struct NodeSet {
    degree: usize,
    family: NodeFamily,
    coords: Vec<[f64; 2]>,
    basis: MonomialBasis2D,
    // coefficients of N_i in column i
    inv_vandermonde: DMatrix<f64>,
    // lattice indices (a, b, c) with a + b + c = p, equispaced only
    lattice: Option<Vec<[usize; 3]>>,
}

impl NodeSet {
    /// Equally spaced nodes `(j/p, k/p)`.
    pub fn equispaced(degree: usize) -> Result<Self> {
        if degree < 1 {
            return Err(Error::NodeSet("degree must be at least 1".into()));
        }
        let p = degree;
        let pf = p as f64;
        let mut c = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        for i in 1..p {
            c.push([i as f64 / pf, 0.0]);
        }
        for i in 1..p {
            c.push([(p - i) as f64 / pf, i as f64 / pf]);
        }
        for i in 1..p {
            c.push([0.0, (p - i) as f64 / pf]);
        }
        for k in 1..p {
            for j in 1..p - k {
                c.push([j as f64 / pf, k as f64 / pf]);
            }
        }
        let mut ns = Self::build(degree, NodeFamily::Equispaced, c)?;
        ns.lattice = Some(
            ns.coords
                .iter()
                .map(|q| {
                    let b = (q[0] * pf).round() as usize;
                    let c = (q[1] * pf).round() as usize;
                    [p - b - c, b, c]
                })
                .collect(),
        );
        Ok(ns)
    }

    /// Nodes from a table: first line `degree n`, then `n` lines `ξ η`. The
    /// set must be symmetric under rotation of the triangle, include the
    /// corners and have `p + 1` nodes on each edge; it is reordered into the
    /// canonical order.
    pub fn from_table(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let head = lines.next().ok_or_else(|| Error::NodeSet("empty node table".into()))?;
        let nums: Vec<usize> = head
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::NodeSet(format!("bad header '{head}'"))))
            .collect::<Result<_>>()?;
        let [p, n] = nums[..] else {
            return Err(Error::NodeSet(format!("bad header '{head}'")));
        };
        if p < 1 || n != monomial_count(p) {
            return Err(Error::NodeSet(format!(
                "degree {p} needs {} nodes, table has {n}",
                monomial_count(p)
            )));
        }
        let mut pts = Vec::with_capacity(n);
        for l in lines {
            let v: Vec<f64> = l
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::NodeSet(format!("bad node line '{l}'"))))
                .collect::<Result<_>>()?;
            if v.len() != 2 {
                return Err(Error::NodeSet(format!("bad node line '{l}'")));
            }
            pts.push([v[0], v[1]]);
        }
        if pts.len() != n {
            return Err(Error::NodeSet(format!("expected {n} nodes, found {}", pts.len())));
        }
        for q in &pts {
            if q[0] < -TOL || q[1] < -TOL || q[0] + q[1] > 1.0 + TOL {
                return Err(Error::NodeSet(format!(
                    "node {q:?} lies outside the reference triangle"
                )));
            }
        }
        let rot = |q: [f64; 2]| [q[1], 1.0 - q[0] - q[1]];
        for q in &pts {
            let r = rot(*q);
            if !pts
                .iter()
                .any(|s| (s[0] - r[0]).abs() < 1e-9 && (s[1] - r[1]).abs() < 1e-9)
            {
                return Err(Error::NodeSet("node table is not rotationally symmetric".into()));
            }
        }
        let mut used = vec![false; n];
        let mut take = |target: &dyn Fn(&[f64; 2]) -> bool, key: &dyn Fn(&[f64; 2]) -> f64| {
            let mut found: Vec<usize> = (0..n).filter(|&i| !used[i] && target(&pts[i])).collect();
            found.sort_by(|&a, &b| key(&pts[a]).total_cmp(&key(&pts[b])));
            for &i in &found {
                used[i] = true;
            }
            found
        };
        let near = |a: f64, b: f64| (a - b).abs() < TOL;
        let mut order = Vec::with_capacity(n);
        for c in [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]] {
            let f = take(&|q| near(q[0], c[0]) && near(q[1], c[1]), &|_| 0.0);
            if f.len() != 1 {
                return Err(Error::NodeSet(format!("corner {c:?} missing from node table")));
            }
            order.extend(f);
        }
        let edges: [EdgeRule; 3] = [
            (&|q| near(q[1], 0.0), &|q| q[0]),
            (&|q| near(q[0] + q[1], 1.0), &|q| q[1]),
            (&|q| near(q[0], 0.0), &|q| -q[1]),
        ];
        for (on, key) in edges {
            let f = take(on, key);
            if f.len() != p - 1 {
                return Err(Error::NodeSet(format!(
                    "edge has {} interior nodes, expected {}",
                    f.len(),
                    p - 1
                )));
            }
            order.extend(f);
        }
        order.extend((0..n).filter(|&i| !used[i]));
        let coords = order.iter().map(|&i| pts[i]).collect();
        Self::build(p, NodeFamily::Table, coords)
    }

    pub fn load_table(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_table(&text)
    }

    fn build(degree: usize, family: NodeFamily, coords: Vec<[f64; 2]>) -> Result<Self> {
        let basis = MonomialBasis2D::new(degree);
        let n = basis.count();
        let v = DMatrix::from_fn(n, n, |i, k| {
            let (j, l) = basis.terms[k];
            let [x, y] = local(coords[i]);
            x.powi(j as i32) * y.powi(l as i32)
        });
        let sv = v.singular_values();
        let cond = sv.max() / sv.min();
        if !(cond <= COND_LIMIT) {
            return Err(Error::NodeSet(format!(
                "node Vandermonde condition number {cond:.3e} exceeds {COND_LIMIT:e}"
            )));
        }
        let inv_vandermonde = v
            .try_inverse()
            .ok_or_else(|| Error::NodeSet("node Vandermonde is singular".into()))?;
        Ok(NodeSet {
            degree,
            family,
            coords,
            basis,
            inv_vandermonde,
            lattice: None,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn family(&self) -> NodeFamily {
        self.family
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[[f64; 2]] {
        &self.coords
    }

    /// Barycentric coordinates of node `i` with respect to (v0, v1, v2).
    pub fn barycentric(&self, i: usize) -> [f64; 3] {
        let [x, y] = self.coords[i];
        [1.0 - x - y, x, y]
    }

    /// Parameters along edge 0 of its interior nodes, increasing.
    pub fn edge_params(&self) -> Vec<f64> {
        (0..self.degree.saturating_sub(1))
            .map(|i| self.coords[3 + i][0])
            .collect()
    }

    /// Index range of the nodes interior to edge `k`.
    pub fn edge_range(&self, k: usize) -> std::ops::Range<usize> {
        let m = self.degree - 1;
        3 + k * m..3 + (k + 1) * m
    }

    pub fn interior_range(&self) -> std::ops::Range<usize> {
        3 + 3 * (self.degree - 1)..self.len()
    }

    /// Shape function values and `(∂/∂ξ, ∂/∂η)` gradients at `xi`.
    pub fn shape(&self, xi: [f64; 2]) -> (Vec<f64>, Vec<[f64; 2]>) {
        if let Some(lat) = &self.lattice {
            return self.shape_product(lat, xi);
        }
        let p = self.degree;
        let [x, y] = local(xi);
        let xp = crate::wls::powers(x, p);
        let yp = crate::wls::powers(y, p);
        let n = self.len();
        let mut m = Vec::with_capacity(n);
        let mut mx = Vec::with_capacity(n);
        let mut my = Vec::with_capacity(n);
        for &(j, k) in &self.basis.terms {
            m.push(xp[j] * yp[k]);
            mx.push(if j == 0 {
                0.0
            } else {
                SCALE * j as f64 * xp[j - 1] * yp[k]
            });
            my.push(if k == 0 {
                0.0
            } else {
                SCALE * k as f64 * xp[j] * yp[k - 1]
            });
        }
        let mut vals = vec![0.0; n];
        let mut grads = vec![[0.0; 2]; n];
        for i in 0..n {
            let col = self.inv_vandermonde.column(i);
            let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
            for r in 0..n {
                a += m[r] * col[r];
                b += mx[r] * col[r];
                c += my[r] * col[r];
            }
            vals[i] = a;
            grads[i] = [b, c];
        }
        (vals, grads)
    }
}

impl NodeSet {
    // N = L_a(pλ0) L_b(pλ1) L_c(pλ2), L_a(t) = Π_{m<a} (t - m) / (m + 1)
    fn shape_product(&self, lat: &[[usize; 3]], xi: [f64; 2]) -> (Vec<f64>, Vec<[f64; 2]>) {
        let p = self.degree;
        let pf = p as f64;
        let lam = [1.0 - xi[0] - xi[1], xi[0], xi[1]];
        let mut val = [vec![1.0; p + 1], vec![1.0; p + 1], vec![1.0; p + 1]];
        let mut der = [vec![0.0; p + 1], vec![0.0; p + 1], vec![0.0; p + 1]];
        for k in 0..3 {
            let t = pf * lam[k];
            for a in 1..=p {
                let f = (t - (a - 1) as f64) / a as f64;
                der[k][a] = der[k][a - 1] * f + val[k][a - 1] / a as f64;
                val[k][a] = val[k][a - 1] * f;
            }
        }
        let mut vals = Vec::with_capacity(lat.len());
        let mut grads = Vec::with_capacity(lat.len());
        for &[a, b, c] in lat {
            let (la, lb, lc) = (val[0][a], val[1][b], val[2][c]);
            let d0 = pf * der[0][a] * lb * lc;
            let d1 = pf * la * der[1][b] * lc;
            let d2 = pf * la * lb * der[2][c];
            vals.push(la * lb * lc);
            grads.push([d1 - d0, d2 - d0]);
        }
        (vals, grads)
    }
}

/// Values and gradients of the Lagrange basis of `nodes` at `xi`.
pub fn lagrange_shape(nodes: &NodeSet, xi: [f64; 2]) -> (Vec<f64>, Vec<[f64; 2]>) {
    nodes.shape(xi)
}

/// 1D Lagrange interpolation weights at `s` for the abscissae `t`.
pub(crate) fn lagrange_1d(t: &[f64], s: f64) -> Vec<f64> {
    (0..t.len())
        .map(|i| {
            let mut w = 1.0;
            for j in 0..t.len() {
                if j != i {
                    w *= (s - t[j]) / (t[i] - t[j]);
                }
            }
            w
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_order() {
        assert_eq!(NodeSet::equispaced(1).unwrap().len(), 3);
        let n2 = NodeSet::equispaced(2).unwrap();
        assert_eq!(
            n2.coords(),
            &[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.5, 0.0], [0.5, 0.5], [0.0, 0.5]]
        );
        assert_eq!(NodeSet::equispaced(4).unwrap().len(), 15);
        let n6 = NodeSet::equispaced(6).unwrap();
        assert_eq!(n6.interior_range().len(), 10);
        assert_eq!(n6.edge_params(), vec![1.0 / 6.0, 2.0 / 6.0, 0.5, 4.0 / 6.0, 5.0 / 6.0]);
    }

    #[test]
    fn table_round_trip() {
        let n3 = NodeSet::equispaced(3).unwrap();
        let mut text = String::from("3 10\n");
        for c in n3.coords().iter().rev() {
            text.push_str(&format!("{} {}\n", c[0], c[1]));
        }
        let t = NodeSet::from_table(&text).unwrap();
        assert_eq!(t.family(), NodeFamily::Table);
        for (a, b) in t.coords().iter().zip(n3.coords()) {
            assert!((a[0] - b[0]).abs() < 1e-15 && (a[1] - b[1]).abs() < 1e-15);
        }
        assert!(NodeSet::from_table("3 9\n0 0\n").is_err());
        assert!(NodeSet::from_table("1 3\n0 0\n1 0\n0 1.5\n").is_err());
        assert!(NodeSet::from_table("1 3\n0 0\n1 0\n0.2 0.2\n").is_err());
    }

    #[test]
    fn lagrange_1d_weights() {
        let w = lagrange_1d(&[0.0, 0.5, 1.0], 0.25);
        assert!((w[0] - 0.375).abs() < 1e-15 && (w[1] - 0.75).abs() < 1e-15 && (w[2] + 0.125).abs() < 1e-15);
    }
}
