use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::element::{ifa_level_chain, ParametricElement};
use super::nodes::{lagrange_1d, NodeSet};
use crate::curve::{CurveReconstructor, TangentSource};
use crate::geometry::AnalyticSurface;
use crate::mesh::{TriMesh, NONE};
use crate::surface::{MethodConfig, NormalsSource, Reconstructor};
use crate::{Error, Result, Vec3};

/// Placement of the nodes of elements with a feature or boundary edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Project points of the linear triangle.
    NonFap,
    /// Project points of a quadratic element with curved feature edges.
    Fap,
    /// Recursive intermediate elements of halving degree.
    Ifap,
}

impl Strategy {
    /// Default for degree `p`: IFAP from degree 4 on, FAP below.
    pub fn default_for(p: usize) -> Self {
        if p >= 4 {
            Strategy::Ifap
        } else {
            Strategy::Fap
        }
    }

    /// Increasing intermediate degrees strictly between 1 and `p`.
    pub fn intermediate_degrees(self, p: usize) -> Vec<usize> {
        match self {
            Strategy::NonFap => Vec::new(),
            Strategy::Fap => {
                if p > 2 {
                    vec![2]
                } else {
                    Vec::new()
                }
            }
            Strategy::Ifap => {
                let mut c: Vec<usize> = ifa_level_chain(p).into_iter().filter(|&q| q > 1).collect();
                c.reverse();
                c
            }
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "nonfap" => Ok(Strategy::NonFap),
            "fap" => Ok(Strategy::Fap),
            "ifap" => Ok(Strategy::Ifap),
            _ => Err(Error::Argument(format!("unknown strategy '{s}'"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::NonFap => "nonfap",
            Strategy::Fap => "fap",
            Strategy::Ifap => "ifap",
        })
    }
}

/// Maps intermediate points onto the target surface and feature curves.
pub trait NodeProjector: Sync {
    /// Projects `x`, hosted by face `face` at barycentric `bary`.
    fn project_surface(&self, face: usize, bary: [f64; 3], x: Vec3) -> Result<Vec3>;
    /// Point of the feature curve over the wall edge `(a, b)` at parameter
    /// `s` from `a`; `x` is the corresponding chord point.
    fn project_feature(&self, a: usize, b: usize, s: f64, x: Vec3) -> Result<Vec3>;
}

/// Projection by surface and curve reconstructions.
pub struct ReconstructionProjector<'r, 'm> {
    pub surface: &'r Reconstructor<'m>,
    pub curves: Option<&'r CurveReconstructor>,
}

impl NodeProjector for ReconstructionProjector<'_, '_> {
    fn project_surface(&self, face: usize, bary: [f64; 3], x: Vec3) -> Result<Vec3> {
        self.surface.project_at(face, bary, x)
    }

    fn project_feature(&self, a: usize, b: usize, s: f64, _x: Vec3) -> Result<Vec3> {
        self.curves
            .ok_or_else(|| Error::Config(format!("no curve reconstruction for wall edge ({a}, {b})")))?
            .project_edge(a, b, s)
    }
}

/// Closest-point projection onto an analytic surface.
pub struct OracleProjector<'a> {
    pub mesh: &'a TriMesh,
    pub surface: &'a AnalyticSurface,
}

impl NodeProjector for OracleProjector<'_> {
    fn project_surface(&self, face: usize, _bary: [f64; 3], x: Vec3) -> Result<Vec3> {
        let part = self.surface.part_of(self.mesh.face_centroid(face));
        Ok(self.surface.closest_point_on_part(x, part)?.point)
    }

    fn project_feature(&self, _a: usize, _b: usize, _s: f64, x: Vec3) -> Result<Vec3> {
        self.surface.project_to_feature(x)
    }
}

/// Degree-p G⁰ surface made of parametric triangles over a base mesh. Edge
/// nodes are stored once per edge from the lower to the higher vertex id.
#[derive(Debug, Clone)]
pub struct HighOrderMesh {
    degree: usize,
    nodes: Arc<NodeSet>,
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    face_edges: Vec<[usize; 3]>,
    edges: Vec<[usize; 2]>,
    edge_nodes: Vec<Vec<Vec3>>,
    face_nodes: Vec<Vec<Vec3>>,
    feature_edges: Vec<(usize, usize)>,
    feature_faces: Vec<bool>,
}

/// Options for [`build_high_order_mesh`].
#[derive(Debug, Clone)]
pub struct ElementConfig {
    pub degree: usize,
    pub strategy: Strategy,
    /// Node set of the final degree; equispaced when `None`.
    pub nodes: Option<Arc<NodeSet>>,
}

impl ElementConfig {
    pub fn new(degree: usize, strategy: Strategy) -> Self {
        ElementConfig {
            degree,
            strategy,
            nodes: None,
        }
    }
}

/// Closest point of triangle `abc` to `x`, as barycentric coordinates.
fn closest_on_triangle(a: Vec3, b: Vec3, c: Vec3, x: Vec3) -> [f64; 3] {
    let ab = b - a;
    let ac = c - a;
    let ap = x - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return [1.0, 0.0, 0.0];
    }
    let bp = x - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return [0.0, 1.0, 0.0];
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return [1.0 - v, v, 0.0];
    }
    let cp = x - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return [0.0, 0.0, 1.0];
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return [1.0 - w, 0.0, w];
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return [0.0, 1.0 - w, w];
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    [1.0 - v - w, v, w]
}

/// Host face and barycentric coordinates for a point near face `start`:
/// the closest of the faces sharing a vertex with `start` on its patch.
fn locate(mesh: &TriMesh, start: usize, x: Vec3) -> (usize, [f64; 3]) {
    let patch = mesh.face_patch(start);
    let mut cand: Vec<usize> = mesh
        .triangle(start)
        .iter()
        .flat_map(|&v| mesh.vertex_faces(v).iter().copied())
        .filter(|&f| f != start && mesh.face_patch(f) == patch)
        .collect();
    cand.sort_unstable();
    cand.dedup();
    cand.insert(0, start);
    let mut best = (start, [1.0 / 3.0; 3], f64::INFINITY);
    for f in cand {
        let [a, b, c] = mesh.triangle(f);
        let bary = closest_on_triangle(mesh.vertex(a), mesh.vertex(b), mesh.vertex(c), x);
        let d = (mesh.face_point(f, bary) - x).norm();
        if d < best.2 {
            best = (f, bary, d);
        }
    }
    (best.0, best.1)
}

struct Builder<'a> {
    mesh: &'a TriMesh,
    projector: &'a dyn NodeProjector,
    // node sets for each degree of the level chain, ending at the final one
    levels: Vec<Arc<NodeSet>>,
    feature_faces: Vec<bool>,
}

impl Builder<'_> {
    fn edge_host(&self, e: usize) -> usize {
        let [f0, f1] = self.mesh.edge_faces(e);
        if f1 == NONE {
            f0
        } else {
            f0.min(f1)
        }
    }

    fn edge_params(ns: &NodeSet) -> Vec<f64> {
        let mut t = vec![0.0];
        t.extend(ns.edge_params());
        t.push(1.0);
        t
    }

    /// Interior edge nodes (lo→hi) of a wall edge at the parameters of `ns`.
    fn wall_edge_nodes(&self, e: usize, ns: &NodeSet) -> Result<Vec<Vec3>> {
        let [a, b] = self.mesh.edges()[e];
        let (xa, xb) = (self.mesh.vertex(a), self.mesh.vertex(b));
        ns.edge_params()
            .into_iter()
            .map(|s| self.projector.project_feature(a, b, s, xa * (1.0 - s) + xb * s))
            .collect()
    }

    /// Interior edge nodes (lo→hi) by projecting points of the straight edge.
    fn linear_edge_nodes(&self, e: usize, ns: &NodeSet) -> Result<Vec<Vec3>> {
        let [a, b] = self.mesh.edges()[e];
        let f = self.edge_host(e);
        let tri = self.mesh.triangle(f);
        let ia = tri.iter().position(|&v| v == a).unwrap();
        let ib = tri.iter().position(|&v| v == b).unwrap();
        ns.edge_params()
            .into_iter()
            .map(|s| {
                let mut bary = [0.0; 3];
                bary[ia] = 1.0 - s;
                bary[ib] = s;
                self.projector.project_surface(f, bary, self.mesh.face_point(f, bary))
            })
            .collect()
    }

    /// Edge nodes at every level of the chain; the last entry is final.
    fn edge_levels(&self, e: usize) -> Result<Vec<Vec<Vec3>>> {
        if self.mesh.is_wall_edge(e) {
            return self.levels.iter().map(|ns| self.wall_edge_nodes(e, ns)).collect();
        }
        let [a, b] = self.mesh.edges()[e];
        let host = self.edge_host(e);
        let mut out: Vec<Vec<Vec3>> = Vec::with_capacity(self.levels.len());
        for (l, ns) in self.levels.iter().enumerate() {
            if l == 0 {
                out.push(self.linear_edge_nodes(e, ns)?);
                continue;
            }
            let prev_ns = &self.levels[l - 1];
            let tp = Self::edge_params(prev_ns);
            let mut xp = vec![self.mesh.vertex(a)];
            xp.extend(out[l - 1].iter().copied());
            xp.push(self.mesh.vertex(b));
            let nodes = ns
                .edge_params()
                .into_iter()
                .map(|s| {
                    let w = lagrange_1d(&tp, s);
                    let x: Vec3 = xp.iter().zip(&w).map(|(p, w)| p * *w).sum();
                    let (f, bary) = locate(self.mesh, host, x);
                    self.projector.project_surface(f, bary, x)
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(nodes);
        }
        Ok(out)
    }

    /// Node positions of face `f` at level `l` given its edges' nodes.
    fn assemble(&self, f: usize, ns: &Arc<NodeSet>, edges: [&[Vec3]; 3], interior: &[Vec3]) -> Vec<Vec3> {
        let tri = self.mesh.triangle(f);
        let mut pos: Vec<Vec3> = tri.iter().map(|&v| self.mesh.vertex(v)).collect();
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            if a < b {
                pos.extend(edges[k].iter().copied());
            } else {
                pos.extend(edges[k].iter().rev().copied());
            }
        }
        pos.extend(interior.iter().copied());
        debug_assert_eq!(pos.len(), ns.len());
        pos
    }

    fn linear_interior(&self, f: usize, ns: &NodeSet) -> Result<Vec<Vec3>> {
        ns.interior_range()
            .map(|i| {
                let bary = ns.barycentric(i);
                self.projector.project_surface(f, bary, self.mesh.face_point(f, bary))
            })
            .collect()
    }

    /// Interior nodes of face `f`, using the per-level edge nodes.
    fn face_interior(&self, f: usize, edge_levels: [&[Vec<Vec3>]; 3]) -> Result<Vec<Vec3>> {
        let last = self.levels.len() - 1;
        if !self.feature_faces[f] {
            return self.linear_interior(f, &self.levels[last]);
        }
        let mut prev: Option<ParametricElement> = None;
        let mut interior = Vec::new();
        for (l, ns) in self.levels.iter().enumerate() {
            interior = match &prev {
                None => self.linear_interior(f, ns)?,
                Some(el) => ns
                    .interior_range()
                    .map(|i| {
                        let x = el.position(ns.coords()[i]);
                        let (h, bary) = locate(self.mesh, f, x);
                        self.projector.project_surface(h, bary, x)
                    })
                    .collect::<Result<_>>()?,
            };
            if l < last {
                let edges = [
                    edge_levels[0][l].as_slice(),
                    edge_levels[1][l].as_slice(),
                    edge_levels[2][l].as_slice(),
                ];
                let pos = self.assemble(f, ns, edges, &interior);
                prev = Some(ParametricElement::new(ns.clone(), pos)?);
            }
        }
        Ok(interior)
    }
}

fn level_sets(cfg: &ElementConfig) -> Result<Vec<Arc<NodeSet>>> {
    let p = cfg.degree;
    let mut out: Vec<Arc<NodeSet>> = cfg
        .strategy
        .intermediate_degrees(p)
        .into_iter()
        .map(|q| NodeSet::equispaced(q).map(Arc::new))
        .collect::<Result<_>>()?;
    out.push(match &cfg.nodes {
        Some(ns) if ns.degree() == p => ns.clone(),
        Some(ns) => {
            return Err(Error::Config(format!(
                "node set has degree {}, elements degree {p}",
                ns.degree()
            )))
        }
        None => Arc::new(NodeSet::equispaced(p)?),
    });
    Ok(out)
}

/// Builds the degree-p surface: nodes of elements without a wall edge are
/// projections of points of the linear triangle, elements with a wall edge
/// follow `cfg.strategy`, and wall edges take their nodes from the feature
/// curves.
pub fn build_high_order_mesh(
    mesh: &TriMesh,
    cfg: &ElementConfig,
    projector: &dyn NodeProjector,
) -> Result<HighOrderMesh> {
    if cfg.degree < 1 {
        return Err(Error::Argument("element degree must be at least 1".into()));
    }
    let levels = level_sets(cfg)?;
    let feature_faces: Vec<bool> = (0..mesh.num_faces()).map(|f| mesh.is_feature_face(f)).collect();
    let b = Builder {
        mesh,
        projector,
        levels,
        feature_faces,
    };
    let mut needs_levels = vec![false; mesh.num_edges()];
    for f in 0..mesh.num_faces() {
        if b.feature_faces[f] {
            for e in mesh.face_edges(f) {
                needs_levels[e] = true;
            }
        }
    }
    let last = b.levels.len() - 1;
    let edge_levels: Vec<Vec<Vec<Vec3>>> = (0..mesh.num_edges())
        .into_par_iter()
        .map(|e| {
            if needs_levels[e] || mesh.is_wall_edge(e) {
                b.edge_levels(e)
            } else {
                Ok(vec![b.linear_edge_nodes(e, &b.levels[last])?])
            }
        })
        .collect::<Result<_>>()?;
    let face_nodes: Vec<Vec<Vec3>> = (0..mesh.num_faces())
        .into_par_iter()
        .map(|f| {
            let es = mesh.face_edges(f);
            b.face_interior(
                f,
                [
                    edge_levels[es[0]].as_slice(),
                    edge_levels[es[1]].as_slice(),
                    edge_levels[es[2]].as_slice(),
                ],
            )
        })
        .collect::<Result<_>>()?;
    let edge_nodes = edge_levels
        .into_iter()
        .map(|mut l| l.pop().unwrap_or_default())
        .collect();
    let mut feature_edges: Vec<(usize, usize)> = (0..mesh.num_edges())
        .filter(|&e| mesh.is_wall_edge(e))
        .map(|e| (mesh.edges()[e][0], mesh.edges()[e][1]))
        .collect();
    feature_edges.sort_unstable();
    Ok(HighOrderMesh {
        degree: cfg.degree,
        nodes: b.levels[last].clone(),
        vertices: mesh.vertices().to_vec(),
        triangles: mesh.triangles().to_vec(),
        face_edges: (0..mesh.num_faces()).map(|f| mesh.face_edges(f)).collect(),
        edges: mesh.edges().to_vec(),
        edge_nodes,
        face_nodes,
        feature_edges,
        feature_faces: b.feature_faces,
    })
}

/// A single element of face `tri` built as in [`build_high_order_mesh`].
pub fn build_feature_aware_element(
    mesh: &TriMesh,
    tri: usize,
    cfg: &ElementConfig,
    projector: &dyn NodeProjector,
) -> Result<ParametricElement> {
    let levels = level_sets(cfg)?;
    let b = Builder {
        mesh,
        projector,
        levels,
        feature_faces: (0..mesh.num_faces())
            .map(|f| f == tri && mesh.is_feature_face(f))
            .collect(),
    };
    let es = mesh.face_edges(tri);
    let el: Vec<Vec<Vec<Vec3>>> = es
        .iter()
        .map(|&e| {
            if b.feature_faces[tri] || mesh.is_wall_edge(e) {
                b.edge_levels(e)
            } else {
                Ok(vec![b.linear_edge_nodes(e, b.levels.last().unwrap())?])
            }
        })
        .collect::<Result<_>>()?;
    let interior = b.face_interior(tri, [&el[0], &el[1], &el[2]])?;
    let ns = b.levels.last().unwrap().clone();
    let pos = b.assemble(
        tri,
        &ns,
        [el[0].last().unwrap(), el[1].last().unwrap(), el[2].last().unwrap()],
        &interior,
    );
    ParametricElement::new(ns, pos)
}

/// Reconstructs the degree-p surface of `mesh` with the surface method in
/// `method` and matching curve fittings on the feature chains. With
/// [`NormalsSource::Oracle`], `oracle` supplies normals and feature tangents.
pub fn reconstruct_high_order_mesh(
    mesh: &TriMesh,
    method: MethodConfig,
    strategy: Strategy,
    oracle: Option<&AnalyticSurface>,
) -> Result<HighOrderMesh> {
    let surface = Reconstructor::new(mesh, method, oracle)?;
    let curve_oracle = match (method.normals_source, oracle) {
        (NormalsSource::Oracle, Some(s)) => s.feature_curve(),
        _ => None,
    };
    let curves = if mesh.feature().is_empty() {
        None
    } else {
        let src = match &curve_oracle {
            Some(c) => TangentSource::Oracle(c),
            None => TangentSource::Estimated,
        };
        Some(CurveReconstructor::from_mesh(mesh, src, method)?)
    };
    let proj = ReconstructionProjector {
        surface: &surface,
        curves: curves.as_ref(),
    };
    build_high_order_mesh(mesh, &ElementConfig::new(method.degree, strategy), &proj)
}

#[derive(Serialize)]
struct JsonFace {
    corner_ids: [usize; 3],
    edge_node_ids: Vec<usize>,
    face_node_ids: Vec<usize>,
}

#[derive(Serialize)]
struct JsonMesh {
    degree: usize,
    vertices: Vec<[f64; 3]>,
    faces: Vec<JsonFace>,
    nodes: Vec<[f64; 3]>,
    feature_edges: Vec<[usize; 2]>,
}

impl HighOrderMesh {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn node_set(&self) -> &Arc<NodeSet> {
        &self.nodes
    }

    pub fn num_faces(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_feature_face(&self, f: usize) -> bool {
        self.feature_faces[f]
    }

    pub fn feature_edges(&self) -> &[(usize, usize)] {
        &self.feature_edges
    }

    /// Nodes (lo→hi) of edge `e` of the base mesh.
    pub fn edge_nodes(&self, e: usize) -> &[Vec3] {
        &self.edge_nodes[e]
    }

    pub fn face_nodes(&self, f: usize) -> &[Vec3] {
        &self.face_nodes[f]
    }

    /// Element of face `f`, assembled from the shared node storage.
    pub fn element(&self, f: usize) -> ParametricElement {
        let tri = self.triangles[f];
        let mut pos: Vec<Vec3> = tri.iter().map(|&v| self.vertices[v]).collect();
        for k in 0..3 {
            let e = self.face_edges[f][k];
            if tri[k] < tri[(k + 1) % 3] {
                pos.extend(self.edge_nodes[e].iter().copied());
            } else {
                pos.extend(self.edge_nodes[e].iter().rev().copied());
            }
        }
        pos.extend(self.face_nodes[f].iter().copied());
        ParametricElement {
            nodes: self.nodes.clone(),
            positions: pos,
        }
    }

    /// Largest distance of an edge node from its straight-edge position.
    pub fn max_edge_displacement(&self) -> f64 {
        let t = self.nodes.edge_params();
        let mut m: f64 = 0.0;
        for (e, nodes) in self.edge_nodes.iter().enumerate() {
            let [a, b] = self.edges[e];
            for (x, s) in nodes.iter().zip(&t) {
                let lin = self.vertices[a] * (1.0 - s) + self.vertices[b] * *s;
                m = m.max((x - lin).norm());
            }
        }
        m
    }

    pub fn num_nodes(&self) -> usize {
        self.vertices.len()
            + self.edge_nodes.iter().map(Vec::len).sum::<usize>()
            + self.face_nodes.iter().map(Vec::len).sum::<usize>()
    }

    fn to_json_mesh(&self) -> JsonMesh {
        let nv = self.vertices.len();
        let m = self.degree - 1;
        let ne = self.edges.len();
        let ni = self.nodes.interior_range().len();
        let mut nodes: Vec<[f64; 3]> = self.vertices.iter().map(|v| [v.x, v.y, v.z]).collect();
        for en in &self.edge_nodes {
            nodes.extend(en.iter().map(|v| [v.x, v.y, v.z]));
        }
        for fnodes in &self.face_nodes {
            nodes.extend(fnodes.iter().map(|v| [v.x, v.y, v.z]));
        }
        let faces = (0..self.triangles.len())
            .map(|f| {
                let tri = self.triangles[f];
                let mut edge_node_ids = Vec::with_capacity(3 * m);
                for k in 0..3 {
                    let e = self.face_edges[f][k];
                    let ids: Vec<usize> = (0..m).map(|i| nv + e * m + i).collect();
                    if tri[k] < tri[(k + 1) % 3] {
                        edge_node_ids.extend(ids);
                    } else {
                        edge_node_ids.extend(ids.into_iter().rev());
                    }
                }
                JsonFace {
                    corner_ids: tri,
                    edge_node_ids,
                    face_node_ids: (0..ni).map(|i| nv + ne * m + f * ni + i).collect(),
                }
            })
            .collect();
        JsonMesh {
            degree: self.degree,
            vertices: nodes[..nv].to_vec(),
            faces,
            nodes,
            feature_edges: self.feature_edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_mesh()).expect("mesh serializes")
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Method;

    #[test]
    fn closest_point_regions() {
        let (a, b, c) = (Vec3::zeros(), Vec3::x(), Vec3::y());
        let i = closest_on_triangle(a, b, c, Vec3::new(0.2, 0.3, 1.0));
        assert!((i[0] - 0.5).abs() < 1e-15 && (i[1] - 0.2).abs() < 1e-15 && (i[2] - 0.3).abs() < 1e-15);
        assert_eq!(
            closest_on_triangle(a, b, c, Vec3::new(-1.0, -1.0, 0.0)),
            [1.0, 0.0, 0.0]
        );
        let e = closest_on_triangle(a, b, c, Vec3::new(0.5, -1.0, 0.0));
        assert_eq!(e, [0.5, 0.5, 0.0]);
        let h = closest_on_triangle(a, b, c, Vec3::new(1.0, 1.0, 0.0));
        assert!((h[1] - 0.5).abs() < 1e-15 && (h[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn strategy_levels() {
        assert_eq!(Strategy::Ifap.intermediate_degrees(6), vec![2, 4]);
        assert_eq!(Strategy::Fap.intermediate_degrees(6), vec![2]);
        assert_eq!(Strategy::Fap.intermediate_degrees(2), Vec::<usize>::new());
        assert!(Strategy::NonFap.intermediate_degrees(8).is_empty());
    }

    #[test]
    fn plane_stays_flat() {
        let m = crate::mesh::tests::grid(4, 4);
        for p in [2, 4] {
            let ho =
                reconstruct_high_order_mesh(&m, MethodConfig::new(Method::HWalf, p), Strategy::Ifap, None).unwrap();
            let json = ho.to_json();
            let v: serde_json::Value = serde_json::from_str(&json).unwrap();
            for n in v["nodes"].as_array().unwrap() {
                assert!(n[2].as_f64().unwrap().abs() < 1e-12);
            }
            assert_eq!(v["faces"][0]["edge_node_ids"].as_array().unwrap().len(), 3 * (p - 1));
        }
    }

    #[test]
    fn strategies_agree_away_from_features() {
        let s = AnalyticSurface::unit_sphere();
        let m = crate::geometry::generate_mesh(&s, 1).unwrap();
        let proj = OracleProjector { mesh: &m, surface: &s };
        let el = |st| build_feature_aware_element(&m, 5, &ElementConfig::new(4, st), &proj).unwrap();
        let a = el(Strategy::NonFap);
        for st in [Strategy::Fap, Strategy::Ifap] {
            for (x, y) in a.positions.iter().zip(&el(st).positions) {
                assert!((x - y).norm() < 1e-12);
            }
        }
        assert!(a.positions.iter().all(|x| (x.norm() - 1.0).abs() < 1e-14));
    }
}
