//! Triangle meshes: storage, half-edge connectivity, neighborhoods and
//! feature tagging.

mod feature;
mod io;
mod refine;
mod stencil;

use std::collections::HashMap;

pub use feature::{detect_features, Chain, FeatureGraph, FeatureTags};
pub use io::{load_obj, parse_feature_tags, parse_obj, write_obj};
pub use refine::RefineProjector;
pub use stencil::{Ring, Stencil, StencilCenter};

use crate::{Error, Result, Vec3};

/// Sentinel for "no twin" / "no second face".
pub const NONE: usize = usize::MAX;

/// A manifold triangle mesh with derived half-edge connectivity.
///
/// Half-edge `3 * f + k` runs from `triangles[f][k]` to
/// `triangles[f][(k + 1) % 3]`. The mesh is immutable once built; every
/// query takes `&self`.
#[derive(Debug, Clone)]
pub struct TriMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    vertex_normals: Option<Vec<Vec3>>,

    twin: Vec<usize>,
    he_edge: Vec<usize>,
    edges: Vec<[usize; 2]>,
    edge_faces: Vec<[usize; 2]>,
    edge_lookup: HashMap<(usize, usize), usize>,
    vf_offsets: Vec<usize>,
    vf: Vec<usize>,

    feature: FeatureGraph,
    wall: Vec<bool>,
    face_patch: Vec<usize>,
    num_patches: usize,
}

impl TriMesh {
    /// Builds a mesh and its connectivity. Rejects out-of-range or repeated
    /// vertex indices, edges with three or more incident faces and
    /// inconsistently oriented neighbors.
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let nv = vertices.len();
        for (f, t) in triangles.iter().enumerate() {
            if t.iter().any(|&i| i >= nv) {
                return Err(Error::Topology(format!(
                    "triangle {f} references a vertex out of range ({nv} vertices)"
                )));
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::Topology(format!("triangle {f} has repeated vertices {t:?}")));
            }
        }

        let nhe = 3 * triangles.len();
        let mut twin = vec![NONE; nhe];
        let mut he_edge = vec![NONE; nhe];
        let mut edges: Vec<[usize; 2]> = Vec::new();
        let mut edge_faces: Vec<[usize; 2]> = Vec::new();
        let mut edge_lookup: HashMap<(usize, usize), usize> = HashMap::with_capacity(nhe);
        let mut edge_he: Vec<usize> = Vec::new();

        for (f, t) in triangles.iter().enumerate() {
            for k in 0..3 {
                let h = 3 * f + k;
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                match edge_lookup.get(&key) {
                    None => {
                        let e = edges.len();
                        edge_lookup.insert(key, e);
                        edges.push([key.0, key.1]);
                        edge_faces.push([f, NONE]);
                        edge_he.push(h);
                        he_edge[h] = e;
                    }
                    Some(&e) => {
                        if edge_faces[e][1] != NONE {
                            return Err(Error::Topology(format!(
                                "non-manifold edge ({}, {}) has three or more incident faces",
                                key.0, key.1
                            )));
                        }
                        let h0 = edge_he[e];
                        let a0 = triangles[h0 / 3][h0 % 3];
                        if a0 == a {
                            return Err(Error::Topology(format!(
                                "faces {} and {f} have inconsistent orientation across edge ({}, {})",
                                h0 / 3,
                                key.0,
                                key.1
                            )));
                        }
                        edge_faces[e][1] = f;
                        twin[h] = h0;
                        twin[h0] = h;
                        he_edge[h] = e;
                    }
                }
            }
        }

        let mut counts = vec![0usize; nv + 1];
        for t in &triangles {
            for &i in t {
                counts[i + 1] += 1;
            }
        }
        for i in 0..nv {
            counts[i + 1] += counts[i];
        }
        let vf_offsets = counts.clone();
        let mut fill = counts;
        let mut vf = vec![0usize; 3 * triangles.len()];
        for (f, t) in triangles.iter().enumerate() {
            for &i in t {
                vf[fill[i]] = f;
                fill[i] += 1;
            }
        }

        let mut mesh = TriMesh {
            vertices,
            triangles,
            vertex_normals: None,
            twin,
            he_edge,
            edges,
            edge_faces,
            edge_lookup,
            vf_offsets,
            vf,
            feature: FeatureGraph::default(),
            wall: Vec::new(),
            face_patch: Vec::new(),
            num_patches: 0,
        };
        mesh.install_features(&FeatureTags::default())?;
        Ok(mesh)
    }

    /// Attaches per-vertex normals (normalized here; zero vectors are rejected).
    pub fn with_vertex_normals(mut self, normals: Vec<Vec3>) -> Result<Self> {
        if normals.len() != self.vertices.len() {
            return Err(Error::Argument(format!(
                "{} normals for {} vertices",
                normals.len(),
                self.vertices.len()
            )));
        }
        let mut out = Vec::with_capacity(normals.len());
        for (i, n) in normals.into_iter().enumerate() {
            let len = n.norm();
            if !(len > 0.0) || !len.is_finite() {
                return Err(Error::Argument(format!("vertex normal {i} has zero length")));
            }
            out.push(n / len);
        }
        self.vertex_normals = Some(out);
        Ok(self)
    }

    /// Replaces the feature graph with the given explicit tags.
    pub fn with_features(mut self, tags: &FeatureTags) -> Result<Self> {
        self.install_features(tags)?;
        Ok(self)
    }

    fn install_features(&mut self, tags: &FeatureTags) -> Result<()> {
        for &(a, b) in &tags.edges {
            if self.edge_id(a, b).is_none() {
                return Err(Error::Topology(format!(
                    "tagged feature edge ({a}, {b}) is not an edge of the mesh"
                )));
            }
        }
        let mut wall = vec![false; self.edges.len()];
        for (e, ef) in self.edge_faces.iter().enumerate() {
            if ef[1] == NONE {
                wall[e] = true;
            }
        }
        for &(a, b) in &tags.edges {
            wall[self.edge_id(a, b).unwrap()] = true;
        }
        let graph = FeatureGraph::build(self, tags, &wall)?;

        // Smooth patches: faces connected across non-wall edges.
        let nf = self.triangles.len();
        let mut patch = vec![NONE; nf];
        let mut count = 0;
        let mut queue = Vec::new();
        for seed in 0..nf {
            if patch[seed] != NONE {
                continue;
            }
            patch[seed] = count;
            queue.push(seed);
            while let Some(f) = queue.pop() {
                for k in 0..3 {
                    let h = 3 * f + k;
                    if wall[self.he_edge[h]] {
                        continue;
                    }
                    let g = self.twin[h] / 3;
                    if patch[g] == NONE {
                        patch[g] = count;
                        queue.push(g);
                    }
                }
            }
            count += 1;
        }

        self.feature = graph;
        self.wall = wall;
        self.face_patch = patch;
        self.num_patches = count;
        Ok(())
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> Vec3 {
        self.vertices[v]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle(&self, f: usize) -> [usize; 3] {
        self.triangles[f]
    }

    pub fn vertex_normals(&self) -> Option<&[Vec3]> {
        self.vertex_normals.as_deref()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_faces(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Unique edges as `[lo, hi]` vertex pairs.
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// Incident faces of an edge; the second entry is [`NONE`] on the boundary.
    pub fn edge_faces(&self, e: usize) -> [usize; 2] {
        self.edge_faces[e]
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_lookup.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_faces[e][1] == NONE
    }

    pub fn num_boundary_edges(&self) -> usize {
        self.edge_faces.iter().filter(|f| f[1] == NONE).count()
    }

    /// True when the edge is a feature or boundary edge (a stencil wall).
    pub fn is_wall_edge(&self, e: usize) -> bool {
        self.wall[e]
    }

    /// Edge id of half-edge `3 * f + k`.
    pub fn half_edge_edge(&self, h: usize) -> usize {
        self.he_edge[h]
    }

    /// Twin half-edge, or [`NONE`] on the boundary.
    pub fn twin(&self, h: usize) -> usize {
        self.twin[h]
    }

    /// Edge ids of the three sides of face `f`, side `k` running from
    /// corner `k` to corner `k + 1`.
    pub fn face_edges(&self, f: usize) -> [usize; 3] {
        [self.he_edge[3 * f], self.he_edge[3 * f + 1], self.he_edge[3 * f + 2]]
    }

    pub fn vertex_faces(&self, v: usize) -> &[usize] {
        &self.vf[self.vf_offsets[v]..self.vf_offsets[v + 1]]
    }

    pub fn feature(&self) -> &FeatureGraph {
        &self.feature
    }

    pub fn face_patch(&self, f: usize) -> usize {
        self.face_patch[f]
    }

    pub fn num_patches(&self) -> usize {
        self.num_patches
    }

    /// Sorted patch ids of the faces around `v`.
    pub fn vertex_patches(&self, v: usize) -> Vec<usize> {
        let mut p: Vec<usize> = self.vertex_faces(v).iter().map(|&f| self.face_patch[f]).collect();
        p.sort_unstable();
        p.dedup();
        p
    }

    /// Patch of the lowest-numbered face around `v`.
    pub fn primary_patch(&self, v: usize) -> Option<usize> {
        self.vertex_faces(v).iter().min().map(|&f| self.face_patch[f])
    }

    /// True when face `f` has at least one feature or boundary edge.
    pub fn is_feature_face(&self, f: usize) -> bool {
        self.face_edges(f).iter().any(|&e| self.wall[e])
    }

    /// Area vector (twice the area, along the oriented normal).
    pub fn face_area_vector(&self, f: usize) -> Vec3 {
        let [a, b, c] = self.triangles[f];
        (self.vertices[b] - self.vertices[a]).cross(&(self.vertices[c] - self.vertices[a]))
    }

    pub fn face_normal(&self, f: usize) -> Vec3 {
        self.face_area_vector(f).normalize()
    }

    pub fn face_centroid(&self, f: usize) -> Vec3 {
        let [a, b, c] = self.triangles[f];
        (self.vertices[a] + self.vertices[b] + self.vertices[c]) / 3.0
    }

    /// Point with barycentric coordinates `xi` in face `f`.
    pub fn face_point(&self, f: usize, xi: [f64; 3]) -> Vec3 {
        let [a, b, c] = self.triangles[f];
        self.vertices[a] * xi[0] + self.vertices[b] * xi[1] + self.vertices[c] * xi[2]
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let [a, b] = self.edges[e];
        (self.vertices[a] - self.vertices[b]).norm()
    }

    pub fn mean_edge_length(&self) -> f64 {
        if self.edges.is_empty() {
            return 0.0;
        }
        (0..self.edges.len()).map(|e| self.edge_length(e)).sum::<f64>() / self.edges.len() as f64
    }

    /// Barycentric coordinates of `x` in face `tri`, after projecting `x`
    /// onto the triangle's plane.
    pub fn barycentric_coordinates(&self, tri: usize, x: Vec3) -> Result<[f64; 3]> {
        let [a, b, c] = self.triangles[tri];
        barycentric(self.vertices[a], self.vertices[b], self.vertices[c], x)
            .ok_or_else(|| Error::Geometry(format!("triangle {tri} has zero area")))
    }
}

/// Barycentric coordinates of the orthogonal projection of `x` onto the plane
/// of triangle `(a, b, c)`; `None` for a degenerate triangle.
pub fn barycentric(a: Vec3, b: Vec3, c: Vec3, x: Vec3) -> Option<[f64; 3]> {
    let e1 = b - a;
    let e2 = c - a;
    let d = x - a;
    let d00 = e1.dot(&e1);
    let d01 = e1.dot(&e2);
    let d11 = e2.dot(&e2);
    let denom = d00 * d11 - d01 * d01;
    if !(denom > 1e-28 * d00 * d11) {
        return None;
    }
    let d20 = d.dot(&e1);
    let d21 = d.dot(&e2);
    let v = (d11 * d20 - d01 * d21) / denom;
    let w = (d00 * d21 - d01 * d20) / denom;
    Some([1.0 - v - w, v, w])
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn grid(nx: usize, ny: usize) -> TriMesh {
        let mut v = Vec::new();
        for j in 0..=ny {
            for i in 0..=nx {
                v.push(Vec3::new(i as f64, j as f64, 0.0));
            }
        }
        let id = |i: usize, j: usize| j * (nx + 1) + i;
        let mut t = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                t.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                t.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        TriMesh::new(v, t).unwrap()
    }

    fn tetra() -> TriMesh {
        let v = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
        ];
        let t = vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]];
        TriMesh::new(v, t).unwrap()
    }

    #[test]
    fn single_triangle_has_three_boundary_edges() {
        let m = TriMesh::new(vec![Vec3::zeros(), Vec3::x(), Vec3::y()], vec![[0, 1, 2]]).unwrap();
        assert_eq!(m.num_edges(), 3);
        assert_eq!(m.num_boundary_edges(), 3);
        assert_eq!(m.feature().chains().len(), 1);
        assert!(m.feature().chains()[0].closed);
    }

    #[test]
    fn tetrahedron_is_closed() {
        let m = tetra();
        assert_eq!(m.num_edges(), 6);
        assert_eq!(m.num_boundary_edges(), 0);
        for e in 0..6 {
            assert_ne!(m.edge_faces(e)[1], NONE);
        }
        assert_eq!(m.num_patches(), 1);
    }

    #[test]
    fn rejects_non_manifold_edge() {
        let v = vec![
            Vec3::zeros(),
            Vec3::x(),
            Vec3::y(),
            Vec3::z(),
            Vec3::new(0.0, -1.0, 0.0),
        ];
        let t = vec![[0, 1, 2], [1, 0, 3], [0, 1, 4]];
        assert!(matches!(TriMesh::new(v, t), Err(Error::Topology(_))));
    }

    #[test]
    fn rejects_bad_indices() {
        let v = vec![Vec3::zeros(), Vec3::x(), Vec3::y()];
        assert!(TriMesh::new(v.clone(), vec![[0, 1, 3]]).is_err());
        assert!(TriMesh::new(v, vec![[0, 1, 1]]).is_err());
    }

    #[test]
    fn barycentric_examples() {
        let m = TriMesh::new(
            vec![
                Vec3::new(0.3, 0.1, 0.2),
                Vec3::new(1.4, 0.2, -0.1),
                Vec3::new(0.1, 1.1, 0.5),
            ],
            vec![[0, 1, 2]],
        )
        .unwrap();
        let xi = m.barycentric_coordinates(0, m.vertex(0)).unwrap();
        assert_eq!(xi, [1.0, 0.0, 0.0]);
        let xi = m.barycentric_coordinates(0, m.face_centroid(0)).unwrap();
        for x in xi {
            assert!((x - 1.0 / 3.0).abs() < 1e-14);
        }
        let mid = (m.vertex(1) + m.vertex(2)) * 0.5;
        let xi = m.barycentric_coordinates(0, mid).unwrap();
        assert!(xi[0].abs() < 1e-14 && (xi[1] - 0.5).abs() < 1e-14 && (xi[2] - 0.5).abs() < 1e-14);
        // off-plane points project first
        let off = m.face_centroid(0) + m.face_normal(0) * 0.7;
        let xi = m.barycentric_coordinates(0, off).unwrap();
        assert!((xi[0] - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn barycentric_degenerate_triangle() {
        let m = TriMesh::new(vec![Vec3::zeros(), Vec3::x(), Vec3::x() * 2.0], vec![[0, 1, 2]]).unwrap();
        assert!(matches!(
            m.barycentric_coordinates(0, Vec3::zeros()),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn grid_connectivity() {
        let m = grid(4, 3);
        assert_eq!(m.num_vertices(), 20);
        assert_eq!(m.num_faces(), 24);
        // V - E + F = 1 for a disk
        assert_eq!(m.num_vertices() + m.num_faces() - m.num_edges(), 1);
        assert_eq!(m.num_boundary_edges(), 14);
    }
}
