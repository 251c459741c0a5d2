use super::{FeatureTags, TriMesh};
use crate::{Result, Vec3};

/// Maps new midpoint vertices back onto an exact geometry during refinement.
pub trait RefineProjector {
    /// Projects a midpoint of a smooth edge. `hint` is the centroid of a face
    /// incident to the edge, which disambiguates piecewise surfaces.
    fn project_surface(&self, x: Vec3, hint: Vec3) -> Vec3;

    /// Projects a midpoint of a tagged feature edge onto the feature curve.
    fn project_feature(&self, x: Vec3) -> Vec3;
}

impl TriMesh {
    /// Splits every triangle 1→4 at its edge midpoints. Midpoint of edge `e`
    /// becomes vertex `V + e`. Feature tags and corners carry over to the
    /// child edges; vertex normals, when present, are averaged and
    /// renormalized.
    pub fn uniform_refine(&self, projector: Option<&dyn RefineProjector>) -> Result<TriMesh> {
        let nv = self.num_vertices();
        let mut verts = self.vertices().to_vec();
        verts.reserve(self.num_edges());
        for (e, &[a, b]) in self.edges().iter().enumerate() {
            let mid = (self.vertex(a) + self.vertex(b)) * 0.5;
            let feature = self.feature().feature_edges().contains(&(a, b));
            let p = match projector {
                None => mid,
                Some(pr) if feature => pr.project_feature(mid),
                Some(pr) => pr.project_surface(mid, self.face_centroid(self.edge_faces(e)[0])),
            };
            verts.push(p);
        }

        let mut tris = Vec::with_capacity(4 * self.num_faces());
        for f in 0..self.num_faces() {
            let [a, b, c] = self.triangle(f);
            let [eab, ebc, eca] = self.face_edges(f);
            let (mab, mbc, mca) = (nv + eab, nv + ebc, nv + eca);
            tris.push([a, mab, mca]);
            tris.push([mab, b, mbc]);
            tris.push([mca, mbc, c]);
            tris.push([mab, mbc, mca]);
        }

        let mut tags = FeatureTags {
            edges: Vec::new(),
            corners: self.feature().corners().iter().copied().collect(),
        };
        // Wall-degree corners are recomputed; only keep explicitly relevant ones.
        tags.corners.retain(|&c| self.feature().is_feature_vertex(c));
        for &(a, b) in self.feature().feature_edges() {
            let m = nv + self.edge_id(a, b).unwrap();
            tags.edges.push((a, m));
            tags.edges.push((m, b));
        }

        let normals = self.vertex_normals().map(|ns| {
            let mut out = ns.to_vec();
            for &[a, b] in self.edges() {
                out.push((ns[a] + ns[b]).normalize());
            }
            out
        });

        let mut mesh = TriMesh::new(verts, tris)?.with_features(&tags)?;
        if let Some(ns) = normals {
            mesh = mesh.with_vertex_normals(ns)?;
        }
        Ok(mesh)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct UnitSphere;
    impl RefineProjector for UnitSphere {
        fn project_surface(&self, x: Vec3, _: Vec3) -> Vec3 {
            x.normalize()
        }
        fn project_feature(&self, x: Vec3) -> Vec3 {
            x.normalize()
        }
    }

    fn octahedron() -> TriMesh {
        let v = vec![Vec3::x(), -Vec3::x(), Vec3::y(), -Vec3::y(), Vec3::z(), -Vec3::z()];
        let t = vec![
            [0, 2, 4],
            [2, 1, 4],
            [1, 3, 4],
            [3, 0, 4],
            [2, 0, 5],
            [1, 2, 5],
            [3, 1, 5],
            [0, 3, 5],
        ];
        TriMesh::new(v, t).unwrap()
    }

    #[test]
    fn euler_bookkeeping() {
        let m = octahedron();
        let r = m.uniform_refine(None).unwrap();
        assert_eq!(r.num_vertices(), m.num_vertices() + m.num_edges());
        assert_eq!(r.num_faces(), 4 * m.num_faces());
        assert_eq!(r.num_boundary_edges(), 0);
    }

    #[test]
    fn projected_vertices_on_sphere() {
        let r = octahedron()
            .uniform_refine(Some(&UnitSphere))
            .unwrap()
            .uniform_refine(Some(&UnitSphere))
            .unwrap();
        for v in r.vertices() {
            assert!((v.norm() - 1.0).abs() < 1e-14);
        }
        // orientation stays outward
        for f in 0..r.num_faces() {
            assert!(r.face_area_vector(f).dot(&r.face_centroid(f)) > 0.0);
        }
    }

    #[test]
    fn feature_tags_propagate() {
        let m = crate::mesh::tests::grid(2, 2);
        let tags = FeatureTags {
            edges: vec![(3, 4), (4, 5)],
            corners: vec![],
        };
        let m = m.with_features(&tags).unwrap();
        let r = m.uniform_refine(None).unwrap();
        assert_eq!(r.feature().feature_edges().len(), 4);
        // boundary loop plus the interior line split at its two boundary ends
        let g = r.feature();
        let on_line: Vec<_> = g
            .chains()
            .iter()
            .filter(|c| c.vertices.iter().all(|&v| r.vertex(v).y == 1.0))
            .collect();
        assert!(on_line.iter().any(|c| c.vertices.len() == 5));
    }
}
