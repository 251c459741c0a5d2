use crate::geometry::AnalyticSurface;
use crate::mesh::TriMesh;
use crate::{Error, Result, Vec3};

/// Per-vertex unit normals, one per smooth patch around the vertex.
#[derive(Debug, Clone)]
pub struct VertexNormals {
    per_vertex: Vec<Vec<(usize, Vec3)>>,
}

impl VertexNormals {
    /// Normal of `v` on the side of `patch`.
    pub fn get(&self, v: usize, patch: usize) -> Option<Vec3> {
        self.per_vertex[v].iter().find(|(p, _)| *p == patch).map(|(_, n)| *n)
    }

    /// All `(patch, normal)` pairs of `v`; empty for isolated vertices.
    pub fn sides(&self, v: usize) -> &[(usize, Vec3)] {
        &self.per_vertex[v]
    }

    pub fn len(&self) -> usize {
        self.per_vertex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_vertex.is_empty()
    }
}

/// Area-weighted averages of incident face normals, computed separately for
/// each smooth patch at feature vertices.
pub fn estimate_vertex_normals(mesh: &TriMesh) -> VertexNormals {
    let per_vertex = (0..mesh.num_vertices())
        .map(|v| {
            let mut sides: Vec<(usize, Vec3)> = Vec::new();
            for &f in mesh.vertex_faces(v) {
                let p = mesh.face_patch(f);
                let a = mesh.face_area_vector(f);
                match sides.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, n)) => *n += a,
                    None => sides.push((p, a)),
                }
            }
            sides.sort_by_key(|s| s.0);
            sides
                .into_iter()
                .filter_map(|(p, n)| {
                    let l = n.norm();
                    (l > 0.0).then(|| (p, n / l))
                })
                .collect()
        })
        .collect();
    VertexNormals { per_vertex }
}

/// Normals from the mesh's `vn` records; vertices on features fall back to
/// the one-sided estimates.
pub fn mesh_vertex_normals(mesh: &TriMesh) -> Result<VertexNormals> {
    let vn = mesh
        .vertex_normals()
        .ok_or_else(|| Error::Config("mesh has no vertex normals".into()))?;
    let mut est = estimate_vertex_normals(mesh);
    for (v, sides) in est.per_vertex.iter_mut().enumerate() {
        if sides.len() == 1 && !mesh.feature().is_feature_vertex(v) {
            sides[0].1 = vn[v];
        }
    }
    Ok(est)
}

/// Exact normals from an analytic surface; the side of each patch is taken
/// from the centroid of an incident face.
pub fn oracle_vertex_normals(mesh: &TriMesh, surf: &AnalyticSurface) -> Result<VertexNormals> {
    let mut per_vertex = Vec::with_capacity(mesh.num_vertices());
    for v in 0..mesh.num_vertices() {
        let mut sides: Vec<(usize, Vec3)> = Vec::new();
        for &f in mesh.vertex_faces(v) {
            let p = mesh.face_patch(f);
            if sides.iter().any(|(q, _)| *q == p) {
                continue;
            }
            let part = surf.part_of(mesh.face_centroid(f));
            sides.push((p, surf.surface_normal(mesh.vertex(v), Some(part))?));
        }
        sides.sort_by_key(|s| s.0);
        per_vertex.push(sides);
    }
    Ok(VertexNormals { per_vertex })
}
