use std::collections::HashSet;
use std::fmt;

use super::TriMesh;
use crate::{Error, Result};

/// A ring size in half-ring steps: 1, 1.5, 2, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ring(u32);

impl Ring {
    pub const ONE: Ring = Ring(2);

    /// Parses a ring size; must be a multiple of 0.5 and at least 1.
    pub fn new(r: f64) -> Result<Ring> {
        let halves = (2.0 * r).round();
        if !(r >= 1.0) || (2.0 * r - halves).abs() > 1e-9 {
            return Err(Error::Argument(format!("ring size must be 1, 1.5, 2, ... (got {r})")));
        }
        Ok(Ring(halves as u32))
    }

    pub fn from_halves(h: u32) -> Result<Ring> {
        Ring::new(h as f64 / 2.0)
    }

    pub fn halves(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// The next half-ring.
    pub fn grow(self) -> Ring {
        Ring(self.0 + 1)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Where a stencil is anchored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StencilCenter {
    Vertex(usize),
    Face { face: usize, bary: [f64; 3] },
}

/// An ordered neighborhood of vertices. For vertex-centered stencils the
/// center is `members[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    pub center: StencilCenter,
    pub ring: Ring,
    pub patch: Option<usize>,
    pub members: Vec<usize>,
}

impl Stencil {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl TriMesh {
    /// Faces around `v` restricted to `patch` (all faces when `None`).
    fn ring_faces(&self, v: usize, patch: Option<usize>) -> impl Iterator<Item = usize> + '_ {
        self.vertex_faces(v)
            .iter()
            .copied()
            .filter(move |&f| patch.is_none_or(|p| self.face_patch(f) == p))
    }

    /// Vertices of the `ring` neighborhood of `v`, restricted to one smooth
    /// patch. `patch` selects the side for vertices on features; `None`
    /// uses the patch of the lowest-numbered incident face. Half-rings only
    /// cross non-wall edges, so stencils never reach across a feature.
    pub fn k_ring_vertices(&self, v: usize, ring: Ring, patch: Option<usize>) -> Result<Stencil> {
        if ring.halves() < 2 {
            return Err(Error::Argument(format!("ring size {ring} is below 1")));
        }
        if v >= self.num_vertices() {
            return Err(Error::Argument(format!("vertex {v} out of range")));
        }
        let patch = patch.or_else(|| self.primary_patch(v));

        let mut in_set: HashSet<usize> = HashSet::new();
        let mut members = vec![v];
        in_set.insert(v);
        let mut face_seen: HashSet<usize> = HashSet::new();
        let mut faces_all: Vec<usize> = Vec::new();

        // frontier: vertices of V_{k-1} not yet expanded
        let mut frontier = vec![v];
        let full = ring.halves() / 2;
        let half = ring.halves() % 2 == 1;

        for level in 1..=full {
            let mut faces_k = Vec::new();
            for &w in &frontier {
                for f in self.ring_faces(w, patch) {
                    if face_seen.insert(f) {
                        faces_k.push(f);
                        faces_all.push(f);
                    }
                }
            }
            let mut next = Vec::new();
            for &f in &faces_k {
                for u in self.triangle(f) {
                    if in_set.insert(u) {
                        members.push(u);
                        next.push(u);
                    }
                }
            }
            if level == full && half {
                for &f in &faces_all {
                    for k in 0..3 {
                        let h = 3 * f + k;
                        if self.is_wall_edge(self.half_edge_edge(h)) {
                            continue;
                        }
                        let g = self.twin(h) / 3;
                        if face_seen.contains(&g) {
                            continue;
                        }
                        for u in self.triangle(g) {
                            if in_set.insert(u) {
                                members.push(u);
                            }
                        }
                    }
                }
            }
            frontier = next;
        }

        Ok(Stencil {
            center: StencilCenter::Vertex(v),
            ring,
            patch,
            members,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::tests::grid;

    #[test]
    fn ring_parsing() {
        assert_eq!(Ring::new(1.5).unwrap().halves(), 3);
        assert!(Ring::new(0.5).is_err());
        assert!(Ring::new(1.25).is_err());
        assert_eq!(Ring::new(2.0).unwrap().grow().value(), 2.5);
    }

    #[test]
    fn grid_ring_counts() {
        let m = grid(8, 8);
        let v = 4 * 9 + 4;
        let r = |x| m.k_ring_vertices(v, Ring::new(x).unwrap(), None).unwrap();
        assert_eq!(r(1.0).len(), 7);
        assert_eq!(r(1.5).len(), 13);
        assert_eq!(r(2.0).len(), 19);
        assert_eq!(r(1.0).members[0], v);
        assert!(m.k_ring_vertices(v, Ring(1), None).is_err());
    }

    #[test]
    fn rings_nest() {
        let m = grid(7, 6);
        for v in 0..m.num_vertices() {
            let mut prev: Vec<usize> = vec![];
            for h in 2..9 {
                let s = m.k_ring_vertices(v, Ring(h), None).unwrap();
                let mut sorted = s.members.clone();
                sorted.sort_unstable();
                sorted.dedup();
                assert_eq!(sorted.len(), s.len());
                assert!(prev.iter().all(|p| sorted.binary_search(p).is_ok()));
                prev = sorted;
            }
        }
    }

    #[test]
    fn feature_line_is_a_wall() {
        let m = grid(6, 6);
        let id = |i: usize, j: usize| j * 7 + i;
        let tags = crate::mesh::FeatureTags {
            edges: (0..6).map(|i| (id(i, 3), id(i + 1, 3))).collect(),
            corners: vec![],
        };
        let m = m.with_features(&tags).unwrap();
        assert_eq!(m.num_patches(), 2);
        let below = m.k_ring_vertices(id(3, 2), Ring::new(3.0).unwrap(), None).unwrap();
        assert!(below.members.iter().all(|&u| m.vertex(u).y <= 3.0));
        // a vertex on the line sees one side per patch
        let on = id(3, 3);
        let ps = m.vertex_patches(on);
        assert_eq!(ps.len(), 2);
        let a = m.k_ring_vertices(on, Ring::new(2.0).unwrap(), Some(ps[0])).unwrap();
        let b = m.k_ring_vertices(on, Ring::new(2.0).unwrap(), Some(ps[1])).unwrap();
        let ya: Vec<f64> = a.members.iter().map(|&u| m.vertex(u).y).collect();
        let yb: Vec<f64> = b.members.iter().map(|&u| m.vertex(u).y).collect();
        assert!(ya.iter().all(|&y| y <= 3.0) || ya.iter().all(|&y| y >= 3.0));
        assert!(yb.iter().all(|&y| y <= 3.0) || yb.iter().all(|&y| y >= 3.0));
    }
}
