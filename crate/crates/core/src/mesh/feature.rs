use std::collections::{BTreeMap, BTreeSet};

use super::{TriMesh, NONE};
use crate::Result;

/// Explicit feature annotations, 0-based.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeatureTags {
    pub edges: Vec<(usize, usize)>,
    pub corners: Vec<usize>,
}

impl FeatureTags {
    /// Merges another tag set into this one, dropping duplicates.
    pub fn merge(&mut self, other: &FeatureTags) {
        let mut e: BTreeSet<(usize, usize)> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        e.extend(other.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))));
        self.edges = e.into_iter().collect();
        let mut c: BTreeSet<usize> = self.corners.iter().copied().collect();
        c.extend(other.corners.iter().copied());
        self.corners = c.into_iter().collect();
    }

    /// Feature edges whose incident face normals differ by more than
    /// `dihedral_deg` degrees.
    pub fn from_dihedral(mesh: &TriMesh, dihedral_deg: f64) -> FeatureTags {
        let cos_limit = dihedral_deg.to_radians().cos();
        let mut edges = Vec::new();
        for (e, &[a, b]) in mesh.edges().iter().enumerate() {
            let [f, g] = mesh.edge_faces(e);
            if g == NONE {
                continue;
            }
            let c = mesh.face_normal(f).dot(&mesh.face_normal(g));
            if c < cos_limit {
                edges.push((a, b));
            }
        }
        FeatureTags {
            edges,
            corners: Vec::new(),
        }
    }
}

/// A maximal polyline of wall edges (feature or boundary). Open chains start
/// and end at corners; closed chains list each vertex once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub vertices: Vec<usize>,
    pub closed: bool,
}

impl Chain {
    pub fn num_edges(&self) -> usize {
        if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    /// Endpoints of the `i`-th edge in chain order.
    pub fn edge(&self, i: usize) -> (usize, usize) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }
}

/// Feature edges, corners and the chains they form together with the
/// boundary.
#[derive(Debug, Clone, Default)]
pub struct FeatureGraph {
    feature_edges: BTreeSet<(usize, usize)>,
    corners: BTreeSet<usize>,
    chains: Vec<Chain>,
    // (lo, hi) -> (chain, edge index within chain)
    edge_chain: BTreeMap<(usize, usize), (usize, usize)>,
    // vertex -> list of (chain, position)
    vertex_chain: BTreeMap<usize, Vec<(usize, usize)>>,
}

impl FeatureGraph {
    pub(crate) fn build(mesh: &TriMesh, tags: &FeatureTags, wall: &[bool]) -> Result<Self> {
        let feature_edges: BTreeSet<(usize, usize)> = tags.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();

        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (e, &[a, b]) in mesh.edges().iter().enumerate() {
            if wall[e] {
                adj.entry(a).or_default().push(b);
                adj.entry(b).or_default().push(a);
            }
        }
        for n in adj.values_mut() {
            n.sort_unstable();
        }

        let mut corners: BTreeSet<usize> = tags.corners.iter().copied().filter(|c| adj.contains_key(c)).collect();
        for (&v, n) in &adj {
            if n.len() != 2 {
                corners.insert(v);
            }
        }

        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let mut visited: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut chains = Vec::new();

        for &c in &corners {
            for &first in &adj[&c] {
                if visited.contains(&key(c, first)) {
                    continue;
                }
                let mut verts = vec![c];
                let (mut prev, mut cur) = (c, first);
                visited.insert(key(prev, cur));
                loop {
                    verts.push(cur);
                    if corners.contains(&cur) {
                        break;
                    }
                    let next = adj[&cur].iter().copied().find(|&n| n != prev).unwrap();
                    if visited.contains(&key(cur, next)) {
                        break;
                    }
                    visited.insert(key(cur, next));
                    prev = cur;
                    cur = next;
                }
                chains.push(Chain {
                    vertices: verts,
                    closed: false,
                });
            }
        }

        for (&start, n) in &adj {
            for &first in n {
                if visited.contains(&key(start, first)) {
                    continue;
                }
                let mut verts = vec![start];
                let (mut prev, mut cur) = (start, first);
                visited.insert(key(prev, cur));
                while cur != start {
                    verts.push(cur);
                    let next = adj[&cur].iter().copied().find(|&n| n != prev).unwrap();
                    visited.insert(key(cur, next));
                    prev = cur;
                    cur = next;
                }
                chains.push(Chain {
                    vertices: verts,
                    closed: true,
                });
            }
        }

        let mut edge_chain = BTreeMap::new();
        let mut vertex_chain: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (ci, ch) in chains.iter().enumerate() {
            for i in 0..ch.num_edges() {
                let (a, b) = ch.edge(i);
                edge_chain.insert(key(a, b), (ci, i));
            }
            for (pos, &v) in ch.vertices.iter().enumerate() {
                vertex_chain.entry(v).or_default().push((ci, pos));
            }
        }

        Ok(FeatureGraph {
            feature_edges,
            corners,
            chains,
            edge_chain,
            vertex_chain,
        })
    }

    /// Explicitly tagged (or detected) feature edges as `(lo, hi)` pairs.
    /// Boundary edges are not listed here but still form chains.
    pub fn feature_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.feature_edges
    }

    pub fn corners(&self) -> &BTreeSet<usize> {
        &self.corners
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn is_corner(&self, v: usize) -> bool {
        self.corners.contains(&v)
    }

    /// True when `v` lies on any chain.
    pub fn is_feature_vertex(&self, v: usize) -> bool {
        self.vertex_chain.contains_key(&v)
    }

    /// Chain and in-chain edge index of the wall edge `(a, b)`.
    pub fn chain_of_edge(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        self.edge_chain.get(&(a.min(b), a.max(b))).copied()
    }

    /// All `(chain, position)` occurrences of `v`.
    pub fn chain_positions(&self, v: usize) -> &[(usize, usize)] {
        self.vertex_chain.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Detects feature edges by dihedral angle and returns the resulting graph
/// (boundary edges are always part of it).
pub fn detect_features(mesh: &TriMesh, dihedral_deg: f64) -> Result<FeatureGraph> {
    let tags = FeatureTags::from_dihedral(mesh, dihedral_deg);
    Ok(mesh.clone().with_features(&tags)?.feature().clone())
}
