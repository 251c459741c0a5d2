use std::f64::consts::PI;

use super::curves::{helix_d1, helix_point};
use super::surfaces::AnalyticSurface;
use crate::mesh::{FeatureTags, RefineProjector, TriMesh};
use crate::{Error, Result, Vec3};

/// Refinement projector backed by an analytic surface.
pub struct SurfaceProjector<'a>(pub &'a AnalyticSurface);

impl RefineProjector for SurfaceProjector<'_> {
    fn project_surface(&self, x: Vec3, hint: Vec3) -> Vec3 {
        let part = self.0.part_of(hint);
        self.0.closest_point_on_part(x, part).map_or(x, |r| r.point)
    }

    fn project_feature(&self, x: Vec3) -> Vec3 {
        self.0.project_to_feature(x).unwrap_or(x)
    }
}

/// Torus grid resolution at level 1 (major x minor direction).
const TORUS_GRID: (usize, usize) = (56, 16);
/// Points on the junction circle of the level-1 double sphere.
const JUNCTION_POINTS: usize = 28;

/// Triangulates an analytic surface. Level 1 is the coarsest mesh; each
/// further level is one uniform refinement with projection.
pub fn generate_mesh(surf: &AnalyticSurface, level: usize) -> Result<TriMesh> {
    if level < 1 {
        return Err(Error::Argument("mesh level must be at least 1".into()));
    }
    surf.validate()?;
    let (mut mesh, extra) = match *surf {
        AnalyticSurface::Sphere { center, radius } => (icosahedron(center, radius)?, 3),
        AnalyticSurface::Torus { major, minor } => (torus_grid(major, minor)?, 0),
        AnalyticSurface::DoubleSphere { .. } => (double_sphere_caps(surf)?, 0),
    };
    let proj = SurfaceProjector(surf);
    for _ in 0..(level - 1 + extra) {
        mesh = mesh.uniform_refine(Some(&proj))?;
    }
    Ok(mesh)
}

/// Flips any triangle whose normal points against the outward direction.
fn orient(verts: &[Vec3], tris: &mut [[usize; 3]], outward: impl Fn(Vec3) -> Vec3) {
    for t in tris.iter_mut() {
        let (a, b, c) = (verts[t[0]], verts[t[1]], verts[t[2]]);
        let n = (b - a).cross(&(c - a));
        if n.dot(&outward((a + b + c) / 3.0)) < 0.0 {
            t.swap(1, 2);
        }
    }
}

fn icosahedron(center: Vec3, radius: f64) -> Result<TriMesh> {
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        (-1.0, g, 0.0),
        (1.0, g, 0.0),
        (-1.0, -g, 0.0),
        (1.0, -g, 0.0),
        (0.0, -1.0, g),
        (0.0, 1.0, g),
        (0.0, -1.0, -g),
        (0.0, 1.0, -g),
        (g, 0.0, -1.0),
        (g, 0.0, 1.0),
        (-g, 0.0, -1.0),
        (-g, 0.0, 1.0),
    ];
    let verts: Vec<Vec3> = raw
        .iter()
        .map(|&(x, y, z)| center + Vec3::new(x, y, z).normalize() * radius)
        .collect();
    let mut tris = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    orient(&verts, &mut tris, |x| x - center);
    TriMesh::new(verts, tris)
}

fn torus_grid(major: f64, minor: f64) -> Result<TriMesh> {
    let (nu, nv) = TORUS_GRID;
    let mut verts = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let phi = 2.0 * PI * i as f64 / nu as f64;
        for j in 0..nv {
            let theta = 2.0 * PI * j as f64 / nv as f64;
            let rr = major + minor * theta.cos();
            verts.push(Vec3::new(rr * phi.cos(), rr * phi.sin(), minor * theta.sin()));
        }
    }
    let id = |i: usize, j: usize| (i % nu) * nv + (j % nv);
    let mut tris = Vec::with_capacity(2 * nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            tris.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            tris.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    let surf = AnalyticSurface::torus(major, minor);
    orient(&verts, &mut tris, |x| {
        surf.closest_point(x).map_or(Vec3::zeros(), |r| r.normal_or_tangent)
    });
    TriMesh::new(verts, tris)
}

/// Connects two concentric rings of vertex ids (angles increasing) by
/// advancing along whichever ring has the smaller next angle.
fn zipper(inner: &[(usize, f64)], outer: &[(usize, f64)], tris: &mut Vec<[usize; 3]>) {
    let (ni, no) = (inner.len(), outer.len());
    let ang = |ring: &[(usize, f64)], k: usize| {
        let n = ring.len();
        ring[k % n].1 + 2.0 * PI * (k / n) as f64
    };
    let (mut a, mut b) = (0usize, 0usize);
    while a < ni || b < no {
        let adv_inner = if a == ni {
            false
        } else if b == no {
            true
        } else {
            ang(inner, a + 1) < ang(outer, b + 1)
        };
        if adv_inner {
            tris.push([inner[a % ni].0, inner[(a + 1) % ni].0, outer[b % no].0]);
            a += 1;
        } else {
            tris.push([inner[a % ni].0, outer[(b + 1) % no].0, outer[b % no].0]);
            b += 1;
        }
    }
}

fn double_sphere_caps(surf: &AnalyticSurface) -> Result<TriMesh> {
    let AnalyticSurface::DoubleSphere { c1, c2, r1, r2 } = *surf else {
        unreachable!()
    };
    let j = surf.junction().unwrap();
    let axis = j.axis;
    let e1 = {
        let t = if axis.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
        (t - axis * t.dot(&axis)).normalize()
    };
    let e2 = axis.cross(&e1);

    let nc = JUNCTION_POINTS;
    let mut verts: Vec<Vec3> = Vec::new();
    let circle: Vec<(usize, f64)> = (0..nc)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / nc as f64;
            verts.push(j.center + (e1 * phi.cos() + e2 * phi.sin()) * j.radius);
            (verts.len() - 1, phi)
        })
        .collect();

    let mut tris = Vec::new();
    // cap 0 is polar about -axis from c1, cap 1 about +axis from c2
    for (c, r, pole_dir) in [(c1, r1, -axis), (c2, r2, axis)] {
        let theta_max = ((j.center - c).dot(&pole_dir) / r).acos();
        let spacing = 2.0 * PI * j.radius / nc as f64;
        let nring = ((r * theta_max / spacing).round() as usize).max(2);
        let pole = verts.len();
        verts.push(c + pole_dir * r);
        let mut prev: Vec<(usize, f64)> = vec![(pole, 0.0)];
        for k in 1..=nring {
            let ring: Vec<(usize, f64)> = if k == nring {
                circle.clone()
            } else {
                let theta = theta_max * k as f64 / nring as f64;
                let n = ((nc as f64 * theta.sin() / theta_max.sin()).round() as usize).max(6);
                let offset = if k % 2 == 1 { PI / n as f64 } else { 0.0 };
                (0..n)
                    .map(|m| {
                        let phi = offset + 2.0 * PI * m as f64 / n as f64;
                        let dir = pole_dir * theta.cos() + (e1 * phi.cos() + e2 * phi.sin()) * theta.sin();
                        verts.push(c + dir * r);
                        (verts.len() - 1, phi)
                    })
                    .collect()
            };
            if prev.len() == 1 {
                let n = ring.len();
                for m in 0..n {
                    tris.push([pole, ring[m].0, ring[(m + 1) % n].0]);
                }
            } else {
                zipper(&prev, &ring, &mut tris);
            }
            prev = ring;
        }
    }
    orient(&verts, &mut tris, |x| {
        let part = surf.part_of(x);
        if part == 0 {
            x - c1
        } else {
            x - c2
        }
    });
    let tags = FeatureTags {
        edges: (0..nc).map(|k| (circle[k].0, circle[(k + 1) % nc].0)).collect(),
        corners: Vec::new(),
    };
    TriMesh::new(verts, tris)?.with_features(&tags)
}

/// Samples of the conical helix at uniformly spaced parameters.
#[derive(Debug, Clone)]
pub struct HelixPolyline {
    pub params: Vec<f64>,
    pub points: Vec<Vec3>,
    pub tangents: Vec<Vec3>,
}

/// `256 · 2^(level−1)` helix vertices over t ∈ [0, 2π], endpoints included.
pub fn helix_polyline(level: usize) -> Result<HelixPolyline> {
    if level < 1 {
        return Err(Error::Argument("helix level must be at least 1".into()));
    }
    let n = 256usize << (level - 1);
    let params: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / (n - 1) as f64).collect();
    let points = params.iter().map(|&t| helix_point(t)).collect();
    let tangents = params.iter().map(|&t| helix_d1(t).normalize()).collect();
    Ok(HelixPolyline {
        params,
        points,
        tangents,
    })
}
