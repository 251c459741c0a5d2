#![allow(dead_code)]

use std::collections::HashMap;

use hosr::mesh::TriMesh;
use hosr::Vec3;

/// Regular grid of the unit square split into right triangles, lying in z = 0.
pub fn grid(nx: usize, ny: usize) -> TriMesh {
    let mut v = Vec::new();
    for j in 0..=ny {
        for i in 0..=nx {
            v.push(Vec3::new(i as f64 / nx as f64, j as f64 / ny as f64, 0.0));
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

/// Surface of the unit cube with `n × n` quads per face, outward oriented.
pub fn cube(n: usize) -> TriMesh {
    let mut verts: Vec<Vec3> = Vec::new();
    let mut lookup: HashMap<(i64, i64, i64), usize> = HashMap::new();
    let mut tris = Vec::new();
    let nf = n as f64;
    let mut id = |p: Vec3, verts: &mut Vec<Vec3>| {
        let k = (
            (p.x * nf).round() as i64,
            (p.y * nf).round() as i64,
            (p.z * nf).round() as i64,
        );
        *lookup.entry(k).or_insert_with(|| {
            verts.push(p);
            verts.len() - 1
        })
    };
    for axis in 0..3 {
        for side in 0..2 {
            let (a1, a2) = ((axis + 1) % 3, (axis + 2) % 3);
            for i in 0..n {
                for j in 0..n {
                    let corner = |di: usize, dj: usize| {
                        let mut p = Vec3::zeros();
                        p[axis] = side as f64;
                        p[a1] = (i + di) as f64 / nf;
                        p[a2] = (j + dj) as f64 / nf;
                        p
                    };
                    let q = [
                        id(corner(0, 0), &mut verts),
                        id(corner(1, 0), &mut verts),
                        id(corner(1, 1), &mut verts),
                        id(corner(0, 1), &mut verts),
                    ];
                    if side == 1 {
                        tris.push([q[0], q[1], q[2]]);
                        tris.push([q[0], q[2], q[3]]);
                    } else {
                        tris.push([q[0], q[2], q[1]]);
                        tris.push([q[0], q[3], q[2]]);
                    }
                }
            }
        }
    }
    TriMesh::new(verts, tris).unwrap()
}

/// Exponents `(j, k)` with `j + k ≤ p`, graded order.
pub fn exponents(p: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for d in 0..=p {
        for k in 0..=d {
            out.push((d - k, k));
        }
    }
    out
}

pub fn poly_eval(c: &[f64], terms: &[(usize, usize)], u: f64, v: f64) -> f64 {
    terms
        .iter()
        .zip(c)
        .map(|(&(j, k), a)| a * u.powi(j as i32) * v.powi(k as i32))
        .sum()
}

pub fn poly_grad(c: &[f64], terms: &[(usize, usize)], u: f64, v: f64) -> [f64; 2] {
    let mut g = [0.0; 2];
    for (&(j, k), a) in terms.iter().zip(c) {
        if j > 0 {
            g[0] += a * j as f64 * u.powi(j as i32 - 1) * v.powi(k as i32);
        }
        if k > 0 {
            g[1] += a * k as f64 * u.powi(j as i32) * v.powi(k as i32 - 1);
        }
    }
    g
}

/// Jittered `n × n` lattice on `[-1, 1]²` with the origin as point 0.
pub fn jittered_points(n: usize, jitter: f64, rng: &mut impl rand::Rng) -> Vec<[f64; 2]> {
    let mut pts = vec![[0.0, 0.0]];
    for j in 0..n {
        for i in 0..n {
            let u = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
            let v = -1.0 + 2.0 * j as f64 / (n - 1) as f64;
            if u == 0.0 && v == 0.0 {
                continue;
            }
            pts.push([u + rng.gen_range(-jitter..jitter), v + rng.gen_range(-jitter..jitter)]);
        }
    }
    pts
}
