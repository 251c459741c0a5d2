use super::frame::LocalFrame;
use super::MethodConfig;
use crate::mesh::{Ring, Stencil, TriMesh};
use crate::wls::{
    assemble_system, inverse_distance_weight, monomial_count, safeguard_theta, solve_truncated_qrcp,
    stencil_radius_rho, wendland_weight, FitResult, WeightScheme,
};
use crate::{Error, Result, Vec3};

/// Default ring size for a degree-`p` fitting.
pub fn initial_ring(degree: usize, hermite: bool) -> Ring {
    let halves = if hermite {
        match degree {
            0..=4 => 2,
            5 => 3,
            6 | 7 => 4,
            p => p - 3,
        }
    } else {
        (degree + 1).max(2)
    };
    Ring::from_halves(halves as u32).expect("ring table entries are at least 1")
}

/// True while a stencil of `m` points is too small for a degree-`p` fit.
fn needs_growth(m: usize, degree: usize, hermite: bool) -> bool {
    let n = monomial_count(degree) as f64;
    if hermite {
        3.0 * (m as f64) < 1.2 * n
    } else {
        (m as f64) < n
    }
}

const MAX_RING_HALVES: u32 = 20;

/// Stencil for a vertex fitting: the default ring for the degree, grown by
/// half-rings while it holds too few points for the number of unknowns.
/// Restricted to `patch` (see [`TriMesh::k_ring_vertices`]).
pub fn select_stencil(mesh: &TriMesh, v: usize, degree: usize, hermite: bool, patch: Option<usize>) -> Result<Stencil> {
    let mut ring = initial_ring(degree, hermite);
    let mut s = mesh.k_ring_vertices(v, ring, patch)?;
    let mut stalled = 0;
    while needs_growth(s.len(), degree, hermite) && ring.halves() < MAX_RING_HALVES {
        ring = ring.grow();
        let next = mesh.k_ring_vertices(v, ring, patch)?;
        stalled = if next.len() == s.len() { stalled + 1 } else { 0 };
        s = next;
        if stalled >= 2 {
            break;
        }
    }
    Ok(s)
}

/// Fits a height function in `frame` to the given points and normals.
///
/// With `interpolatory`, point 0 must be the frame origin.
pub(crate) fn fit_in_frame(
    frame: &LocalFrame,
    points: &[Vec3],
    normals: &[Vec3],
    h: f64,
    interpolatory: bool,
    hermite: bool,
    cfg: &MethodConfig,
) -> Result<FitResult> {
    let m0 = frame.normal();
    let p = cfg.degree;
    let local: Vec<Vec3> = points.iter().map(|&x| frame.to_local(x)).collect();
    let uv: Vec<[f64; 2]> = local.iter().map(|l| [l.x, l.y]).collect();
    let heights: Vec<f64> = local.iter().map(|l| l.z).collect();
    let theta: Vec<f64> = normals.iter().map(|n| safeguard_theta(n, &m0)).collect();

    let weights: Vec<f64> = match cfg.weights {
        WeightScheme::Wendland => {
            let rho = stencil_radius_rho(&uv, p)?;
            if !(rho > 0.0) {
                return Err(Error::DegenerateStencil("stencil radius is zero".into()));
            }
            uv.iter()
                .zip(&theta)
                .map(|(u, t)| t * wendland_weight(u[0].hypot(u[1]) / rho, p))
                .collect()
        }
        WeightScheme::InverseDistance => uv
            .iter()
            .zip(&theta)
            .map(|(u, &t)| inverse_distance_weight(t, u[0].hypot(u[1]) / h, p))
            .collect(),
    };

    let gradients: Vec<Option<[f64; 2]>> = if hermite {
        normals
            .iter()
            .map(|n| {
                let r = frame.rotate_in(*n);
                (r.z > 0.0).then(|| [-r.x / r.z, -r.y / r.z])
            })
            .collect()
    } else {
        vec![None; points.len()]
    };

    let sys = assemble_system(&uv, &heights, &gradients, &weights, p, h, interpolatory)?;
    solve_truncated_qrcp(&sys, cfg.cond_limit)
}
