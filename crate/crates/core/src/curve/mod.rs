//! Reconstruction of feature and boundary curves from polyline chains.

use nalgebra::Matrix3;
use rayon::prelude::*;

use crate::geometry::{AnalyticCurve, HelixPolyline};
use crate::mesh::{Chain, FeatureGraph, TriMesh};
use crate::surface::{complete_axis, MethodConfig};
use crate::wls::{
    assemble_curve_system, inverse_distance_weight, rho_constant, safeguard_theta, solve_truncated_qrcp,
    wendland_weight, FitResult, WeightScheme,
};
use crate::{Error, Result, Vec3};

/// Orthonormal right-handed frame `[s | m | b]` with `s` the approximate
/// tangent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveFrame {
    pub origin: Vec3,
    pub axes: Matrix3<f64>,
}

impl CurveFrame {
    pub fn new(origin: Vec3, tangent: Vec3) -> Result<Self> {
        let len = tangent.norm();
        if !(len > 0.0) || !len.is_finite() {
            return Err(Error::Argument("frame tangent has zero length".into()));
        }
        let s = tangent / len;
        let m = complete_axis(&s);
        let b = s.cross(&m);
        Ok(CurveFrame {
            origin,
            axes: Matrix3::from_columns(&[s, m, b]),
        })
    }

    pub fn tangent(&self) -> Vec3 {
        self.axes.column(0).into()
    }

    pub fn normal(&self) -> Vec3 {
        self.axes.column(1).into()
    }

    pub fn binormal(&self) -> Vec3 {
        self.axes.column(2).into()
    }

    pub fn to_local(&self, x: Vec3) -> Vec3 {
        self.axes.tr_mul(&(x - self.origin))
    }

    pub fn rotate_in(&self, d: Vec3) -> Vec3 {
        self.axes.tr_mul(&d)
    }

    pub fn to_global(&self, local: Vec3) -> Vec3 {
        self.origin + self.axes * local
    }
}

/// Vector-valued height fitting `[v(u), w(u)]` at one chain position.
#[derive(Debug, Clone)]
pub struct CurveFitting {
    pub frame: CurveFrame,
    pub fit: FitResult,
    /// Chain positions of the stencil, center first.
    pub stencil: Vec<usize>,
}

impl CurveFitting {
    /// `(c_q, d_q)` for q = 0..=p.
    pub fn coefficients(&self) -> Vec<(f64, f64)> {
        (0..=self.fit.degree)
            .map(|q| (self.fit.coeff(0, q, 0), self.fit.coeff(1, q, 0)))
            .collect()
    }

    pub fn effective_degree(&self) -> usize {
        self.fit.effective_degree
    }

    /// Point of the fitted curve at the local abscissa of `x`.
    pub fn project(&self, x: Vec3) -> Vec3 {
        let u = self.frame.to_local(x).x;
        let [v, w] = self.fit.eval_curve(u);
        self.frame.to_global(Vec3::new(u, v, w))
    }
}

/// Unit tangents at each chain position, oriented along the chain: the
/// normalized average of the two incident edge directions inside the chain
/// and the one-sided edge direction at the ends of an open chain.
pub fn estimate_tangents(points: &[Vec3], chain: &Chain) -> Result<Vec<Vec3>> {
    let n = chain.vertices.len();
    if n < 2 {
        return Err(Error::Argument("chain has fewer than 2 vertices".into()));
    }
    let mut dirs = Vec::with_capacity(chain.num_edges());
    for i in 0..chain.num_edges() {
        let (a, b) = chain.edge(i);
        let d = points[b] - points[a];
        let l = d.norm();
        if !(l > 0.0) {
            return Err(Error::Geometry(format!("zero-length chain edge ({a}, {b})")));
        }
        dirs.push(d / l);
    }
    let ne = dirs.len();
    Ok((0..n)
        .map(|i| {
            if chain.closed {
                (dirs[(i + ne - 1) % ne] + dirs[i]).normalize()
            } else if i == 0 {
                dirs[0]
            } else if i == n - 1 {
                dirs[ne - 1]
            } else {
                let t = dirs[i - 1] + dirs[i];
                if t.norm() > 0.0 {
                    t.normalize()
                } else {
                    dirs[i]
                }
            }
        })
        .collect())
}

/// Smooth chains of a feature graph. Chains already end at corners, so this
/// is a copy.
pub fn split_at_corners(graph: &FeatureGraph) -> Vec<Chain> {
    graph.chains().to_vec()
}

/// Splits a chain at the listed vertices into pieces that share them.
pub fn split_chain(chain: &Chain, is_corner: impl Fn(usize) -> bool) -> Vec<Chain> {
    let n = chain.vertices.len();
    let cuts: Vec<usize> = (0..n).filter(|&i| is_corner(chain.vertices[i])).collect();
    if cuts.is_empty() {
        return vec![chain.clone()];
    }
    let mut out = Vec::new();
    if chain.closed {
        for (k, &a) in cuts.iter().enumerate() {
            let b = if k + 1 < cuts.len() { cuts[k + 1] } else { cuts[0] + n };
            out.push(Chain {
                vertices: (a..=b).map(|i| chain.vertices[i % n]).collect(),
                closed: false,
            });
        }
    } else {
        let mut bounds = vec![0];
        bounds.extend(cuts.iter().copied().filter(|&c| c != 0 && c != n - 1));
        bounds.push(n - 1);
        for w in bounds.windows(2) {
            out.push(Chain {
                vertices: chain.vertices[w[0]..=w[1]].to_vec(),
                closed: false,
            });
        }
    }
    out
}

/// Where curve tangents come from.
#[derive(Debug, Clone, Copy)]
pub enum TangentSource<'a> {
    Estimated,
    /// One tangent per point (sign is fixed up along each chain).
    PerPoint(&'a [Vec3]),
    Oracle(&'a AnalyticCurve),
}

/// Ring size along the chain for a degree-`p` fit.
pub fn curve_ring(degree: usize, hermite: bool) -> usize {
    if hermite {
        (degree + 1).div_ceil(4)
    } else {
        (degree + 1).div_ceil(2)
    }
    .max(1)
}

fn curve_needs_growth(m: usize, degree: usize, hermite: bool) -> bool {
    let n = (degree + 1) as f64;
    if hermite {
        2.0 * (m as f64) < 1.2 * n
    } else {
        (m as f64) < n
    }
}

/// Chain positions within `ring` steps of `pos`, center first, then
/// alternating sides. Open chains are not continued past their ends.
pub(crate) fn chain_stencil(chain: &Chain, pos: usize, ring: usize) -> Vec<usize> {
    let n = chain.vertices.len();
    let mut out = vec![pos];
    for k in 1..=ring {
        for fwd in [false, true] {
            let cand = if chain.closed {
                if 2 * k > n - 1 + usize::from(fwd) {
                    continue;
                }
                Some(if fwd { (pos + k) % n } else { (pos + n - k % n) % n })
            } else if fwd {
                (pos + k < n).then_some(pos + k)
            } else {
                pos.checked_sub(k)
            };
            if let Some(c) = cand {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
    }
    out
}

const MAX_CURVE_RING: usize = 16;

/// Reconstruction of a set of chains over shared points.
pub struct CurveReconstructor {
    points: Vec<Vec3>,
    chains: Vec<Chain>,
    tangents: Vec<Vec<Vec3>>,
    cfg: MethodConfig,
    fittings: Option<Vec<Vec<std::result::Result<CurveFitting, String>>>>,
}

impl CurveReconstructor {
    pub fn new(points: Vec<Vec3>, chains: Vec<Chain>, tangents: TangentSource<'_>, cfg: MethodConfig) -> Result<Self> {
        if cfg.degree < 1 {
            return Err(Error::Argument("degree must be at least 1".into()));
        }
        let mut all = Vec::with_capacity(chains.len());
        for ch in &chains {
            let est = estimate_tangents(&points, ch)?;
            let t = match tangents {
                TangentSource::Estimated => est,
                TangentSource::PerPoint(tp) => ch.vertices.iter().zip(&est).map(|(&v, e)| orient(tp[v], e)).collect(),
                TangentSource::Oracle(curve) => ch
                    .vertices
                    .iter()
                    .zip(&est)
                    .map(|(&v, e)| Ok(orient(curve.closest_point(points[v])?.normal_or_tangent, e)))
                    .collect::<Result<_>>()?,
            };
            all.push(t);
        }
        let mut rec = CurveReconstructor {
            points,
            chains,
            tangents: all,
            cfg,
            fittings: None,
        };
        if cfg.method.is_walf() {
            let fits = (0..rec.chains.len())
                .map(|c| {
                    (0..rec.chains[c].vertices.len())
                        .into_par_iter()
                        .map(|i| rec.fit_position(c, i).map_err(|e| e.to_string()))
                        .collect()
                })
                .collect();
            rec.fittings = Some(fits);
        }
        Ok(rec)
    }

    /// Chains of a mesh's feature graph over its vertices.
    pub fn from_mesh(mesh: &TriMesh, tangents: TangentSource<'_>, cfg: MethodConfig) -> Result<Self> {
        Self::new(
            mesh.vertices().to_vec(),
            split_at_corners(mesh.feature()),
            tangents,
            cfg,
        )
    }

    /// The open helix polyline with its exact tangents (or estimated ones).
    pub fn from_helix(poly: &HelixPolyline, exact_tangents: bool, cfg: MethodConfig) -> Result<Self> {
        let chain = Chain {
            vertices: (0..poly.points.len()).collect(),
            closed: false,
        };
        let src = if exact_tangents {
            TangentSource::PerPoint(&poly.tangents)
        } else {
            TangentSource::Estimated
        };
        Self::new(poly.points.clone(), vec![chain], src, cfg)
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn tangents(&self, chain: usize) -> &[Vec3] {
        &self.tangents[chain]
    }

    fn is_end(&self, chain: usize, pos: usize) -> bool {
        let ch = &self.chains[chain];
        !ch.closed && (pos == 0 || pos + 1 == ch.vertices.len())
    }

    fn stencil(&self, chain: usize, pos: usize) -> Vec<usize> {
        let ch = &self.chains[chain];
        let hermite = self.cfg.method.is_hermite();
        let mut ring = curve_ring(self.cfg.degree, hermite);
        let mut s = chain_stencil(ch, pos, ring);
        while curve_needs_growth(s.len(), self.cfg.degree, hermite) && ring < MAX_CURVE_RING {
            ring += 1;
            let next = chain_stencil(ch, pos, ring);
            if next.len() == s.len() {
                break;
            }
            s = next;
        }
        s
    }

    fn mean_incident_edge(&self, chain: usize, pos: usize) -> f64 {
        let ch = &self.chains[chain];
        let n = ch.vertices.len();
        let x = self.points[ch.vertices[pos]];
        let mut sum = 0.0;
        let mut k = 0;
        let prev = if ch.closed {
            Some((pos + n - 1) % n)
        } else {
            pos.checked_sub(1)
        };
        let next = if ch.closed {
            Some((pos + 1) % n)
        } else {
            (pos + 1 < n).then_some(pos + 1)
        };
        for q in [prev, next].into_iter().flatten() {
            sum += (self.points[ch.vertices[q]] - x).norm();
            k += 1;
        }
        sum / k as f64
    }

    fn solve(
        &self,
        frame: &CurveFrame,
        chain: usize,
        members: &[usize],
        h: f64,
        interpolatory: bool,
    ) -> Result<FitResult> {
        let ch = &self.chains[chain];
        let p = self.cfg.degree;
        let t0 = frame.tangent();
        let local: Vec<Vec3> = members
            .iter()
            .map(|&i| frame.to_local(self.points[ch.vertices[i]]))
            .collect();
        let u: Vec<f64> = local.iter().map(|l| l.x).collect();
        let heights: Vec<[f64; 2]> = local.iter().map(|l| [l.y, l.z]).collect();
        let theta: Vec<f64> = members
            .iter()
            .map(|&i| safeguard_theta(&self.tangents[chain][i], &t0))
            .collect();
        let weights: Vec<f64> = match self.cfg.weights {
            WeightScheme::Wendland => {
                let mut d: Vec<f64> = u.iter().map(|x| x.abs()).collect();
                d.sort_by(f64::total_cmp);
                let k = (3 * (p + 1)).div_ceil(2).min(d.len());
                let rho = rho_constant(p) * d[k - 1];
                if !(rho > 0.0) {
                    return Err(Error::DegenerateStencil("curve stencil radius is zero".into()));
                }
                u.iter()
                    .zip(&theta)
                    .map(|(x, t)| t * wendland_weight(x.abs() / rho, p))
                    .collect()
            }
            WeightScheme::InverseDistance => u
                .iter()
                .zip(&theta)
                .map(|(x, &t)| inverse_distance_weight(t, x.abs() / h, p))
                .collect(),
        };
        let slopes: Vec<Option<[f64; 2]>> = if self.cfg.method.is_hermite() {
            members
                .iter()
                .map(|&i| {
                    let r = frame.rotate_in(self.tangents[chain][i]);
                    (r.x > 0.0).then(|| [r.y / r.x, r.z / r.x])
                })
                .collect()
        } else {
            vec![None; members.len()]
        };
        let sys = assemble_curve_system(&u, &heights, &slopes, &weights, p, h, interpolatory)?;
        solve_truncated_qrcp(&sys, self.cfg.cond_limit)
    }

    /// Fitting at position `pos` of `chain`. Fits at the ends of open chains
    /// are always interpolatory.
    pub fn fit_position(&self, chain: usize, pos: usize) -> Result<CurveFitting> {
        let ch = &self.chains[chain];
        let frame = CurveFrame::new(self.points[ch.vertices[pos]], self.tangents[chain][pos])?;
        let stencil = self.stencil(chain, pos);
        let h = self.mean_incident_edge(chain, pos);
        let interp = self.cfg.interpolatory || self.is_end(chain, pos);
        let fit = self.solve(&frame, chain, &stencil, h, interp).map_err(|e| match e {
            Error::DegenerateStencil(m) => Error::DegenerateStencil(format!("chain {chain} position {pos}: {m}")),
            other => other,
        })?;
        Ok(CurveFitting { frame, fit, stencil })
    }

    fn fitting(&self, chain: usize, pos: usize) -> Result<std::borrow::Cow<'_, CurveFitting>> {
        match &self.fittings {
            Some(all) => match &all[chain][pos] {
                Ok(f) => Ok(std::borrow::Cow::Borrowed(f)),
                Err(e) => Err(Error::DegenerateStencil(e.clone())),
            },
            None => Ok(std::borrow::Cow::Owned(self.fit_position(chain, pos)?)),
        }
    }

    /// Reconstructed point at parameter `s` of edge `edge` of `chain`,
    /// using the configured method.
    pub fn project(&self, chain: usize, edge: usize, s: f64) -> Result<Vec3> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::Argument(format!("edge parameter {s} outside [0, 1]")));
        }
        let ch = &self.chains[chain];
        if edge >= ch.num_edges() {
            return Err(Error::Argument(format!("chain {chain} has no edge {edge}")));
        }
        let i = edge;
        let j = (edge + 1) % ch.vertices.len();
        if s == 0.0 && self.is_end(chain, i) {
            return Ok(self.points[ch.vertices[i]]);
        }
        if s == 1.0 && self.is_end(chain, j) {
            return Ok(self.points[ch.vertices[j]]);
        }
        let x = self.points[ch.vertices[i]] * (1.0 - s) + self.points[ch.vertices[j]] * s;
        if self.cfg.method.is_walf() {
            let mut q = Vec3::zeros();
            if s < 1.0 {
                q += self.fitting(chain, i)?.project(x) * (1.0 - s);
            }
            if s > 0.0 {
                q += self.fitting(chain, j)?.project(x) * s;
            }
            Ok(q)
        } else {
            let t = self.tangents[chain][i] * (1.0 - s) + self.tangents[chain][j] * s;
            let frame = CurveFrame::new(x, t)?;
            let mut members = self.stencil(chain, i);
            for k in self.stencil(chain, j) {
                if !members.contains(&k) {
                    members.push(k);
                }
            }
            let h = (self.points[ch.vertices[j]] - self.points[ch.vertices[i]]).norm();
            let fit = self.solve(&frame, chain, &members, h, false)?;
            let [v, w] = fit.eval_curve(0.0);
            Ok(frame.to_global(Vec3::new(0.0, v, w)))
        }
    }

    /// Reconstructed point on the mesh edge `(a, b)` at `s` measured from `a`.
    pub fn project_edge(&self, a: usize, b: usize, s: f64) -> Result<Vec3> {
        for (c, ch) in self.chains.iter().enumerate() {
            for e in 0..ch.num_edges() {
                let (x, y) = ch.edge(e);
                if (x, y) == (a, b) {
                    return self.project(c, e, s);
                }
                if (x, y) == (b, a) {
                    return self.project(c, e, 1.0 - s);
                }
            }
        }
        Err(Error::Argument(format!("({a}, {b}) is not a chain edge")))
    }
}

fn orient(t: Vec3, reference: &Vec3) -> Vec3 {
    let t = t.normalize();
    if t.dot(reference) < 0.0 {
        -t
    } else {
        t
    }
}

/// Fitting at position `pos` of a single chain (not cached).
pub fn fit_curve_vertex(
    points: &[Vec3],
    chain: &Chain,
    pos: usize,
    tangents: TangentSource<'_>,
    cfg: &MethodConfig,
) -> Result<CurveFitting> {
    let rec = CurveReconstructor::new(
        points.to_vec(),
        vec![chain.clone()],
        tangents,
        MethodConfig {
            method: if cfg.method.is_hermite() {
                crate::surface::Method::HCmf
            } else {
                crate::surface::Method::Cmf
            },
            ..*cfg
        },
    )?;
    rec.fit_position(0, pos)
}

/// One-off projection at parameter `s` of edge `edge` of a single chain.
pub fn project_point_curve(
    points: &[Vec3],
    chain: &Chain,
    edge: usize,
    s: f64,
    tangents: TangentSource<'_>,
    cfg: &MethodConfig,
) -> Result<Vec3> {
    CurveReconstructor::new(points.to_vec(), vec![chain.clone()], tangents, *cfg)?.project(0, edge, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Method;
    use std::f64::consts::PI;

    fn open(n: usize) -> Chain {
        Chain {
            vertices: (0..n).collect(),
            closed: false,
        }
    }

    fn circle(n: usize) -> (Vec<Vec3>, Chain) {
        let pts = (0..n)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / n as f64;
                Vec3::new(a.cos(), a.sin(), 0.0)
            })
            .collect();
        (
            pts,
            Chain {
                vertices: (0..n).collect(),
                closed: true,
            },
        )
    }

    #[test]
    fn frame_is_right_handed() {
        let f = CurveFrame::new(Vec3::zeros(), Vec3::new(1.0, 2.0, -0.5)).unwrap();
        assert!((f.axes.determinant() - 1.0).abs() < 1e-12);
        assert!((f.axes.transpose() * f.axes - Matrix3::identity()).norm() < 1e-12);
    }

    #[test]
    fn straight_line() {
        let pts: Vec<Vec3> = (0..7).map(|i| Vec3::new(1.0, 2.0, 0.5) * i as f64).collect();
        let t = estimate_tangents(&pts, &open(7)).unwrap();
        let d = Vec3::new(1.0, 2.0, 0.5).normalize();
        assert!(t.iter().all(|x| (x - d).norm() < 1e-15));
        let cfg = MethodConfig::new(Method::Cmf, 2);
        let f = fit_curve_vertex(&pts, &open(7), 3, TangentSource::Estimated, &cfg).unwrap();
        for (c, d) in f.coefficients() {
            assert!(c.abs() < 1e-12 && d.abs() < 1e-12);
        }
    }

    #[test]
    fn polygon_tangents_are_second_order() {
        let err = |n| {
            let (p, ch) = circle(n);
            let t = estimate_tangents(&p, &ch).unwrap();
            (0..n).map(|i| t[i].dot(&p[i]).abs()).fold(0.0, f64::max)
        };
        // exact by symmetry on a regular polygon
        assert!(err(16) < 1e-14 && err(64) < 1e-14);
    }

    #[test]
    fn l_chain_corner() {
        let pts = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(2.0, 0.0, 0.0),
            Vec3::new(2.0, 1.0, 0.0),
            Vec3::new(2.0, 2.0, 0.0),
        ];
        let parts = split_chain(&open(5), |v| v == 2);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].vertices, vec![0, 1, 2]);
        assert_eq!(parts[1].vertices, vec![2, 3, 4]);
        let t0 = estimate_tangents(&pts, &parts[0]).unwrap();
        let t1 = estimate_tangents(&pts, &parts[1]).unwrap();
        assert_eq!(t0[2], Vec3::x());
        assert_eq!(t1[0], Vec3::y());
        let (_, c) = circle(8);
        assert_eq!(split_chain(&c, |_| false).len(), 1);
    }

    #[test]
    fn hermite_parabola() {
        let pts: Vec<Vec3> = (-3..=3)
            .map(|i| i as f64 * 0.1)
            .map(|u| Vec3::new(u, u * u, 0.0))
            .collect();
        let tans: Vec<Vec3> = pts.iter().map(|p| Vec3::new(1.0, 2.0 * p.x, 0.0).normalize()).collect();
        let cfg = MethodConfig::new(Method::HCmf, 2);
        let f = fit_curve_vertex(&pts, &open(7), 3, TangentSource::PerPoint(&tans), &cfg).unwrap();
        // frame axes at the vertex: s = x, m = y, b = z
        assert_eq!(f.frame.normal(), Vec3::y());
        let c = f.coefficients();
        assert!((c[2].0 - 1.0).abs() < 1e-10);
        assert!(c.iter().all(|x| x.1.abs() < 1e-10));
        assert!(c[1].0.abs() < 1e-10);
    }

    #[test]
    fn stencil_rings() {
        assert_eq!(curve_ring(4, true), 2);
        assert_eq!(curve_ring(6, false), 4);
        assert_eq!(chain_stencil(&open(10), 1, 2), vec![1, 0, 2, 3]);
        let (_, c) = circle(5);
        assert_eq!(chain_stencil(&c, 0, 4), vec![0, 4, 1, 3, 2]);
    }

    #[test]
    fn walf_endpoints_and_continuity() {
        let (p, ch) = circle(24);
        let cfg = MethodConfig::new(Method::Walf, 4);
        let rec = CurveReconstructor::new(p.clone(), vec![ch], TangentSource::Estimated, cfg).unwrap();
        for e in 0..24 {
            let a = rec.project(0, e, 1.0).unwrap();
            let b = rec.project(0, (e + 1) % 24, 0.0).unwrap();
            assert!((a - b).norm() < 1e-12);
            assert!((rec.project(0, e, 0.0).unwrap() - p[e]).norm() < 1e-14);
        }
    }

    #[test]
    fn circle_midpoint_convergence() {
        let err = |n| {
            let (p, ch) = circle(n);
            let cfg = MethodConfig::new(Method::Walf, 2);
            let rec = CurveReconstructor::new(p, vec![ch], TangentSource::Estimated, cfg).unwrap();
            let q = rec.project(0, 0, 0.5).unwrap();
            (q.norm() - 1.0).abs()
        };
        let flat = 1.0 - (PI / 32.0).cos();
        let (e1, e2) = (err(32), err(64));
        assert!(e1 < flat);
        assert!((e1 / e2).log2() > 3.5, "{e1} {e2}");
    }
}
