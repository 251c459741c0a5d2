use std::f64::consts::PI;

use super::surfaces::ClosestPointResult;
use crate::{Error, Result, Vec3};

/// Analytic test curves.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticCurve {
    /// r(t) = (t cos 6t, t sin 6t, t) for t in [t0, t1].
    ConicalHelix {
        t0: f64,
        t1: f64,
    },
    Circle {
        center: Vec3,
        axis: Vec3,
        radius: f64,
    },
    Polyline(Vec<Vec3>),
}

const HELIX_SAMPLES: usize = 4096;

pub(crate) fn helix_point(t: f64) -> Vec3 {
    let (s, c) = (6.0 * t).sin_cos();
    Vec3::new(t * c, t * s, t)
}

pub(crate) fn helix_d1(t: f64) -> Vec3 {
    let (s, c) = (6.0 * t).sin_cos();
    Vec3::new(c - 6.0 * t * s, s + 6.0 * t * c, 1.0)
}

fn helix_d2(t: f64) -> Vec3 {
    let (s, c) = (6.0 * t).sin_cos();
    Vec3::new(-12.0 * s - 36.0 * t * c, 12.0 * c - 36.0 * t * s, 0.0)
}

impl AnalyticCurve {
    /// The helix over one full parameter range [0, 2π].
    pub fn helix() -> Self {
        AnalyticCurve::ConicalHelix { t0: 0.0, t1: 2.0 * PI }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AnalyticCurve::ConicalHelix { t0, t1 } if t1 > t0 => Ok(()),
            AnalyticCurve::Circle { axis, radius, .. } if *radius > 0.0 && axis.norm() > 0.0 => Ok(()),
            AnalyticCurve::Polyline(p) if p.len() >= 2 => Ok(()),
            _ => Err(Error::Argument(format!("invalid curve parameters {self:?}"))),
        }
    }

    /// Closest point on the curve, with the unit tangent there.
    pub fn closest_point(&self, x: Vec3) -> Result<ClosestPointResult> {
        match self {
            AnalyticCurve::ConicalHelix { t0, t1 } => Ok(helix_closest(x, *t0, *t1)),
            AnalyticCurve::Circle { center, axis, radius } => {
                let a = axis.normalize();
                let rel = x - center;
                let mut radial = rel - a * rel.dot(&a);
                if radial.norm() == 0.0 {
                    // every point is closest; pick a deterministic one
                    let e = if a.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
                    radial = e - a * e.dot(&a);
                }
                let dir = radial.normalize();
                let p = center + dir * *radius;
                Ok(ClosestPointResult {
                    point: p,
                    distance: (x - p).norm(),
                    normal_or_tangent: a.cross(&dir),
                    on_feature: false,
                    part: None,
                    param: None,
                })
            }
            AnalyticCurve::Polyline(pts) => {
                let mut best: Option<(f64, Vec3, Vec3, f64)> = None;
                for (i, w) in pts.windows(2).enumerate() {
                    let d = w[1] - w[0];
                    let l2 = d.norm_squared();
                    if l2 == 0.0 {
                        return Err(Error::Geometry(format!("zero-length polyline segment {i}")));
                    }
                    let s = ((x - w[0]).dot(&d) / l2).clamp(0.0, 1.0);
                    let p = w[0] + d * s;
                    let dist = (x - p).norm();
                    if best.is_none_or(|b| dist < b.0) {
                        best = Some((dist, p, d / l2.sqrt(), i as f64 + s));
                    }
                }
                let (distance, point, tangent, param) =
                    best.ok_or_else(|| Error::Argument("polyline has no segments".into()))?;
                Ok(ClosestPointResult {
                    point,
                    distance,
                    normal_or_tangent: tangent,
                    on_feature: false,
                    part: None,
                    param: Some(param),
                })
            }
        }
    }
}

fn helix_closest(x: Vec3, t0: f64, t1: f64) -> ClosestPointResult {
    let n = HELIX_SAMPLES;
    let dt = (t1 - t0) / n as f64;
    let ts: Vec<f64> = (0..=n).map(|i| t0 + dt * i as f64).collect();
    let d2: Vec<f64> = ts.iter().map(|&t| (helix_point(t) - x).norm_squared()).collect();

    // refine the few best local minima of the sampled distance
    let mut minima: Vec<usize> = (0..=n)
        .filter(|&i| (i == 0 || d2[i] <= d2[i - 1]) && (i == n || d2[i] <= d2[i + 1]))
        .collect();
    minima.sort_by(|&a, &b| d2[a].total_cmp(&d2[b]));
    minima.truncate(4);

    let mut best_t = ts[minima[0]];
    let mut best_d = f64::INFINITY;
    for &i in &minima {
        let lo = ts[i.saturating_sub(1)];
        let hi = ts[(i + 1).min(n)];
        let t = refine_helix(x, ts[i], lo, hi);
        let d = (helix_point(t) - x).norm();
        if d < best_d {
            best_d = d;
            best_t = t;
        }
    }
    let p = helix_point(best_t);
    ClosestPointResult {
        point: p,
        distance: (x - p).norm(),
        normal_or_tangent: helix_d1(best_t).normalize(),
        on_feature: false,
        part: None,
        param: Some(best_t),
    }
}

/// Newton on g(t) = (r(t) − x)·r'(t), kept inside [lo, hi] by bisection.
fn refine_helix(x: Vec3, t_init: f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = |t: f64| (helix_point(t) - x).dot(&helix_d1(t));
    let (glo, ghi) = (g(lo), g(hi));
    if glo >= 0.0 && ghi >= 0.0 {
        return lo;
    }
    if glo <= 0.0 && ghi <= 0.0 {
        return hi;
    }
    let increasing = glo < 0.0;
    let mut t = t_init;
    for _ in 0..100 {
        let gt = g(t);
        if gt.abs() < 1e-12 {
            break;
        }
        if (gt < 0.0) == increasing {
            lo = t;
        } else {
            hi = t;
        }
        let dg = helix_d1(t).norm_squared() + (helix_point(t) - x).dot(&helix_d2(t));
        let mut next = t - gt / dg;
        if !(next > lo && next < hi) || dg <= 0.0 {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() < 1e-16 * (1.0 + t.abs()) {
            t = next;
            break;
        }
        t = next;
    }
    t
}
