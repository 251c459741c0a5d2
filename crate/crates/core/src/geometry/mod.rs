//! Analytic test geometries: closest-point oracles and mesh generators.

mod curves;
mod generate;
mod surfaces;

use std::str::FromStr;

pub use curves::AnalyticCurve;
pub use generate::{generate_mesh, helix_polyline, HelixPolyline, SurfaceProjector};
pub use surfaces::{AnalyticSurface, ClosestPointResult};

use crate::{Error, Result, Vec3};

/// Closest point on a surface (see [`AnalyticSurface::closest_point`]).
pub fn closest_point_surface(surf: &AnalyticSurface, x: Vec3) -> Result<ClosestPointResult> {
    surf.closest_point(x)
}

/// Closest point on a curve (see [`AnalyticCurve::closest_point`]).
pub fn closest_point_curve(curve: &AnalyticCurve, x: Vec3) -> Result<ClosestPointResult> {
    curve.closest_point(x)
}

/// Outward normal at an on-surface point; `part` picks the side on a feature.
pub fn surface_normal(surf: &AnalyticSurface, x: Vec3, part: Option<usize>) -> Result<Vec3> {
    surf.surface_normal(x, part)
}

/// A geometry named on the command line: `sphere:r=1`, `torus:R=1,r=0.3`,
/// `double_sphere` or `helix`.
#[derive(Debug, Clone, PartialEq)]
pub enum GeometrySpec {
    Surface(AnalyticSurface),
    Helix,
}

impl GeometrySpec {
    pub fn surface(&self) -> Option<&AnalyticSurface> {
        match self {
            GeometrySpec::Surface(s) => Some(s),
            GeometrySpec::Helix => None,
        }
    }
}

fn parse_params(s: &str) -> Result<Vec<(String, f64)>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Argument(format!("expected key=value, got '{kv}'")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Argument(format!("invalid number in '{kv}'")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

impl FromStr for GeometrySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let params = parse_params(rest)?;
        let get = |key: &str, default: f64| params.iter().find(|(k, _)| k == key).map_or(default, |&(_, v)| v);
        let known = |keys: &[&str]| -> Result<()> {
            match params.iter().find(|(k, _)| !keys.contains(&k.as_str())) {
                Some((k, _)) => Err(Error::Argument(format!("unknown parameter '{k}' for {name}"))),
                None => Ok(()),
            }
        };
        let spec = match name {
            "sphere" => {
                known(&["r"])?;
                GeometrySpec::Surface(AnalyticSurface::Sphere {
                    center: Vec3::zeros(),
                    radius: get("r", 1.0),
                })
            }
            "torus" => {
                known(&["R", "r"])?;
                GeometrySpec::Surface(AnalyticSurface::torus(get("R", 1.0), get("r", 0.3)))
            }
            "double_sphere" => {
                known(&[])?;
                GeometrySpec::Surface(AnalyticSurface::double_sphere())
            }
            "helix" => {
                known(&[])?;
                GeometrySpec::Helix
            }
            _ => return Err(Error::Argument(format!("unknown geometry '{s}'"))),
        };
        if let GeometrySpec::Surface(surf) = &spec {
            surf.validate()?;
        }
        Ok(spec)
    }
}
