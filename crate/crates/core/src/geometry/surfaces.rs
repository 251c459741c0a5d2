use crate::{Error, Result, Vec3};

/// Closest point on an analytic surface or curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosestPointResult {
    pub point: Vec3,
    pub distance: f64,
    /// Outward unit normal for surfaces, unit tangent for curves.
    pub normal_or_tangent: Vec3,
    /// True when the closest point lies on a sharp feature.
    pub on_feature: bool,
    /// Smooth piece that owns the point (the cap of a double sphere), if any.
    pub part: Option<usize>,
    /// Curve parameter of the closest point, for parametric curves.
    pub param: Option<f64>,
}

/// Analytic test surfaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticSurface {
    Sphere {
        center: Vec3,
        radius: f64,
    },
    /// Outer boundary of the union of two intersecting spheres; the
    /// intersection circle is a sharp feature.
    DoubleSphere {
        c1: Vec3,
        c2: Vec3,
        r1: f64,
        r2: f64,
    },
    /// Torus about the z axis through the origin.
    Torus {
        major: f64,
        minor: f64,
    },
}

/// Plane and circle where the spheres of a double sphere meet.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Junction {
    pub axis: Vec3,
    /// Signed distance from `c1` to the plane along `axis`.
    pub offset: f64,
    pub center: Vec3,
    pub radius: f64,
}

impl AnalyticSurface {
    pub fn unit_sphere() -> Self {
        AnalyticSurface::Sphere {
            center: Vec3::zeros(),
            radius: 1.0,
        }
    }

    pub fn torus(major: f64, minor: f64) -> Self {
        AnalyticSurface::Torus { major, minor }
    }

    /// Two unit spheres centered at the origin and at (0.5, 0, 0).
    pub fn double_sphere() -> Self {
        AnalyticSurface::DoubleSphere {
            c1: Vec3::zeros(),
            c2: Vec3::new(0.5, 0.0, 0.0),
            r1: 1.0,
            r2: 1.0,
        }
    }

    /// Checks the parameter invariants.
    pub fn validate(&self) -> Result<()> {
        match *self {
            AnalyticSurface::Sphere { radius, .. } if radius > 0.0 => Ok(()),
            AnalyticSurface::Torus { major, minor } if minor > 0.0 && major > minor => Ok(()),
            AnalyticSurface::DoubleSphere { c1, c2, r1, r2 } => {
                let d = (c2 - c1).norm();
                if r1 > 0.0 && r2 > 0.0 && d < r1 + r2 && d > (r1 - r2).abs() {
                    Ok(())
                } else {
                    Err(Error::Argument("double sphere: spheres do not intersect".into()))
                }
            }
            _ => Err(Error::Argument(format!("invalid surface parameters {self:?}"))),
        }
    }

    pub(crate) fn junction(&self) -> Option<Junction> {
        match *self {
            AnalyticSurface::DoubleSphere { c1, c2, r1, r2 } => {
                let d = c2 - c1;
                let l = d.norm();
                let axis = d / l;
                let offset = (l * l + r1 * r1 - r2 * r2) / (2.0 * l);
                Some(Junction {
                    axis,
                    offset,
                    center: c1 + axis * offset,
                    radius: (r1 * r1 - offset * offset).sqrt(),
                })
            }
            _ => None,
        }
    }

    /// Smooth piece on the side of `x`: for a double sphere, 0 for the cap
    /// of the first sphere and 1 for the second; 0 otherwise.
    pub fn part_of(&self, x: Vec3) -> usize {
        match (self, self.junction()) {
            (AnalyticSurface::DoubleSphere { c1, .. }, Some(j)) => usize::from((x - c1).dot(&j.axis) > j.offset),
            _ => 0,
        }
    }

    /// Closest point on the surface.
    pub fn closest_point(&self, x: Vec3) -> Result<ClosestPointResult> {
        match *self {
            AnalyticSurface::Sphere { center, radius } => {
                let d = x - center;
                let n = d.norm();
                if n == 0.0 {
                    return Err(Error::Ambiguous("query at the sphere center".into()));
                }
                let dir = d / n;
                Ok(ClosestPointResult {
                    point: center + dir * radius,
                    distance: (n - radius).abs(),
                    normal_or_tangent: dir,
                    on_feature: false,
                    part: Some(0),
                    param: None,
                })
            }
            AnalyticSurface::Torus { major, minor } => {
                let rho = x.x.hypot(x.y);
                if rho == 0.0 {
                    return Err(Error::Ambiguous("query on the torus axis".into()));
                }
                let c = Vec3::new(x.x / rho * major, x.y / rho * major, 0.0);
                let w = x - c;
                let wn = w.norm();
                if wn == 0.0 {
                    return Err(Error::Ambiguous("query on the torus core circle".into()));
                }
                let dir = w / wn;
                Ok(ClosestPointResult {
                    point: c + dir * minor,
                    distance: (wn - minor).abs(),
                    normal_or_tangent: dir,
                    on_feature: false,
                    part: Some(0),
                    param: None,
                })
            }
            AnalyticSurface::DoubleSphere { c1, c2, r1, r2 } => {
                let j = self.junction().unwrap();
                let mut best: Option<ClosestPointResult> = None;
                fn consider(best: &mut Option<ClosestPointResult>, c: ClosestPointResult) {
                    if best.is_none_or(|b| c.distance < b.distance) {
                        *best = Some(c);
                    }
                }
                for (cap, (c, r)) in [(c1, r1), (c2, r2)].into_iter().enumerate() {
                    let d = x - c;
                    let n = d.norm();
                    if n == 0.0 {
                        continue;
                    }
                    let p = c + d * (r / n);
                    let s = (p - c1).dot(&j.axis) - j.offset;
                    let inside = if cap == 0 { s <= 0.0 } else { s >= 0.0 };
                    if inside {
                        consider(
                            &mut best,
                            ClosestPointResult {
                                point: p,
                                distance: (n - r).abs(),
                                normal_or_tangent: d / n,
                                on_feature: false,
                                part: Some(cap),
                                param: None,
                            },
                        );
                    }
                }
                let rel = x - j.center;
                let along = rel.dot(&j.axis);
                let radial = rel - j.axis * along;
                let rn = radial.norm();
                let circle_dist = (along * along + (rn - j.radius).powi(2)).sqrt();
                if best.is_none_or(|b| circle_dist < b.distance) {
                    if rn == 0.0 {
                        return Err(Error::Ambiguous("query on the axis of the junction circle".into()));
                    }
                    let p = j.center + radial * (j.radius / rn);
                    let n1 = (p - c1) / r1;
                    let n2 = (p - c2) / r2;
                    consider(
                        &mut best,
                        ClosestPointResult {
                            point: p,
                            distance: (x - p).norm(),
                            normal_or_tangent: (n1 + n2).normalize(),
                            on_feature: true,
                            part: None,
                            param: None,
                        },
                    );
                }
                best.ok_or_else(|| Error::Ambiguous("no closest point candidate".into()))
            }
        }
    }

    /// Closest point restricted to one smooth piece (the given cap of a
    /// double sphere, clamped to its boundary circle).
    pub fn closest_point_on_part(&self, x: Vec3, part: usize) -> Result<ClosestPointResult> {
        match (*self, self.junction()) {
            (AnalyticSurface::DoubleSphere { c1, c2, r1, r2 }, Some(j)) => {
                let (c, r) = if part == 0 { (c1, r1) } else { (c2, r2) };
                let d = x - c;
                let n = d.norm();
                if n == 0.0 {
                    return Err(Error::Ambiguous("query at a sphere center".into()));
                }
                let mut p = c + d * (r / n);
                let s = (p - c1).dot(&j.axis) - j.offset;
                let inside = if part == 0 { s <= 0.0 } else { s >= 0.0 };
                if !inside {
                    let rel = x - j.center;
                    let radial = rel - j.axis * rel.dot(&j.axis);
                    let rn = radial.norm();
                    if rn == 0.0 {
                        return Err(Error::Ambiguous("query on the junction axis".into()));
                    }
                    p = j.center + radial * (j.radius / rn);
                }
                Ok(ClosestPointResult {
                    point: p,
                    distance: (x - p).norm(),
                    normal_or_tangent: (p - c) / r,
                    on_feature: !inside,
                    part: Some(part),
                    param: None,
                })
            }
            _ => self.closest_point(x),
        }
    }

    /// Outward unit normal at an on-surface point. On the junction circle of
    /// a double sphere the side must be chosen with `part`.
    pub fn surface_normal(&self, x: Vec3, part: Option<usize>) -> Result<Vec3> {
        match *self {
            AnalyticSurface::Sphere { center, .. } => {
                let d = x - center;
                if d.norm() == 0.0 {
                    return Err(Error::Ambiguous("normal at the sphere center".into()));
                }
                Ok(d.normalize())
            }
            AnalyticSurface::Torus { .. } => Ok(self.closest_point(x)?.normal_or_tangent),
            AnalyticSurface::DoubleSphere { c1, c2, r1, r2 } => {
                let j = self.junction().unwrap();
                let s = (x - c1).dot(&j.axis) - j.offset;
                let cap = match part {
                    Some(p) => p,
                    None if s.abs() <= 1e-9 => {
                        return Err(Error::Ambiguous("normal on the junction circle needs a cap id".into()))
                    }
                    None => usize::from(s > 0.0),
                };
                Ok(if cap == 0 { (x - c1) / r1 } else { (x - c2) / r2 })
            }
        }
    }

    /// Exact junction-circle projection for a double sphere.
    /// The sharp feature curve of the surface, if it has one.
    pub fn feature_curve(&self) -> Option<super::AnalyticCurve> {
        self.junction().map(|j| super::AnalyticCurve::Circle {
            center: j.center,
            axis: j.axis,
            radius: j.radius,
        })
    }

    pub fn project_to_feature(&self, x: Vec3) -> Result<Vec3> {
        let j = self
            .junction()
            .ok_or_else(|| Error::Config("surface has no feature curve".into()))?;
        let rel = x - j.center;
        let radial = rel - j.axis * rel.dot(&j.axis);
        let rn = radial.norm();
        if rn == 0.0 {
            return Err(Error::Ambiguous("query on the junction axis".into()));
        }
        Ok(j.center + radial * (j.radius / rn))
    }
}
