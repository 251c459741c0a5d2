//! Surface reconstruction: vertex normals, local frames, vertex fittings and
//! the CMF / WALF / H-CMF / H-WALF projections.

mod fit;
mod frame;
mod normals;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

pub use fit::{initial_ring, select_stencil};
pub(crate) use frame::complete_axis;
pub use frame::{build_local_frame, LocalFrame};
pub use normals::{estimate_vertex_normals, mesh_vertex_normals, oracle_vertex_normals, VertexNormals};

use crate::geometry::AnalyticSurface;
use crate::mesh::{Stencil, StencilCenter, TriMesh};
use crate::wls::{FitResult, WeightScheme, DEFAULT_COND_LIMIT};
use crate::{Error, Result, Vec3};

/// Reconstruction method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Cmf,
    Walf,
    HCmf,
    HWalf,
}

impl Method {
    pub fn is_hermite(self) -> bool {
        matches!(self, Method::HCmf | Method::HWalf)
    }

    pub fn is_walf(self) -> bool {
        matches!(self, Method::Walf | Method::HWalf)
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "cmf" => Ok(Method::Cmf),
            "walf" => Ok(Method::Walf),
            "hcmf" => Ok(Method::HCmf),
            "hwalf" => Ok(Method::HWalf),
            _ => Err(Error::Argument(format!("unknown method '{s}'"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Cmf => "cmf",
            Method::Walf => "walf",
            Method::HCmf => "hcmf",
            Method::HWalf => "hwalf",
        })
    }
}

/// Where vertex normals come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalsSource {
    /// `vn` records of the input mesh.
    Mesh,
    /// Exact normals of an analytic surface.
    Oracle,
    /// Area-weighted face normal averages.
    Estimated,
}

impl FromStr for NormalsSource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "obj" | "mesh" => Ok(NormalsSource::Mesh),
            "oracle" => Ok(NormalsSource::Oracle),
            "estimate" | "estimated" => Ok(NormalsSource::Estimated),
            _ => Err(Error::Argument(format!("unknown normals source '{s}'"))),
        }
    }
}

impl fmt::Display for NormalsSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormalsSource::Mesh => "obj",
            NormalsSource::Oracle => "oracle",
            NormalsSource::Estimated => "estimate",
        })
    }
}

/// Settings of a surface reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodConfig {
    pub method: Method,
    pub degree: usize,
    pub normals_source: NormalsSource,
    /// Vertex fittings pass through their vertex.
    pub interpolatory: bool,
    pub cond_limit: f64,
    pub weights: WeightScheme,
}

impl MethodConfig {
    pub fn new(method: Method, degree: usize) -> Self {
        MethodConfig {
            method,
            degree,
            normals_source: NormalsSource::Estimated,
            interpolatory: true,
            cond_limit: DEFAULT_COND_LIMIT,
            weights: WeightScheme::Wendland,
        }
    }

    pub fn with_normals(mut self, source: NormalsSource) -> Self {
        self.normals_source = source;
        self
    }
}

/// A height-function fitting at a vertex, on one side of any feature.
#[derive(Debug, Clone)]
pub struct VertexFitting {
    pub frame: LocalFrame,
    pub fit: FitResult,
    pub stencil: Stencil,
    pub degree_requested: usize,
    pub hermite: bool,
}

impl VertexFitting {
    /// Maps `x` onto the fitted surface along the frame normal.
    pub fn project(&self, x: Vec3) -> Vec3 {
        let l = self.frame.to_local(x);
        self.frame.to_global(Vec3::new(l.x, l.y, self.fit.eval(l.x, l.y)))
    }
}

type Cached<T> = std::result::Result<T, String>;

type VertexCache<T> = Vec<Vec<(usize, Cached<T>)>>;

/// Surface reconstruction over a mesh. Vertex stencils (and, for WALF
/// methods, vertex fittings) are computed once at construction and read
/// concurrently afterwards.
pub struct Reconstructor<'a> {
    mesh: &'a TriMesh,
    cfg: MethodConfig,
    normals: VertexNormals,
    stencils: VertexCache<Stencil>,
    fittings: Option<VertexCache<VertexFitting>>,
}

fn mean_incident_edge(mesh: &TriMesh, v: usize, patch: usize) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for &f in mesh.vertex_faces(v) {
        if mesh.face_patch(f) != patch {
            continue;
        }
        for u in mesh.triangle(f) {
            if u != v {
                sum += (mesh.vertex(u) - mesh.vertex(v)).norm();
                n += 1;
            }
        }
    }
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn mean_face_edge(mesh: &TriMesh, f: usize) -> f64 {
    let [a, b, c] = mesh.triangle(f);
    let (pa, pb, pc) = (mesh.vertex(a), mesh.vertex(b), mesh.vertex(c));
    ((pa - pb).norm() + (pb - pc).norm() + (pc - pa).norm()) / 3.0
}

impl<'a> Reconstructor<'a> {
    /// Prepares a reconstruction. `oracle` is required for
    /// [`NormalsSource::Oracle`].
    pub fn new(mesh: &'a TriMesh, cfg: MethodConfig, oracle: Option<&AnalyticSurface>) -> Result<Self> {
        if cfg.degree < 1 {
            return Err(Error::Argument("degree must be at least 1".into()));
        }
        let normals = match cfg.normals_source {
            NormalsSource::Estimated => estimate_vertex_normals(mesh),
            NormalsSource::Mesh => mesh_vertex_normals(mesh)?,
            NormalsSource::Oracle => {
                let s = oracle.ok_or_else(|| Error::Config("oracle normals need an analytic surface".into()))?;
                oracle_vertex_normals(mesh, s)?
            }
        };
        let hermite = cfg.method.is_hermite();
        let stencils: Vec<Vec<(usize, Cached<Stencil>)>> = (0..mesh.num_vertices())
            .into_par_iter()
            .map(|v| {
                mesh.vertex_patches(v)
                    .into_iter()
                    .map(|p| {
                        let s = select_stencil(mesh, v, cfg.degree, hermite, Some(p)).map_err(|e| e.to_string());
                        (p, s)
                    })
                    .collect()
            })
            .collect();
        let mut rec = Reconstructor {
            mesh,
            cfg,
            normals,
            stencils,
            fittings: None,
        };
        if cfg.method.is_walf() {
            let fittings = (0..mesh.num_vertices())
                .into_par_iter()
                .map(|v| {
                    rec.stencils[v]
                        .iter()
                        .map(|(p, _)| (*p, rec.fit_vertex(v, *p).map_err(|e| e.to_string())))
                        .collect()
                })
                .collect();
            rec.fittings = Some(fittings);
        }
        Ok(rec)
    }

    pub fn mesh(&self) -> &TriMesh {
        self.mesh
    }

    pub fn config(&self) -> &MethodConfig {
        &self.cfg
    }

    pub fn normals(&self) -> &VertexNormals {
        &self.normals
    }

    fn normal(&self, v: usize, patch: usize) -> Result<Vec3> {
        self.normals
            .get(v, patch)
            .ok_or_else(|| Error::Geometry(format!("vertex {v} has no normal on patch {patch}")))
    }

    /// Stencil of `v` on `patch`.
    pub fn stencil(&self, v: usize, patch: usize) -> Result<&Stencil> {
        match self.stencils[v].iter().find(|(p, _)| *p == patch) {
            Some((_, Ok(s))) => Ok(s),
            Some((_, Err(e))) => Err(Error::DegenerateStencil(e.clone())),
            None => Err(Error::Argument(format!("vertex {v} does not touch patch {patch}"))),
        }
    }

    /// Computes the fitting at `v` on `patch` (not cached).
    pub fn fit_vertex(&self, v: usize, patch: usize) -> Result<VertexFitting> {
        let stencil = self.stencil(v, patch)?.clone();
        let frame = build_local_frame(self.mesh.vertex(v), self.normal(v, patch)?)?;
        let pts: Vec<Vec3> = stencil.members.iter().map(|&u| self.mesh.vertex(u)).collect();
        let nrm: Vec<Vec3> = stencil
            .members
            .iter()
            .map(|&u| self.normal(u, patch))
            .collect::<Result<_>>()?;
        let h = mean_incident_edge(self.mesh, v, patch);
        let hermite = self.cfg.method.is_hermite();
        let fit = fit::fit_in_frame(&frame, &pts, &nrm, h, self.cfg.interpolatory, hermite, &self.cfg).map_err(
            |e| match e {
                Error::DegenerateStencil(m) => Error::DegenerateStencil(format!("vertex {v}: {m}")),
                other => other,
            },
        )?;
        Ok(VertexFitting {
            frame,
            fit,
            stencil,
            degree_requested: self.cfg.degree,
            hermite,
        })
    }

    /// Cached fitting of `v` on `patch` (WALF methods), computed on demand
    /// otherwise.
    pub fn vertex_fitting(&self, v: usize, patch: usize) -> Result<std::borrow::Cow<'_, VertexFitting>> {
        if let Some(all) = &self.fittings {
            return match all[v].iter().find(|(p, _)| *p == patch) {
                Some((_, Ok(f))) => Ok(std::borrow::Cow::Borrowed(f)),
                Some((_, Err(e))) => Err(Error::DegenerateStencil(e.clone())),
                None => Err(Error::Argument(format!("vertex {v} does not touch patch {patch}"))),
            };
        }
        Ok(std::borrow::Cow::Owned(self.fit_vertex(v, patch)?))
    }

    /// Reconstructed point for barycentric coordinates `xi` in face `tri`,
    /// using the configured method.
    pub fn project(&self, tri: usize, xi: [f64; 3]) -> Result<Vec3> {
        if self.cfg.method.is_walf() {
            self.project_walf(tri, xi)
        } else {
            self.project_cmf(tri, xi)
        }
    }

    /// WALF: barycentric average of the vertex fittings' projections of the
    /// point `Σ ξ_j x_j`.
    pub fn project_walf(&self, tri: usize, xi: [f64; 3]) -> Result<Vec3> {
        self.project_walf_at(tri, xi, self.mesh.face_point(tri, xi))
    }

    /// WALF for an arbitrary point `x` near `tri`, blended with weights `xi`.
    pub fn project_walf_at(&self, tri: usize, xi: [f64; 3], x: Vec3) -> Result<Vec3> {
        let patch = self.mesh.face_patch(tri);
        let corners = self.mesh.triangle(tri);
        let mut q = Vec3::zeros();
        for (j, &v) in corners.iter().enumerate() {
            if xi[j] == 0.0 {
                continue;
            }
            q += self.vertex_fitting(v, patch)?.project(x) * xi[j];
        }
        Ok(q)
    }

    /// Configured method applied to the point `x` hosted by `tri` at `xi`.
    pub fn project_at(&self, tri: usize, xi: [f64; 3], x: Vec3) -> Result<Vec3> {
        if self.cfg.method.is_walf() {
            self.project_walf_at(tri, xi, x)
        } else {
            self.project_cmf_at(tri, xi, x)
        }
    }

    /// CMF at `Σ ξ_j x_j`.
    pub fn project_cmf(&self, tri: usize, xi: [f64; 3]) -> Result<Vec3> {
        self.project_cmf_at(tri, xi, self.mesh.face_point(tri, xi))
    }

    /// CMF with an explicit origin: frame normal `Σ ξ_j m_j`, stencil the
    /// union of the vertex stencils with nonzero `ξ_j`, and the fitted
    /// height at the origin.
    pub fn project_cmf_at(&self, tri: usize, xi: [f64; 3], origin: Vec3) -> Result<Vec3> {
        let patch = self.mesh.face_patch(tri);
        let corners = self.mesh.triangle(tri);
        let mut normal = Vec3::zeros();
        let mut members: Vec<usize> = Vec::new();
        for (j, &v) in corners.iter().enumerate() {
            normal += self.normal(v, patch)? * xi[j];
            if xi[j] != 0.0 {
                for &u in &self.stencil(v, patch)?.members {
                    if !members.contains(&u) {
                        members.push(u);
                    }
                }
            }
        }
        let frame = build_local_frame(origin, normal)?;
        let pts: Vec<Vec3> = members.iter().map(|&u| self.mesh.vertex(u)).collect();
        let nrm: Vec<Vec3> = members.iter().map(|&u| self.normal(u, patch)).collect::<Result<_>>()?;
        let h = mean_face_edge(self.mesh, tri);
        let fit = fit::fit_in_frame(&frame, &pts, &nrm, h, false, self.cfg.method.is_hermite(), &self.cfg)?;
        Ok(frame.to_global(Vec3::new(0.0, 0.0, fit.coeff(0, 0, 0))))
    }

    /// Union stencil used by CMF queries in `tri`.
    pub fn cmf_stencil(&self, tri: usize, xi: [f64; 3]) -> Result<Stencil> {
        let patch = self.mesh.face_patch(tri);
        let mut members = Vec::new();
        for (j, &v) in self.mesh.triangle(tri).iter().enumerate() {
            if xi[j] != 0.0 {
                for &u in &self.stencil(v, patch)?.members {
                    if !members.contains(&u) {
                        members.push(u);
                    }
                }
            }
        }
        let ring = self.stencil(self.mesh.triangle(tri)[0], patch)?.ring;
        Ok(Stencil {
            center: StencilCenter::Face { face: tri, bary: xi },
            ring,
            patch: Some(patch),
            members,
        })
    }
}

/// Fitting at vertex `v` (on the side of `patch`, or its first patch).
pub fn fit_vertex(
    mesh: &TriMesh,
    v: usize,
    patch: Option<usize>,
    cfg: &MethodConfig,
    oracle: Option<&AnalyticSurface>,
) -> Result<VertexFitting> {
    let rec = Reconstructor::new(
        mesh,
        MethodConfig {
            method: if cfg.method.is_hermite() {
                Method::HCmf
            } else {
                Method::Cmf
            },
            ..*cfg
        },
        oracle,
    )?;
    let p = match patch {
        Some(p) => p,
        None => mesh
            .primary_patch(v)
            .ok_or_else(|| Error::Geometry(format!("vertex {v} has no faces")))?,
    };
    rec.fit_vertex(v, p)
}

/// One-off CMF projection (builds a [`Reconstructor`]).
pub fn project_point_cmf(
    mesh: &TriMesh,
    tri: usize,
    xi: [f64; 3],
    cfg: &MethodConfig,
    oracle: Option<&AnalyticSurface>,
) -> Result<Vec3> {
    Reconstructor::new(mesh, *cfg, oracle)?.project_cmf(tri, xi)
}

/// One-off WALF projection (builds a [`Reconstructor`]).
pub fn project_point_walf(
    mesh: &TriMesh,
    tri: usize,
    xi: [f64; 3],
    cfg: &MethodConfig,
    oracle: Option<&AnalyticSurface>,
) -> Result<Vec3> {
    Reconstructor::new(mesh, *cfg, oracle)?.project_walf(tri, xi)
}
