//! Experiment driver: reconstruction runs, convergence studies over
//! refinement series, error norms and CSV/JSON reports.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::CurveReconstructor;
use crate::elements::{reconstruct_high_order_mesh, HighOrderMesh, Strategy};
use crate::geometry::{generate_mesh, helix_polyline, AnalyticCurve, AnalyticSurface, GeometrySpec};
use crate::mesh::{load_obj, parse_feature_tags, FeatureTags, TriMesh};
use crate::surface::{Method, MethodConfig, NormalsSource, Reconstructor};
use crate::wls::{WeightScheme, DEFAULT_COND_LIMIT};
use crate::{Error, Result};

/// Barycentric abscissae of the symmetric 12-point degree-6 triangle rule
/// (Dunavant). Used as sample locations only.
pub const DUNAVANT_12: [[f64; 3]; 12] = {
    const A1: f64 = 0.873821971016996;
    const B1: f64 = 0.063089014491502;
    const A2: f64 = 0.501426509658179;
    const B2: f64 = 0.249286745170910;
    const C1: f64 = 0.636502499121399;
    const C2: f64 = 0.310352451033784;
    const C3: f64 = 0.053145049844817;
    [
        [A2, B2, B2],
        [B2, A2, B2],
        [B2, B2, A2],
        [A1, B1, B1],
        [B1, A1, B1],
        [B1, B1, A1],
        [C1, C2, C3],
        [C1, C3, C2],
        [C2, C1, C3],
        [C2, C3, C1],
        [C3, C1, C2],
        [C3, C2, C1],
    ]
};

/// `‖e‖₂ / √n`.
pub fn error_l2_norm(e: &[f64]) -> Result<f64> {
    if e.is_empty() {
        return Err(Error::Argument("error vector is empty".into()));
    }
    let s: f64 = e.iter().map(|x| x * x).sum();
    Ok((s / e.len() as f64).sqrt())
}

/// Average rate `d · ln(e₁/e_k) / ln(n_k/n₁)` between the first and last
/// levels. `Ok(None)` when a norm is not positive (saturated).
pub fn convergence_rate(norms: &[f64], counts: &[usize], d: u32) -> Result<Option<f64>> {
    if norms.len() != counts.len() {
        return Err(Error::Argument(format!(
            "{} norms for {} point counts",
            norms.len(),
            counts.len()
        )));
    }
    if norms.len() < 2 {
        return Err(Error::Argument("a rate needs at least two levels".into()));
    }
    if !(1..=3).contains(&d) {
        return Err(Error::Argument(format!("dimension must be 1, 2 or 3, got {d}")));
    }
    if counts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Argument("point counts must increase with level".into()));
    }
    if norms.iter().any(|&e| !(e > 0.0)) {
        return Ok(None);
    }
    let k = norms.len() - 1;
    let r = d as f64 * (norms[0] / norms[k]).ln() / (counts[k] as f64 / counts[0] as f64).ln();
    Ok(Some(r))
}

/// How sample points are mapped onto the reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Evaluation {
    /// Project each sample with the surface or curve method.
    Projection,
    /// Evaluate the degree-p parametric elements.
    Elements,
}

impl std::str::FromStr for Evaluation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "projection" => Ok(Evaluation::Projection),
            "elements" => Ok(Evaluation::Elements),
            _ => Err(Error::Argument(format!("unknown evaluation '{s}'"))),
        }
    }
}

/// Where the input mesh comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Obj(PathBuf),
    Geometry(GeometrySpec),
}

/// Settings shared by the `reconstruct` and `convergence` commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: Input,
    pub method: Method,
    pub degree: usize,
    pub strategy: Strategy,
    /// Number of refinement levels (`convergence`) or the mesh level of a
    /// generated geometry (`reconstruct`).
    pub levels: usize,
    /// `None` picks oracle normals for analytic geometries, then `vn`
    /// records, then estimates.
    pub normals_source: Option<NormalsSource>,
    /// Barycentric sample points per face.
    pub samples: Vec<[f64; 3]>,
    pub evaluation: Evaluation,
    /// Restrict error sampling to faces with a feature or boundary edge.
    pub feature_faces_only: bool,
    pub out: Option<PathBuf>,
    pub json_out: Option<PathBuf>,
    pub features: Option<PathBuf>,
    pub dihedral: Option<f64>,
    pub cond_limit: f64,
    pub weights: WeightScheme,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(input: Input, method: Method, degree: usize) -> Self {
        RunConfig {
            input,
            method,
            degree,
            strategy: Strategy::default_for(degree),
            levels: 3,
            normals_source: None,
            samples: DUNAVANT_12.to_vec(),
            evaluation: Evaluation::Projection,
            feature_faces_only: false,
            out: None,
            json_out: None,
            features: None,
            dihedral: None,
            cond_limit: DEFAULT_COND_LIMIT,
            weights: WeightScheme::Wendland,
            seed: 0,
        }
    }

    pub fn geometry(spec: GeometrySpec, method: Method, degree: usize) -> Self {
        Self::new(Input::Geometry(spec), method, degree)
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels < 1 {
            return Err(Error::Argument("levels must be at least 1".into()));
        }
        if !(1..=8).contains(&self.degree) {
            return Err(Error::Argument(format!(
                "degree must be in [1, 8], got {}",
                self.degree
            )));
        }
        if self.samples.is_empty() {
            return Err(Error::Argument("no sample points".into()));
        }
        for b in &self.samples {
            if b.iter().any(|&x| x < -1e-14) || (b.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
                return Err(Error::Argument(format!("{b:?} is not a barycentric point")));
            }
        }
        Ok(())
    }

    fn method_config(&self, normals: NormalsSource) -> MethodConfig {
        let mut m = MethodConfig::new(self.method, self.degree).with_normals(normals);
        m.cond_limit = self.cond_limit;
        m.weights = self.weights;
        m
    }

    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            input: match &self.input {
                Input::Obj(p) => p.display().to_string(),
                Input::Geometry(g) => format!("{g:?}"),
            },
            method: self.method.to_string(),
            degree: self.degree,
            strategy: self.strategy.to_string(),
            levels: self.levels,
            normals: self.normals_source.map(|n| n.to_string()),
            samples_per_face: self.samples.len(),
            evaluation: self.evaluation,
            feature_faces_only: self.feature_faces_only,
            cond_limit: self.cond_limit,
            weights: self.weights.to_string(),
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub input: String,
    pub method: String,
    pub degree: usize,
    pub strategy: String,
    pub levels: usize,
    pub normals: Option<String>,
    pub samples_per_face: usize,
    pub evaluation: Evaluation,
    pub feature_faces_only: bool,
    pub cond_limit: f64,
    pub weights: String,
    pub seed: u64,
}

/// Errors on one refinement level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelError {
    pub level: usize,
    /// Vertex count of the level's mesh.
    pub n: usize,
    pub err_l2: f64,
    pub err_max: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub config: ConfigEcho,
    pub levels: Vec<LevelError>,
    /// Endpoint rate; `None` with one level or when saturated.
    pub rate: Option<f64>,
    pub saturated: bool,
    pub wall_time_s: f64,
}

impl ConvergenceReport {
    /// `level,n,err_l2,err_max` rows with round-trip precision.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("level,n,err_l2,err_max\n");
        for l in &self.levels {
            let _ = writeln!(s, "{},{},{:e},{:e}", l.level, l.n, l.err_l2, l.err_max);
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn finest(&self) -> &LevelError {
        self.levels.last().expect("report has levels")
    }
}

fn write_file(path: &std::path::Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn errors_summary(errs: &[f64]) -> Result<(f64, f64)> {
    let l2 = error_l2_norm(errs)?;
    let max = errs.iter().cloned().fold(0.0, f64::max);
    Ok((l2, max))
}

fn surface_level_errors(surf: &AnalyticSurface, mesh: &TriMesh, cfg: &RunConfig) -> Result<Vec<f64>> {
    let normals = cfg.normals_source.unwrap_or(NormalsSource::Oracle);
    let mcfg = cfg.method_config(normals);
    let faces: Vec<usize> = (0..mesh.num_faces())
        .filter(|&f| !cfg.feature_faces_only || mesh.is_feature_face(f))
        .collect();
    let per_face: Vec<Result<Vec<f64>>> = match cfg.evaluation {
        Evaluation::Projection => {
            let rec = Reconstructor::new(mesh, mcfg, Some(surf))?;
            faces
                .par_iter()
                .map(|&f| {
                    cfg.samples
                        .iter()
                        .map(|&b| Ok(surf.closest_point(rec.project(f, b)?)?.distance))
                        .collect()
                })
                .collect()
        }
        Evaluation::Elements => {
            let ho = reconstruct_high_order_mesh(mesh, mcfg, cfg.strategy, Some(surf))?;
            faces
                .par_iter()
                .map(|&f| {
                    let el = ho.element(f);
                    cfg.samples
                        .iter()
                        .map(|b| Ok(surf.closest_point(el.position([b[1], b[2]]))?.distance))
                        .collect()
                })
                .collect()
        }
    };
    let mut errs = Vec::with_capacity(faces.len() * cfg.samples.len());
    for r in per_face {
        errs.extend(r?);
    }
    if errs.is_empty() {
        return Err(Error::Argument("no faces selected for sampling".into()));
    }
    Ok(errs)
}

fn helix_level_errors(level: usize, cfg: &RunConfig) -> Result<(usize, Vec<f64>)> {
    let poly = helix_polyline(level)?;
    let exact = !matches!(cfg.normals_source, Some(NormalsSource::Estimated));
    let rec = CurveReconstructor::from_helix(&poly, exact, cfg.method_config(NormalsSource::Estimated))?;
    let curve = AnalyticCurve::helix();
    let edges = poly.points.len() - 1;
    let errs = (0..edges)
        .into_par_iter()
        .map(|e| Ok(curve.closest_point(rec.project(0, e, 0.5)?)?.distance))
        .collect::<Result<Vec<f64>>>()?;
    Ok((poly.points.len(), errs))
}

/// Runs a convergence study over `cfg.levels` refinement levels of an
/// analytic geometry and writes the CSV (and JSON) outputs if requested.
/// Surfaces are sampled at `cfg.samples` on every face; the helix at edge
/// midpoints.
pub fn cmd_convergence(cfg: &RunConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let Input::Geometry(spec) = &cfg.input else {
        return Err(Error::Argument("convergence studies need an analytic geometry".into()));
    };
    let t0 = Instant::now();
    let mut levels = Vec::with_capacity(cfg.levels);
    for level in 1..=cfg.levels {
        let (n, errs) = match spec {
            GeometrySpec::Surface(surf) => {
                let mesh = generate_mesh(surf, level)?;
                (mesh.num_vertices(), surface_level_errors(surf, &mesh, cfg)?)
            }
            GeometrySpec::Helix => helix_level_errors(level, cfg)?,
        };
        let (err_l2, err_max) = errors_summary(&errs)?;
        levels.push(LevelError {
            level,
            n,
            err_l2,
            err_max,
        });
    }
    let d = if matches!(spec, GeometrySpec::Helix) { 1 } else { 2 };
    let (rate, saturated) = if levels.len() >= 2 {
        let norms: Vec<f64> = levels.iter().map(|l| l.err_l2).collect();
        let counts: Vec<usize> = levels.iter().map(|l| l.n).collect();
        let r = convergence_rate(&norms, &counts, d)?;
        (r, r.is_none())
    } else {
        (None, false)
    };
    let report = ConvergenceReport {
        config: cfg.echo(),
        levels,
        rate,
        saturated,
        wall_time_s: t0.elapsed().as_secs_f64(),
    };
    if let Some(p) = &cfg.out {
        write_file(p, &report.to_csv())?;
    }
    if let Some(p) = &cfg.json_out {
        write_file(p, &report.to_json())?;
    }
    Ok(report)
}

/// Result of `cmd_reconstruct`.
#[derive(Debug)]
pub struct ReconstructSummary {
    pub mesh: HighOrderMesh,
    pub line: String,
}

fn load_input(cfg: &RunConfig) -> Result<(TriMesh, Option<AnalyticSurface>)> {
    match &cfg.input {
        Input::Obj(path) => {
            let mut mesh = load_obj(path, None)?;
            let mut tags = FeatureTags::default();
            if let Some(tp) = &cfg.features {
                let text = std::fs::read_to_string(tp).map_err(|e| Error::io(tp, e))?;
                tags.merge(&parse_feature_tags(&text, &tp.display().to_string())?);
            }
            if let Some(deg) = cfg.dihedral {
                tags.merge(&FeatureTags::from_dihedral(&mesh, deg));
            }
            if tags != FeatureTags::default() {
                mesh = mesh.with_features(&tags)?;
            }
            Ok((mesh, None))
        }
        Input::Geometry(GeometrySpec::Surface(s)) => Ok((generate_mesh(s, cfg.levels)?, Some(*s))),
        Input::Geometry(GeometrySpec::Helix) => {
            Err(Error::Argument("reconstruct needs a surface, not the helix".into()))
        }
    }
}

/// Builds the degree-p high-order mesh of an OBJ file or generated
/// geometry, writes it as JSON to `cfg.out` and returns a one-line summary.
pub fn cmd_reconstruct(cfg: &RunConfig) -> Result<ReconstructSummary> {
    cfg.validate()?;
    let (mesh, oracle) = load_input(cfg)?;
    let normals = match (cfg.normals_source, &oracle) {
        (Some(n), _) => n,
        (None, Some(_)) => NormalsSource::Oracle,
        (None, None) if mesh.vertex_normals().is_some() => NormalsSource::Mesh,
        (None, None) => NormalsSource::Estimated,
    };
    if normals == NormalsSource::Oracle && oracle.is_none() {
        return Err(Error::Config("oracle normals need an analytic geometry".into()));
    }
    let ho = reconstruct_high_order_mesh(&mesh, cfg.method_config(normals), cfg.strategy, oracle.as_ref())?;
    if let Some(p) = &cfg.out {
        ho.write_json(p)?;
    }
    let line = format!(
        "degree {} {} {}: {} vertices, {} faces, {} feature edges, {} nodes, max edge displacement {:.6e}",
        ho.degree(),
        cfg.method,
        cfg.strategy,
        mesh.num_vertices(),
        ho.num_faces(),
        ho.feature_edges().len(),
        ho.num_nodes(),
        ho.max_edge_displacement()
    );
    Ok(ReconstructSummary { mesh: ho, line })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l2_norm_examples() {
        assert!((error_l2_norm(&[3.0, 4.0]).unwrap() - 5.0 / 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(error_l2_norm(&[0.0; 7]).unwrap(), 0.0);
        assert!((error_l2_norm(&[-0.25; 9]).unwrap() - 0.25).abs() < 1e-16);
        assert!(error_l2_norm(&[]).is_err());
    }

    #[test]
    fn rate_examples() {
        let r = convergence_rate(&[32.0, 1.0], &[100, 400], 2).unwrap().unwrap();
        assert!((r - 5.0).abs() < 1e-12);
        let r = convergence_rate(&[16.0, 1.0], &[256, 512], 1).unwrap().unwrap();
        assert!((r - 4.0).abs() < 1e-12);
        assert_eq!(convergence_rate(&[1.0, 1.0], &[10, 40], 2).unwrap(), Some(0.0));
        assert_eq!(convergence_rate(&[1.0, 0.0], &[10, 40], 2).unwrap(), None);
        assert!(convergence_rate(&[1.0], &[10], 2).is_err());
        assert!(convergence_rate(&[1.0, 0.5], &[40, 10], 2).is_err());
    }

    #[test]
    fn synthetic_rate_recovers_order() {
        for p in 1..=7 {
            let counts: Vec<usize> = (0..4).map(|l| 100 << (2 * l)).collect();
            let norms: Vec<f64> = counts
                .iter()
                .map(|&n| 3.7 * (1.0 / (n as f64).sqrt()).powi(p + 1))
                .collect();
            let r = convergence_rate(&norms, &counts, 2).unwrap().unwrap();
            assert!((r - (p + 1) as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn dunavant_points_are_barycentric() {
        for b in DUNAVANT_12 {
            assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn config_validation() {
        let mut c = RunConfig::geometry(GeometrySpec::Helix, Method::HCmf, 9);
        assert!(c.validate().is_err());
        c.degree = 4;
        c.levels = 0;
        assert!(c.validate().is_err());
        c.levels = 2;
        assert!(c.validate().is_ok());
    }
}
