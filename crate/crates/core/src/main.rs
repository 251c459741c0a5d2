use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hosr::elements::Strategy;
use hosr::geometry::GeometrySpec;
use hosr::harness::{cmd_convergence, cmd_reconstruct, Evaluation, Input, RunConfig};
use hosr::surface::{Method, NormalsSource};
use hosr::wls::WeightScheme;
use hosr::Error;

#[derive(Parser)]
#[command(
    name = "hosr",
    version,
    about = "High-order reconstruction of surfaces and feature curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a degree-p parametric mesh and write it as JSON.
    Reconstruct {
        /// OBJ file or geometry spec (sphere:r=1, torus:R=1,r=0.3, double_sphere).
        #[arg(long = "in")]
        input: String,
        /// Mesh level for generated geometries.
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a convergence study on an analytic geometry.
    Convergence {
        #[arg(long)]
        geom: String,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// CSV output path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON report path.
        #[arg(long)]
        json: Option<PathBuf>,
        /// projection or elements.
        #[arg(long, default_value = "projection")]
        evaluate: String,
        /// Sample only faces with a feature or boundary edge.
        #[arg(long)]
        feature_only: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 4)]
    degree: usize,
    /// cmf, walf, hcmf or hwalf.
    #[arg(long, default_value = "hcmf")]
    method: String,
    /// nonfap, fap or ifap; defaults by degree.
    #[arg(long)]
    strategy: Option<String>,
    /// Feature tag file for OBJ input.
    #[arg(long)]
    features: Option<PathBuf>,
    /// Tag edges whose dihedral angle exceeds this many degrees.
    #[arg(long)]
    dihedral: Option<f64>,
    /// obj, oracle or estimate.
    #[arg(long)]
    normals: Option<String>,
    #[arg(long)]
    cond_limit: Option<f64>,
    /// wendland or invdist.
    #[arg(long, default_value = "wendland")]
    weights: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

fn config(input: Input, common: &Common) -> Result<RunConfig, Failure> {
    let usage = |e: Error| Failure::Usage(e.to_string());
    let method: Method = common.method.parse().map_err(usage)?;
    let mut cfg = RunConfig::new(input, method, common.degree);
    if let Some(s) = &common.strategy {
        cfg.strategy = s.parse::<Strategy>().map_err(usage)?;
    }
    if let Some(n) = &common.normals {
        cfg.normals_source = Some(n.parse::<NormalsSource>().map_err(usage)?);
    }
    if let Some(c) = common.cond_limit {
        cfg.cond_limit = c;
    }
    cfg.weights = common.weights.parse::<WeightScheme>().map_err(usage)?;
    cfg.features = common.features.clone();
    cfg.dihedral = common.dihedral;
    cfg.seed = common.seed;
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Reconstruct {
            input,
            level,
            out,
            common,
        } => {
            let src = if std::path::Path::new(&input).exists() || input.ends_with(".obj") {
                Input::Obj(PathBuf::from(&input))
            } else {
                Input::Geometry(
                    input
                        .parse::<GeometrySpec>()
                        .map_err(|e| Failure::Usage(e.to_string()))?,
                )
            };
            let mut cfg = config(src, &common)?;
            cfg.levels = level;
            cfg.out = out;
            let summary = cmd_reconstruct(&cfg)?;
            println!("{}", summary.line);
        }
        Command::Convergence {
            geom,
            levels,
            out,
            json,
            evaluate,
            feature_only,
            common,
        } => {
            let spec: GeometrySpec = geom.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            let mut cfg = config(Input::Geometry(spec), &common)?;
            cfg.levels = levels;
            cfg.out = out;
            cfg.json_out = json;
            cfg.evaluation = evaluate
                .parse::<Evaluation>()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            cfg.feature_faces_only = feature_only;
            let report = cmd_convergence(&cfg)?;
            if cfg.out.is_none() {
                print!("{}", report.to_csv());
            }
            match report.rate {
                Some(r) => println!("rate {r:.4}"),
                None if report.saturated => println!("rate saturated"),
                None => {}
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
