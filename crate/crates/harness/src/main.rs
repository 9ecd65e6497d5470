//! `cpolygon` command line tool.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 improper scene (or one
//! outside the engine's hypotheses), 3 degenerate geometry or exhausted
//! scene generation, 4 theory violation.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use cpolygon::constructions::{
    build_sharp_upper, build_three_circle_domain, build_zero_vertex, zero_vertex_control,
    ConstructionParams,
};
use cpolygon::{
    compute_structure, make_disk, oracle_report, verify_bounds, ConvexDomain, EngineError,
    OracleConfig, Scene64, Structure64, VertexKind,
};
use cpolygon_harness::experiment::{run_experiment, ExperimentConfig, ExperimentError};
use cpolygon_harness::generate::{
    random_scene, DomainSource, GenError, GenSpec, Placement, RandomKind,
};
use cpolygon_harness::rng::TrialRng;
use cpolygon_harness::scene_io::{load_scene, DomainJson, SceneFile};
use cpolygon_harness::svg::{render_svg, SvgOptions};
use serde_json::json;

#[derive(Debug, thiserror::Error)]
#[error("{msg}")]
struct Fail {
    code: u8,
    msg: String,
}

fn fail<T>(code: u8, msg: impl Into<String>) -> anyhow::Result<T> {
    Err(Fail {
        code,
        msg: msg.into(),
    }
    .into())
}

fn engine_code(e: &EngineError) -> u8 {
    match e {
        EngineError::NotProper(_)
        | EngineError::NotStrictlyConvex(_)
        | EngineError::MoreThanTwo { .. } => 2,
        EngineError::Degenerate(_) => 3,
        EngineError::ModelViolation(_) | EngineError::NoSingletonFamily => 4,
    }
}

#[derive(Parser)]
#[command(
    name = "cpolygon",
    version,
    about = "Vertex structure of intersections of homothets of convex domains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the vertex count of a scene against its bound.
    Verify {
        scene: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print vertices, edges and gaps of a scene.
    Structure {
        scene: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Count corners with the ray-shooting oracle.
    Oracle {
        scene: PathBuf,
        #[arg(long, default_value_t = 8192)]
        samples: usize,
        #[arg(long, default_value_t = 0.02)]
        tau: f64,
        #[arg(long)]
        json: bool,
    },
    /// Write one of the extremal constructions as a scene file.
    Construct {
        #[command(subcommand)]
        which: Construction,
    },
    /// Run a batch of random trials.
    Experiment(ExperimentArgs),
    /// Draw a scene as SVG.
    Render {
        scene: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        gaps: bool,
        #[arg(long)]
        edge_colors: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SharpDomain {
    Disk,
    ThreeCircle,
    Reuleaux,
}

#[derive(Subcommand)]
enum Construction {
    /// The domain plus `n - 1` expanded copies reaching `2(n - 1) + m` vertices.
    SharpUpper {
        #[arg(long, value_enum, default_value = "disk")]
        domain: SharpDomain,
        /// Domain given as a JSON object instead (overrides --domain).
        #[arg(long)]
        domain_file: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 4.0)]
        mu: f64,
        #[arg(long)]
        delta: Option<f64>,
        /// Disk radius of the three-circle domain.
        #[arg(long, default_value_t = 0.8)]
        side: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// A random proper pair of homothets of the three-circle domain.
    ThreeCircle {
        #[arg(long, default_value_t = 0.8)]
        side: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Rounded polygons whose intersection has no vertex.
    ZeroVertex {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 0.2)]
        corner_radius: f64,
        /// The diagonal-offset pair instead, which does have corners.
        #[arg(long)]
        control: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(clap::Args)]
struct ExperimentArgs {
    /// JSON experiment configuration; the flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Report CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary JSON path (default: the report path with `.summary.json`).
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Random domain kinds when no config is given.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "disk,ellipse,superellipse"
    )]
    kinds: Vec<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    translative: bool,
    #[arg(long)]
    mixed: bool,
    #[arg(long)]
    no_oracle: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.downcast_ref::<Fail>().map_or(1, |f| f.code))
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Verify { scene, json } => verify(&scene, json),
        Command::Structure { scene, json } => structure(&scene, json),
        Command::Oracle {
            scene,
            samples,
            tau,
            json,
        } => oracle(&scene, samples, tau, json),
        Command::Construct { which } => construct(which),
        Command::Experiment(args) => experiment(args),
        Command::Render {
            scene,
            output,
            gaps,
            edge_colors,
        } => {
            let (_, scene) = load_scene(&scene)?;
            let s = compute_structure(&scene).ok();
            let svg = render_svg(
                &scene,
                s.as_ref(),
                &SvgOptions {
                    gaps,
                    edge_colors,
                    ..Default::default()
                },
            );
            write(&output, &svg)
        }
    }
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn analyse(path: &Path) -> anyhow::Result<Structure64> {
    let (_, scene) = load_scene(path)?;
    if let Some(j) = scene.bodies().iter().position(|b| !b.is_strictly_convex()) {
        return fail(
            2,
            format!("body {j} is not strictly convex; only the oracle applies to this scene"),
        );
    }
    compute_structure(&scene).or_else(|e| fail(engine_code(&e), e.to_string()))
}

fn verify(path: &Path, as_json: bool) -> anyhow::Result<()> {
    let s = analyse(path)?;
    let b = verify_bounds(&s);
    if as_json {
        let v = json!({
            "regime": format!("{:?}", b.regime).to_lowercase(),
            "n": b.n, "m": b.m,
            "pairwise": b.pairwise, "inherited": b.inherited, "total": b.total,
            "lower": b.lower, "upper": b.upper, "holds": b.holds,
            "min_angle": s.min_vertex_angle(),
        });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!(
            "{:?} scene, n = {}, m = {}: {} vertices ({} pairwise, {} inherited), bound [{}, {}]: {}",
            b.regime,
            b.n,
            b.m,
            b.total,
            b.pairwise,
            b.inherited,
            b.lower,
            b.upper,
            if b.holds { "holds" } else { "VIOLATED" }
        );
    }
    if !b.holds {
        return fail(4, "vertex count outside the bound");
    }
    Ok(())
}

fn kind_json(k: VertexKind) -> serde_json::Value {
    match k {
        VertexKind::Pairwise { i, j } => json!({"kind": "pairwise", "bodies": [i, j]}),
        VertexKind::Inherited { owner, feature } => {
            json!({"kind": "inherited", "owner": owner, "feature": feature})
        }
    }
}

fn structure(path: &Path, as_json: bool) -> anyhow::Result<()> {
    let s = analyse(path)?;
    if as_json {
        let v = json!({
            "vertices": s.vertices.iter().map(|v| {
                let mut o = kind_json(v.kind);
                o["x"] = json!(v.point.x);
                o["y"] = json!(v.point.y);
                o["normal_start"] = json!(v.normal_arc.start().value());
                o["normal_extent"] = json!(v.normal_arc.extent());
                o
            }).collect::<Vec<_>>(),
            "edges": s.edges.iter().map(|e| json!({
                "owner": e.owner,
                "normal_start": e.normal_arc.start().value(),
                "normal_extent": e.normal_arc.extent(),
                "endpoints": [e.endpoints.0, e.endpoints.1],
            })).collect::<Vec<_>>(),
            "edge_families": s.edge_families,
            "gaps": s.gap_families.iter().flatten().map(|g| json!({
                "owner": g.owner,
                "normal_start": g.open_arc.start().value(),
                "normal_extent": g.open_arc.extent(),
                "chord": [[g.chord.0.x, g.chord.0.y], [g.chord.1.x, g.chord.1.y]],
            })).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&v)?);
        return Ok(());
    }
    println!("{} vertices", s.vertices.len());
    for (i, v) in s.vertices.iter().enumerate() {
        let what = match v.kind {
            VertexKind::Pairwise { i, j } => format!("pairwise {i}/{j}"),
            VertexKind::Inherited { owner, feature } => {
                format!("inherited from body {owner}, corner {feature}")
            }
        };
        println!(
            "  v{i}: ({:.9}, {:.9}) {what}, exterior angle {:.6}",
            v.point.x,
            v.point.y,
            v.normal_arc.extent()
        );
    }
    println!("{} edges", s.edges.len());
    for (i, e) in s.edges.iter().enumerate() {
        println!(
            "  e{i}: body {} from v{} to v{}",
            e.owner, e.endpoints.0, e.endpoints.1
        );
    }
    for (j, fam) in s.edge_families.iter().enumerate() {
        println!(
            "body {j}: {} edge(s), {} gap(s)",
            fam.len(),
            s.gap_families[j].len()
        );
    }
    Ok(())
}

fn oracle(path: &Path, samples: usize, tau: f64, as_json: bool) -> anyhow::Result<()> {
    let (_, scene) = load_scene(path)?;
    let cfg = OracleConfig {
        samples,
        tau,
        ..OracleConfig::default()
    };
    let rep = oracle_report(&scene, &cfg).or_else(|e| fail(1, e.to_string()))?;
    if as_json {
        let pts: Vec<_> = rep
            .singular_points
            .iter()
            .map(|(p, a)| json!({"x": p.x, "y": p.y, "angle": a}))
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({"count": rep.count, "corners": pts}))?
        );
    } else {
        println!("{} corner(s)", rep.count);
        for (p, a) in &rep.singular_points {
            println!("  ({:.9}, {:.9}) turning {:.6}", p.x, p.y, a);
        }
    }
    Ok(())
}

fn construct(which: Construction) -> anyhow::Result<()> {
    let (scene, output): (Scene64, PathBuf) = match which {
        Construction::SharpUpper {
            domain,
            domain_file,
            n,
            mu,
            delta,
            side,
            output,
        } => {
            let d = match domain_file {
                Some(p) => {
                    let text = std::fs::read_to_string(&p)
                        .with_context(|| format!("reading {}", p.display()))?;
                    serde_json::from_str::<DomainJson>(&text)?.build()?
                }
                None => match domain {
                    SharpDomain::Disk => make_disk(),
                    SharpDomain::ThreeCircle => build_three_circle_domain(side)?,
                    SharpDomain::Reuleaux => build_three_circle_domain(1.0)?,
                },
            };
            let params = ConstructionParams {
                mu,
                delta,
                ..ConstructionParams::default()
            };
            (build_sharp_upper(d, n, &params)?, output)
        }
        Construction::ThreeCircle { side, seed, output } => {
            let spec = GenSpec {
                source: DomainSource::ThreeCircle { s: side },
                mixed: false,
                translative: false,
                n: 2,
                placement: Placement::default(),
                tolerances: Default::default(),
                max_retries: 1000,
            };
            match random_scene(&spec, &mut TrialRng::new(seed)) {
                Ok(g) => (g.scene, output),
                Err(e) => return gen_fail(e),
            }
        }
        Construction::ZeroVertex {
            n,
            corner_radius,
            control,
            output,
        } => {
            let params = ConstructionParams {
                corner_radius,
                ..ConstructionParams::default()
            };
            let scene = if control {
                zero_vertex_control(&params)?
            } else {
                build_zero_vertex(n, &params)?
            };
            (scene, output)
        }
    };
    write(&output, &SceneFile::describe(&scene).to_json())?;
    println!("wrote {} bodies to {}", scene.n(), output.display());
    Ok(())
}

fn gen_fail<T>(e: GenError) -> anyhow::Result<T> {
    let code = match &e {
        GenError::GenerationExhausted { .. } => 3,
        GenError::Config(_) => 1,
        GenError::Engine { error, .. } => engine_code(error),
    };
    if let GenError::Engine { scene, .. } = &e {
        eprintln!("offending scene:\n{}", SceneFile::describe(scene).to_json());
    }
    fail(code, e.to_string())
}

fn parse_kind(s: &str) -> anyhow::Result<RandomKind> {
    Ok(serde_json::from_value(json!(s)).map_err(|_| Fail {
        code: 1,
        msg: format!("unknown domain kind `{s}`"),
    })?)
}

fn experiment(args: ExperimentArgs) -> anyhow::Result<()> {
    let mut cfg = match &args.config {
        Some(p) => {
            let text =
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str::<ExperimentConfig>(&text)
                .with_context(|| format!("parsing {}", p.display()))?
        }
        None => {
            let kinds = args
                .kinds
                .iter()
                .map(|k| parse_kind(k))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let base = json!({
                "domain": {"random": {"kinds": kinds}},
                "translative": args.translative,
                "mixed": args.mixed,
                "n": args.n.unwrap_or(3),
                "trials": args.trials.unwrap_or(100),
                "seed": args.seed.unwrap_or(0),
            });
            serde_json::from_value(base)?
        }
    };
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if args.n_max.is_some() {
        cfg.n_max = args.n_max;
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if args.no_oracle {
        cfg.oracle.enabled = false;
    }
    if args.out.is_some() {
        cfg.out = args.out.clone();
    }
    if args.summary.is_some() {
        cfg.summary = args.summary.clone();
    }
    let report = match run_experiment(&cfg) {
        Ok(r) => r,
        Err(ExperimentError::Config(m)) => return fail(1, m),
        Err(ExperimentError::Generation { trial, source }) => {
            eprintln!("trial {trial}:");
            return gen_fail(source);
        }
    };
    let csv = report.csv_bytes();
    match &cfg.out {
        Some(p) => std::fs::write(p, &csv).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{}", String::from_utf8_lossy(&csv)),
    }
    let summary_path = cfg
        .summary
        .clone()
        .or_else(|| cfg.out.as_ref().map(|p| p.with_extension("summary.json")));
    match summary_path {
        Some(p) => write(&p, &report.summary_json())?,
        None => eprintln!("{}", report.summary_json()),
    }
    let bad = report.violations();
    if bad > 0 {
        return fail(
            4,
            format!("{bad} trial(s) contradict the theory; see the report"),
        );
    }
    Ok(())
}
