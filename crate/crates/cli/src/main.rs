//! `navtree`: extract tree structures from walkable surfaces.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use log::info;

use navtree_core::analysis::render_table;
use navtree_core::export::ExportFormat;
use navtree_core::fixtures;
use navtree_core::graph::graph_to_json;
use navtree_core::oracle::run_suites;
use navtree_core::pipeline::{
    run_extract, run_with_inputs, write_outputs, Inputs, Mode, PipelineConfig, PipelineError,
};
use navtree_core::{EdgeWeights, Metric, SelectionMethod};

#[derive(Parser, Debug)]
#[command(name = "navtree", version, about = "Extract simplified tree structures from walkable surfaces")]
#[command(args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract the simplified structure and write it under --out.
    Extract(RunArgs),
    /// Extract, then classify nodes by betweenness (map analysis).
    Analyze(RunArgs),
    /// Print per-stage timing tables for the inputs, or for built-in levels.
    Bench(BenchArgs),
    /// Run the brute-force verification suites.
    Oracle(OracleArgs),
    /// Write the built-in test levels to a directory.
    Fixture(FixtureArgs),
}

#[derive(Args, Debug, Clone)]
struct InputArgs {
    /// Walkable surface (.obj, or .json with vertices and polygons).
    #[arg(long)]
    surface: Option<PathBuf>,
    /// Blocker triangles (.obj or .json).
    #[arg(long)]
    blockers: Option<PathBuf>,
    /// Pre-built graph JSON; replaces --surface.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Merge surface vertices closer than this before indexing.
    #[arg(long)]
    weld_eps: Option<f64>,

    /// Terminal selection: entry-exit, leaves or metric.
    #[arg(long, default_value = "entry-exit")]
    terminals: SelectionMethod,
    /// Metric for --terminals metric.
    #[arg(long, default_value = "betweenness")]
    metric: Metric,
    /// Number of terminals for --terminals metric.
    #[arg(long)]
    k: Option<usize>,
    /// Boundary sampling interval.
    #[arg(long, default_value_t = 0.5)]
    interval: f64,
    /// Raycast radius for entry/exit classification.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Tangent turn that splits entry/exit segments, degrees.
    #[arg(long, default_value_t = 45.0)]
    sharpness_deg: f64,
    /// Push entry/exit points outward by this distance.
    #[arg(long, default_value_t = 0.0)]
    exit_offset: f64,

    /// Centrality used to pick tree roots.
    #[arg(long, default_value = "betweenness")]
    root_metric: Metric,
    /// Edge weights for betweenness: euclidean or unit.
    #[arg(long, default_value = "euclidean")]
    centrality_weights: EdgeWeights,
    /// Katz attenuation; defaults to 0.9 / spectral radius.
    #[arg(long)]
    katz_alpha: Option<f64>,
    /// Largest normal deviation allowed when collapsing a node, degrees.
    #[arg(long, default_value_t = 15.0)]
    normal_tol_deg: f64,
    /// Largest distance between a sight line and the surface.
    #[arg(long, default_value_t = 0.5)]
    los_height_tol: f64,
    /// Number of density classes in analysis mode.
    #[arg(long, default_value_t = 3)]
    density_buckets: usize,
    /// Experiment name used in reports.
    #[arg(long)]
    name: Option<String>,
    /// Seed for generated fixtures.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Structure formats to write (dot, json, obj); all by default.
    #[arg(long, value_delimiter = ',')]
    format: Vec<ExportFormat>,
    /// Key = value file with defaults for any of these flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Repetitions per level; the fastest total is reported.
    #[arg(long, default_value_t = 3)]
    runs: usize,
    /// Include the analysis post-process.
    #[arg(long)]
    analysis: bool,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random cases per suite.
    #[arg(long, default_value_t = 100)]
    cases: usize,
}

#[derive(Args, Debug)]
struct FixtureArgs {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Seed for the random cell level.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Turns `key = value` lines into `--key value` arguments. `#` starts a
/// comment; a bare key is a switch.
fn config_args(text: &str) -> anyhow::Result<Vec<String>> {
    let mut args = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), Some(v.trim())),
            None => (line, None),
        };
        let key = key.trim_start_matches("--");
        if key.is_empty() || key == "config" {
            bail!("config line {}: bad key in {raw:?}", i + 1);
        }
        args.push(format!("--{key}"));
        if let Some(v) = value {
            args.push(v.to_string());
        }
    }
    Ok(args)
}

/// Inserts arguments from a `--config` file right after the subcommand so
/// that later command-line flags override them.
fn expand_config(argv: Vec<String>) -> anyhow::Result<Vec<String>> {
    let pos = argv.iter().position(|a| a == "--config" || a.starts_with("--config="));
    let Some(pos) = pos else {
        return Ok(argv);
    };
    let path = match argv[pos].split_once('=') {
        Some((_, p)) => p.to_string(),
        None => argv.get(pos + 1).cloned().ok_or_else(|| anyhow!("--config needs a path"))?,
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("cannot read config {path}"))?;
    let extra = config_args(&text)?;
    let mut out = argv[..2.min(argv.len())].to_vec();
    out.extend(extra);
    out.extend(argv[2.min(argv.len())..].iter().cloned());
    Ok(out)
}

fn pipeline_config(a: &InputArgs, mode: Mode) -> PipelineConfig {
    let mut cfg = PipelineConfig {
        experiment: a.name.clone().unwrap_or_else(|| experiment_name(a)),
        surface: a.surface.clone(),
        blockers: a.blockers.clone(),
        graph: a.graph.clone(),
        terminals: a.terminals,
        terminal_metric: a.metric,
        k: a.k,
        interval: a.interval,
        root_metric: a.root_metric,
        mode,
        density_buckets: a.density_buckets,
        seed: a.seed,
        ..PipelineConfig::default()
    };
    cfg.surface_config.weld_eps = a.weld_eps;
    cfg.classify.radius = a.radius;
    cfg.segments.sharpness_threshold = a.sharpness_deg.to_radians();
    cfg.segments.exit_offset = a.exit_offset;
    cfg.centrality.weights = a.centrality_weights;
    cfg.centrality.katz_alpha = a.katz_alpha;
    cfg.simplify.normal_angle_tolerance = a.normal_tol_deg.to_radians();
    cfg.simplify.los_height_tolerance = a.los_height_tol;
    cfg
}

fn experiment_name(a: &InputArgs) -> String {
    a.surface
        .as_ref()
        .or(a.graph.as_ref())
        .and_then(|p| p.file_stem())
        .map_or("run".into(), |s| s.to_string_lossy().into_owned())
}

fn run(args: &RunArgs, mode: Mode) -> Result<(), PipelineError> {
    let cfg = pipeline_config(&args.input, mode);
    let out = run_extract(&cfg)?;
    let formats = if args.format.is_empty() { ExportFormat::ALL.to_vec() } else { args.format.clone() };
    let written = write_outputs(&out, &args.out, &formats)?;
    print!("{}", render_table(&out.report.stages));
    for p in written {
        info!("wrote {}", p.display());
    }
    Ok(())
}

fn bench_levels(seed: u64) -> Vec<(String, Inputs)> {
    let levels = vec![
        (
            "corridor".to_string(),
            Inputs::from_surface(
                fixtures::surface(fixtures::corridor_raw()),
                Some(fixtures::blockers(fixtures::corridor_blockers_raw())),
            ),
        ),
        (
            "hub".to_string(),
            Inputs::from_surface(
                fixtures::surface(fixtures::hub_raw()),
                Some(fixtures::blockers(fixtures::hub_blockers_raw())),
            ),
        ),
        {
            let cells = fixtures::random_cells(&mut fixtures::rng(seed), 24, 24, 0.75);
            (
                format!("cells-{seed}"),
                Inputs::from_surface(
                    fixtures::surface(fixtures::cells_raw(&cells)),
                    Some(fixtures::blockers(fixtures::cell_walls(&cells, fixtures::WALL_GAP))),
                ),
            )
        },
    ];
    levels
}

fn bench(args: &BenchArgs) -> Result<(), PipelineError> {
    let mode = if args.analysis { Mode::Analyze } else { Mode::Extract };
    let base = pipeline_config(&args.input, mode);
    let mut jobs: Vec<(PipelineConfig, Option<Inputs>)> = Vec::new();
    if base.surface.is_some() || base.graph.is_some() {
        jobs.push((base.clone(), None));
    } else {
        for (name, inputs) in bench_levels(base.seed) {
            let mut cfg = PipelineConfig { experiment: name, ..base.clone() };
            // random cell levels carry no marked exits
            if cfg.experiment.starts_with("cells") {
                cfg.terminals = SelectionMethod::MetricTopK;
                cfg.k = Some(cfg.k.unwrap_or(8));
            }
            jobs.push((cfg, Some(inputs)));
        }
        let comb = fixtures::cell_graph(&fixtures::comb_cells());
        let walls = fixtures::blockers(fixtures::cell_walls(&fixtures::comb_cells(), fixtures::WALL_GAP));
        jobs.push((
            PipelineConfig { experiment: "comb".into(), terminals: SelectionMethod::LeafNodes, ..base.clone() },
            Some(Inputs::from_graph(comb, Some(walls))),
        ));
    }
    for (cfg, inputs) in &jobs {
        let mut best = None;
        for _ in 0..args.runs.max(1) {
            let out = match inputs {
                Some(i) => run_with_inputs(cfg, i, Some(Instant::now()))?,
                None => run_extract(cfg)?,
            };
            let rep = out.report.stages;
            if best.as_ref().is_none_or(|b: &navtree_core::StageReport| rep.total_ms < b.total_ms) {
                best = Some(rep);
            }
        }
        print!("{}", render_table(&best.expect("at least one run")));
    }
    Ok(())
}

fn oracle(args: &OracleArgs) -> ExitCode {
    let mut ok = true;
    for s in run_suites(args.seed, args.cases) {
        let status = if s.passed() { "PASS" } else { "FAIL" };
        println!("{:<20} {status} {}/{} cases", s.name, s.cases - s.failures, s.cases);
        if let Some(d) = &s.detail {
            println!("  first failure: {d}");
        }
        ok &= s.passed();
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn write_fixture(dir: &Path, name: &str, text: String) -> anyhow::Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
    println!("{}", path.display());
    Ok(())
}

fn fixture(args: &FixtureArgs) -> anyhow::Result<()> {
    std::fs::create_dir_all(&args.out).with_context(|| format!("cannot create {}", args.out.display()))?;
    let d = args.out.as_path();
    write_fixture(d, "corridor.obj", fixtures::corridor_raw().to_obj())?;
    write_fixture(d, "corridor_blockers.obj", fixtures::corridor_blockers_raw().to_obj())?;
    write_fixture(d, "hub.obj", fixtures::hub_raw().to_obj())?;
    write_fixture(d, "hub_blockers.obj", fixtures::hub_blockers_raw().to_obj())?;
    write_fixture(d, "l_corridor.obj", fixtures::l_corridor_raw().to_obj())?;
    write_fixture(d, "ramp.obj", fixtures::ramp_raw().to_obj())?;
    write_fixture(d, "comb_graph.json", graph_to_json(&fixtures::cell_graph(&fixtures::comb_cells())))?;
    let cells = fixtures::random_cells(&mut fixtures::rng(args.seed), 24, 24, 0.75);
    write_fixture(d, &format!("cells_{}.obj", args.seed), fixtures::cells_raw(&cells).to_obj())?;
    write_fixture(
        d,
        &format!("cells_{}_blockers.obj", args.seed),
        fixtures::cell_walls(&cells, fixtures::WALL_GAP).to_obj(),
    )?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("STRUCT_LOG", "warn")).init();
    let argv = match expand_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(if e.downcast_ref::<std::io::Error>().is_some() { 4 } else { 2 });
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Extract(a) => run(a, Mode::Extract),
        Command::Analyze(a) => run(a, Mode::Analyze),
        Command::Bench(a) => bench(a),
        Command::Oracle(a) => return oracle(a),
        Command::Fixture(a) => {
            return match fixture(a) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(4)
                }
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
