use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hddl_core::gpsr::default_ttl;
use hddl_core::harness::{emit, run_experiment, summarize, ExperimentConfig};
use hddl_core::hole_detect::{detect_holes, DetectionConfig};
use hddl_core::hole_model::{build_records, dump_jsonl};
use hddl_core::scenario::CarveSpec;
use hddl_core::{route_gpsr, route_hddl, Area, HoleCaches, NodeId, Scenario};

#[derive(Parser)]
#[command(name = "hddl", version, about = "Hole detection and landmark routing on simulated sensor networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded network scenario.
    Generate(GenerateArgs),
    /// Run hole detection on a scenario and dump the hole records.
    Detect(DetectArgs),
    /// Route one packet through a scenario and print its trace.
    Route(RouteArgs),
    /// Run a seeded sweep comparing GPSR and HDDL.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 300)]
    nodes: usize,
    /// Side length, or WIDTHxHEIGHT, in meters.
    #[arg(long, default_value = "400", value_parser = parse_area)]
    area: Area,
    #[arg(long, default_value_t = 20.0)]
    radius: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Remove every node within r of (cx, cy); repeatable.
    #[arg(long, value_name = "CX,CY,R", value_parser = parse_carve)]
    carve: Vec<CarveSpec>,
    /// Pin every node position in the written file.
    #[arg(long)]
    explicit: bool,
    /// Output file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DetectionArgs {
    #[arg(long, default_value_t = 2.25)]
    delta: f64,
    /// Angular gap, in degrees, above which a node starts probing.
    #[arg(long, default_value_t = 120.0)]
    angle_threshold: f64,
}

impl DetectionArgs {
    fn config(&self) -> Result<DetectionConfig> {
        let cfg = DetectionConfig {
            angle_threshold_deg: self.angle_threshold,
            ..DetectionConfig::with_delta(self.delta)
        };
        if !cfg.is_valid() {
            bail!("invalid detection parameters (delta must exceed 1, threshold lie in (0, 360))");
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct DetectArgs {
    scenario: PathBuf,
    #[command(flatten)]
    detection: DetectionArgs,
    /// Also write every circulated loop, hole or not, as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Hole records as JSON lines; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Protocol {
    Gpsr,
    Hddl,
}

#[derive(Args)]
struct RouteArgs {
    scenario: PathBuf,
    #[arg(long)]
    src: usize,
    #[arg(long)]
    dst: usize,
    #[arg(long, value_enum, default_value = "hddl")]
    protocol: Protocol,
    #[command(flatten)]
    detection: DetectionArgs,
    /// Hop limit; four times the node count if absent.
    #[arg(long)]
    ttl: Option<usize>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML file with experiment settings; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated node counts.
    #[arg(long, value_delimiter = ',')]
    nodes: Option<Vec<usize>>,
    /// Networks generated per node count.
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    seed_base: Option<u64>,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long, value_parser = parse_area)]
    area: Option<Area>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, value_name = "CX,CY,R", value_parser = parse_carve)]
    carve: Vec<CarveSpec>,
    /// Print the effective configuration as TOML and exit.
    #[arg(long)]
    print_config: bool,
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

fn parse_area(s: &str) -> Result<Area, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| *v > 0.0 && v.is_finite())
            .ok_or_else(|| format!("bad area dimension `{t}`"))
    };
    match s.split_once(['x', 'X']) {
        Some((w, h)) => Ok(Area::new(parse(w)?, parse(h)?)),
        None => parse(s).map(|side| Area::new(side, side)),
    }
}

fn parse_carve(s: &str) -> Result<CarveSpec, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad number `{t}` in carve")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [cx, cy, hole_radius] if hole_radius > 0.0 => Ok(CarveSpec { cx, cy, hole_radius }),
        _ => Err(format!("carve expects CX,CY,R with R > 0, got `{s}`")),
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing to stdout"),
    }
}

fn load(path: &Path) -> Result<hddl_core::Network> {
    let sc = Scenario::load(path).with_context(|| format!("loading {}", path.display()))?;
    Ok(sc.build()?)
}

fn generate(args: GenerateArgs) -> Result<()> {
    let mut sc = Scenario::seeded(args.seed, args.nodes, args.area, args.radius);
    sc.carve = args.carve;
    if args.explicit {
        let net = sc.build()?;
        sc = Scenario::from_network(args.seed, &net);
    }
    write_output(args.out.as_deref(), &sc.to_toml()?)
}

fn detect(args: DetectArgs) -> Result<()> {
    let net = load(&args.scenario)?;
    let cfg = args.detection.config()?;
    let report = detect_holes(&net, &cfg);
    let records = build_records(&report, &cfg);
    log::info!(
        "{} nodes, {} probes, {} loops, {} holes, {} ratio evaluations",
        net.len(),
        report.probes_initiated,
        report.loops.len(),
        records.len(),
        report.ratio_evaluations
    );
    if let Some(path) = &args.trace {
        fs::write(path, report.trace_jsonl()).with_context(|| format!("writing {}", path.display()))?;
    }
    write_output(args.out.as_deref(), &dump_jsonl(&records))
}

fn route(args: RouteArgs) -> Result<()> {
    let net = load(&args.scenario)?;
    for id in [args.src, args.dst] {
        if id >= net.len() {
            bail!("node {id} out of range; the scenario has {} nodes", net.len());
        }
    }
    let (src, dst) = (NodeId(args.src), NodeId(args.dst));
    let ttl = args.ttl.unwrap_or_else(|| default_ttl(net.len()));
    let trace = match args.protocol {
        Protocol::Gpsr => {
            let path = route_gpsr(&net, src, dst, ttl);
            json!({ "protocol": "gpsr", "path": path, "landmarks": [] })
        }
        Protocol::Hddl => {
            let cfg = args.detection.config()?;
            let records = build_records(&detect_holes(&net, &cfg), &cfg);
            let caches = HoleCaches::build(&net, records);
            let route = route_hddl(&net, &caches, src, dst, ttl);
            json!({ "protocol": "hddl", "path": route.path, "landmarks": route.landmarks })
        }
    };
    let mut text = serde_json::to_string_pretty(&trace)?;
    text.push('\n');
    write_output(None, &text)
}

fn experiment(args: ExperimentArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path).with_context(|| format!("loading {}", path.display()))?,
        None => ExperimentConfig::default(),
    };
    if let Some(v) = args.nodes {
        cfg.node_counts = v;
    }
    if let Some(v) = args.seeds {
        cfg.networks_per_count = v;
    }
    if let Some(v) = args.seed_base {
        cfg.seed_base = v;
    }
    if let Some(v) = args.pairs {
        cfg.pairs_per_network = v;
    }
    if let Some(a) = args.area {
        cfg.area_width = a.width;
        cfg.area_height = a.height;
    }
    if let Some(v) = args.radius {
        cfg.radius = v;
    }
    if let Some(v) = args.delta {
        cfg.delta = v;
    }
    if !args.carve.is_empty() {
        cfg.carve = args.carve;
    }
    cfg.validate()?;
    if args.print_config {
        return write_output(None, &cfg.to_toml()?);
    }

    let metrics = run_experiment(&cfg)?;
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let files = emit(&metrics, &args.out)?;

    println!(
        "{:>6} {:>5} {:>7} {:>10} {:>8} {:>6} {:>10} {:>8}",
        "nodes", "proto", "routes", "length_m", "hops", "holes", "hole_len", "hole_hops"
    );
    for row in summarize(&metrics) {
        println!(
            "{:>6} {:>5} {:>7} {:>10.1} {:>8.2} {:>6} {:>10.1} {:>8.2}",
            row.node_count,
            format!("{:?}", row.protocol).to_lowercase(),
            row.delivered,
            row.mean_length_m,
            row.mean_hops,
            row.hole_paths,
            row.hole_mean_length_m,
            row.hole_mean_hops
        );
    }
    for path in [&files.routes, &files.networks, &files.summary, &files.holes] {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().command {
        Command::Generate(a) => generate(a),
        Command::Detect(a) => detect(a),
        Command::Route(a) => route(a),
        Command::Experiment(a) => experiment(a),
    }
}
