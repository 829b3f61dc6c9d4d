//! Paired GPSR/HDDL experiments over batches of seeded networks.

mod config;
mod emit;
mod hagr;

pub use config::ExperimentConfig;
pub use emit::{emit, summarize, EmittedFiles, SummaryRow};
pub use hagr::{hagr_detection_cost, HagrCost};

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gpsr::{default_ttl, route_gpsr};
use crate::hddl_route::route_hddl;
use crate::hole_detect::detect_holes;
use crate::hole_model::{build_records, HoleCaches, HoleDump};
use crate::netgen::{bfs_hops, generate, seeded_rng, Network, NetworkError, NodeId, RngStream};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("parsing config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("writing config: {0}")]
    Serialize(#[from] toml::ser::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("no routes to write")]
    EmptyRoutes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Gpsr,
    Hddl,
}

impl std::fmt::Display for Protocol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Protocol::Gpsr => "gpsr",
            Protocol::Hddl => "hddl",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteRow {
    pub node_count: usize,
    pub network_index: usize,
    pub network_seed: u64,
    pub protocol: Protocol,
    pub src: usize,
    pub dst: usize,
    pub delivered: bool,
    pub hops: usize,
    pub length_m: f64,
    pub straight_m: f64,
    pub is_hole_path: bool,
    pub bfs_hops: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkRow {
    pub node_count: usize,
    pub network_index: usize,
    pub network_seed: u64,
    /// Nodes left after carving.
    pub nodes: usize,
    pub mean_degree: f64,
    pub largest_component: usize,
    pub loops_circulated: usize,
    pub holes_found: usize,
    pub hddl_evaluations: usize,
    pub hagr_computations: usize,
    pub announcement_messages: usize,
    pub pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoleRow {
    pub node_count: usize,
    pub network_index: usize,
    pub network_seed: u64,
    #[serde(flatten)]
    pub hole: HoleDump,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunMetrics {
    pub routes: Vec<RouteRow>,
    pub networks: Vec<NetworkRow>,
    pub holes: Vec<HoleRow>,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of the `index`-th network with `count` nodes.
pub fn network_seed(seed_base: u64, count: usize, index: usize) -> u64 {
    seed_base ^ splitmix64(((count as u64) << 32) ^ index as u64)
}

/// Builds the seeded network and applies the configured carves.
pub fn build_network(cfg: &ExperimentConfig, seed: u64, count: usize) -> Result<Network, NetworkError> {
    let mut net = generate(seed, count, cfg.area(), cfg.radius)?;
    for c in &cfg.carve {
        net = net.carve_hole(c.center(), c.hole_radius)?.network;
    }
    Ok(net)
}

/// Ordered pairs from the largest component at least `min_sep` apart,
/// sampled without replacement.
pub fn sample_pairs(net: &Network, seed: u64, wanted: usize, min_sep: f64) -> Vec<(NodeId, NodeId)> {
    let comp = net.largest_component();
    let mut candidates = Vec::new();
    for &s in &comp {
        for &d in &comp {
            if s != d && net.dist(s, d) >= min_sep {
                candidates.push((s, d));
            }
        }
    }
    let mut rng = seeded_rng(seed, RngStream::Pairs);
    let take = wanted.min(candidates.len());
    sample(&mut rng, candidates.len(), take)
        .into_iter()
        .map(|i| candidates[i])
        .collect()
}

/// Everything measured on one network.
pub fn run_network(
    cfg: &ExperimentConfig,
    count: usize,
    index: usize,
) -> Result<RunMetrics, HarnessError> {
    let seed = network_seed(cfg.seed_base, count, index);
    let net = build_network(cfg, seed, count)?;
    let det = cfg.detection();
    let report = detect_holes(&net, &det);
    let records = build_records(&report, &det);
    let holes = records
        .iter()
        .map(|r| HoleRow {
            node_count: count,
            network_index: index,
            network_seed: seed,
            hole: HoleDump::from(r),
        })
        .collect();
    let caches = HoleCaches::build(&net, records);
    let hagr = hagr_detection_cost(&net, cfg.hagr_angle_threshold, cfg.hagr_diameter_threshold);
    let pairs = sample_pairs(&net, seed, cfg.pairs_per_network, cfg.min_separation());
    let ttl = default_ttl(net.len());

    let mut routes = Vec::with_capacity(2 * pairs.len());
    for &(s, d) in &pairs {
        let g = route_gpsr(&net, s, d, ttl);
        let h = route_hddl(&net, &caches, s, d, ttl);
        let bfs = bfs_hops(&net, s, d);
        let hole_path = h.is_hole_path();
        for (protocol, path) in [(Protocol::Gpsr, &g), (Protocol::Hddl, &h.path)] {
            routes.push(RouteRow {
                node_count: count,
                network_index: index,
                network_seed: seed,
                protocol,
                src: s.index(),
                dst: d.index(),
                delivered: path.delivered,
                hops: path.hop_count(),
                length_m: path.euclidean_length,
                straight_m: net.dist(s, d),
                is_hole_path: hole_path,
                bfs_hops: bfs,
            });
        }
    }
    let network = NetworkRow {
        node_count: count,
        network_index: index,
        network_seed: seed,
        nodes: net.len(),
        mean_degree: net.mean_degree(),
        largest_component: net.largest_component().len(),
        loops_circulated: report.loops.len(),
        holes_found: caches.records.len(),
        hddl_evaluations: report.ratio_evaluations,
        hagr_computations: hagr.computations,
        announcement_messages: caches.message_count,
        pairs: pairs.len(),
    };
    Ok(RunMetrics {
        routes,
        networks: vec![network],
        holes,
    })
}

/// Runs every configured network, in parallel, and concatenates the results
/// in (node count, index) order. A failing network is logged and skipped.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunMetrics, HarnessError> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = cfg
        .node_counts
        .iter()
        .flat_map(|&c| (0..cfg.networks_per_count).map(move |i| (c, i)))
        .collect();
    let outcomes: Vec<_> = jobs
        .par_iter()
        .map(|&(c, i)| (c, i, run_network(cfg, c, i)))
        .collect();
    let mut all = RunMetrics::default();
    for (c, i, out) in outcomes {
        match out {
            Ok(m) => {
                all.routes.extend(m.routes);
                all.networks.extend(m.networks);
                all.holes.extend(m.holes);
            }
            Err(err) => log::warn!("skipping network {i} with {c} nodes: {err}"),
        }
    }
    Ok(all)
}

/// Means over pairs delivered by both protocols.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PairedComparison {
    pub pairs: usize,
    pub gpsr_length: f64,
    pub hddl_length: f64,
    pub gpsr_hops: f64,
    pub hddl_hops: f64,
}

impl PairedComparison {
    pub fn length_ratio(&self) -> f64 {
        self.hddl_length / self.gpsr_length
    }

    pub fn hops_ratio(&self) -> f64 {
        self.hddl_hops / self.gpsr_hops
    }
}

/// Compares the protocols on matching pairs; `hole_paths_only` restricts to
/// pairs where HDDL used a landmark.
pub fn compare(routes: &[RouteRow], hole_paths_only: bool) -> PairedComparison {
    let mut out = PairedComparison::default();
    // rows come in (gpsr, hddl) couples for the same pair
    for pair in routes.chunks_exact(2) {
        let (g, h) = (&pair[0], &pair[1]);
        debug_assert!(g.protocol == Protocol::Gpsr && h.protocol == Protocol::Hddl);
        debug_assert!(g.network_seed == h.network_seed && g.src == h.src && g.dst == h.dst);
        if !(g.delivered && h.delivered) || (hole_paths_only && !h.is_hole_path) {
            continue;
        }
        out.pairs += 1;
        out.gpsr_length += g.length_m;
        out.hddl_length += h.length_m;
        out.gpsr_hops += g.hops as f64;
        out.hddl_hops += h.hops as f64;
    }
    if out.pairs > 0 {
        let n = out.pairs as f64;
        out.gpsr_length /= n;
        out.hddl_length /= n;
        out.gpsr_hops /= n;
        out.hddl_hops /= n;
    }
    out
}
