//! Workloads shared by the benchmarks.

use hddl_core::harness::sample_pairs;
use hddl_core::hole_detect::{detect_holes, DetectionConfig};
use hddl_core::hole_model::build_records;
use hddl_core::{generate, Area, HoleCaches, Network, NodeId, Point};

/// Seeded `side` x `side` deployment with a 60 m void carved at its center.
pub fn carved_network(seed: u64, n: usize, side: f64) -> Network {
    generate(seed, n, Area::new(side, side), 20.0)
        .expect("benchmark parameters are valid")
        .carve_hole(Point::new(side / 2.0, side / 2.0), 60.0)
        .expect("carving leaves a valid network")
        .network
}

/// A network with its hole caches built and a batch of far-apart pairs.
pub struct RoutingWorkload {
    pub net: Network,
    pub caches: HoleCaches,
    pub pairs: Vec<(NodeId, NodeId)>,
}

impl RoutingWorkload {
    pub fn new(seed: u64, n: usize, side: f64, pairs: usize) -> Self {
        let net = carved_network(seed, n, side);
        let cfg = DetectionConfig::default();
        let caches = HoleCaches::build(&net, build_records(&detect_holes(&net, &cfg), &cfg));
        let pairs = sample_pairs(&net, seed, pairs, 100.0);
        Self { net, caches, pairs }
    }
}
