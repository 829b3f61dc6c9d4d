use std::fs;

use hddl_core::harness::{compare, emit, run_experiment, ExperimentConfig, Protocol};
use hddl_core::hole_detect::{detect_holes, DetectionConfig};
use hddl_core::scenario::CarveSpec;
use hddl_core::{generate, Area, Point, Scenario};

/// Even-odd point-in-polygon.
fn encloses(poly: &[Point], q: Point) -> bool {
    let mut inside = false;
    for (i, &a) in poly.iter().enumerate() {
        let b = poly[(i + 1) % poly.len()];
        if (a.y > q.y) != (b.y > q.y) && q.x < a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y) {
            inside = !inside;
        }
    }
    inside
}

#[test]
fn dense_network_circulates_its_carved_void() {
    let c = Point::new(100.0, 100.0);
    let cfg = DetectionConfig::default();
    let mut enclosed = 0;
    for seed in 0..20 {
        let net = generate(seed, 500, Area::new(200.0, 200.0), 20.0)
            .unwrap()
            .carve_hole(c, 60.0)
            .unwrap()
            .network;
        let report = detect_holes(&net, &cfg);
        let around: Vec<_> = report
            .loops
            .iter()
            .filter(|l| !l.outer_face)
            .filter(|l| {
                let pts: Vec<Point> = l.boundary.vertices.iter().map(|v| v.1).collect();
                encloses(&pts, c)
            })
            .collect();
        assert!(around.len() <= 1, "seed {seed}");
        for l in &around {
            assert!(l.boundary.vertices.iter().all(|v| v.1.dist(c) >= 60.0));
            enclosed += 1;
        }
    }
    // a few seeds leave a channel from the void to the outer face
    assert!(enclosed >= 15, "only {enclosed} of 20 voids circulated");
}

fn small_config() -> ExperimentConfig {
    ExperimentConfig {
        node_counts: vec![150, 300],
        networks_per_count: 3,
        area_width: 200.0,
        area_height: 200.0,
        pairs_per_network: 15,
        carve: vec![CarveSpec {
            cx: 100.0,
            cy: 100.0,
            hole_radius: 60.0,
        }],
        ..ExperimentConfig::default()
    }
}

#[test]
fn experiment_rows_are_paired_and_bounded() {
    let m = run_experiment(&small_config()).unwrap();
    assert_eq!(m.networks.len(), 6);
    for pair in m.routes.chunks_exact(2) {
        let (g, h) = (&pair[0], &pair[1]);
        assert_eq!((g.protocol, h.protocol), (Protocol::Gpsr, Protocol::Hddl));
        assert_eq!((g.network_seed, g.src, g.dst), (h.network_seed, h.src, h.dst));
        assert_eq!(g.is_hole_path, h.is_hole_path);
        for r in pair {
            assert!(r.straight_m >= 100.0);
            if r.delivered {
                assert!(r.length_m >= r.straight_m - 1e-9);
                assert!(r.hops >= r.bfs_hops.unwrap());
            }
        }
    }
    let all = compare(&m.routes, false);
    let holes = compare(&m.routes, true);
    assert!(holes.pairs <= all.pairs);
    assert!(all.pairs > 0);
}

#[test]
fn emitted_files_match_metrics() {
    let m = run_experiment(&small_config()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let files = emit(&m, dir.path()).unwrap();
    let routes = fs::read_to_string(&files.routes).unwrap();
    assert_eq!(routes.lines().count(), m.routes.len() + 1);
    let summary = fs::read_to_string(&files.summary).unwrap();
    assert_eq!(summary.lines().count(), 1 + 2 * 2);
    let holes = fs::read_to_string(&files.holes).unwrap();
    assert_eq!(holes.lines().count(), m.holes.len());
}

#[test]
fn pinned_scenario_rebuilds_the_same_network() {
    let sc = Scenario {
        carve: vec![CarveSpec {
            cx: 50.0,
            cy: 50.0,
            hole_radius: 20.0,
        }],
        ..Scenario::seeded(8, 120, Area::new(100.0, 100.0), 20.0)
    };
    let net = sc.build().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.toml");
    Scenario::from_network(8, &net).save(&path).unwrap();
    let again = Scenario::load(&path).unwrap().build().unwrap();
    assert_eq!(again.positions(), net.positions());
    assert_eq!(again.edge_count(), net.edge_count());
}
