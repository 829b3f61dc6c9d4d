mod common;

use common::*;
use hddl_core::gpsr::{greedy_step, GreedyStep};
use hddl_core::hole_detect::{detect, hole_ratio, max_ratio, DetectionConfig};
use hddl_core::hole_model::{announce, build_record};
use hddl_core::{route_gpsr, route_hddl, HoleCaches, NodeId, Point};

#[test]
fn rhombus_ratio_approaches_two_as_range_nears_separation() {
    let r = hole_ratio(&rhombus(0.9), NodeId(2)).unwrap();
    assert!((r - 1.8).abs() < 1e-12);
    let r = hole_ratio(&rhombus(0.99), NodeId(2)).unwrap();
    assert!((r - 1.98).abs() < 1e-12);
}

#[test]
fn shallow_notch_stays_below_threshold() {
    let lp = cycle(&shallow_notch());
    let ev = max_ratio(&lp).unwrap();
    assert_eq!(ev.witness, NodeId(3));
    assert!((ev.ratio - 2.0).abs() < 1e-9);
    assert!(detect(&lp, &DetectionConfig::default()).is_none());
    // a tighter threshold would have caught it
    assert!(detect(&lp, &DetectionConfig::with_delta(1.9)).is_some());
}

#[test]
fn long_way_round_is_flagged_although_greedy_succeeds() {
    let pts = long_way_round();
    let lp = cycle(&pts);
    let ev = detect(&lp, &DetectionConfig::default()).unwrap();
    assert_eq!(ev.witness, NodeId(3));
    assert!((ev.ratio - 2.7).abs() < 1e-9);

    let net = small_network(&pts);
    assert_eq!(net.edge_count(), 6);
    assert_eq!(greedy_step(&net, NodeId(0), pts[3]), GreedyStep::Next(NodeId(1)));
}

fn with_sender() -> (Vec<Point>, HoleCaches) {
    let mut pts = long_way_round();
    let lp = cycle(&pts);
    let cfg = DetectionConfig::default();
    let rec = build_record(&lp, detect(&lp, &cfg).unwrap(), &cfg).unwrap();
    // base of the announcement triangle is p-e, apex away from the polygon
    assert_eq!((rec.e.0, rec.f.0), (NodeId(0), NodeId(1)));
    let t = rec.triangle;
    let s = Point::new((t.e.x + t.f.x + t.k.x) / 3.0, (t.e.y + t.f.y + t.k.y) / 3.0);
    assert!(t.contains(s));
    pts.push(s);
    let net = small_network(&pts);
    (pts, HoleCaches::build(&net, vec![rec]))
}

#[test]
fn sender_inside_triangle_caches_the_record() {
    let (pts, caches) = with_sender();
    let net = small_network(&pts);
    let ann = announce(&net, &caches.records[0]);
    assert!(ann.cached.contains(&NodeId(6)));
    assert_eq!(caches.entries(NodeId(6)).len(), 1);
    // d lies behind the polygon and caches nothing
    assert!(caches.entries(NodeId(3)).is_empty());
}

#[test]
fn sender_inside_triangle_heads_for_landmark_and_skips_p() {
    let (pts, caches) = with_sender();
    let net = small_network(&pts);
    let (s, d) = (NodeId(6), NodeId(3));
    let h = route_hddl(&net, &caches, s, d, 50);
    assert!(h.path.delivered);
    assert_eq!(h.landmarks, vec![NodeId(2)]);
    assert_eq!(h.path.hops, vec![s, NodeId(1), NodeId(2), d]);
    let g = route_gpsr(&net, s, d, 50);
    assert_eq!(g.hops, h.path.hops);
}
