//! Computation-count model of a gap-and-diameter hole detector.
//!
//! Every node with at least two neighbors whose widest angular gap exceeds
//! the angle threshold computes its gap angle and the diameter of the face
//! behind the gap (two computations). A node for which both values exceed
//! their thresholds is positive and notifies each neighbor once; each
//! notified neighbor recomputes both values (two more), and becomes
//! positive in turn if it qualifies.

use std::collections::VecDeque;

use crate::geometry::{max_angular_gap, normalize_deg, sweep_neighbors, Point};
use crate::gpsr::right_hand_next;
use crate::netgen::{Network, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HagrCost {
    pub computations: usize,
    pub positive_nodes: usize,
}

/// Widest gap in radians and the face diameter behind it.
fn gap_and_diameter(net: &Network, node: NodeId) -> Option<(f64, f64)> {
    let apex = net.pos(node);
    let around: Vec<Point> = net.neighbors(node).iter().map(|&v| net.pos(v)).collect();
    if around.len() < 2 {
        return None;
    }
    let (start, width) = max_angular_gap(apex, &around)?;
    let bisector = Point::from_polar_deg(normalize_deg(start + width / 2.0));
    let planar: Vec<(NodeId, Point)> = net
        .planar_neighbors(node)
        .iter()
        .map(|&v| (v, net.pos(v)))
        .collect();
    let first = sweep_neighbors(apex, bisector, &planar)?.leftmost.0;
    let face = face_walk(net, node, first);
    let mut diameter = 0.0f64;
    for (i, &u) in face.iter().enumerate() {
        for &v in &face[i + 1..] {
            diameter = diameter.max(net.dist(u, v));
        }
    }
    Some((width.to_radians(), diameter))
}

/// Vertices of the face to the right of the directed edge `start -> first`.
fn face_walk(net: &Network, start: NodeId, first: NodeId) -> Vec<NodeId> {
    let budget = 2 * net.planar_edge_count() + 2;
    let mut face = vec![start];
    let (mut prev, mut cur) = (start, first);
    for _ in 0..budget {
        face.push(cur);
        let Some(next) = right_hand_next(net, cur, net.pos(prev)) else {
            break;
        };
        (prev, cur) = (cur, next);
        if (prev, cur) == (start, first) {
            break;
        }
    }
    face.sort();
    face.dedup();
    face
}

pub fn hagr_detection_cost(net: &Network, angle_threshold: f64, diameter_threshold: f64) -> HagrCost {
    let positive = |v: NodeId| {
        gap_and_diameter(net, v)
            .is_some_and(|(gap, dia)| gap > angle_threshold && dia > diameter_threshold)
    };
    let mut cost = HagrCost::default();
    let mut advertised = vec![false; net.len()];
    let mut queue = VecDeque::new();
    for v in net.ids() {
        let Some((gap, dia)) = gap_and_diameter(net, v) else {
            continue;
        };
        if gap <= angle_threshold {
            continue;
        }
        cost.computations += 2;
        if dia > diameter_threshold {
            advertised[v.index()] = true;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        cost.positive_nodes += 1;
        for &w in net.neighbors(u) {
            cost.computations += 2;
            if !advertised[w.index()] && positive(w) {
                advertised[w.index()] = true;
                queue.push_back(w);
            }
        }
    }
    cost
}
