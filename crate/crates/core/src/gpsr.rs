//! Greedy Perimeter Stateless Routing.
//!
//! Greedy mode forwards over the full unit-disk neighborhood. Perimeter
//! mode walks faces of the Gabriel subgraph by the right-hand rule and
//! changes face whenever the next edge crosses the segment from the
//! perimeter entry point to the destination closer than the last crossing.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::geometry::{normalize_deg, segment_intersection, Point, Segment};
use crate::netgen::{Network, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForwardMode {
    Greedy,
    Perimeter,
    /// Greedy hop toward a tentative landmark target.
    Landmark,
}

/// A routed packet's trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub hops: Vec<NodeId>,
    pub delivered: bool,
    pub euclidean_length: f64,
    /// One entry per traversed edge, so `mode_trace.len() + 1 == hops.len()`.
    pub mode_trace: Vec<ForwardMode>,
}

impl Path {
    pub fn start(src: NodeId) -> Self {
        Self {
            hops: vec![src],
            delivered: false,
            euclidean_length: 0.0,
            mode_trace: Vec::new(),
        }
    }

    pub fn hop_count(&self) -> usize {
        self.hops.len() - 1
    }

    pub fn current(&self) -> NodeId {
        *self.hops.last().expect("path always holds its source")
    }

    pub fn push(&mut self, net: &Network, next: NodeId, mode: ForwardMode) {
        self.euclidean_length += net.dist(self.current(), next);
        self.hops.push(next);
        self.mode_trace.push(mode);
    }

    pub fn used_perimeter(&self) -> bool {
        self.mode_trace.contains(&ForwardMode::Perimeter)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreedyStep {
    Next(NodeId),
    Stuck,
}

/// Neighbor strictly closer to `dest` than `current`, nearest first and
/// lowest id on ties.
pub fn greedy_step(net: &Network, current: NodeId, dest: Point) -> GreedyStep {
    let here = net.pos(current).dist_sq(dest);
    net.neighbors(current)
        .iter()
        .map(|&v| (net.pos(v).dist_sq(dest), v))
        .filter(|(d, _)| *d < here)
        .min_by(|l, r| l.0.total_cmp(&r.0).then(l.1.cmp(&r.1)))
        .map_or(GreedyStep::Stuck, |(_, v)| GreedyStep::Next(v))
}

/// First Gabriel neighbor of `at` counter-clockwise from the bearing toward
/// `reference`. A neighbor lying exactly on that bearing counts as a full turn,
/// so arriving at a leaf bounces back along the same edge.
pub fn right_hand_next(net: &Network, at: NodeId, reference: Point) -> Option<NodeId> {
    let here = net.pos(at);
    let start = (reference - here).bearing_deg();
    net.planar_neighbors(at)
        .iter()
        .map(|&v| {
            let mut turn = normalize_deg((net.pos(v) - here).bearing_deg() - start);
            if turn == 0.0 {
                turn = 360.0;
            }
            (turn, here.dist_sq(net.pos(v)), v)
        })
        .min_by(|l, r| {
            l.0.total_cmp(&r.0)
                .then(l.1.total_cmp(&r.1))
                .then(l.2.cmp(&r.2))
        })
        .map(|(_, _, v)| v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerimeterState {
    /// Where the packet entered perimeter mode.
    pub entry_point: Point,
    /// Closest crossing of `entry_point -> dest` seen on the current face walk.
    pub face_crossing: Point,
    pub current_face_edge: (NodeId, NodeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Undeliverable {
    /// Node has no usable neighbor at all.
    Isolated,
    /// The perimeter walk revisited a state without progress.
    PerimeterLoop,
}

/// Per-packet GPSR forwarding state toward one target.
#[derive(Debug, Clone)]
pub struct GpsrForwarder {
    target: NodeId,
    target_pos: Point,
    perimeter: Option<PerimeterState>,
    seen: HashSet<(NodeId, NodeId, u64, u64)>,
}

impl GpsrForwarder {
    pub fn new(target: NodeId, target_pos: Point) -> Self {
        Self {
            target,
            target_pos,
            perimeter: None,
            seen: HashSet::new(),
        }
    }

    pub fn target(&self) -> NodeId {
        self.target
    }

    pub fn perimeter(&self) -> Option<&PerimeterState> {
        self.perimeter.as_ref()
    }

    /// Chooses the hop out of `current`, which received the packet from `prev`.
    pub fn next_hop(
        &mut self,
        net: &Network,
        current: NodeId,
        prev: Option<NodeId>,
    ) -> Result<(NodeId, ForwardMode), Undeliverable> {
        let here = net.pos(current);
        let d = self.target_pos;
        if let Some(per) = self.perimeter {
            if here.dist_sq(d) < per.entry_point.dist_sq(d) {
                self.perimeter = None;
                self.seen.clear();
            }
        }

        let mut state = match self.perimeter {
            None => match greedy_step(net, current, d) {
                GreedyStep::Next(v) => return Ok((v, ForwardMode::Greedy)),
                GreedyStep::Stuck => {
                    let first = right_hand_next(net, current, d).ok_or(Undeliverable::Isolated)?;
                    PerimeterState {
                        entry_point: here,
                        face_crossing: here,
                        current_face_edge: (current, first),
                    }
                }
            },
            Some(per) => {
                let reference = prev.map_or(d, |p| net.pos(p));
                let next =
                    right_hand_next(net, current, reference).ok_or(Undeliverable::Isolated)?;
                PerimeterState {
                    current_face_edge: (current, next),
                    ..per
                }
            }
        };

        self.change_faces(net, current, &mut state);

        let (_, next) = state.current_face_edge;
        let key = (
            current,
            next,
            state.face_crossing.x.to_bits(),
            state.face_crossing.y.to_bits(),
        );
        if !self.seen.insert(key) {
            return Err(Undeliverable::PerimeterLoop);
        }
        self.perimeter = Some(state);
        Ok((next, ForwardMode::Perimeter))
    }

    fn change_faces(&self, net: &Network, current: NodeId, state: &mut PerimeterState) {
        let d = self.target_pos;
        let here = net.pos(current);
        if state.entry_point == d {
            return;
        }
        let guide = Segment {
            a: state.entry_point,
            b: d,
        };
        // each rotation moves to a distinct incident edge, so degree bounds the loop
        for _ in 0..net.planar_neighbors(current).len() {
            let (_, next) = state.current_face_edge;
            let edge = Segment {
                a: here,
                b: net.pos(next),
            };
            let Some(cross) = segment_intersection(&edge, &guide) else {
                break;
            };
            let closer = cross.dist(d) < state.face_crossing.dist(d) * (1.0 - 1e-12) - 1e-12;
            if !closer {
                break;
            }
            state.face_crossing = cross;
            let Some(rotated) = right_hand_next(net, current, net.pos(next)) else {
                break;
            };
            state.current_face_edge = (current, rotated);
        }
    }
}

/// Routes `src -> dst` with GPSR, giving up after `ttl` hops.
pub fn route_gpsr(net: &Network, src: NodeId, dst: NodeId, ttl: usize) -> Path {
    let mut path = Path::start(src);
    if src == dst {
        path.delivered = true;
        return path;
    }
    let mut fwd = GpsrForwarder::new(dst, net.pos(dst));
    let mut prev = None;
    while path.current() != dst {
        if path.hop_count() >= ttl {
            return path;
        }
        let cur = path.current();
        match fwd.next_hop(net, cur, prev) {
            Ok((next, mode)) => {
                path.push(net, next, mode);
                prev = Some(cur);
            }
            Err(_) => return path,
        }
    }
    path.delivered = true;
    path
}

/// Pure greedy forwarding; stops at the first local minimum.
pub fn route_greedy(net: &Network, src: NodeId, dst: NodeId, ttl: usize) -> Path {
    let mut path = Path::start(src);
    let d = net.pos(dst);
    while path.current() != dst && path.hop_count() < ttl {
        match greedy_step(net, path.current(), d) {
            GreedyStep::Next(v) => path.push(net, v, ForwardMode::Greedy),
            GreedyStep::Stuck => break,
        }
    }
    path.delivered = path.current() == dst;
    path
}

/// Default hop budget for a network of `n` nodes.
pub fn default_ttl(n: usize) -> usize {
    4 * n
}
