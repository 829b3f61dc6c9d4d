//! Probe-based hole detection.
//!
//! A node whose unit-disk neighborhood leaves an angular gap wider than
//! the configured threshold launches two probes into that gap: one that
//! always turns counter-clockwise from the edge it arrived on, and its
//! mirror image. Both walk the Gabriel subgraph, so together they trace the
//! face bounding the gap. Once both are back, the initiator compares the
//! probe-path length to each collected vertex with the straight-line
//! distance; a ratio above `delta` marks the face as a hole.
//!
//! Nodes that overhear a probe never start their own, and candidates are
//! tried in ascending id order.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{max_angular_gap, normalize_deg, signed_area, sweep_neighbors, Point};
use crate::netgen::{Network, NodeId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HoleError {
    #[error("node {0} is not a vertex of the boundary loop")]
    NotOnLoop(NodeId),
    #[error("the hole ratio is undefined for the initiator itself")]
    InitiatorRatio,
    #[error("node {0} coincides with the initiator")]
    Coincident(NodeId),
    #[error("a boundary loop needs at least 2 vertices, got {0}")]
    TooShort(usize),
    #[error("consecutive boundary vertices {0} and {1} share a position")]
    ZeroLengthEdge(NodeId, NodeId),
    #[error("boundary loop has no vertex on the initiator's side of the segment")]
    NoNearSideVertex,
    #[error("announcement base collapsed to a point")]
    DegenerateBase,
    #[error("representative segment collapsed to a point")]
    DegenerateSegment,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    /// Probe-length to distance ratio above which a hole is declared.
    pub delta: f64,
    /// Minimum neighborhood gap, in degrees, for a node to launch probes.
    pub angle_threshold_deg: f64,
    /// Per-probe hop budget; defaults to twice the node count.
    pub probe_hop_budget: Option<usize>,
    /// Abort a probe that reaches a node with a single neighbor instead of
    /// letting it turn around there.
    #[serde(default)]
    pub stop_at_leaves: bool,
    /// Also test loops that trace a network's outer outline.
    #[serde(default)]
    pub test_outer_faces: bool,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        Self {
            delta: 2.25,
            angle_threshold_deg: 120.0,
            probe_hop_budget: None,
            stop_at_leaves: false,
            test_outer_faces: false,
        }
    }
}

impl DetectionConfig {
    pub fn with_delta(delta: f64) -> Self {
        Self {
            delta,
            ..Self::default()
        }
    }

    pub fn is_valid(&self) -> bool {
        self.delta > 1.0 && self.angle_threshold_deg > 0.0 && self.angle_threshold_deg < 360.0
    }

    pub fn hop_budget(&self, n: usize) -> usize {
        self.probe_hop_budget.unwrap_or(2 * n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeDirection {
    /// Relays pick the first neighbor clockwise from the incoming edge.
    Clockwise,
    /// Relays pick the first neighbor counter-clockwise from the incoming edge.
    CounterClockwise,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeMessage {
    pub initiator: NodeId,
    pub direction: ProbeDirection,
    pub visited: Vec<(NodeId, Point)>,
    pub hop_budget: usize,
}

/// Why a probe pair did not produce a loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeFailure {
    DeadEnd,
    BudgetExhausted,
    /// The walk closed without enclosing any area (e.g. around a tree).
    Degenerate,
    /// The two probes disagreed on the boundary.
    Asymmetric,
}

/// Where and how a node would launch its probes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitiationGeometry {
    pub leftmost: NodeId,
    pub rightmost: NodeId,
    /// Unit vector bisecting the widest gap.
    pub bisector: Point,
    pub gap_deg: f64,
}

/// Initiation test: `node` launches probes iff it has not overheard one and
/// its widest angular gap between consecutive neighbors exceeds the threshold.
pub fn should_initiate(
    net: &Network,
    node: NodeId,
    suppressed: &HashSet<NodeId>,
    cfg: &DetectionConfig,
) -> Option<InitiationGeometry> {
    if suppressed.contains(&node) {
        return None;
    }
    let apex = net.pos(node);
    let around: Vec<Point> = net.neighbors(node).iter().map(|&v| net.pos(v)).collect();
    let (start, width) = max_angular_gap(apex, &around)?;
    if width <= cfg.angle_threshold_deg {
        return None;
    }
    let bisector = Point::from_polar_deg(normalize_deg(start + width / 2.0));
    let planar: Vec<(NodeId, Point)> = net
        .planar_neighbors(node)
        .iter()
        .map(|&v| (v, net.pos(v)))
        .collect();
    let sweep = sweep_neighbors(apex, bisector, &planar)?;
    Some(InitiationGeometry {
        leftmost: sweep.leftmost.0,
        rightmost: sweep.rightmost.0,
        bisector,
        gap_deg: width,
    })
}

/// Gabriel neighbor of `at` met first when rotating from the bearing toward
/// `from` in the probe's direction; `from` itself only as a last resort.
fn turn(net: &Network, at: NodeId, from: NodeId, direction: ProbeDirection) -> Option<NodeId> {
    let here = net.pos(at);
    let start = (net.pos(from) - here).bearing_deg();
    net.planar_neighbors(at)
        .iter()
        .map(|&v| {
            let ccw = normalize_deg((net.pos(v) - here).bearing_deg() - start);
            let mut swept = match direction {
                ProbeDirection::CounterClockwise => ccw,
                ProbeDirection::Clockwise => normalize_deg(-ccw),
            };
            if swept == 0.0 {
                swept = 360.0;
            }
            (swept, here.dist_sq(net.pos(v)), v)
        })
        .min_by(|l, r| {
            l.0.total_cmp(&r.0)
                .then(l.1.total_cmp(&r.1))
                .then(l.2.cmp(&r.2))
        })
        .map(|(_, _, v)| v)
}

/// Relays one probe until it returns to the initiator through `closing`.
fn run_probe(
    net: &Network,
    initiator: NodeId,
    first: NodeId,
    closing: NodeId,
    direction: ProbeDirection,
    cfg: &DetectionConfig,
    heard: &mut HashSet<NodeId>,
) -> Result<ProbeMessage, ProbeFailure> {
    let hop_budget = cfg.hop_budget(net.len());
    let mut msg = ProbeMessage {
        initiator,
        direction,
        visited: vec![(initiator, net.pos(initiator))],
        hop_budget,
    };
    let mut prev = initiator;
    let mut cur = first;
    let mut hops = 1;
    loop {
        heard.insert(cur);
        if cur == initiator && prev == closing {
            return Ok(msg);
        }
        if hops >= hop_budget {
            return Err(ProbeFailure::BudgetExhausted);
        }
        msg.visited.push((cur, net.pos(cur)));
        if cfg.stop_at_leaves && cur != initiator && net.degree(cur) < 2 {
            return Err(ProbeFailure::DeadEnd);
        }
        let next = turn(net, cur, prev, direction).ok_or(ProbeFailure::DeadEnd)?;
        prev = cur;
        cur = next;
        hops += 1;
    }
}

/// Sends both probes from `initiator` and assembles the loop they trace.
///
/// Every node either probe reaches is added to `suppressed`, whether or not
/// the circulation succeeds.
pub fn circulate(
    net: &Network,
    initiator: NodeId,
    geometry: &InitiationGeometry,
    cfg: &DetectionConfig,
    suppressed: &mut HashSet<NodeId>,
) -> Result<BoundaryLoop, ProbeFailure> {
    suppressed.insert(initiator);
    let ccw = run_probe(
        net,
        initiator,
        geometry.leftmost,
        geometry.rightmost,
        ProbeDirection::CounterClockwise,
        cfg,
        suppressed,
    );
    let cw = run_probe(
        net,
        initiator,
        geometry.rightmost,
        geometry.leftmost,
        ProbeDirection::Clockwise,
        cfg,
        suppressed,
    );
    let (ccw, cw) = (ccw?, cw?);

    // the clockwise probe must retrace the counter-clockwise one backwards
    let mirrored = ccw.visited.len() == cw.visited.len()
        && ccw.visited[1..]
            .iter()
            .zip(cw.visited[1..].iter().rev())
            .all(|(a, b)| a.0 == b.0);
    if !mirrored {
        return Err(ProbeFailure::Asymmetric);
    }
    let lp = BoundaryLoop::from_cycle(ccw.visited).map_err(|_| ProbeFailure::Degenerate)?;
    let scale = lp.perimeter() * lp.perimeter();
    if lp.signed_area().abs() <= 1e-9 * scale {
        return Err(ProbeFailure::Degenerate);
    }
    Ok(lp)
}

/// Closed boundary collected by a probe pair.
///
/// `vertices` runs in the order the counter-clockwise probe visited them,
/// starting at the initiator; the closing edge returns to the initiator. A
/// probe that turns counter-clockwise keeps the face on its right, so it
/// circles a hole clockwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryLoop {
    pub initiator: NodeId,
    pub vertices: Vec<(NodeId, Point)>,
    /// Path length from the initiator along the counter-clockwise probe,
    /// aligned with `vertices`.
    pub ccw_prefix_lengths: Vec<f64>,
    /// Path length from the initiator along the clockwise probe, aligned
    /// with `vertices`.
    pub cw_prefix_lengths: Vec<f64>,
}

impl BoundaryLoop {
    /// Builds a loop from a closed vertex sequence beginning at the initiator.
    pub fn from_cycle(vertices: Vec<(NodeId, Point)>) -> Result<Self, HoleError> {
        if vertices.len() < 2 {
            return Err(HoleError::TooShort(vertices.len()));
        }
        let k = vertices.len();
        let mut ccw = Vec::with_capacity(k);
        let mut acc = 0.0;
        ccw.push(0.0);
        for i in 1..k {
            let (pa, pb) = (vertices[i - 1], vertices[i]);
            let step = pa.1.dist(pb.1);
            if step == 0.0 {
                return Err(HoleError::ZeroLengthEdge(pa.0, pb.0));
            }
            acc += step;
            ccw.push(acc);
        }
        let closing = vertices[k - 1].1.dist(vertices[0].1);
        if closing == 0.0 {
            return Err(HoleError::ZeroLengthEdge(vertices[k - 1].0, vertices[0].0));
        }
        // summed from the far end so the last vertex gets the closing edge exactly
        let mut cw = vec![0.0; k];
        cw[k - 1] = closing;
        for i in (1..k - 1).rev() {
            cw[i] = cw[i + 1] + vertices[i].1.dist(vertices[i + 1].1);
        }
        Ok(Self {
            initiator: vertices[0].0,
            vertices,
            ccw_prefix_lengths: ccw,
            cw_prefix_lengths: cw,
        })
    }

    /// Convenience constructor for hand-built layouts; ids are `0..k`.
    pub fn from_points(points: &[Point]) -> Result<Self, HoleError> {
        Self::from_cycle(points.iter().enumerate().map(|(i, p)| (NodeId(i), *p)).collect())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn initiator_pos(&self) -> Point {
        self.vertices[0].1
    }

    pub fn perimeter(&self) -> f64 {
        self.ccw_prefix_lengths.last().copied().unwrap_or(0.0)
            + self.vertices[self.len() - 1].1.dist(self.vertices[0].1)
    }

    /// Signed area of the traced polygon; negative when it runs clockwise.
    pub fn signed_area(&self) -> f64 {
        let pts: Vec<Point> = self.vertices.iter().map(|v| v.1).collect();
        signed_area(&pts)
    }

    /// Whether the walk traced the unbounded side of its boundary (it runs
    /// counter-clockwise), i.e. the outline of a network rather than a void.
    pub fn is_outer_face(&self) -> bool {
        self.signed_area() > 0.0
    }

    pub fn position_of(&self, v: NodeId) -> Option<Point> {
        self.vertices.iter().find(|x| x.0 == v).map(|x| x.1)
    }

    /// Distinct vertex ids in visiting order.
    pub fn distinct_ids(&self) -> Vec<NodeId> {
        let mut seen = HashSet::new();
        self.vertices
            .iter()
            .filter(|v| seen.insert(v.0))
            .map(|v| v.0)
            .collect()
    }

    /// Probe-path length from the initiator to `v`: the first arrival of
    /// either probe.
    pub fn probe_length(&self, v: NodeId) -> Result<f64, HoleError> {
        self.vertices
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, x)| x.0 == v)
            .map(|(i, _)| self.ccw_prefix_lengths[i].min(self.cw_prefix_lengths[i]))
            .min_by(f64::total_cmp)
            .ok_or(HoleError::NotOnLoop(v))
    }
}

/// Probe-path length over straight-line distance from the initiator to `v`.
pub fn hole_ratio(lp: &BoundaryLoop, v: NodeId) -> Result<f64, HoleError> {
    if v == lp.initiator {
        return Err(HoleError::InitiatorRatio);
    }
    let length = lp.probe_length(v)?;
    let pos = lp.position_of(v).ok_or(HoleError::NotOnLoop(v))?;
    let euclid = lp.initiator_pos().dist(pos);
    if euclid == 0.0 {
        return Err(HoleError::Coincident(v));
    }
    Ok(length / euclid)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoleEvidence {
    pub witness: NodeId,
    pub ratio: f64,
}

/// First vertex, in visiting order, whose ratio exceeds `cfg.delta`.
pub fn detect(lp: &BoundaryLoop, cfg: &DetectionConfig) -> Option<HoleEvidence> {
    detect_counting(lp, cfg).0
}

/// [`detect`] plus the number of ratio evaluations it performed.
pub fn detect_counting(lp: &BoundaryLoop, cfg: &DetectionConfig) -> (Option<HoleEvidence>, usize) {
    let mut evaluations = 0;
    for v in lp.distinct_ids() {
        if v == lp.initiator {
            continue;
        }
        let Ok(ratio) = hole_ratio(lp, v) else {
            continue;
        };
        evaluations += 1;
        if ratio > cfg.delta {
            return (Some(HoleEvidence { witness: v, ratio }), evaluations);
        }
    }
    (None, evaluations)
}

/// Largest ratio over every vertex, for diagnostics.
pub fn max_ratio(lp: &BoundaryLoop) -> Option<HoleEvidence> {
    lp.distinct_ids()
        .into_iter()
        .filter_map(|v| hole_ratio(lp, v).ok().map(|ratio| HoleEvidence { witness: v, ratio }))
        .max_by(|a, b| a.ratio.total_cmp(&b.ratio))
}

/// One probe pair's outcome during a full detection pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirculatedLoop {
    pub boundary: BoundaryLoop,
    pub outer_face: bool,
    pub evidence: Option<HoleEvidence>,
    pub ratio_evaluations: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub loops: Vec<CirculatedLoop>,
    pub probes_initiated: usize,
    pub failed_probes: Vec<(NodeId, ProbeFailure)>,
    pub ratio_evaluations: usize,
}

impl DetectionReport {
    pub fn holes(&self) -> impl Iterator<Item = (&BoundaryLoop, &HoleEvidence)> {
        self.loops
            .iter()
            .filter_map(|l| l.evidence.as_ref().map(|e| (&l.boundary, e)))
    }

    pub fn hole_count(&self) -> usize {
        self.holes().count()
    }
}

/// Runs initiation and circulation at every node in ascending id order.
///
/// Loops tracing a network's outer outline are recorded but not tested:
/// they bound the deployment rather than a void inside it.
pub fn detect_holes(net: &Network, cfg: &DetectionConfig) -> DetectionReport {
    let mut report = DetectionReport::default();
    let mut suppressed = HashSet::new();
    for node in net.ids() {
        let Some(geom) = should_initiate(net, node, &suppressed, cfg) else {
            continue;
        };
        report.probes_initiated += 1;
        match circulate(net, node, &geom, cfg, &mut suppressed) {
            Ok(boundary) => {
                let outer_face = boundary.is_outer_face();
                let (evidence, evals) = if outer_face && !cfg.test_outer_faces {
                    (None, 0)
                } else {
                    detect_counting(&boundary, cfg)
                };
                report.ratio_evaluations += evals;
                report.loops.push(CirculatedLoop {
                    boundary,
                    outer_face,
                    evidence,
                    ratio_evaluations: evals,
                });
            }
            Err(why) => report.failed_probes.push((node, why)),
        }
    }
    report
}

/// One line of the optional detection trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionTraceRecord {
    pub initiator: NodeId,
    pub vertices: Vec<NodeId>,
    pub outer_face: bool,
    pub witness: Option<NodeId>,
    pub ratio: Option<f64>,
}

impl DetectionReport {
    /// JSON-lines trace, one record per circulated loop.
    pub fn trace_jsonl(&self) -> String {
        self.loops
            .iter()
            .map(|l| {
                let rec = DetectionTraceRecord {
                    initiator: l.boundary.initiator,
                    vertices: l.boundary.vertices.iter().map(|v| v.0).collect(),
                    outer_face: l.outer_face,
                    witness: l.evidence.map(|e| e.witness),
                    ratio: l.evidence.map(|e| e.ratio),
                };
                serde_json::to_string(&rec).expect("trace records always serialize") + "\n"
            })
            .collect()
    }
}
