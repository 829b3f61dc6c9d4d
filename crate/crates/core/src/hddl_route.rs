//! Landmark-assisted forwarding.
//!
//! At every hop the holder checks its hole cache. If it sits on the near
//! side of some cached hole's segment `ab` while the destination lies in the
//! strip hidden behind it, the packet is sent to landmark `a` or `b` first
//! (whichever half of the strip holds the destination), then on to the
//! destination. Each leg uses full GPSR, so delivery is never worse than
//! GPSR's.

use std::collections::BTreeSet;

use crate::geometry::{side_of_line, Landmark, Point};
use crate::gpsr::{ForwardMode, GpsrForwarder, Path};
use crate::hole_model::{CacheEntry, HoleCaches};
use crate::netgen::{Network, NodeId};

/// A packet in flight.
#[derive(Debug, Clone)]
pub struct Packet {
    pub src: NodeId,
    pub dst: NodeId,
    pub dst_pos: Point,
    /// Landmark the packet is currently heading for.
    pub tentative: Option<(NodeId, Point)>,
    pub trace: Path,
    /// Holes whose landmark this packet has already used.
    pub used_holes: BTreeSet<usize>,
    /// Every landmark ever written into the header, in order.
    pub landmarks: Vec<NodeId>,
    leg: GpsrForwarder,
    prev: Option<NodeId>,
}

impl Packet {
    pub fn new(net: &Network, src: NodeId, dst: NodeId) -> Self {
        let dst_pos = net.pos(dst);
        Self {
            src,
            dst,
            dst_pos,
            tentative: None,
            trace: Path::start(src),
            used_holes: BTreeSet::new(),
            landmarks: Vec::new(),
            leg: GpsrForwarder::new(dst, dst_pos),
            prev: None,
        }
    }

    pub fn holder(&self) -> NodeId {
        self.trace.current()
    }

    fn set_target(&mut self, target: NodeId, pos: Point) {
        self.leg = GpsrForwarder::new(target, pos);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HddlDecision {
    Forward { next: NodeId, mode: ForwardMode },
    Delivered,
    Undeliverable,
}

/// Cached hole whose shadow hides `dst` from `node`, nearest first.
fn matching_entry(
    caches: &HoleCaches,
    node: NodeId,
    here: Point,
    dst: Point,
    used: &BTreeSet<usize>,
) -> Option<CacheEntry> {
    caches
        .entries(node)
        .iter()
        .copied()
        .filter(|e| !used.contains(&e.hole))
        .filter(|&e| {
            let rec = caches.record(e);
            let seg = rec.segment();
            side_of_line(&seg, here) == rec.shaded.near_side() && rec.shaded.contains(dst)
        })
        .min_by(|&x, &y| {
            let dx = caches.record(x).landmark_midpoint().dist_sq(here);
            let dy = caches.record(y).landmark_midpoint().dist_sq(here);
            dx.total_cmp(&dy).then(x.hole.cmp(&y.hole))
        })
}

/// Decides what `node`, the packet's current holder, does with it.
pub fn hddl_forward(
    net: &Network,
    caches: &HoleCaches,
    node: NodeId,
    pkt: &mut Packet,
) -> HddlDecision {
    if node == pkt.dst {
        return HddlDecision::Delivered;
    }
    if pkt.tentative.is_some_and(|(t, _)| t == node) {
        pkt.tentative = None;
        pkt.set_target(pkt.dst, pkt.dst_pos);
    }
    if pkt.tentative.is_none() {
        let here = net.pos(node);
        if let Some(entry) = matching_entry(caches, node, here, pkt.dst_pos, &pkt.used_holes) {
            let rec = caches.record(entry);
            let landmark = match rec.shaded.landmark_subregion(pkt.dst_pos) {
                Ok(Landmark::ASide) => rec.a,
                Ok(Landmark::BSide) => rec.b,
                Err(_) => unreachable!("entry matched only if the strip holds the destination"),
            };
            pkt.used_holes.insert(entry.hole);
            if landmark.0 != node {
                pkt.tentative = Some(landmark);
                pkt.landmarks.push(landmark.0);
                pkt.set_target(landmark.0, landmark.1);
            }
        }
    }
    match pkt.leg.next_hop(net, node, pkt.prev) {
        Ok((next, mode)) => {
            let mode = match (pkt.tentative.is_some(), mode) {
                (true, ForwardMode::Greedy) => ForwardMode::Landmark,
                (_, m) => m,
            };
            HddlDecision::Forward { next, mode }
        }
        Err(_) => HddlDecision::Undeliverable,
    }
}

/// Outcome of one HDDL route.
#[derive(Debug, Clone, PartialEq)]
pub struct HddlRoute {
    pub path: Path,
    /// Landmarks written into the header, in order.
    pub landmarks: Vec<NodeId>,
}

impl HddlRoute {
    /// Whether the route benefited from hole information.
    pub fn is_hole_path(&self) -> bool {
        !self.landmarks.is_empty()
    }
}

/// Routes `src -> dst`, giving up after `ttl` hops.
pub fn route_hddl(
    net: &Network,
    caches: &HoleCaches,
    src: NodeId,
    dst: NodeId,
    ttl: usize,
) -> HddlRoute {
    let mut pkt = Packet::new(net, src, dst);
    loop {
        let node = pkt.holder();
        match hddl_forward(net, caches, node, &mut pkt) {
            HddlDecision::Delivered => {
                pkt.trace.delivered = true;
                break;
            }
            HddlDecision::Undeliverable => break,
            HddlDecision::Forward { next, mode } => {
                if pkt.trace.hop_count() >= ttl {
                    break;
                }
                pkt.trace.push(net, next, mode);
                pkt.prev = Some(node);
            }
        }
    }
    HddlRoute {
        path: pkt.trace,
        landmarks: pkt.landmarks,
    }
}
