//! Constrained flooding of hole records and the per-node caches it fills.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::HoleRecord;
use crate::geometry::{side_of_line, Side};
use crate::netgen::{Network, NodeId};

/// A node's knowledge of one hole: an index into [`HoleCaches::records`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheEntry {
    pub hole: usize,
}

/// Result of flooding one record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Announcement {
    /// Nodes that stored the record, in the order they received it.
    pub cached: Vec<NodeId>,
    pub seeds: Vec<NodeId>,
    pub message_count: usize,
}

/// Boundary vertices on the initiator's side between `e` and `f`, both
/// included. Of the two ways around the loop, the one passing more
/// near-side vertices is taken.
pub fn announcement_seeds(rec: &HoleRecord) -> Vec<NodeId> {
    let verts = &rec.boundary.vertices;
    let k = verts.len();
    let at = |id: NodeId| verts.iter().position(|v| v.0 == id);
    let (Some(i), Some(j)) = (at(rec.e.0), at(rec.f.0)) else {
        // the base fell back to the segment ends, which may sit off the loop
        return [rec.e.0, rec.f.0]
            .into_iter()
            .filter(|&id| at(id).is_some())
            .collect();
    };
    let seg = rec.segment();
    let walk = |from: usize, to: usize| -> Vec<usize> {
        let mut out = vec![from];
        let mut x = from;
        while x != to {
            x = (x + 1) % k;
            out.push(x);
        }
        out
    };
    let near = |arc: &[usize]| {
        arc.iter()
            .filter(|&&x| side_of_line(&seg, verts[x].1) == Side::Left)
            .count()
    };
    let (forward, backward) = (walk(i, j), walk(j, i));
    let arc = if near(&backward) > near(&forward) {
        backward
    } else {
        forward
    };
    let mut seeds: Vec<NodeId> = Vec::new();
    for x in arc {
        let id = verts[x].0;
        if (id == rec.e.0 || id == rec.f.0 || side_of_line(&seg, verts[x].1) == Side::Left)
            && !seeds.contains(&id)
        {
            seeds.push(id);
        }
    }
    seeds
}

/// Floods `rec` from its seeds. Seeds and nodes inside the triangle store it
/// and rebroadcast once to every neighbor; everyone else drops it.
pub fn announce(net: &Network, rec: &HoleRecord) -> Announcement {
    let seeds = announcement_seeds(rec);
    let mut stored = vec![false; net.len()];
    let mut cached = Vec::new();
    let mut queue = VecDeque::new();
    for &s in &seeds {
        if s.index() < net.len() && !stored[s.index()] {
            stored[s.index()] = true;
            cached.push(s);
            queue.push_back(s);
        }
    }
    let mut message_count = 0;
    while let Some(u) = queue.pop_front() {
        message_count += net.degree(u);
        for &v in net.neighbors(u) {
            if !stored[v.index()] && rec.triangle.contains(net.pos(v)) {
                stored[v.index()] = true;
                cached.push(v);
                queue.push_back(v);
            }
        }
    }
    Announcement {
        cached,
        seeds,
        message_count,
    }
}

/// Every node's cached hole records.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HoleCaches {
    pub records: Vec<HoleRecord>,
    entries: Vec<Vec<CacheEntry>>,
    pub message_count: usize,
}

impl HoleCaches {
    /// Caches with no entries anywhere.
    pub fn empty(n: usize) -> Self {
        Self {
            records: Vec::new(),
            entries: vec![Vec::new(); n],
            message_count: 0,
        }
    }

    /// Announces every record over `net` and collects the results.
    pub fn build(net: &Network, records: Vec<HoleRecord>) -> Self {
        let mut caches = Self::empty(net.len());
        for (hole, rec) in records.iter().enumerate() {
            let ann = announce(net, rec);
            caches.message_count += ann.message_count;
            for id in ann.cached {
                caches.entries[id.index()].push(CacheEntry { hole });
            }
        }
        caches.records = records;
        caches
    }

    pub fn entries(&self, node: NodeId) -> &[CacheEntry] {
        self.entries.get(node.index()).map_or(&[], Vec::as_slice)
    }

    pub fn record(&self, entry: CacheEntry) -> &HoleRecord {
        &self.records[entry.hole]
    }

    pub fn nodes_with_entries(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_empty()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::hole_detect::{detect_holes, DetectionConfig};
    use crate::hole_model::build_records;
    use crate::netgen::{generate, Area};

    fn carved(seed: u64) -> Network {
        let net = generate(seed, 300, Area::new(200.0, 200.0), 20.0).unwrap();
        net.carve_hole(Point::new(100.0, 100.0), 60.0).unwrap().network
    }

    #[test]
    fn only_triangle_members_and_seeds_cache() {
        let cfg = DetectionConfig::default();
        for seed in 0..5 {
            let net = carved(seed);
            let records = build_records(&detect_holes(&net, &cfg), &cfg);
            for rec in &records {
                let ann = announce(&net, rec);
                let mut forwards = 0;
                for &id in &ann.cached {
                    assert!(ann.seeds.contains(&id) || rec.triangle.contains(net.pos(id)));
                    forwards += net.degree(id);
                }
                assert_eq!(ann.message_count, forwards);
                let mut dedup = ann.cached.clone();
                dedup.sort();
                dedup.dedup();
                assert_eq!(dedup.len(), ann.cached.len());
            }
        }
    }

    #[test]
    fn reachable_triangle_nodes_all_cache() {
        let cfg = DetectionConfig::default();
        let net = carved(3);
        let records = build_records(&detect_holes(&net, &cfg), &cfg);
        for rec in &records {
            let ann = announce(&net, rec);
            // oracle: search restricted to seeds plus triangle members
            let inside = |v: NodeId| rec.triangle.contains(net.pos(v));
            let mut seen = vec![false; net.len()];
            let mut stack: Vec<NodeId> = ann.seeds.clone();
            for s in &stack {
                seen[s.index()] = true;
            }
            while let Some(u) = stack.pop() {
                for &v in net.neighbors(u) {
                    if !seen[v.index()] && inside(v) {
                        seen[v.index()] = true;
                        stack.push(v);
                    }
                }
            }
            let expected = seen.iter().filter(|&&s| s).count();
            assert_eq!(ann.cached.len(), expected);
        }
    }

    #[test]
    fn empty_caches_have_no_entries() {
        let c = HoleCaches::empty(4);
        assert!(c.entries(NodeId(2)).is_empty());
        assert!(c.entries(NodeId(99)).is_empty());
    }
}
