//! Network construction: seeded deployment, unit-disk adjacency, Gabriel
//! planarization and hole carving.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`. Independent concerns draw from separate ChaCha
//! streams of the same seed (see [`RngStream`]), so adding draws to one
//! concern never perturbs another.

use std::collections::VecDeque;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("a network needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("area must be positive and finite, got {width} x {height}")]
    BadArea { width: f64, height: f64 },
    #[error("node {id} at {pos} lies outside the {width} x {height} area")]
    OutOfArea {
        id: usize,
        pos: Point,
        width: f64,
        height: f64,
    },
    #[error("node ids must be dense 0..n-1; found id {found} at position {index}")]
    SparseIds { index: usize, found: usize },
    #[error("hole radius must be non-negative, got {0}")]
    BadHoleRadius(f64),
    #[error("carving left {0} node(s); at least 2 are required")]
    CarvedTooMuch(usize),
}

/// Dense node identifier, `0..n`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deployment rectangle `[0, width) x [0, height)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Area {
    pub width: f64,
    pub height: f64,
}

impl Area {
    pub const fn new(width: f64, height: f64) -> Self {
        Self { width, height }
    }

    pub fn contains(&self, p: Point) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }

    pub fn center(&self) -> Point {
        Point::new(self.width / 2.0, self.height / 2.0)
    }
}

/// Named ChaCha stream ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum RngStream {
    Positions = 1,
    Pairs = 2,
}

pub fn seeded_rng(seed: u64, stream: RngStream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// An immutable deployed network.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    positions: Vec<Point>,
    radius: f64,
    area: Area,
    adjacency: Vec<Vec<NodeId>>,
    planar: Vec<Vec<NodeId>>,
}

impl Network {
    /// Builds the unit-disk graph and its Gabriel subgraph over explicit
    /// positions; node `i` gets id `i`.
    pub fn from_positions(
        positions: Vec<Point>,
        radius: f64,
        area: Area,
    ) -> Result<Self, NetworkError> {
        if positions.len() < 2 {
            return Err(NetworkError::TooFewNodes(positions.len()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(NetworkError::BadRadius(radius));
        }
        if !(area.width > 0.0 && area.height > 0.0 && area.width.is_finite() && area.height.is_finite()) {
            return Err(NetworkError::BadArea {
                width: area.width,
                height: area.height,
            });
        }
        if let Some((id, &pos)) = positions
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || !area.contains(**p))
        {
            return Err(NetworkError::OutOfArea {
                id,
                pos,
                width: area.width,
                height: area.height,
            });
        }
        let adjacency = unit_disk_adjacency(&positions, radius);
        let planar = gabriel_planarize(&positions, &adjacency);
        Ok(Self {
            positions,
            radius,
            area,
            adjacency,
            planar,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn area(&self) -> Area {
        self.area
    }

    pub fn pos(&self, id: NodeId) -> Point {
        self.positions[id.0]
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.positions.len()).map(NodeId)
    }

    /// Unit-disk neighbors, ascending by id.
    pub fn neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.adjacency[id.0]
    }

    /// Gabriel-graph neighbors, ascending by id.
    pub fn planar_neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.planar[id.0]
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.adjacency[id.0].len()
    }

    pub fn are_adjacent(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u.0].binary_search(&v).is_ok()
    }

    pub fn dist(&self, u: NodeId, v: NodeId) -> f64 {
        self.pos(u).dist(self.pos(v))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn planar_edge_count(&self) -> usize {
        self.planar.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edge_count() as f64 / self.len() as f64
    }

    /// Component label per node over the unit-disk graph.
    pub fn components(&self) -> Vec<usize> {
        label_components(&self.adjacency)
    }

    /// Component label per node over the Gabriel subgraph.
    pub fn planar_components(&self) -> Vec<usize> {
        label_components(&self.planar)
    }

    /// Members of the largest unit-disk component, ascending. Ties go to the
    /// component holding the lowest id.
    pub fn largest_component(&self) -> Vec<NodeId> {
        let labels = self.components();
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0usize; count];
        for &l in &labels {
            sizes[l] += 1;
        }
        // labels are assigned in ascending id order, so the first max wins ties
        let best = (0..count).max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a)));
        match best {
            Some(best) => self.ids().filter(|id| labels[id.0] == best).collect(),
            None => Vec::new(),
        }
    }

    /// Removes every node within `hole_radius` of `center` and rebuilds the
    /// graphs. Surviving nodes keep their relative order.
    pub fn carve_hole(&self, center: Point, hole_radius: f64) -> Result<Carved, NetworkError> {
        if !(hole_radius >= 0.0 && hole_radius.is_finite()) {
            return Err(NetworkError::BadHoleRadius(hole_radius));
        }
        let r2 = hole_radius * hole_radius;
        let mut old_to_new = vec![None; self.len()];
        let mut kept = Vec::with_capacity(self.len());
        for (i, p) in self.positions.iter().enumerate() {
            if hole_radius > 0.0 && p.dist_sq(center) <= r2 {
                continue;
            }
            old_to_new[i] = Some(NodeId(kept.len()));
            kept.push(*p);
        }
        if kept.len() < 2 {
            return Err(NetworkError::CarvedTooMuch(kept.len()));
        }
        Ok(Carved {
            network: Network::from_positions(kept, self.radius, self.area)?,
            old_to_new,
        })
    }
}

/// Result of [`Network::carve_hole`].
#[derive(Debug, Clone)]
pub struct Carved {
    pub network: Network,
    /// `old_to_new[old]` is the surviving node's new id, `None` if removed.
    pub old_to_new: Vec<Option<NodeId>>,
}

/// Deploys `n` nodes uniformly over `area` and builds both graphs.
pub fn generate(seed: u64, n: usize, area: Area, radius: f64) -> Result<Network, NetworkError> {
    if n < 2 {
        return Err(NetworkError::TooFewNodes(n));
    }
    if !(area.width > 0.0 && area.height > 0.0) {
        return Err(NetworkError::BadArea {
            width: area.width,
            height: area.height,
        });
    }
    let mut rng = seeded_rng(seed, RngStream::Positions);
    let positions = (0..n)
        .map(|_| {
            let x = rng.random_range(0.0..area.width);
            let y = rng.random_range(0.0..area.height);
            Point::new(x, y)
        })
        .collect();
    Network::from_positions(positions, radius, area)
}

fn unit_disk_adjacency(positions: &[Point], radius: f64) -> Vec<Vec<NodeId>> {
    let n = positions.len();
    let r2 = radius * radius;
    // bucket into radius-sized cells so only the 3x3 block is scanned
    let cell = |p: Point| ((p.x / radius).floor() as i64, (p.y / radius).floor() as i64);
    let mut grid: std::collections::HashMap<(i64, i64), Vec<usize>> = Default::default();
    for (i, p) in positions.iter().enumerate() {
        grid.entry(cell(*p)).or_default().push(i);
    }
    let mut adj = vec![Vec::new(); n];
    for (i, p) in positions.iter().enumerate() {
        let (cx, cy) = cell(*p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(bucket) = grid.get(&(cx + dx, cy + dy)) {
                    for &j in bucket {
                        if j != i && p.dist_sq(positions[j]) <= r2 {
                            adj[i].push(NodeId(j));
                        }
                    }
                }
            }
        }
        adj[i].sort_unstable();
    }
    adj
}

/// Keeps edge `(u, v)` iff no third node lies strictly inside the circle
/// with diameter `uv`.
pub fn gabriel_planarize(positions: &[Point], adjacency: &[Vec<NodeId>]) -> Vec<Vec<NodeId>> {
    adjacency
        .iter()
        .enumerate()
        .map(|(u, nbrs)| {
            let pu = positions[u];
            nbrs.iter()
                .copied()
                .filter(|&v| {
                    let pv = positions[v.0];
                    let m = pu.midpoint(pv);
                    let r2 = pu.dist_sq(pv) / 4.0;
                    // any witness is closer to u than v is, so u's neighbors suffice
                    !nbrs
                        .iter()
                        .any(|&w| w != v && positions[w.0].dist_sq(m) < r2 * (1.0 - 1e-12))
                })
                .collect()
        })
        .collect()
}

fn label_components(adj: &[Vec<NodeId>]) -> Vec<usize> {
    let mut label = vec![usize::MAX; adj.len()];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for s in 0..adj.len() {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for v in &adj[u] {
                if label[v.0] == usize::MAX {
                    label[v.0] = next;
                    queue.push_back(v.0);
                }
            }
        }
        next += 1;
    }
    label
}

/// Unit-disk hop distance, `None` when unreachable.
pub fn bfs_hops(net: &Network, src: NodeId, dst: NodeId) -> Option<usize> {
    if src == dst {
        return Some(0);
    }
    let mut dist = vec![usize::MAX; net.len()];
    dist[src.0] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for &v in net.neighbors(u) {
            if dist[v.0] == usize::MAX {
                dist[v.0] = dist[u.0] + 1;
                if v == dst {
                    return Some(dist[v.0]);
                }
                queue.push_back(v);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn area() -> Area {
        Area::new(100.0, 100.0)
    }

    #[test]
    fn two_nodes_within_radius_are_adjacent() {
        let net = Network::from_positions(
            vec![Point::new(10.0, 10.0), Point::new(25.0, 10.0)],
            20.0,
            area(),
        )
        .unwrap();
        assert_eq!(net.edge_count(), 1);
        assert_eq!(net.planar_edge_count(), 1);

        let net = Network::from_positions(
            vec![Point::new(10.0, 10.0), Point::new(35.0, 10.0)],
            20.0,
            area(),
        )
        .unwrap();
        assert_eq!(net.edge_count(), 0);
    }

    #[test]
    fn gabriel_drops_edge_with_point_between() {
        let net = Network::from_positions(
            vec![
                Point::new(10.0, 10.0),
                Point::new(15.0, 10.0),
                Point::new(20.0, 10.0),
            ],
            20.0,
            area(),
        )
        .unwrap();
        assert!(net.are_adjacent(NodeId(0), NodeId(2)));
        assert!(!net.planar_neighbors(NodeId(0)).contains(&NodeId(2)));
        assert_eq!(net.planar_edge_count(), 2);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            Network::from_positions(vec![Point::new(1.0, 1.0)], 20.0, area()),
            Err(NetworkError::TooFewNodes(1))
        ));
        assert!(matches!(
            Network::from_positions(vec![Point::new(1.0, 1.0), Point::new(2.0, 2.0)], 0.0, area()),
            Err(NetworkError::BadRadius(_))
        ));
        assert!(matches!(
            Network::from_positions(vec![Point::new(1.0, 1.0), Point::new(200.0, 2.0)], 5.0, area()),
            Err(NetworkError::OutOfArea { id: 1, .. })
        ));
        assert!(generate(1, 1, area(), 20.0).is_err());
    }

    #[test]
    fn generate_is_deterministic_and_in_bounds() {
        let a = generate(7, 200, Area::new(400.0, 400.0), 20.0).unwrap();
        let b = generate(7, 200, Area::new(400.0, 400.0), 20.0).unwrap();
        assert_eq!(a, b);
        assert!(a.positions().iter().all(|p| a.area().contains(*p)));
        let c = generate(8, 200, Area::new(400.0, 400.0), 20.0).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn adjacency_is_symmetric_and_matches_brute_force() {
        let net = generate(3, 300, Area::new(200.0, 200.0), 20.0).unwrap();
        for u in net.ids() {
            for v in net.ids() {
                let expect = u != v && net.dist(u, v) <= 20.0;
                assert_eq!(net.are_adjacent(u, v), expect, "{u} {v}");
            }
            for &v in net.planar_neighbors(u) {
                assert!(net.are_adjacent(u, v));
                assert!(net.planar_neighbors(v).contains(&u));
            }
        }
    }

    #[test]
    fn carve_zero_radius_keeps_everything() {
        let net = generate(11, 50, area(), 20.0).unwrap();
        let carved = net.carve_hole(Point::new(50.0, 50.0), 0.0).unwrap();
        assert_eq!(carved.network, net);
        assert!(carved.old_to_new.iter().enumerate().all(|(i, m)| *m == Some(NodeId(i))));
    }

    #[test]
    fn carve_everything_but_one_errors() {
        let net = Network::from_positions(
            vec![Point::new(50.0, 50.0), Point::new(52.0, 50.0), Point::new(90.0, 90.0)],
            20.0,
            area(),
        )
        .unwrap();
        assert!(matches!(
            net.carve_hole(Point::new(50.0, 50.0), 10.0),
            Err(NetworkError::CarvedTooMuch(1))
        ));
    }

    #[test]
    fn carve_remaps_ids() {
        let net = Network::from_positions(
            vec![Point::new(10.0, 10.0), Point::new(50.0, 50.0), Point::new(90.0, 90.0)],
            20.0,
            area(),
        )
        .unwrap();
        let c = net.carve_hole(Point::new(50.0, 50.0), 5.0).unwrap();
        assert_eq!(c.old_to_new, vec![Some(NodeId(0)), None, Some(NodeId(1))]);
        assert_eq!(c.network.pos(NodeId(1)), Point::new(90.0, 90.0));
    }

    #[test]
    fn bfs_examples() {
        let pts: Vec<Point> = (0..10).map(|i| Point::new(5.0 + 10.0 * i as f64, 5.0)).collect();
        let net = Network::from_positions(pts, 10.0, Area::new(100.0, 10.0)).unwrap();
        assert_eq!(bfs_hops(&net, NodeId(0), NodeId(1)), Some(1));
        assert_eq!(bfs_hops(&net, NodeId(0), NodeId(9)), Some(9));
        let pts = vec![Point::new(1.0, 1.0), Point::new(90.0, 90.0)];
        let net = Network::from_positions(pts, 10.0, area()).unwrap();
        assert_eq!(bfs_hops(&net, NodeId(0), NodeId(1)), None);
    }

    #[test]
    fn largest_component_picks_biggest() {
        let pts = vec![
            Point::new(1.0, 1.0),
            Point::new(50.0, 50.0),
            Point::new(55.0, 50.0),
            Point::new(60.0, 50.0),
            Point::new(3.0, 1.0),
        ];
        let net = Network::from_positions(pts, 6.0, area()).unwrap();
        assert_eq!(net.largest_component(), vec![NodeId(1), NodeId(2), NodeId(3)]);
    }
}
