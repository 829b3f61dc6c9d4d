//! Shape-free hole representation and its announcement.
//!
//! A detected hole is reduced to the segment `ab` joining its two most
//! distant boundary vertices. Destinations behind the hole fall in the
//! perpendicular strip on the far side of `ab`; sources that should learn
//! about the hole sit in a triangle raised on the initiator's side over a
//! base `ef` picked from the near-side boundary.

mod alpha;
mod announce;

pub use alpha::{
    minimize_on_grid, optimize_alpha, AlphaMinimum, AlphaObjective, AlphaOptimization,
    STANDARD_H_MULTIPLES,
};
pub use announce::{announce, Announcement, CacheEntry, HoleCaches};

use serde::{Deserialize, Serialize};

use crate::geometry::{side_of_line, AnnouncementTriangle, Point, Segment, ShadedRegion, Side};
use crate::hole_detect::{hole_ratio, BoundaryLoop, DetectionConfig, DetectionReport, HoleError, HoleEvidence};
use crate::netgen::NodeId;

/// Triangle depth as a fraction of `|ab|`.
pub const DEPTH_FACTOR: f64 = 0.87;

pub type Vertex = (NodeId, Point);

/// Triangle depth for a hole whose representative segment has length `len`.
pub fn announcement_depth(len: f64) -> f64 {
    DEPTH_FACTOR * len
}

fn pair_key(u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    (u.min(v), u.max(v))
}

/// Most distant vertex pair of `boundary`, ties going to the smallest id pair.
fn farthest_pair(vertices: &[Vertex]) -> Option<(Vertex, Vertex)> {
    let mut best: Option<(f64, (NodeId, NodeId), Vertex, Vertex)> = None;
    for (i, &u) in vertices.iter().enumerate() {
        for &v in &vertices[i + 1..] {
            if u.0 == v.0 {
                continue;
            }
            let d = u.1.dist_sq(v.1);
            let key = pair_key(u.0, v.0);
            let better = match &best {
                None => true,
                Some((bd, bk, _, _)) => d > *bd || (d == *bd && key < *bk),
            };
            if better {
                best = Some((d, key, u, v));
            }
        }
    }
    best.map(|(_, _, u, v)| (u, v))
}

fn distinct_vertices(boundary: &BoundaryLoop) -> Vec<Vertex> {
    boundary
        .distinct_ids()
        .into_iter()
        .map(|id| (id, boundary.position_of(id).expect("id taken from the loop")))
        .collect()
}

/// The hole's representative segment, oriented so the initiator lies to the
/// left of `a -> b`.
///
/// An initiator on the line itself counts as being on whichever side holds
/// more boundary vertices (left on a tie).
pub fn representative_segment(boundary: &BoundaryLoop) -> Result<(Vertex, Vertex), HoleError> {
    let vertices = distinct_vertices(boundary);
    let (a, b) = farthest_pair(&vertices).ok_or(HoleError::TooShort(vertices.len()))?;
    if a.1 == b.1 {
        return Err(HoleError::DegenerateSegment);
    }
    let seg = Segment { a: a.1, b: b.1 };
    let flip = match side_of_line(&seg, boundary.initiator_pos()) {
        Side::Left => false,
        Side::Right => true,
        Side::On => {
            let count = |s| vertices.iter().filter(|v| side_of_line(&seg, v.1) == s).count();
            count(Side::Right) > count(Side::Left)
        }
    };
    Ok(if flip { (b, a) } else { (a, b) })
}

/// Vertices strictly on the initiator's side of an oriented segment.
fn near_side_vertices(boundary: &BoundaryLoop, a: Vertex, b: Vertex) -> Vec<Vertex> {
    let seg = Segment { a: a.1, b: b.1 };
    let mut near: Vec<Vertex> = distinct_vertices(boundary)
        .into_iter()
        .filter(|v| side_of_line(&seg, v.1) == Side::Left)
        .collect();
    if !near.iter().any(|v| v.0 == boundary.initiator) && !matches!(side_of_line(&seg, boundary.initiator_pos()), Side::Right) {
        // an initiator on the line is still on its own side
        near.insert(0, boundary.vertices[0]);
    }
    near
}

/// Picks the announcement base `ef` among near-side vertices.
///
/// Prefers the widest pair with at least one member exceeding the detection
/// ratio; otherwise the widest near-side pair; with a single near-side
/// vertex, the segment ends themselves. `e` precedes `f` in loop order.
pub fn select_ef(
    boundary: &BoundaryLoop,
    seg: (Vertex, Vertex),
    cfg: &DetectionConfig,
) -> Result<(Vertex, Vertex), HoleError> {
    let (a, b) = seg;
    let near = near_side_vertices(boundary, a, b);
    if near.is_empty() {
        return Err(HoleError::NoNearSideVertex);
    }
    let qualifies = |v: &Vertex| hole_ratio(boundary, v.0).is_ok_and(|r| r > cfg.delta);
    let qualifying: Vec<bool> = near.iter().map(qualifies).collect();

    let widest = |need_ratio: bool| {
        let mut best: Option<(f64, (NodeId, NodeId), usize, usize)> = None;
        for i in 0..near.len() {
            for j in i + 1..near.len() {
                if need_ratio && !(qualifying[i] || qualifying[j]) {
                    continue;
                }
                let d = near[i].1.dist_sq(near[j].1);
                let key = pair_key(near[i].0, near[j].0);
                let better = match &best {
                    None => true,
                    Some((bd, bk, _, _)) => d > *bd || (d == *bd && key < *bk),
                };
                if better {
                    best = Some((d, key, i, j));
                }
            }
        }
        best.map(|(_, _, i, j)| (near[i], near[j]))
    };
    let (e, f) = widest(true).or_else(|| widest(false)).unwrap_or((a, b));
    let order = |v: &Vertex| boundary.vertices.iter().position(|x| x.0 == v.0);
    Ok(if order(&f) < order(&e) { (f, e) } else { (e, f) })
}

/// Everything a node needs to route around one hole.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoleRecord {
    pub initiator: NodeId,
    pub a: Vertex,
    pub b: Vertex,
    pub e: Vertex,
    pub f: Vertex,
    pub boundary: BoundaryLoop,
    pub evidence: HoleEvidence,
    pub shaded: ShadedRegion,
    pub triangle: AnnouncementTriangle,
    /// `|ab|`.
    pub length: f64,
    pub depth: f64,
}

impl HoleRecord {
    pub fn segment(&self) -> Segment {
        Segment {
            a: self.a.1,
            b: self.b.1,
        }
    }

    pub fn ef_length(&self) -> f64 {
        self.e.1.dist(self.f.1)
    }

    pub fn landmark_midpoint(&self) -> Point {
        self.a.1.midpoint(self.b.1)
    }
}

/// Builds the full record for a loop that passed detection.
pub fn build_record(
    boundary: &BoundaryLoop,
    evidence: HoleEvidence,
    cfg: &DetectionConfig,
) -> Result<HoleRecord, HoleError> {
    let (a, b) = representative_segment(boundary)?;
    let (e, f) = select_ef(boundary, (a, b), cfg)?;
    if e.1 == f.1 {
        return Err(HoleError::DegenerateBase);
    }
    let shaded =
        ShadedRegion::new(a.1, b.1, Side::Right).map_err(|_| HoleError::DegenerateSegment)?;
    let length = a.1.dist(b.1);
    let depth = announcement_depth(length);

    let toward_near = (b.1 - a.1).perp().normalized().ok_or(HoleError::DegenerateSegment)?;
    let mut normal = (f.1 - e.1).perp().normalized().ok_or(HoleError::DegenerateBase)?;
    let c = e.1.midpoint(f.1);
    let lean = normal.dot(toward_near);
    let flip = if lean.abs() > 1e-9 {
        lean < 0.0
    } else {
        normal.dot(boundary.initiator_pos() - c) < 0.0
    };
    if flip {
        normal = normal * -1.0;
    }
    let triangle = AnnouncementTriangle {
        e: e.1,
        f: f.1,
        k: c + normal * depth,
    };
    Ok(HoleRecord {
        initiator: boundary.initiator,
        a,
        b,
        e,
        f,
        boundary: boundary.clone(),
        evidence,
        shaded,
        triangle,
        length,
        depth,
    })
}

/// Records for every hole in a detection pass; loops whose record cannot be
/// built are logged and skipped.
pub fn build_records(report: &DetectionReport, cfg: &DetectionConfig) -> Vec<HoleRecord> {
    report
        .holes()
        .filter_map(|(lp, ev)| match build_record(lp, *ev, cfg) {
            Ok(rec) => Some(rec),
            Err(err) => {
                log::warn!("skipping hole found by {}: {err}", lp.initiator);
                None
            }
        })
        .collect()
}

/// Flat, plot-friendly view of a record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoleDump {
    pub initiator: NodeId,
    pub a: Vertex,
    pub b: Vertex,
    pub e: Vertex,
    pub f: Vertex,
    pub k: Point,
    pub length: f64,
    pub depth: f64,
    pub witness: NodeId,
    pub ratio: f64,
    pub boundary: Vec<Vertex>,
}

impl From<&HoleRecord> for HoleDump {
    fn from(r: &HoleRecord) -> Self {
        Self {
            initiator: r.initiator,
            a: r.a,
            b: r.b,
            e: r.e,
            f: r.f,
            k: r.triangle.k,
            length: r.length,
            depth: r.depth,
            witness: r.evidence.witness,
            ratio: r.evidence.ratio,
            boundary: r.boundary.vertices.clone(),
        }
    }
}

/// One JSON object per line.
pub fn dump_jsonl(records: &[HoleRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(&HoleDump::from(r)).expect("dumps always serialize") + "\n")
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::side_of_line;
    use proptest::prelude::*;

    fn lp(points: &[(f64, f64)]) -> BoundaryLoop {
        BoundaryLoop::from_points(&points.iter().map(|&(x, y)| Point::new(x, y)).collect::<Vec<_>>())
            .unwrap()
    }

    fn evidence() -> HoleEvidence {
        HoleEvidence {
            witness: NodeId(1),
            ratio: 3.0,
        }
    }

    #[test]
    fn depth_is_linear() {
        assert!((announcement_depth(10.0) - 8.7).abs() < 1e-12);
        assert!((announcement_depth(1e-4) - 8.7e-5).abs() < 1e-18);
        assert!((announcement_depth(40.0) - 34.8).abs() < 1e-12);
    }

    #[test]
    fn unit_square_picks_a_diagonal() {
        let l = lp(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let (a, b) = representative_segment(&l).unwrap();
        assert!((a.1.dist(b.1) - 2f64.sqrt()).abs() < 1e-12);
        // ties go to the smallest id pair: (0, 2) beats (1, 3)
        assert_eq!(pair_key(a.0, b.0), (NodeId(0), NodeId(2)));
    }

    #[test]
    fn collinear_loop_picks_extremes() {
        let l = lp(&[(2.0, 0.0), (3.0, 0.0), (5.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        let (a, b) = representative_segment(&l).unwrap();
        assert_eq!(pair_key(a.0, b.0), (NodeId(2), NodeId(3)));
    }

    #[test]
    fn initiator_lies_left_of_segment() {
        // initiator at the bottom of a wide hexagon
        let l = lp(&[(0.0, 0.0), (-4.0, 1.0), (-5.0, 5.0), (0.0, 6.0), (5.0, 5.0), (4.0, 1.0)]);
        let (a, b) = representative_segment(&l).unwrap();
        let s = Segment { a: a.1, b: b.1 };
        assert_eq!(side_of_line(&s, l.initiator_pos()), Side::Left);
    }

    /// U-shaped void opening downward; the initiator sits on the bottom rim.
    fn u_void() -> BoundaryLoop {
        lp(&[
            (0.0, 0.0),
            (-1.0, 0.0),
            (-2.0, 0.0),
            (-2.0, 1.0),
            (-2.0, 2.0),
            (-1.0, 2.0),
            (0.0, 2.0),
            (1.0, 2.0),
            (2.0, 2.0),
            (2.0, 1.0),
            (2.0, 0.0),
            (1.0, 0.0),
        ])
    }

    #[test]
    fn ef_brute_force_agrees() {
        let l = u_void();
        let cfg = DetectionConfig::with_delta(1.2);
        let (a, b) = representative_segment(&l).unwrap();
        let (e, f) = select_ef(&l, (a, b), &cfg).unwrap();
        let seg = Segment { a: a.1, b: b.1 };
        let near: Vec<_> = l
            .vertices
            .iter()
            .filter(|v| v.0 == l.initiator || side_of_line(&seg, v.1) == Side::Left)
            .collect();
        let q = |v: NodeId| hole_ratio(&l, v).is_ok_and(|r| r > cfg.delta);
        let best = near
            .iter()
            .flat_map(|u| near.iter().map(move |v| (u, v)))
            .filter(|(u, v)| u.0 != v.0 && (q(u.0) || q(v.0)))
            .map(|(u, v)| u.1.dist(v.1))
            .fold(0.0, f64::max);
        assert!((e.1.dist(f.1) - best).abs() < 1e-12);
        assert!(e.1.dist(f.1) > 0.0);
    }

    #[test]
    fn record_geometry_is_consistent() {
        let l = u_void();
        let cfg = DetectionConfig::with_delta(1.2);
        let rec = build_record(&l, evidence(), &cfg).unwrap();
        let seg = rec.segment();
        assert_eq!(side_of_line(&seg, rec.triangle.k), Side::Left);
        assert!((rec.depth - 0.87 * rec.length).abs() < 1e-12);
        // apex on the base's perpendicular bisector
        let c = rec.triangle.base_midpoint();
        assert!((rec.triangle.k - c).dot(rec.f.1 - rec.e.1).abs() < 1e-9);
        assert!((rec.triangle.k.dist(c) - rec.depth).abs() < 1e-9);
    }

    #[test]
    fn triangle_area_matches_half_base_times_depth() {
        let l = u_void();
        let rec = build_record(&l, evidence(), &DetectionConfig::with_delta(1.2)).unwrap();
        let half = rec.ef_length() / 2.0;
        let tan = rec.depth / half;
        let expected = half * half * tan;
        assert!((rec.triangle.area() - expected).abs() <= 1e-9 * expected);
    }

    #[test]
    fn equal_base_gives_canonical_depth() {
        // a diamond: the widest pair and the widest near-side pair coincide in length
        let l = lp(&[(0.0, -1.0), (-1.0, 0.0), (0.0, 3.0), (1.0, 0.0)]);
        let rec = build_record(&l, evidence(), &DetectionConfig::default()).unwrap();
        assert!((rec.triangle.k.dist(rec.triangle.base_midpoint()) - 0.87 * rec.length).abs() < 1e-12);
    }

    #[test]
    fn coincident_near_side_vertices_are_rejected() {
        // both near-side vertices share the initiator's position
        let l = lp(&[(0.0, 0.0), (-5.0, 3.0), (0.0, 0.0), (5.0, 3.0)]);
        assert_eq!(
            build_record(&l, evidence(), &DetectionConfig::default()),
            Err(HoleError::DegenerateBase)
        );
    }

    fn random_loop() -> impl Strategy<Value = Vec<Point>> {
        prop::collection::vec((-100.0..100.0f64, -100.0..100.0f64), 2..200)
            .prop_map(|v| v.into_iter().map(|(x, y)| Point::new(x, y)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn representative_segment_is_the_farthest_pair(pts in random_loop()) {
            let Ok(l) = BoundaryLoop::from_points(&pts) else { return Ok(()); };
            let (a, b) = representative_segment(&l).unwrap();
            let mut best = 0.0f64;
            for u in &pts { for v in &pts { best = best.max(u.dist(*v)); } }
            prop_assert_eq!(a.1.dist(b.1), best);
        }

        #[test]
        fn shaded_and_triangle_apex_are_on_opposite_sides(pts in random_loop()) {
            let Ok(l) = BoundaryLoop::from_points(&pts) else { return Ok(()); };
            let Ok(rec) = build_record(&l, evidence(), &DetectionConfig::default()) else { return Ok(()); };
            let seg = rec.segment();
            prop_assert_ne!(side_of_line(&seg, rec.triangle.k), Side::Right);
            prop_assert_eq!(rec.shaded.far_side, Side::Right);
        }
    }
}
