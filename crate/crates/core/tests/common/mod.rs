//! Hand-built layouts shared by the integration and acceptance tests.
#![allow(dead_code)]

use hddl_core::hole_detect::BoundaryLoop;
use hddl_core::{Area, Network, NodeId, Point};

/// Unit range slightly below 1, as in the small worked examples.
pub const RANGE: f64 = 0.9;

/// Where the small layouts put `p`, keeping them inside a positive area.
pub const ORIGIN: Point = Point { x: 2.0, y: 1.0 };

fn placed(points: &[Point]) -> Vec<Point> {
    points.iter().map(|&p| p + ORIGIN).collect()
}

/// Intersection of circles (c1, r1) and (c2, r2) lying left of c1 -> c2.
pub fn circle_meet(c1: Point, r1: f64, c2: Point, r2: f64) -> Point {
    let d = c1.dist(c2);
    let u = (c2 - c1) * (1.0 / d);
    let along = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    let h = (r1 * r1 - along * along).sqrt();
    c1 + u * along + u.perp() * h
}

pub fn cycle(points: &[Point]) -> BoundaryLoop {
    BoundaryLoop::from_cycle(points.iter().enumerate().map(|(i, &p)| (NodeId(i), p)).collect())
        .unwrap()
}

pub fn regular_polygon(k: usize, radius: f64) -> BoundaryLoop {
    let pts: Vec<Point> = (0..k)
        .map(|i| Point::from_polar_deg(360.0 * i as f64 / k as f64) * radius)
        .collect();
    cycle(&pts)
}

/// Rhombus p, a', b, q with |pb| = 1 and every side `side` long.
/// Node 2 is `b`.
pub fn rhombus(side: f64) -> BoundaryLoop {
    let p = Point::new(0.0, 0.0);
    let b = Point::new(0.0, 1.0);
    let a = circle_meet(b, side, p, side);
    let q = circle_meet(p, side, b, side);
    cycle(&[p, a, b, q])
}

/// Loop p, a, e, d, f, b (ids 0..6) with |pd| = 0.95, |ad| = |bd| = 1,
/// |ed| = |fd| = 0.9 and |ap| = |pb| = 0.9. Node 3 is `d`.
pub fn shallow_notch() -> Vec<Point> {
    let p = Point::new(0.0, 0.0);
    let d = Point::new(0.0, 0.95);
    let a = circle_meet(d, 1.0, p, RANGE);
    let b = circle_meet(p, RANGE, d, 1.0);
    let e = a + (d - a) * 0.1;
    let f = b + (d - b) * 0.1;
    placed(&[p, a, e, d, f, b])
}

/// Loop p, e, a, d, c, b (ids 0..6) with |pd| = 1 and every edge exactly
/// the range. Node 3 is `d`; `e` is within reach of p but closer to d.
pub fn long_way_round() -> Vec<Point> {
    let p = Point::new(0.0, 0.0);
    let d = Point::new(0.0, 1.0);
    let e = circle_meet(p, RANGE, d, 0.95);
    let a = circle_meet(e, RANGE, d, RANGE);
    let c = Point::new(RANGE, 1.0);
    let b = circle_meet(c, RANGE, p, RANGE);
    placed(&[p, e, a, d, c, b])
}

/// Unit-disk network over `points` with the small layouts' range.
pub fn small_network(points: &[Point]) -> Network {
    Network::from_positions(points.to_vec(), RANGE + 1e-9, Area::new(5.0, 5.0)).unwrap()
}
