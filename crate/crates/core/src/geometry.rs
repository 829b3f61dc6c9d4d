//! Planar geometry primitives.
//!
//! Everything here is a pure function over `f64` coordinates in meters.
//! Angles are exchanged in degrees; trigonometry is done in radians.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative width of the band in which a point counts as lying on a line.
pub const COLLINEAR_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("point ({x}, {y}) lies outside the shaded region")]
    OutsideShadedRegion { x: f64, y: f64 },
}

/// A location in the deployment plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at `deg` degrees counter-clockwise from the +x axis.
    pub fn from_polar_deg(deg: f64) -> Self {
        let r = deg.to_radians();
        Self::new(r.cos(), r.sin())
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn dist_sq(self, other: Point) -> f64 {
        let d = self - other;
        d.dot(d)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn normalized(self) -> Option<Point> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    /// Rotated 90 degrees counter-clockwise.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    /// Polar angle in degrees, in `[0, 360)`.
    pub fn bearing_deg(self) -> f64 {
        normalize_deg(self.y.atan2(self.x).to_degrees())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.3}, {:.3})", self.x, self.y)
    }
}

/// Maps any angle in degrees into `[0, 360)`.
pub fn normalize_deg(deg: f64) -> f64 {
    let r = deg.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    if r >= 360.0 {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, GeometryError> {
        if a == b {
            return Err(GeometryError::Degenerate("segment endpoints coincide"));
        }
        Ok(Self { a, b })
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn midpoint(&self) -> Point {
        self.a.midpoint(self.b)
    }

    pub fn reversed(&self) -> Segment {
        Segment { a: self.b, b: self.a }
    }

    /// Parameter of the orthogonal projection of `p` onto the supporting
    /// line, with `a` at 0 and `b` at 1.
    pub fn projection_param(&self, p: Point) -> f64 {
        let d = self.b - self.a;
        (p - self.a).dot(d) / d.dot(d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
    On,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
            Side::On => Side::On,
        }
    }
}

/// Which side of the directed line `s.a -> s.b` the point `p` is on.
pub fn side_of_line(s: &Segment, p: Point) -> Side {
    let dir = s.b - s.a;
    let off = p - s.a;
    let cross = dir.cross(off);
    if cross.abs() <= COLLINEAR_TOLERANCE * dir.norm() * off.norm() {
        Side::On
    } else if cross > 0.0 {
        Side::Left
    } else {
        Side::Right
    }
}

/// Counter-clockwise angle at `apex` swept from the ray toward `prev` to the
/// ray toward `next`, in degrees within `[0, 360)`.
pub fn angle_between(prev: Point, apex: Point, next: Point) -> Result<f64, GeometryError> {
    if prev == apex || next == apex {
        return Err(GeometryError::Degenerate("angle arm has zero length"));
    }
    let u = prev - apex;
    let v = next - apex;
    Ok(normalize_deg(u.cross(v).atan2(u.dot(v)).to_degrees()))
}

/// Result of sweeping a ray around an apex in both rotational directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep<K> {
    pub leftmost: (K, Point),
    pub rightmost: (K, Point),
}

/// Finds the first neighbor hit by a ray rotating counter-clockwise
/// (`leftmost`) and clockwise (`rightmost`) from `bisector_dir`.
///
/// Equal sweep angles go to the neighbor nearer the apex, then to the lower key.
/// Returns `None` only for an empty neighbor list.
pub fn sweep_neighbors<K: Ord + Copy>(
    apex: Point,
    bisector_dir: Point,
    neighbors: &[(K, Point)],
) -> Option<Sweep<K>> {
    let start = bisector_dir.bearing_deg();
    let pick = |clockwise: bool| {
        neighbors
            .iter()
            .copied()
            .map(|(k, p)| {
                let ccw = normalize_deg((p - apex).bearing_deg() - start);
                let swept = if clockwise { normalize_deg(-ccw) } else { ccw };
                (swept, apex.dist_sq(p), k, p)
            })
            .min_by(|l, r| {
                l.0.total_cmp(&r.0)
                    .then(l.1.total_cmp(&r.1))
                    .then(l.2.cmp(&r.2))
            })
            .map(|(_, _, k, p)| (k, p))
    };
    Some(Sweep {
        leftmost: pick(false)?,
        rightmost: pick(true)?,
    })
}

/// Signed area of a closed polygon; positive when the vertices run
/// counter-clockwise.
pub fn signed_area(vertices: &[Point]) -> f64 {
    if vertices.len() < 3 {
        return 0.0;
    }
    let n = vertices.len();
    0.5 * (0..n)
        .map(|i| vertices[i].cross(vertices[(i + 1) % n]))
        .sum::<f64>()
}

/// Intersection point of two closed segments, if they meet in exactly one
/// point. Collinear overlaps yield `None`.
pub fn segment_intersection(p: &Segment, q: &Segment) -> Option<Point> {
    let r = p.b - p.a;
    let s = q.b - q.a;
    let denom = r.cross(s);
    if denom.abs() <= f64::EPSILON * r.norm() * s.norm() {
        return None;
    }
    let qp = q.a - p.a;
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    const EPS: f64 = 1e-12;
    if (-EPS..=1.0 + EPS).contains(&t) && (-EPS..=1.0 + EPS).contains(&u) {
        Some(p.a + r * t)
    } else {
        None
    }
}

/// Half-strip behind segment `ab`, on the side `far_side` of the directed
/// line `a -> b`, bounded by the perpendiculars through `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShadedRegion {
    pub a: Point,
    pub b: Point,
    pub far_side: Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Landmark {
    /// `d` is in the half of the strip adjoining `a`.
    ASide,
    /// `d` is in the half of the strip adjoining `b`.
    BSide,
}

impl ShadedRegion {
    pub fn new(a: Point, b: Point, far_side: Side) -> Result<Self, GeometryError> {
        if a == b {
            return Err(GeometryError::Degenerate("shaded region needs a != b"));
        }
        if far_side == Side::On {
            return Err(GeometryError::Degenerate("far side must be left or right"));
        }
        Ok(Self { a, b, far_side })
    }

    pub fn segment(&self) -> Segment {
        Segment { a: self.a, b: self.b }
    }

    pub fn near_side(&self) -> Side {
        self.far_side.opposite()
    }

    pub fn contains(&self, d: Point) -> bool {
        let seg = self.segment();
        if side_of_line(&seg, d) != self.far_side {
            return false;
        }
        (0.0..=1.0).contains(&seg.projection_param(d))
    }

    /// Which landmark half of the strip holds `d`. The dividing
    /// perpendicular through the midpoint belongs to the `a` half.
    pub fn landmark_subregion(&self, d: Point) -> Result<Landmark, GeometryError> {
        if !self.contains(d) {
            return Err(GeometryError::OutsideShadedRegion { x: d.x, y: d.y });
        }
        let t = self.segment().projection_param(d);
        if t <= 0.5 + COLLINEAR_TOLERANCE {
            Ok(Landmark::ASide)
        } else {
            Ok(Landmark::BSide)
        }
    }
}

/// Convenience wrapper matching the free-function form used by the router.
pub fn landmark_subregion(
    a: Point,
    b: Point,
    far_side: Side,
    d: Point,
) -> Result<Landmark, GeometryError> {
    ShadedRegion::new(a, b, far_side)?.landmark_subregion(d)
}

/// Triangle with base `ef` and apex `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnouncementTriangle {
    pub e: Point,
    pub f: Point,
    pub k: Point,
}

impl AnnouncementTriangle {
    /// Midpoint of the base.
    pub fn base_midpoint(&self) -> Point {
        self.e.midpoint(self.f)
    }

    pub fn area(&self) -> f64 {
        signed_area(&[self.e, self.f, self.k]).abs()
    }

    /// Boundary-inclusive point-in-triangle test.
    pub fn contains(&self, p: Point) -> bool {
        let (e, f, k) = (self.e, self.f, self.k);
        let scale = e.dist(f).max(f.dist(k)).max(k.dist(e));
        let eps = 1e-9 * scale * scale;
        let d1 = (f - e).cross(p - e);
        let d2 = (k - f).cross(p - f);
        let d3 = (e - k).cross(p - k);
        let has_neg = d1 < -eps || d2 < -eps || d3 < -eps;
        let has_pos = d1 > eps || d2 > eps || d3 > eps;
        !(has_neg && has_pos)
    }
}

/// Ordering helper for `f64` keys in sorts where NaN cannot occur.
pub(crate) fn cmp_f64(a: f64, b: f64) -> Ordering {
    a.total_cmp(&b)
}

/// Gaps between angularly consecutive directions, each paired with the
/// bearing (degrees) where the gap starts. Directions are sorted
/// counter-clockwise; the last gap wraps around through 360 degrees.
pub fn angular_gaps(apex: Point, others: &[Point]) -> Vec<(f64, f64)> {
    let mut bearings: Vec<f64> = others
        .iter()
        .filter(|p| **p != apex)
        .map(|p| (*p - apex).bearing_deg())
        .collect();
    if bearings.len() < 2 {
        return Vec::new();
    }
    bearings.sort_by(|a, b| cmp_f64(*a, *b));
    let n = bearings.len();
    (0..n)
        .map(|i| {
            let start = bearings[i];
            let end = if i + 1 < n { bearings[i + 1] } else { bearings[0] + 360.0 };
            (start, end - start)
        })
        .collect()
}

/// Largest angular gap as `(start_bearing_deg, width_deg)`.
pub fn max_angular_gap(apex: Point, others: &[Point]) -> Option<(f64, f64)> {
    angular_gaps(apex, others)
        .into_iter()
        .max_by(|l, r| cmp_f64(l.1, r.1).then(cmp_f64(r.0, l.0)))
}

pub fn deg_to_rad(deg: f64) -> f64 {
    deg * PI / 180.0
}
