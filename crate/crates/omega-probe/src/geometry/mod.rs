//! Points, directed lines, orientation predicates and convex polygons.

mod arc;
mod feasible;

pub use arc::{line_arc_intersections, omega_arc, sample_arc, OmegaArc};
pub use feasible::{feasible_edge_region, feasible_region, FeasibleRegion, HalfPlane, Wedge};

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative length tolerance; multiply by the instance scale.
pub const TAU_REL: f64 = 1e-9;
/// Absolute angular tolerance in radians.
pub const TAU_ANG: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Unit vector at angle `theta`.
    pub fn polar(theta: f64) -> Self {
        Point::new(theta.cos(), theta.sin())
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn normalized(self) -> Point {
        let n = self.norm();
        Point::new(self.x / n, self.y / n)
    }

    /// Counterclockwise perpendicular.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn rotate(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Direction angle in [0, 2π).
    pub fn angle(self) -> f64 {
        normalize_angle(self.y.atan2(self.x))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Maps any angle to [0, 2π).
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Counterclockwise rotation needed to turn direction `from` into `to`, in [0, 2π).
pub fn ccw_angle(from: f64, to: f64) -> f64 {
    normalize_angle(to - from)
}

/// Signed angle from vector `u` to vector `v`, in (-π, π].
pub fn signed_angle(u: Point, v: Point) -> f64 {
    u.cross(v).atan2(u.dot(v))
}

/// Unsigned angle at `v` between rays to `a` and `b`, in [0, π].
pub fn angle_at(a: Point, v: Point, b: Point) -> f64 {
    signed_angle(a - v, b - v).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectedLine {
    pub origin: Point,
    pub direction: Point,
}

impl DirectedLine {
    /// Line through `origin` with the given direction, normalized.
    pub fn new(origin: Point, direction: Point) -> Self {
        DirectedLine {
            origin,
            direction: direction.normalized(),
        }
    }

    /// Line through `a` directed towards `b`.
    pub fn through(a: Point, b: Point) -> Self {
        DirectedLine::new(a, b - a)
    }

    pub fn at(&self, t: f64) -> Point {
        self.origin + self.direction * t
    }

    /// Parameter of the orthogonal projection of `p`.
    pub fn param(&self, p: Point) -> f64 {
        (p - self.origin).dot(self.direction)
    }

    /// Positive when `p` is left of the line.
    pub fn side(&self, p: Point) -> f64 {
        self.direction.cross(p - self.origin)
    }

    /// Same line rotated by `angle` around `pivot` (which should lie on it).
    pub fn rotated_about(&self, pivot: Point, angle: f64) -> Self {
        DirectedLine::new(pivot, self.direction.rotate(angle))
    }

    pub fn is_valid(&self) -> bool {
        self.origin.is_finite()
            && self.direction.is_finite()
            && (self.direction.norm() - 1.0).abs() <= 1e-9
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

/// Orientation of the triple, with collinear declared when the doubled area is
/// within `TAU_REL · scale²` of zero (scale = longest pairwise distance).
pub fn orient(a: Point, b: Point, c: Point) -> Orientation {
    let scale = a.dist(b).max(a.dist(c)).max(b.dist(c));
    orient_with_scale(a, b, c, scale)
}

pub fn orient_with_scale(a: Point, b: Point, c: Point, scale: f64) -> Orientation {
    let area2 = (b - a).cross(c - a);
    if area2.abs() <= TAU_REL * scale * scale {
        Orientation::Collinear
    } else if area2 > 0.0 {
        Orientation::Left
    } else {
        Orientation::Right
    }
}

/// Interior angle at `v` of a counterclockwise corner `prev → v → next`.
pub fn internal_angle(prev: Point, v: Point, next: Point) -> Result<f64> {
    let scale = prev.dist(v).max(next.dist(v));
    if prev.dist(v) <= TAU_REL * scale || next.dist(v) <= TAU_REL * scale || scale == 0.0 {
        return Err(Error::DegenerateCorner);
    }
    match orient(prev, v, next) {
        Orientation::Left => Ok(angle_at(prev, v, next)),
        _ => Err(Error::DegenerateCorner),
    }
}

/// A strictly convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl TryFrom<Vec<Point>> for ConvexPolygon {
    type Error = Error;
    fn try_from(v: Vec<Point>) -> Result<Self> {
        ConvexPolygon::new(v)
    }
}

impl From<ConvexPolygon> for Vec<Point> {
    fn from(p: ConvexPolygon) -> Vec<Point> {
        p.vertices
    }
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::DegeneratePolygon(format!(
                "{} vertices, need at least 3",
                vertices.len()
            )));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::DegeneratePolygon(format!(
                "vertex {i} is not finite"
            )));
        }
        let scale = diameter(&vertices);
        let n = vertices.len();
        for i in 0..n {
            let (a, b, c) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
            if orient_with_scale(a, b, c, scale) != Orientation::Left {
                return Err(Error::DegeneratePolygon(format!(
                    "corner at vertex {} is not a strict left turn",
                    (i + 1) % n
                )));
            }
        }
        // consecutive left turns can still wind twice around
        let turning: f64 = (0..n)
            .map(|i| {
                let e0 = vertices[(i + 1) % n] - vertices[i];
                let e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
                signed_angle(e0, e1)
            })
            .sum();
        if (turning - TAU).abs() > 1e-6 {
            return Err(Error::DegeneratePolygon(
                "boundary winds more than once".into(),
            ));
        }
        Ok(ConvexPolygon { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex with cyclic indexing.
    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.len()
    }

    pub fn prev(&self, i: usize) -> usize {
        (i + self.len() - 1) % self.len()
    }

    /// Edge vector from vertex `i` to its successor.
    pub fn edge(&self, i: usize) -> Point {
        self.vertex(i + 1) - self.vertex(i)
    }

    pub fn internal_angle(&self, i: usize) -> f64 {
        let n = self.len();
        angle_at(self.vertex(i + n - 1), self.vertex(i), self.vertex(i + 1))
    }

    pub fn internal_angles(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.internal_angle(i)).collect()
    }

    pub fn area(&self) -> f64 {
        let n = self.len();
        0.5 * (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum::<f64>()
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point {
        let n = self.len();
        let o = self.vertices[0];
        let (mut cx, mut cy, mut a) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let p = self.vertices[i] - o;
            let q = self.vertices[(i + 1) % n] - o;
            let w = p.cross(q);
            a += w;
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
        }
        o + Point::new(cx / (3.0 * a), cy / (3.0 * a))
    }

    pub fn diameter(&self) -> f64 {
        diameter(&self.vertices)
    }

    pub fn max_distance_from(&self, p: Point) -> f64 {
        self.vertices.iter().map(|v| v.dist(p)).fold(0.0, f64::max)
    }

    /// Inside or on the boundary, with absolute slack `tol`.
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            let a = self.vertices[i];
            let e = self.edge(i);
            e.cross(p - a) / e.norm() >= -tol
        })
    }

    /// Parameter interval `[t_in, t_out]` where `line` meets the polygon.
    /// Vertices within `tol` of the line count as touching.
    pub fn clip_line(&self, line: &DirectedLine, tol: f64) -> Option<(f64, f64)> {
        let n = self.len();
        let sides: Vec<f64> = self.vertices.iter().map(|&v| line.side(v)).collect();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            if sides[i].abs() <= tol {
                let t = line.param(self.vertices[i]);
                lo = lo.min(t);
                hi = hi.max(t);
            }
            let j = (i + 1) % n;
            if (sides[i] > tol && sides[j] < -tol) || (sides[i] < -tol && sides[j] > tol) {
                let s = sides[i] / (sides[i] - sides[j]);
                let p = self.vertices[i].lerp(self.vertices[j], s);
                let t = line.param(p);
                lo = lo.min(t);
                hi = hi.max(t);
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    /// Index of a vertex within `tol` of `p`.
    pub fn find_vertex(&self, p: Point, tol: f64) -> Option<usize> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| v.dist(p) <= tol)
            .min_by(|a, b| a.1.dist(p).total_cmp(&b.1.dist(p)))
            .map(|(i, _)| i)
    }

    /// Same polygon translated and scaled.
    pub fn transformed(&self, shift: Point, scale: f64) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&v| (v + shift) * scale).collect(),
        }
    }
}

pub(crate) fn diameter(pts: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            d = d.max(a.dist(*b));
        }
    }
    d
}

/// Unit-size regular polygon, counterclockwise, first vertex at angle `phase`.
pub fn regular_polygon(n: usize, radius: f64, phase: f64) -> ConvexPolygon {
    let vertices = (0..n)
        .map(|i| Point::polar(phase + TAU * i as f64 / n as f64) * radius)
        .collect();
    ConvexPolygon::new(vertices).expect("regular polygon is convex")
}

/// Half-open interval test on the circle: is `a` within the CCW sweep from `start`?
pub(crate) fn angle_in_sweep(a: f64, start: f64, sweep: f64, tol: f64) -> bool {
    let d = ccw_angle(start, a);
    d <= sweep + tol || d >= TAU - tol
}

/// Angle subtended by the polygon as seen from `q`, or 2π if `q` is inside.
pub fn angular_width(q: Point, poly: &ConvexPolygon) -> f64 {
    let tol = TAU_REL * poly.diameter();
    if poly.contains(q, -tol) {
        return TAU;
    }
    let (lo, hi) = angular_extremes(q, poly);
    hi - lo
}

/// Minimum and maximum signed angle of the vertices seen from `q`, measured
/// from the direction towards the centroid. `q` must lie outside.
pub(crate) fn angular_extremes(q: Point, poly: &ConvexPolygon) -> (f64, f64) {
    let axis = poly.centroid() - q;
    poly.vertices()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            let phi = signed_angle(axis, *v - q);
            (lo.min(phi), hi.max(phi))
        })
}
