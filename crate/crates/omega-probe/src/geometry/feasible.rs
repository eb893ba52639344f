use serde::{Deserialize, Serialize};

use super::{diameter, DirectedLine, Point, TAU_REL};

/// Closed half-plane to the left of a directed line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub point: Point,
    pub direction: Point,
}

impl HalfPlane {
    pub fn new(point: Point, direction: Point) -> Self {
        HalfPlane {
            point,
            direction: direction.normalized(),
        }
    }

    pub fn left_of(line: &DirectedLine) -> Self {
        HalfPlane::new(line.origin, line.direction)
    }

    pub fn right_of(line: &DirectedLine) -> Self {
        HalfPlane::new(line.origin, -line.direction)
    }

    /// Signed distance, positive inside.
    pub fn signed_distance(&self, p: Point) -> f64 {
        self.direction.cross(p - self.point)
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        self.signed_distance(p) >= -tol
    }
}

/// Wedge with apex and two arms; the region lies left of the first arm and
/// right of the second.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wedge {
    pub apex: Point,
    pub dir1: Point,
    pub dir2: Point,
}

impl Wedge {
    pub fn half_planes(&self) -> [HalfPlane; 2] {
        [
            HalfPlane::new(self.apex, self.dir1),
            HalfPlane::new(self.apex, -self.dir2),
        ]
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        self.half_planes().iter().all(|h| h.contains(p, tol))
    }
}

/// Convex region cut out of a bounding square by half-planes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibleRegion {
    /// Counterclockwise boundary vertices.
    pub vertices: Vec<Point>,
    /// The region reaches the artificial bounding square.
    pub unbounded: bool,
    /// The region has collapsed to (at most) a segment.
    pub degenerate: bool,
    scale: f64,
    bound_center: Point,
    bound_half: f64,
}

const BOX_FACTOR: f64 = 1e4;

impl FeasibleRegion {
    /// The whole plane, represented by a square of half-size `1e4 · scale`.
    pub fn plane(center: Point, scale: f64) -> Self {
        let h = BOX_FACTOR * scale;
        let vertices = vec![
            center + Point::new(-h, -h),
            center + Point::new(h, -h),
            center + Point::new(h, h),
            center + Point::new(-h, h),
        ];
        FeasibleRegion {
            vertices,
            unbounded: true,
            degenerate: false,
            scale,
            bound_center: center,
            bound_half: h,
        }
    }

    /// Bounded region with the given counterclockwise convex boundary.
    pub fn from_polygon(vertices: Vec<Point>) -> Self {
        let scale = diameter(&vertices).max(f64::MIN_POSITIVE);
        let c =
            vertices.iter().fold(Point::default(), |a, &b| a + b) * (1.0 / vertices.len() as f64);
        let mut r = FeasibleRegion {
            vertices,
            unbounded: false,
            degenerate: false,
            scale,
            bound_center: c,
            bound_half: f64::INFINITY,
        };
        r.refresh();
        r
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Intersection with a half-plane (Sutherland–Hodgman on a convex chain).
    pub fn clip(&self, h: &HalfPlane) -> FeasibleRegion {
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let da = h.signed_distance(a);
            let db = h.signed_distance(b);
            if da >= 0.0 {
                out.push(a);
            }
            if (da >= 0.0) != (db >= 0.0) {
                out.push(a.lerp(b, da / (da - db)));
            }
        }
        let tol = TAU_REL * self.scale;
        out.dedup_by(|a, b| a.dist(*b) <= tol);
        if out.len() > 1 && out[0].dist(out[out.len() - 1]) <= tol {
            out.pop();
        }
        let mut r = FeasibleRegion {
            vertices: out,
            ..self.clone()
        };
        r.refresh();
        r
    }

    fn refresh(&mut self) {
        let h = self.bound_half;
        let c = self.bound_center;
        self.unbounded = h.is_finite()
            && self.vertices.iter().any(|v| {
                (v.x - c.x).abs() >= h * (1.0 - 1e-9) || (v.y - c.y).abs() >= h * (1.0 - 1e-9)
            });
        self.degenerate = self.width() <= TAU_REL * self.scale;
    }

    /// Smallest extent over the directions of the region's own edges.
    pub fn width(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let d = (self.vertices[(i + 1) % n] - a).normalized();
                self.vertices
                    .iter()
                    .map(|&v| d.cross(v - a).abs())
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        0.5 * (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum::<f64>()
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        let n = self.vertices.len();
        match n {
            0 => false,
            1 => self.vertices[0].dist(p) <= tol,
            2 => segment_distance(self.vertices[0], self.vertices[1], p) <= tol,
            _ if self.degenerate => {
                let (a, b) = self.extreme_pair();
                segment_distance(a, b, p) <= tol
            }
            _ => (0..n).all(|i| {
                let a = self.vertices[i];
                let e = self.vertices[(i + 1) % n] - a;
                e.cross(p - a) / e.norm() >= -tol
            }),
        }
    }

    fn extreme_pair(&self) -> (Point, Point) {
        let mut best = (self.vertices[0], self.vertices[0], 0.0);
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                let d = a.dist(*b);
                if d > best.2 {
                    best = (*a, *b, d);
                }
            }
        }
        (best.0, best.1)
    }

    /// Triangle with base `uw` and apex at the region point farthest from the
    /// base line, or `None` if the region is degenerate.
    pub fn base_triangle(&self, u: Point, w: Point) -> Option<[Point; 3]> {
        if self.degenerate || self.vertices.is_empty() {
            return None;
        }
        let line = DirectedLine::through(u, w);
        let apex = self
            .vertices
            .iter()
            .copied()
            .max_by(|a, b| line.side(*a).abs().total_cmp(&line.side(*b).abs()))?;
        (line.side(apex).abs() > TAU_REL * self.scale).then_some([u, w, apex])
    }
}

fn segment_distance(a: Point, b: Point, p: Point) -> f64 {
    let ab = b - a;
    let l2 = ab.dot(ab);
    if l2 == 0.0 {
        return a.dist(p);
    }
    let t = ((p - a).dot(ab) / l2).clamp(0.0, 1.0);
    a.lerp(b, t).dist(p)
}

/// Intersection of the given wedges, each of which must contain the point set
/// `q`. Regions are bounded by a square far outside `q`.
pub fn feasible_region(q: &[Point], wedges: &[Wedge]) -> FeasibleRegion {
    let scale = diameter(q).max(f64::MIN_POSITIVE);
    let c = q.iter().fold(Point::default(), |a, &b| a + b) * (1.0 / q.len().max(1) as f64);
    wedges
        .iter()
        .flat_map(|w| w.half_planes())
        .fold(FeasibleRegion::plane(c, scale), |r, h| r.clip(&h))
}

/// The part of `region` on the outer side of the counterclockwise edge `u → w`.
pub fn feasible_edge_region(region: &FeasibleRegion, u: Point, w: Point) -> FeasibleRegion {
    let mut r = region.clip(&HalfPlane::new(w, u - w));
    let line = DirectedLine::through(u, w);
    let depth = r
        .vertices
        .iter()
        .map(|v| -line.side(*v))
        .fold(0.0, f64::max);
    if depth <= TAU_REL * r.scale {
        r.degenerate = true;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> [Point; 3] {
        [
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, 1.5),
        ]
    }

    #[test]
    fn identity_clip() {
        let q = tri();
        let w = Wedge {
            apex: Point::new(1.0, -3.0),
            dir1: Point::new(1.0, 1.0).normalized(),
            dir2: Point::new(-1.0, 1.0).normalized(),
        };
        let r = feasible_region(&q, &[w]);
        let r2 = r.clip(&HalfPlane::new(
            Point::new(0.0, -100.0),
            Point::new(1.0, 0.0),
        ));
        assert_eq!(r.vertices.len(), r2.vertices.len());
        assert!((r.area() - r2.area()).abs() < 1e-9 * r.area());
    }

    #[test]
    fn flush_arm_degenerates_edge_region() {
        let [a, b, c] = tri();
        // apex beyond b on the extension of edge a→b, first arm flush with it
        let w = Wedge {
            apex: Point::new(-1.0, 0.0),
            dir1: Point::new(1.0, 0.0),
            dir2: Point::new(1.0, 1.0).normalized(),
        };
        assert!([a, b, c].iter().all(|p| w.contains(*p, 1e-12)));
        let r = feasible_region(&[a, b, c], &[w]);
        assert!(feasible_edge_region(&r, a, b).degenerate);
        assert!(feasible_edge_region(&r, b, c).unbounded);
    }
}
