//! The locus of apices of all valid wedge placements around a convex polygon.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    ccw_angle, line_arc_intersections, normalize_angle, omega_arc, sample_arc, ConvexPolygon,
    DirectedLine, OmegaArc, Point, TAU_ANG, TAU_REL,
};

/// Closed counterclockwise chain of arcs around a polygon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaCloud {
    pub omega: f64,
    pub arcs: Vec<OmegaArc>,
    /// Polygon vertex indices `(a, b)` supporting each arc.
    pub supports: Vec<(usize, usize)>,
    /// `pivots[i]` joins `arcs[i]` to the next arc.
    pub pivots: Vec<Point>,
    /// Indices into `pivots` of those lying on a polygon vertex.
    pub on_polygon_pivots: Vec<usize>,
    /// Polygon vertex index for each entry of `on_polygon_pivots`.
    pub pivot_vertices: Vec<usize>,
    /// Diameter of the polygon.
    pub scale: f64,
}

pub(crate) fn check_omega(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 && omega <= FRAC_PI_2 + TAU_ANG {
        Ok(())
    } else {
        Err(Error::InvalidOmega(omega))
    }
}

/// Supporting-vertex lookup by direction, in O(log n).
pub(crate) struct SupportIndex {
    base: f64,
    rel: Vec<f64>,
}

impl SupportIndex {
    pub fn new(poly: &ConvexPolygon) -> Self {
        let base = poly.edge(0).angle();
        let rel = (0..poly.len())
            .map(|i| ccw_angle(base, poly.edge(i).angle()))
            .collect();
        SupportIndex { base, rel }
    }

    /// Vertex touched by a supporting line with direction `theta` and the
    /// polygon on its left: `v_i` for `theta ∈ (dir e_{i-1}, dir e_i]`.
    pub fn support(&self, theta: f64) -> usize {
        let r = ccw_angle(self.base, theta);
        if r == 0.0 {
            return 0;
        }
        let i = self.rel.partition_point(|&x| x < r);
        if i == self.rel.len() {
            0
        } else {
            i
        }
    }
}

/// Apex of the wedge whose first arm has direction `theta` and passes `a`,
/// second arm rotated by `omega` and passing `b`.
pub(crate) fn apex_for(a: Point, b: Point, theta: f64, omega: f64) -> Point {
    let u1 = Point::polar(theta);
    let u2 = Point::polar(theta + omega);
    // a + s·u1 = b + r·u2
    let s = (b - a).cross(u2) / u1.cross(u2);
    a + u1 * s
}

/// Sweep the wedge around `poly` and collect the arcs traced by its apex.
pub fn build_cloud(poly: &ConvexPolygon, omega: f64) -> Result<OmegaCloud> {
    check_omega(omega)?;
    let n = poly.len();
    let idx = SupportIndex::new(poly);
    let mut events: Vec<f64> = (0..n)
        .flat_map(|i| {
            let d = poly.edge(i).angle();
            [d, normalize_angle(d + PI - omega)]
        })
        .collect();
    events.sort_by(f64::total_cmp);
    let mut merged: Vec<f64> = Vec::with_capacity(events.len());
    for e in events {
        match merged.last() {
            Some(&last) if e - last <= TAU_ANG => {}
            _ => merged.push(e),
        }
    }
    if merged.len() > 1 && merged[0] + TAU - merged[merged.len() - 1] <= TAU_ANG {
        merged.pop();
    }

    // (start angle, end angle, a, b) per maximal interval with a constant pair
    let m = merged.len();
    let mut spans: Vec<(f64, f64, usize, usize)> = Vec::with_capacity(m);
    for k in 0..m {
        let t0 = merged[k];
        let t1 = if k + 1 < m {
            merged[k + 1]
        } else {
            merged[0] + TAU
        };
        let mid = 0.5 * (t0 + t1);
        let a = idx.support(mid);
        let b = idx.support(mid + omega + PI);
        match spans.last_mut() {
            Some(last) if last.2 == a && last.3 == b => last.1 = t1,
            _ => spans.push((t0, t1, a, b)),
        }
    }
    if spans.len() > 1 {
        let (first, last) = (spans[0], spans[spans.len() - 1]);
        if first.2 == last.2 && first.3 == last.3 {
            spans[0].0 = last.0 - TAU;
            spans.pop();
        }
    }
    let scale = poly.diameter();
    let mut arcs = Vec::new();
    let mut supports = Vec::new();
    let mut pivots = Vec::new();
    let mut on_polygon = Vec::new();
    let mut pivot_vertices = Vec::new();
    for &(t0, t1, a, b) in &spans {
        if a == b {
            // the wedge pivots on a narrow vertex; the previous arc ends there
            continue;
        }
        let (pa, pb) = (poly.vertex(a), poly.vertex(b));
        let arc = omega_arc(pa, pb, omega)?;
        let q0 = apex_for(pa, pb, t0, omega);
        let q1 = apex_for(pa, pb, t1, omega);
        // the apex turns about the center twice as fast as the arms
        let start = (q0 - arc.center).angle();
        arcs.push(arc.sub_arc(start, start + 2.0 * (t1 - t0)));
        supports.push((a, b));
        pivots.push(q1);
    }
    for (i, p) in pivots.iter().enumerate() {
        if let Some(v) = poly.find_vertex(*p, TAU_REL * scale.max(1.0) * 10.0) {
            on_polygon.push(i);
            pivot_vertices.push(v);
        }
    }
    Ok(OmegaCloud {
        omega,
        arcs,
        supports,
        pivots,
        on_polygon_pivots: on_polygon,
        pivot_vertices,
        scale,
    })
}

/// Number of vertices with internal angle at most `omega`.
pub fn count_narrow(poly: &ConvexPolygon, omega: f64) -> usize {
    narrow_vertices(poly, omega).len()
}

pub fn narrow_vertices(poly: &ConvexPolygon, omega: f64) -> Vec<usize> {
    (0..poly.len())
        .filter(|&i| poly.internal_angle(i) <= omega + TAU_ANG)
        .collect()
}

impl OmegaCloud {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Largest gap between the end of one arc and the start of the next.
    pub fn closure_gap(&self) -> f64 {
        let k = self.arcs.len();
        (0..k)
            .map(|i| {
                self.arcs[i]
                    .end_point()
                    .dist(self.arcs[(i + 1) % k].start_point())
            })
            .fold(0.0, f64::max)
    }

    /// Every intersection of `line` with the chain, as `(point, t)`.
    pub fn intersections(&self, line: &DirectedLine) -> Vec<(Point, f64)> {
        let mut hits: Vec<(Point, f64)> = self
            .arcs
            .iter()
            .flat_map(|a| line_arc_intersections(line, a))
            .collect();
        for &i in &self.on_polygon_pivots {
            let p = self.pivots[i];
            if line.side(p).abs() <= TAU_REL * self.scale {
                hits.push((p, line.param(p)));
            }
        }
        hits.sort_by(|a, b| a.1.total_cmp(&b.1));
        hits
    }

    /// Dense polyline through the chain.
    pub fn polyline(&self, per_arc: usize) -> Vec<Point> {
        self.arcs
            .iter()
            .flat_map(|a| sample_arc(a, per_arc))
            .collect()
    }
}
