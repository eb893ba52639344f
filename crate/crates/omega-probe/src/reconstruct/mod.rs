//! Reconstruction algorithms driven only through [`Prober`].

mod classify;
mod general;
mod input1;
mod input2;

pub use classify::{classify_narrow_pair, NarrowClass};
pub use general::reconstruct_general;
pub use input1::{reconstruct_greedy, reconstruct_no_narrow};
pub use input2::reconstruct_right_angle;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{angle_at, ConvexPolygon, DirectedLine, Point};
use crate::oracle::{ProbeOutcome, ProbeResult, Prober};

/// Direction of the opening probe through the interior point. Chosen off the
/// coordinate axes so axis-aligned test polygons do not produce flush arms.
pub const FIRST_PROBE_ANGLE: f64 = 0.7;

/// Hard stop against runaway loops; far above every budget in use.
const PROBE_CAP: usize = 100_000;

/// A discovered vertex of the hidden polygon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QVertex {
    pub p: Point,
    /// The edge to the counterclockwise successor is confirmed.
    pub flag: bool,
    /// Known to be a narrow vertex.
    pub bvertex: bool,
    /// Discovery order.
    pub order: usize,
}

/// The partial reconstruction: discovered vertices in counterclockwise order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconState {
    pub verts: Vec<QVertex>,
    next_order: usize,
    tol: f64,
}

impl ReconState {
    pub fn new(tol: f64) -> Self {
        ReconState {
            verts: Vec::new(),
            next_order: 0,
            tol,
        }
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.verts.len()
    }

    pub fn prev(&self, i: usize) -> usize {
        (i + self.verts.len() - 1) % self.verts.len()
    }

    pub fn point(&self, i: usize) -> Point {
        self.verts[i].p
    }

    pub fn find(&self, p: Point) -> Option<usize> {
        self.verts.iter().position(|v| v.p.dist(p) <= self.tol)
    }

    pub fn same(&self, a: Point, b: Point) -> bool {
        a.dist(b) <= self.tol
    }

    /// Number of vertices whose outgoing edge is unconfirmed.
    pub fn f(&self) -> usize {
        self.verts.iter().filter(|v| !v.flag).count()
    }

    pub fn narrow_known(&self) -> usize {
        self.verts.iter().filter(|v| v.bvertex).count()
    }

    /// Information potential `2|Q| + N_B' − F`.
    pub fn phi(&self) -> i64 {
        2 * self.len() as i64 + self.narrow_known() as i64 - self.f() as i64
    }

    /// Adds `p` where it keeps the vertex list convex and counterclockwise,
    /// returning its index, or the index of the existing copy.
    pub fn hull_insert(&mut self, p: Point) -> usize {
        if let Some(i) = self.find(p) {
            return i;
        }
        let v = QVertex {
            p,
            flag: false,
            bvertex: false,
            order: self.next_order,
        };
        self.next_order += 1;
        let n = self.verts.len();
        if n < 2 {
            self.verts.push(v);
            return n;
        }
        // the edge that p lies farthest to the right of
        let best = (0..n)
            .max_by(|&i, &j| {
                let ri = DirectedLine::through(self.point(i), self.point(self.next(i))).side(p);
                let rj = DirectedLine::through(self.point(j), self.point(self.next(j))).side(p);
                (-ri).total_cmp(&-rj)
            })
            .expect("non-empty");
        self.verts.insert(best + 1, v);
        best + 1
    }

    /// Adds a vertex known not to be in Q yet; `None` if it already was.
    pub fn add_new(&mut self, p: Point) -> Option<usize> {
        if self.find(p).is_some() {
            None
        } else {
            Some(self.hull_insert(p))
        }
    }

    pub fn set_flag(&mut self, p: Point) {
        if let Some(i) = self.find(p) {
            self.verts[i].flag = true;
        }
    }

    /// Internal angle of Q at vertex `i`; zero for a two-vertex Q.
    pub fn q_angle(&self, i: usize) -> f64 {
        if self.len() < 3 {
            return 0.0;
        }
        angle_at(
            self.point(self.prev(i)),
            self.point(i),
            self.point(self.next(i)),
        )
    }

    pub fn points(&self) -> Vec<Point> {
        self.verts.iter().map(|v| v.p).collect()
    }
}

/// How much of the polygon was certified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Every edge confirmed.
    Exact,
    /// Stopped with adjacent narrow pairs whose connecting edge is assumed
    /// but not confirmed.
    BestEffort { unresolved: Vec<(Point, Point)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction {
    /// Counterclockwise vertices of Q.
    pub vertices: Vec<Point>,
    pub probes_used: usize,
    pub status: Status,
    /// Potential after each probe.
    pub phi_trace: Vec<i64>,
    /// Potential gained by the hit probe of the right-angle algorithm.
    pub hit_gain: Option<i64>,
    /// Times a probe's second contact coincided with the start vertex.
    pub reverse_flush_events: usize,
    /// Times the ε-rotated probes were used.
    pub rotated_steps: usize,
}

impl Reconstruction {
    pub fn polygon(&self) -> Result<ConvexPolygon> {
        ConvexPolygon::new(self.vertices.clone())
    }

    pub fn is_exact(&self) -> bool {
        self.status == Status::Exact
    }
}

/// Probe budget of the general algorithm, `2n − 1 + N_B + P_B`.
pub fn general_bound(n: usize, n_b: usize) -> usize {
    let p_b: i64 = match n_b {
        0 | 1 => -1,
        2 => 2,
        _ => 3,
    };
    (2 * n as i64 - 1 + n_b as i64 + p_b) as usize
}

pub fn no_narrow_bound(n: usize) -> usize {
    2 * n - 2
}

pub fn right_angle_bound(n: usize) -> usize {
    2 * n - 3
}

/// Opening probe through the interior point, starting on the enclosing circle.
pub(crate) fn opening_line<P: Prober + ?Sized>(s: &P) -> DirectedLine {
    let d = Point::polar(FIRST_PROBE_ANGLE);
    let c = s.enclosing_circle();
    DirectedLine::new(s.interior_point() - d * c.radius, d)
}

pub(crate) fn expect_outcome(r: ProbeResult, probe: usize) -> Result<ProbeOutcome> {
    match r {
        ProbeResult::Outcome(o) => Ok(o),
        ProbeResult::Miss => Err(Error::UnexpectedMiss { probe }),
    }
}

pub(crate) fn check_cap<P: Prober + ?Sized>(s: &P) -> Result<()> {
    if s.probes_used() > PROBE_CAP {
        Err(Error::BudgetExceeded {
            used: s.probes_used(),
            bound: PROBE_CAP,
        })
    } else {
        Ok(())
    }
}

pub(crate) fn is_right_angle(omega: f64) -> bool {
    (omega - PI / 2.0).abs() <= 1e-12
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_insert_keeps_ccw_order() {
        let mut q = ReconState::new(1e-12);
        q.hull_insert(Point::new(0.0, 0.0));
        q.hull_insert(Point::new(1.0, 1.0));
        q.hull_insert(Point::new(1.0, 0.0));
        q.hull_insert(Point::new(0.0, 1.0));
        let pts = q.points();
        assert!(ConvexPolygon::new(pts).is_ok());
        assert_eq!(q.f(), 4);
        assert_eq!(q.phi(), 4);
    }

    #[test]
    fn budgets() {
        assert_eq!(general_bound(6, 0), 10);
        assert_eq!(general_bound(6, 1), 11);
        assert_eq!(general_bound(6, 2), 15);
        assert_eq!(general_bound(6, 3), 17);
        assert_eq!(no_narrow_bound(6), 10);
        assert_eq!(right_angle_bound(6), 9);
    }
}
