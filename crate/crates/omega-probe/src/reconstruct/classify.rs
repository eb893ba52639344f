use serde::{Deserialize, Serialize};

use crate::geometry::{angle_at, Point, TAU_ANG, TAU_REL};
use crate::oracle::ProbeOutcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NarrowClass {
    /// Both outer contacts are narrow vertices.
    P1AndP2Narrow,
    /// The shared contact is a narrow vertex.
    SharedUNarrow,
    Inconclusive,
}

/// Classifies narrow vertices from two outcomes `(q, p1, u)` and `(q', u, p2)`
/// on a polygon with exactly three narrow vertices.
pub fn classify_narrow_pair(o1: &ProbeOutcome, o2: &ProbeOutcome, omega: f64) -> NarrowClass {
    if o1.apex_on_polygon || o2.apex_on_polygon {
        return NarrowClass::Inconclusive;
    }
    let scale = [o1.p1, o1.p2, o2.p1, o2.p2]
        .iter()
        .map(|p| p.norm())
        .fold(1.0, f64::max);
    let tol = TAU_REL * scale;
    let same = |a: Point, b: Point| a.dist(b) <= tol;
    let (p1, u, p2) = if same(o1.p2, o2.p1) {
        (o1.p1, o1.p2, o2.p2)
    } else if same(o2.p2, o1.p1) {
        (o2.p1, o2.p2, o1.p2)
    } else {
        return NarrowClass::Inconclusive;
    };
    // coinciding contacts leave the two arcs undetermined
    if same(p1, p2) || same(p1, u) || same(p2, u) {
        return NarrowClass::Inconclusive;
    }
    if angle_at(p1, u, p2) > omega + TAU_ANG {
        NarrowClass::P1AndP2Narrow
    } else {
        NarrowClass::SharedUNarrow
    }
}
