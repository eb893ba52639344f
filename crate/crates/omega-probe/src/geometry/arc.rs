use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{angle_in_sweep, ccw_angle, normalize_angle, DirectedLine, Point, TAU_ANG, TAU_REL};
use crate::error::{Error, Result};

/// Circular arc from which the chord `support_a`–`support_b` subtends a fixed
/// inscribed angle. The arc runs counterclockwise from `start_angle` to
/// `end_angle`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaArc {
    pub center: Point,
    pub radius: f64,
    pub start_angle: f64,
    pub end_angle: f64,
    pub support_a: Point,
    pub support_b: Point,
}

impl OmegaArc {
    /// Counterclockwise angular extent in [0, 2π).
    pub fn sweep(&self) -> f64 {
        ccw_angle(self.start_angle, self.end_angle)
    }

    pub fn point_at_angle(&self, theta: f64) -> Point {
        self.center + Point::polar(theta) * self.radius
    }

    /// Point at fraction `s ∈ [0, 1]` of the sweep.
    pub fn point_at(&self, s: f64) -> Point {
        self.point_at_angle(self.start_angle + s * self.sweep())
    }

    pub fn start_point(&self) -> Point {
        self.point_at_angle(self.start_angle)
    }

    pub fn end_point(&self) -> Point {
        self.point_at_angle(self.end_angle)
    }

    /// Whether the direction `theta` from the center falls inside the span.
    pub fn spans(&self, theta: f64, tol: f64) -> bool {
        angle_in_sweep(theta, self.start_angle, self.sweep(), tol)
    }

    /// Restricts the arc to the angular range `[from, to]` (counterclockwise).
    pub fn sub_arc(&self, from: f64, to: f64) -> OmegaArc {
        OmegaArc {
            start_angle: normalize_angle(from),
            end_angle: normalize_angle(to),
            ..*self
        }
    }
}

/// The arc over chord `ab` seen at inscribed angle `omega`, running
/// counterclockwise from `b` to `a`. Swapping the arguments mirrors the arc
/// across the chord.
pub fn omega_arc(a: Point, b: Point, omega: f64) -> Result<OmegaArc> {
    let chord = b - a;
    let len = chord.norm();
    let scale = a.norm().max(b.norm()).max(len);
    if len <= TAU_REL * scale || len == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    if !(omega > 0.0 && omega <= std::f64::consts::FRAC_PI_2 + TAU_ANG) {
        return Err(Error::InvalidOmega(omega));
    }
    let mid = (a + b) * 0.5;
    let center = mid + (chord * (1.0 / len)).perp() * (0.5 * len / omega.tan());
    let radius = len / (2.0 * omega.sin());
    Ok(OmegaArc {
        center,
        radius,
        start_angle: (b - center).angle(),
        end_angle: (a - center).angle(),
        support_a: a,
        support_b: b,
    })
}

/// Points where `line` meets `arc`, sorted by line parameter. A tangent line
/// yields a single point.
pub fn line_arc_intersections(line: &DirectedLine, arc: &OmegaArc) -> Vec<(Point, f64)> {
    let r = arc.radius;
    let t0 = line.param(arc.center);
    let foot = line.at(t0);
    let h = foot.dist(arc.center);
    let tol = TAU_REL * r.max(1.0);
    let mut out = Vec::with_capacity(2);
    if h > r + tol {
        return out;
    }
    if (h - r).abs() <= tol {
        out.push((foot, t0));
    } else {
        let half = (r * r - h * h).max(0.0).sqrt();
        out.push((line.at(t0 - half), t0 - half));
        out.push((line.at(t0 + half), t0 + half));
    }
    out.retain(|(p, _)| arc.spans((*p - arc.center).angle(), TAU_ANG));
    out
}

/// Samples the arc at `k + 1` evenly spaced points including both ends.
pub fn sample_arc(arc: &OmegaArc, k: usize) -> Vec<Point> {
    let sweep = arc.sweep();
    let sweep = if sweep == 0.0 && arc.start_angle != arc.end_angle {
        TAU
    } else {
        sweep
    };
    (0..=k)
        .map(|i| arc.point_at_angle(arc.start_angle + sweep * i as f64 / k as f64))
        .collect()
}
