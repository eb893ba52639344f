//! Polygon files, transcripts, cloud tables and SVG output.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cloud::OmegaCloud;
use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, Point};
use crate::oracle::TranscriptRecord;

#[derive(Debug, Serialize, Deserialize)]
struct PolygonFile {
    vertices: Vec<[f64; 2]>,
    #[serde(default = "default_ccw")]
    ccw: bool,
}

fn default_ccw() -> bool {
    true
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Polygon as `{"vertices": [[x, y], ...], "ccw": true}` with 17 significant digits.
pub fn polygon_to_json(poly: &ConvexPolygon) -> String {
    let mut s = String::from("{\"vertices\": [");
    for (i, v) in poly.vertices().iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "[{}, {}]", num(v.x), num(v.y));
    }
    s.push_str("], \"ccw\": true}");
    s
}

pub fn polygon_from_json(text: &str) -> Result<ConvexPolygon> {
    let file: PolygonFile = serde_json::from_str(text).map_err(|e| Error::Io(e.to_string()))?;
    let mut vertices: Vec<Point> = file
        .vertices
        .iter()
        .map(|v| Point::new(v[0], v[1]))
        .collect();
    if !file.ccw {
        vertices.reverse();
    }
    ConvexPolygon::new(vertices)
}

pub fn read_polygon(path: &std::path::Path) -> Result<ConvexPolygon> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    polygon_from_json(&text)
}

/// One JSON object per line.
pub fn transcript_to_jsonl(records: &[TranscriptRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("transcript records serialize") + "\n")
        .collect()
}

pub fn transcript_from_jsonl(text: &str) -> Result<Vec<TranscriptRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| Error::Io(e.to_string())))
        .collect()
}

/// One row per arc: center, radius, angular span and support vertex indices.
pub fn cloud_to_csv(cloud: &OmegaCloud) -> String {
    let mut s = String::from(
        "arc,center_x,center_y,radius,start_angle,end_angle,sweep,support_a,support_b\n",
    );
    for (i, (arc, (a, b))) in cloud.arcs.iter().zip(&cloud.supports).enumerate() {
        let _ = writeln!(
            s,
            "{i},{},{},{},{},{},{},{a},{b}",
            num(arc.center.x),
            num(arc.center.y),
            num(arc.radius),
            num(arc.start_angle),
            num(arc.end_angle),
            num(arc.sweep()),
        );
    }
    s
}

/// Polygon, cloud chain and pivots drawn on a square canvas.
pub fn cloud_to_svg(poly: &ConvexPolygon, cloud: &OmegaCloud, size: f64) -> String {
    let chain = cloud.polyline(48);
    let all: Vec<Point> = chain.iter().chain(poly.vertices()).copied().collect();
    let (mut lo, mut hi) = (all[0], all[0]);
    for p in &all {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
    let pad = 0.05 * size;
    let k = (size - 2.0 * pad) / span;
    let map = |p: &Point| ((p.x - lo.x) * k + pad, size - ((p.y - lo.y) * k + pad));
    let pts = |ps: &[Point]| {
        ps.iter()
            .map(|p| {
                let (x, y) = map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"
    );
    let _ = writeln!(
        s,
        "<polygon points=\"{}\" fill=\"#dde6f0\" stroke=\"#234\" stroke-width=\"1.5\"/>",
        pts(poly.vertices())
    );
    let _ = writeln!(
        s,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#c33\" stroke-width=\"1.2\"/>",
        pts(&chain)
    );
    for (i, p) in cloud.pivots.iter().enumerate() {
        let (x, y) = map(p);
        let fill = if cloud.on_polygon_pivots.contains(&i) {
            "#c33"
        } else {
            "#fff"
        };
        let _ = writeln!(
            s,
            "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3\" fill=\"{fill}\" stroke=\"#c33\"/>"
        );
    }
    s.push_str("</svg>\n");
    s
}
