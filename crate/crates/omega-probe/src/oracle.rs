//! Wedge probes against a hidden polygon.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cloud::{build_cloud, check_omega, OmegaCloud};
use crate::error::{Error, Result};
use crate::geometry::{
    angular_width, signed_angle, ConvexPolygon, DirectedLine, Point, TAU_ANG, TAU_REL,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn contains(&self, p: Point) -> bool {
        p.dist(self.center) <= self.radius
    }
}

/// How the arms are oriented when the apex sits on a narrow vertex, where the
/// probe does not determine them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArmPolicy {
    /// Arms centered on the probing direction.
    BisectorSymmetric,
    /// Arms turned so that neither lies along an edge.
    #[default]
    AdversarialMinimal,
    /// Uniformly random within the admissible range.
    SeededRandom,
}

impl std::str::FromStr for ArmPolicy {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bisector-symmetric" => Ok(ArmPolicy::BisectorSymmetric),
            "adversarial-minimal" => Ok(ArmPolicy::AdversarialMinimal),
            "seeded-random" => Ok(ArmPolicy::SeededRandom),
            _ => Err(format!("unknown arm policy `{s}`")),
        }
    }
}

/// What a valid probe reveals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeOutcome {
    pub q: Point,
    pub dir1: Point,
    pub dir2: Point,
    pub p1: Point,
    pub p2: Point,
    pub apex_on_polygon: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeResult {
    Outcome(ProbeOutcome),
    Miss,
}

impl ProbeResult {
    pub fn outcome(&self) -> Option<&ProbeOutcome> {
        match self {
            ProbeResult::Outcome(o) => Some(o),
            ProbeResult::Miss => None,
        }
    }

    pub fn is_miss(&self) -> bool {
        matches!(self, ProbeResult::Miss)
    }
}

/// One line of a probe transcript.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranscriptRecord {
    pub t: usize,
    pub line: DirectedLine,
    pub result: ProbeResult,
}

/// Everything a reconstruction algorithm may use.
pub trait Prober {
    fn probe(&mut self, line: &DirectedLine) -> ProbeResult;
    fn interior_point(&self) -> Point;
    fn enclosing_circle(&self) -> Circle;
    fn omega(&self) -> f64;
    fn probes_used(&self) -> usize;
    fn transcript(&self) -> &[TranscriptRecord];

    /// Probe along the line through `a` directed towards `b`.
    fn probe_through(&mut self, a: Point, b: Point) -> ProbeResult {
        self.probe(&DirectedLine::through(a, b))
    }

    /// Length tolerance for this instance.
    fn tolerance(&self) -> f64 {
        TAU_REL * 2.0 * self.enclosing_circle().radius
    }
}

/// A hidden polygon behind the probe interface.
#[derive(Debug, Clone)]
pub struct ProbeSession {
    hidden: ConvexPolygon,
    omega: f64,
    p: Point,
    psi: Circle,
    probes_used: usize,
    arm_policy: ArmPolicy,
    rng: ChaCha8Rng,
    cloud: Option<OmegaCloud>,
    transcript: Vec<TranscriptRecord>,
}

/// Session over `poly` with the centroid as interior point and an enclosing
/// circle 1.5 times the farthest vertex distance.
pub fn new_session(
    poly: ConvexPolygon,
    omega: f64,
    arm_policy: ArmPolicy,
    seed: u64,
) -> Result<ProbeSession> {
    check_omega(omega)?;
    let poly = ConvexPolygon::new(poly.vertices().to_vec())?;
    let p = poly.centroid();
    let psi = Circle {
        center: p,
        radius: 1.5 * poly.max_distance_from(p),
    };
    Ok(ProbeSession {
        hidden: poly,
        omega,
        p,
        psi,
        probes_used: 0,
        arm_policy,
        rng: ChaCha8Rng::seed_from_u64(seed),
        cloud: None,
        transcript: Vec::new(),
    })
}

impl ProbeSession {
    /// The hidden polygon, for auditing only.
    pub fn hidden(&self) -> &ConvexPolygon {
        &self.hidden
    }

    pub fn arm_policy(&self) -> ArmPolicy {
        self.arm_policy
    }

    pub fn cloud(&mut self) -> &OmegaCloud {
        let (hidden, omega) = (&self.hidden, self.omega);
        self.cloud
            .get_or_insert_with(|| build_cloud(hidden, omega).expect("ω checked at construction"))
    }
}

impl Prober for ProbeSession {
    fn probe(&mut self, line: &DirectedLine) -> ProbeResult {
        let tol = self.tolerance();
        self.cloud();
        let cloud = self.cloud.as_ref().expect("cloud built above");
        let result = exact_probe(
            &self.hidden,
            cloud,
            self.omega,
            line,
            tol,
            self.arm_policy,
            &mut self.rng,
        );
        self.transcript.push(TranscriptRecord {
            t: self.probes_used,
            line: *line,
            result,
        });
        self.probes_used += 1;
        result
    }

    fn interior_point(&self) -> Point {
        self.p
    }

    fn enclosing_circle(&self) -> Circle {
        self.psi
    }

    fn omega(&self) -> f64 {
        self.omega
    }

    fn probes_used(&self) -> usize {
        self.probes_used
    }

    fn transcript(&self) -> &[TranscriptRecord] {
        &self.transcript
    }
}

/// If the line enters `poly` through a vertex with internal angle at most
/// `omega`, that vertex's index.
fn narrow_entry(
    poly: &ConvexPolygon,
    omega: f64,
    line: &DirectedLine,
    t_in: f64,
    tol: f64,
) -> Option<usize> {
    let entry = line.at(t_in);
    let v = poly.find_vertex(entry, tol)?;
    (poly.internal_angle(v) <= omega + TAU_ANG).then_some(v)
}

/// Outcome with the apex on narrow vertex `v`, arms chosen by `policy`.
fn narrow_outcome(
    poly: &ConvexPolygon,
    omega: f64,
    v: usize,
    line: &DirectedLine,
    policy: ArmPolicy,
    rng: &mut ChaCha8Rng,
) -> ProbeOutcome {
    let q = poly.vertex(v);
    let incoming = poly.edge(poly.prev(v)).angle();
    let alpha = poly.internal_angle(v);
    // first-arm directions keeping the polygon inside: [lo, lo + slack]
    let lo = incoming + PI - omega;
    let slack = (omega - alpha).max(0.0);
    let offset = match policy {
        ArmPolicy::AdversarialMinimal => 0.5 * slack,
        ArmPolicy::BisectorSymmetric => {
            let want = line.direction.angle() - 0.5 * omega;
            let d = signed_angle(Point::polar(lo + 0.5 * slack), Point::polar(want));
            (0.5 * slack + d).clamp(0.0, slack)
        }
        ArmPolicy::SeededRandom => {
            if slack > 0.0 {
                rng.gen_range(0.0..=slack)
            } else {
                0.0
            }
        }
    };
    let dir1 = Point::polar(lo + offset);
    ProbeOutcome {
        q,
        dir1,
        dir2: dir1.rotate(omega),
        p1: q,
        p2: q,
        apex_on_polygon: true,
    }
}

/// Arms and contact points of the wedge with apex `q` outside `poly`.
pub(crate) fn wedge_at(poly: &ConvexPolygon, omega: f64, q: Point, tol: f64) -> ProbeOutcome {
    let axis = poly.centroid() - q;
    let verts = poly.vertices();
    let phis: Vec<f64> = verts.iter().map(|v| signed_angle(axis, *v - q)).collect();
    let imin = (0..verts.len())
        .min_by(|&a, &b| phis[a].total_cmp(&phis[b]))
        .unwrap_or(0);
    let imax = (0..verts.len())
        .max_by(|&a, &b| phis[a].total_cmp(&phis[b]))
        .unwrap_or(0);
    let dir1 = (verts[imin] - q).normalized();
    let dir2 = dir1.rotate(omega);
    let contact = |dir: Point, fallback: usize| {
        verts
            .iter()
            .copied()
            .filter(|v| (*v - q).dot(dir) > 0.0 && dir.cross(*v - q).abs() <= tol)
            .min_by(|a, b| a.dist(q).total_cmp(&b.dist(q)))
            .unwrap_or(verts[fallback])
    };
    ProbeOutcome {
        q,
        dir1,
        dir2,
        p1: contact(dir1, imin),
        p2: contact(dir2, imax),
        apex_on_polygon: false,
    }
}

/// Probe along `line` computed from the cloud.
pub(crate) fn exact_probe(
    poly: &ConvexPolygon,
    cloud: &OmegaCloud,
    omega: f64,
    line: &DirectedLine,
    tol: f64,
    policy: ArmPolicy,
    rng: &mut ChaCha8Rng,
) -> ProbeResult {
    if !line.is_valid() {
        return ProbeResult::Miss;
    }
    let Some((t_in, _)) = poly.clip_line(line, tol) else {
        return ProbeResult::Miss;
    };
    if let Some(v) = narrow_entry(poly, omega, line, t_in, tol) {
        return ProbeResult::Outcome(narrow_outcome(poly, omega, v, line, policy, rng));
    }
    let q = match cloud.intersections(line).first() {
        Some(&(q, t)) if t <= t_in + tol => q,
        _ => match bisect_apex(poly, omega, line, t_in) {
            Some(q) => q,
            None => return ProbeResult::Miss,
        },
    };
    ProbeResult::Outcome(wedge_at(poly, omega, q, tol))
}

/// Root of `angular_width(q(t)) = omega` for `t < t_in`, by bisection.
fn bisect_apex(poly: &ConvexPolygon, omega: f64, line: &DirectedLine, t_in: f64) -> Option<Point> {
    let scale = poly.diameter().max(1e-300);
    let f = |t: f64| angular_width(line.at(t), poly) - omega;
    let mut hi = t_in;
    let mut step = scale;
    let mut lo = t_in - step;
    let mut guard = 0;
    while f(lo) >= 0.0 {
        hi = lo;
        step *= 2.0;
        lo = t_in - step;
        guard += 1;
        if guard > 200 {
            return None;
        }
    }
    let eps = 1e-10 * scale.max(1.0);
    while hi - lo > eps {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(line.at(0.5 * (lo + hi)))
}

/// Independent probe that locates the apex by bisection on the angular width.
pub fn brute_force_probe(s: &ProbeSession, line: &DirectedLine) -> ProbeResult {
    let poly = &s.hidden;
    let tol = s.tolerance();
    if !line.is_valid() {
        return ProbeResult::Miss;
    }
    let Some((t_in, _)) = poly.clip_line(line, tol) else {
        return ProbeResult::Miss;
    };
    if let Some(v) = narrow_entry(poly, s.omega, line, t_in, tol) {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        return ProbeResult::Outcome(narrow_outcome(
            poly,
            s.omega,
            v,
            line,
            s.arm_policy,
            &mut rng,
        ));
    }
    match bisect_apex(poly, s.omega, line, t_in) {
        Some(q) => ProbeResult::Outcome(wedge_at(poly, s.omega, q, tol)),
        None => ProbeResult::Miss,
    }
}

/// Honest answer for an arbitrary polygon, without a session.
pub fn honest_probe(poly: &ConvexPolygon, omega: f64, line: &DirectedLine) -> Result<ProbeResult> {
    let cloud = build_cloud(poly, omega)?;
    let tol = TAU_REL * 3.0 * poly.diameter();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    Ok(exact_probe(
        poly,
        &cloud,
        omega,
        line,
        tol,
        ArmPolicy::AdversarialMinimal,
        &mut rng,
    ))
}

/// Checks every record against an honest oracle over `poly`: misses must
/// agree, and apex and contacts must match within `1e-7` times the diameter.
pub fn replay(poly: &ConvexPolygon, omega: f64, records: &[TranscriptRecord]) -> Result<()> {
    let tol = 1e-7 * poly.diameter();
    for rec in records {
        let honest = honest_probe(poly, omega, &rec.line)?;
        let ok = match (&honest, &rec.result) {
            (ProbeResult::Miss, ProbeResult::Miss) => true,
            (ProbeResult::Outcome(a), ProbeResult::Outcome(b)) => {
                a.apex_on_polygon == b.apex_on_polygon
                    && a.q.dist(b.q) <= tol
                    && a.p1.dist(b.p1) <= tol
                    && a.p2.dist(b.p2) <= tol
            }
            _ => false,
        };
        if !ok {
            return Err(Error::InconsistencyFound {
                probe: rec.t,
                reason: "answer differs from an honest probe of the polygon".into(),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::regular_polygon;
    use std::f64::consts::FRAC_PI_2;

    fn unit_square() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn session_setup() {
        let s = new_session(unit_square(), PI / 3.0, ArmPolicy::default(), 0).unwrap();
        assert!(s.interior_point().dist(Point::new(0.5, 0.5)) < 1e-15);
        assert!((s.enclosing_circle().radius - 1.5 * 0.5f64.sqrt()).abs() < 1e-15);
        let tri = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        let s = new_session(tri, PI / 3.0, ArmPolicy::default(), 0).unwrap();
        assert!(s.interior_point().dist(Point::new(1.0 / 3.0, 1.0 / 3.0)) < 1e-15);
        assert!(new_session(unit_square(), 2.0, ArmPolicy::default(), 0).is_err());
    }

    #[test]
    fn downward_probe_on_square() {
        let mut s = new_session(unit_square(), FRAC_PI_2, ArmPolicy::default(), 0).unwrap();
        let l = DirectedLine::new(Point::new(0.5, 3.0), Point::new(0.0, -1.0));
        let o = *s.probe(&l).outcome().unwrap();
        // the apex lies on the semicircle over the top edge
        assert!(o.q.dist(Point::new(0.5, 1.5)) < 1e-12);
        assert_eq!(o.p1, Point::new(0.0, 1.0));
        assert_eq!(o.p2, Point::new(1.0, 1.0));
        assert_eq!(s.probes_used(), 1);
    }

    #[test]
    fn narrow_apex_on_triangle() {
        let tri = regular_polygon(3, 1.0, FRAC_PI_2);
        let top = tri.vertex(0);
        let mut s = new_session(tri, FRAC_PI_2, ArmPolicy::default(), 0).unwrap();
        let l = DirectedLine::new(top + Point::new(0.0, 5.0), Point::new(0.0, -1.0));
        let o = *s.probe(&l).outcome().unwrap();
        assert!(o.apex_on_polygon);
        assert_eq!(o.q, top);
        assert_eq!(o.p1, top);
        assert_eq!(o.p2, top);
    }

    #[test]
    fn miss_counts() {
        let mut s = new_session(unit_square(), 1.0, ArmPolicy::default(), 0).unwrap();
        let l = DirectedLine::new(Point::new(3.0, 3.0), Point::new(1.0, 0.0));
        assert!(s.probe(&l).is_miss());
        assert_eq!(s.probes_used(), 1);
    }
}
