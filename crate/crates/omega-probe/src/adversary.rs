//! An opponent that answers probes for an object it has not fully chosen yet,
//! revealing as little as possible per probe on polygons without narrow
//! vertices.
//!
//! Answers are always honest for the polygon `K` committed so far. A probe
//! that would confirm an edge of `K` while fewer than `n` vertices are fixed
//! instead grows `K` by a vertex hidden beyond that edge, inside every wedge
//! answered so far, so all earlier answers stay valid.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cloud::check_omega;
use crate::error::{Error, Result};
use crate::geometry::{
    ConvexPolygon, DirectedLine, FeasibleRegion, HalfPlane, Point, Wedge, TAU_REL,
};
use crate::harness::{hausdorff_aligned, Algorithm};
use crate::oracle::{
    honest_probe, replay, Circle, ProbeOutcome, ProbeResult, Prober, TranscriptRecord,
};
use crate::reconstruct::is_right_angle;

/// Radius of the enclosing circle, centered at the origin.
pub const PSI_RADIUS: f64 = 1.0;

const ANGLE_MARGIN: f64 = 1e-3;
const COINCIDENCE_MARGIN: f64 = 1e-4;
const MAX_TRIES: usize = 500;
const PSI_SIDES: usize = 128;
const CANDIDATES: usize = 24;
/// Beyond this the hiding spots shrink below double precision resolution.
pub const MAX_N: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    /// Before the object's first vertices are fixed.
    Init,
    /// Fewer than `n` vertices fixed.
    Grow,
    /// All vertices fixed, edges still unconfirmed.
    Confirm,
    /// Every edge confirmed.
    Final,
}

/// Bookkeeping after one answer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: usize,
    pub valid: bool,
    pub stage: Stage,
    pub fixed: usize,
    pub unconfirmed: usize,
    /// `2·fixed − unconfirmed`.
    pub phi: i64,
}

#[derive(Debug, Clone, Copy)]
struct FirstProbe {
    line: DirectedLine,
    /// Foot of the interior point on the line.
    foot: Point,
    rho: f64,
}

#[derive(Debug, Clone)]
pub struct AdversaryState {
    omega: f64,
    n: usize,
    psi: Circle,
    rho: f64,
    misses: Vec<HalfPlane>,
    wedges: Vec<Wedge>,
    first: Option<FirstProbe>,
    k: Vec<Point>,
    confirmed: Vec<bool>,
    committed_at: Option<usize>,
    faults: Vec<(usize, String)>,
    rng: ChaCha8Rng,
    transcript: Vec<TranscriptRecord>,
    steps: Vec<StepRecord>,
}

/// Fresh adversary committed to `n` vertices.
pub fn new_adversary(omega: f64, n: usize) -> Result<AdversaryState> {
    check_omega(omega)?;
    let min_n = if is_right_angle(omega) { 5 } else { 4 };
    if n < min_n || n > MAX_N {
        return Err(Error::InvalidParams(format!(
            "the adversary needs {min_n} ≤ n ≤ {MAX_N} at ω = {omega}, got {n}"
        )));
    }
    Ok(AdversaryState {
        omega,
        n,
        psi: Circle {
            center: Point::default(),
            radius: PSI_RADIUS,
        },
        rho: 0.9 * PSI_RADIUS,
        misses: Vec::new(),
        wedges: Vec::new(),
        first: None,
        k: Vec::new(),
        confirmed: Vec::new(),
        committed_at: None,
        faults: Vec::new(),
        rng: ChaCha8Rng::seed_from_u64(0),
        transcript: Vec::new(),
        steps: Vec::new(),
    })
}

/// Fewest probes any deterministic algorithm needs against this adversary.
pub fn lower_bound(omega: f64, n: usize) -> usize {
    if is_right_angle(omega) {
        2 * n - 3
    } else {
        2 * n - 2
    }
}

impl AdversaryState {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Vertices fixed so far, counterclockwise.
    pub fn fixed_points(&self) -> &[Point] {
        &self.k
    }

    pub fn steps(&self) -> &[StepRecord] {
        &self.steps
    }

    /// The object as committed so far.
    pub fn final_polygon(&self) -> Option<ConvexPolygon> {
        ConvexPolygon::new(self.k.clone()).ok()
    }

    pub fn unconfirmed(&self) -> usize {
        self.confirmed.iter().filter(|c| !**c).count()
    }

    pub fn phi(&self) -> i64 {
        if !self.k.is_empty() {
            2 * self.k.len() as i64 - self.unconfirmed() as i64
        } else if self.first.is_some() {
            2
        } else {
            0
        }
    }

    pub fn stage(&self) -> Stage {
        if self.k.is_empty() {
            Stage::Init
        } else if self.unconfirmed() == 0 {
            Stage::Final
        } else if self.k.len() < self.n {
            Stage::Grow
        } else {
            Stage::Confirm
        }
    }

    /// Probe indices where no consistent answer was found.
    pub fn faults(&self) -> &[(usize, String)] {
        &self.faults
    }

    fn scale(&self) -> f64 {
        self.first.map_or(self.rho, |f| f.rho)
    }

    fn flush_tol(&self) -> f64 {
        1e-8 * self.scale()
    }

    fn inside_margin(&self) -> f64 {
        3e-8 * self.scale()
    }

    fn constraints(&self) -> impl Iterator<Item = HalfPlane> + '_ {
        self.misses
            .iter()
            .copied()
            .chain(self.wedges.iter().flat_map(|w| w.half_planes()))
    }

    /// Everything still consistent with the answers: the enclosing circle
    /// (as an inscribed polygon) cut by every answered wedge and missed line.
    pub fn region(&self) -> FeasibleRegion {
        let c = self.psi.center;
        let ring = (0..PSI_SIDES)
            .map(|i| c + Point::polar(TAU * i as f64 / PSI_SIDES as f64) * self.psi.radius)
            .collect();
        self.constraints()
            .fold(FeasibleRegion::from_polygon(ring), |r, h| r.clip(&h))
    }

    /// Edges of `K` with both endpoints on an arm of some answered wedge.
    pub fn recompute_unconfirmed(&self) -> usize {
        let m = self.k.len();
        (0..m)
            .filter(|&i| {
                let (a, b) = (self.k[i], self.k[(i + 1) % m]);
                !self.wedges.iter().any(|w| {
                    [w.dir1, w.dir2].iter().any(|d| {
                        d.cross(a - w.apex).abs() <= self.flush_tol()
                            && d.cross(b - w.apex).abs() <= self.flush_tol()
                    })
                })
            })
            .count()
    }

    /// Answers one probe and updates the state.
    pub fn answer(&mut self, line: &DirectedLine) -> ProbeResult {
        if !line.is_valid() {
            return ProbeResult::Miss;
        }
        if let Some(r) = self.repeat(line) {
            return r;
        }
        let r = match (self.first, self.k.is_empty()) {
            (None, _) => self.answer_first(line),
            (Some(f), true) => self.answer_uncommitted(f, line),
            _ => self.answer_committed(line),
        };
        if let ProbeResult::Outcome(o) = r {
            self.wedges.push(Wedge {
                apex: o.q,
                dir1: o.dir1,
                dir2: o.dir2,
            });
        }
        r
    }

    fn repeat(&self, line: &DirectedLine) -> Option<ProbeResult> {
        let tol = TAU_REL * self.psi.radius;
        self.transcript
            .iter()
            .find(|r| {
                r.line.direction.dist(line.direction) <= 1e-12
                    && r.line.side(line.origin).abs() <= tol
            })
            .map(|r| r.result)
    }

    fn miss_against(&mut self, line: &DirectedLine, inside: Point) -> ProbeResult {
        let h = if line.side(inside) >= 0.0 {
            HalfPlane::left_of(line)
        } else {
            HalfPlane::right_of(line)
        };
        self.misses.push(h);
        ProbeResult::Miss
    }

    /// Before anything is fixed only lines through the interior point count;
    /// the object shrinks away from every other line.
    fn answer_first(&mut self, line: &DirectedLine) -> ProbeResult {
        let p = self.psi.center;
        let h = line.side(p).abs();
        if h > TAU_REL * self.psi.radius {
            self.rho = self.rho.min(0.9 * h);
            return self.miss_against(line, p);
        }
        let f = FirstProbe {
            line: *line,
            foot: line.at(line.param(p)),
            rho: self.rho,
        };
        self.first = Some(f);
        let d = line.direction;
        let w = self.omega;
        let (v1, v2) = self.anchors(f);
        ProbeResult::Outcome(ProbeOutcome {
            q: f.foot - d * (0.5 * f.rho),
            dir1: d.rotate(-0.5 * w),
            dir2: d.rotate(0.5 * w),
            p1: v1,
            p2: v2,
            apex_on_polygon: false,
        })
    }

    fn frame(f: FirstProbe, angle: f64, r: f64) -> Point {
        let d = f.line.direction;
        f.foot + (d * angle.cos() + d.perp() * angle.sin()) * r
    }

    fn pentagon_radius(f: FirstProbe) -> f64 {
        let a = 0.6 * PI;
        0.5 * f.rho / (a.sin() - a.cos())
    }

    /// The two contacts of the first valid probe.
    fn anchors(&self, f: FirstProbe) -> (Point, Point) {
        if is_right_angle(self.omega) {
            let r = Self::pentagon_radius(f);
            (Self::frame(f, -0.6 * PI, r), Self::frame(f, 0.6 * PI, r))
        } else {
            let b = 0.5 * f.rho * (0.5 * self.omega).tan();
            (Self::frame(f, -0.5 * PI, b), Self::frame(f, 0.5 * PI, b))
        }
    }

    /// A random completion of the first answer: a rectangle with the two
    /// contacts as a diagonal, or a pentagon near the regular one.
    fn sample_initial(&mut self, f: FirstProbe) -> Vec<Point> {
        let (v1, v2) = self.anchors(f);
        if is_right_angle(self.omega) {
            let r = Self::pentagon_radius(f);
            let room = 0.5 * v1.dist(v2) * (1.0 - (0.2 * PI).tan()) / (2.0 * 2f64.sqrt());
            let mut jig = |a: f64| {
                let rr = 0.9 * room * self.rng.gen::<f64>().sqrt();
                Self::frame(f, a, r) + Point::polar(self.rng.gen_range(0.0..TAU)) * rr
            };
            let (t3, t4, t5) = (jig(-0.2 * PI), jig(0.2 * PI), jig(PI));
            vec![v1, t3, t4, v2, t5]
        } else {
            let b = 0.5 * f.rho * (0.5 * self.omega).tan();
            let phi = self.rng.gen_range(-0.45 * PI..0.45 * PI);
            vec![v1, Self::frame(f, phi, b), v2, Self::frame(f, phi + PI, b)]
        }
    }

    /// Honest answer on candidate `k` if it is an admissible object: fresh
    /// points strictly inside every constraint, angles clear of ω, no two edge
    /// lines at angle ω, and the answer confirming no unconfirmed edge.
    fn admissible(
        &self,
        k: &[Point],
        confirmed: &[bool],
        fresh: &[Point],
        line: &DirectedLine,
    ) -> Option<ProbeResult> {
        let margin = self.inside_margin();
        if fresh
            .iter()
            .any(|&v| self.constraints().any(|h| h.signed_distance(v) < margin))
        {
            return None;
        }
        let poly = ConvexPolygon::new(k.to_vec()).ok()?;
        if poly
            .internal_angles()
            .iter()
            .any(|&a| a < self.omega + ANGLE_MARGIN || a > PI - 1e-6)
        {
            return None;
        }
        let m = k.len();
        let dirs: Vec<f64> = (0..m).map(|i| poly.edge(i).angle()).collect();
        for i in 0..m {
            for j in i + 1..m {
                let diff = (dirs[j] - dirs[i] - self.omega).rem_euclid(PI);
                if diff.min(PI - diff) < COINCIDENCE_MARGIN {
                    return None;
                }
                let diff = (dirs[i] - dirs[j] - self.omega).rem_euclid(PI);
                if diff.min(PI - diff) < COINCIDENCE_MARGIN {
                    return None;
                }
            }
        }
        let r = honest_probe(&poly, self.omega, line).ok()?;
        if let ProbeResult::Outcome(o) = &r {
            if flushed(k, o, self.flush_tol())
                .iter()
                .any(|&e| !confirmed[e])
            {
                return None;
            }
        }
        Some(r)
    }

    fn fault(&mut self, reason: &str) {
        self.faults
            .push((self.transcript.len(), reason.to_string()));
    }

    /// Second distinct line after the first valid probe: pick the
    /// provisional vertices and fix the whole initial polygon.
    fn answer_uncommitted(&mut self, f: FirstProbe, line: &DirectedLine) -> ProbeResult {
        let (v1, v2) = self.anchors(f);
        let mut last = None;
        for _ in 0..MAX_TRIES {
            let k0 = self.sample_initial(f);
            let fresh: Vec<Point> = k0.iter().copied().filter(|&v| v != v1 && v != v2).collect();
            let none = vec![false; k0.len()];
            if let Some(r) = self.admissible(&k0, &none, &fresh, line) {
                if r.is_miss() {
                    let c = centroid(&k0);
                    return self.miss_against(line, c);
                }
                self.commit(k0);
                return r;
            }
            last = Some(k0);
        }
        self.fault("no admissible initial polygon");
        let k0 = last.expect("at least one try");
        let r = ConvexPolygon::new(k0.clone())
            .ok()
            .and_then(|p| honest_probe(&p, self.omega, line).ok())
            .unwrap_or(ProbeResult::Miss);
        self.commit(k0);
        r
    }

    fn commit(&mut self, k: Vec<Point>) {
        self.confirmed = vec![false; k.len()];
        self.k = k;
        self.committed_at = Some(self.transcript.len());
    }

    fn answer_committed(&mut self, line: &DirectedLine) -> ProbeResult {
        let poly = ConvexPolygon::new(self.k.clone()).expect("committed polygon is convex");
        let r = match honest_probe(&poly, self.omega, line) {
            Ok(r) => r,
            Err(e) => {
                self.fault(&e.to_string());
                return ProbeResult::Miss;
            }
        };
        let ProbeResult::Outcome(o) = r else {
            let c = centroid(&self.k);
            return self.miss_against(line, c);
        };
        let fresh: Vec<usize> = flushed(&self.k, &o, self.flush_tol())
            .into_iter()
            .filter(|&e| !self.confirmed[e])
            .collect();
        if fresh.is_empty() {
            return r;
        }
        if self.k.len() < self.n {
            if let Some(r2) = self.grow(fresh[0], line) {
                return r2;
            }
            self.fault("no hiding spot for a new vertex");
        }
        for e in fresh {
            self.confirmed[e] = true;
        }
        r
    }

    /// Room beyond edge `i` of `k` for a further vertex, inside `region`.
    fn pocket(region: &FeasibleRegion, k: &[Point], i: usize) -> Option<[Point; 3]> {
        let m = k.len();
        let (u, w) = (k[i], k[(i + 1) % m]);
        let (before, after) = (k[(i + m - 1) % m], k[(i + 2) % m]);
        region
            .clip(&HalfPlane::right_of(&DirectedLine::through(u, w)))
            .clip(&HalfPlane::new(u, u - before))
            .clip(&HalfPlane::new(w, after - w))
            .base_triangle(u, w)
    }

    /// Inserts a vertex beyond edge `i` and answers `line` on the result.
    /// Candidates jitter around the incenter of the room beyond the edge; the
    /// one leaving the deepest room beyond both new edges wins.
    fn grow(&mut self, i: usize, line: &DirectedLine) -> Option<ProbeResult> {
        let region = self.region();
        let [u, w, apex] = Self::pocket(&region, &self.k, i)?;
        let (a, b, c) = (w.dist(apex), u.dist(apex), u.dist(w));
        let inc = [a, b, c].map(|x| x / (a + b + c));
        let mut confirmed = self.confirmed.clone();
        confirmed[i] = false;
        confirmed.insert(i + 1, false);
        let mut best: Option<(f64, Vec<Point>, ProbeResult)> = None;
        let mut found = 0;
        for _ in 0..MAX_TRIES {
            let mut lam = inc.map(|x| (x + 0.3 * self.rng.gen_range(-1.0..1.0)).max(0.02));
            let s: f64 = lam.iter().sum();
            lam.iter_mut().for_each(|x| *x /= s);
            let v = u * lam[0] + w * lam[1] + apex * lam[2];
            let mut k = self.k.clone();
            k.insert(i + 1, v);
            let Some(r @ ProbeResult::Outcome(o)) = self.admissible(&k, &confirmed, &[v], line)
            else {
                continue;
            };
            let wedge = Wedge {
                apex: o.q,
                dir1: o.dir1,
                dir2: o.dir2,
            };
            let after = wedge
                .half_planes()
                .iter()
                .fold(region.clone(), |r, h| r.clip(h));
            let depth = |j: usize| {
                Self::pocket(&after, &k, j)
                    .map_or(0.0, |[p, q, x]| DirectedLine::through(p, q).side(x).abs())
            };
            let score = depth(i).min(depth(i + 1));
            if best.as_ref().is_none_or(|b| score > b.0) {
                best = Some((score, k, r));
            }
            found += 1;
            if found == CANDIDATES {
                break;
            }
        }
        let (_, k, r) = best?;
        self.k = k;
        self.confirmed = confirmed;
        Some(r)
    }
}

fn centroid(k: &[Point]) -> Point {
    k.iter().fold(Point::default(), |a, &b| a + b) * (1.0 / k.len() as f64)
}

/// Edges `i` (from `k[i]` to `k[i+1]`) lying along an arm of `o`.
fn flushed(k: &[Point], o: &ProbeOutcome, tol: f64) -> Vec<usize> {
    let m = k.len();
    (0..m)
        .filter(|&i| {
            let (a, b) = (k[i], k[(i + 1) % m]);
            [o.dir1, o.dir2]
                .iter()
                .any(|d| d.cross(a - o.q).abs() <= tol && d.cross(b - o.q).abs() <= tol)
        })
        .collect()
}

impl Prober for AdversaryState {
    fn probe(&mut self, line: &DirectedLine) -> ProbeResult {
        let result = self.answer(line);
        let t = self.transcript.len();
        self.transcript.push(TranscriptRecord {
            t,
            line: *line,
            result,
        });
        self.steps.push(StepRecord {
            t,
            valid: !result.is_miss(),
            stage: self.stage(),
            fixed: if self.k.is_empty() {
                if self.first.is_some() {
                    2
                } else {
                    0
                }
            } else {
                self.k.len()
            },
            unconfirmed: if self.k.is_empty() {
                if self.first.is_some() {
                    2
                } else {
                    0
                }
            } else {
                self.unconfirmed()
            },
            phi: self.phi(),
        });
        result
    }

    fn interior_point(&self) -> Point {
        self.psi.center
    }

    fn enclosing_circle(&self) -> Circle {
        self.psi
    }

    fn omega(&self) -> f64 {
        self.omega
    }

    fn probes_used(&self) -> usize {
        self.transcript.len()
    }

    fn transcript(&self) -> &[TranscriptRecord] {
        &self.transcript
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub n: usize,
    pub probes: usize,
    pub valid_probes: usize,
    /// Largest potential gain on one probe after the initial polygon is fixed.
    pub max_gain_after_init: i64,
    pub phi: i64,
    pub unconfirmed: usize,
}

impl AuditReport {
    /// The object is fully determined by the transcript.
    pub fn complete(&self) -> bool {
        self.unconfirmed == 0 && self.phi == 2 * self.n as i64
    }
}

/// Checks a finished game: every answer in `transcript` must be what an honest
/// oracle over the final polygon returns, the polygon must have `n` vertices
/// all wider than ω, and the potential must grow by at most one per probe once
/// the initial polygon is fixed.
pub fn audit(adv: &AdversaryState, transcript: &[TranscriptRecord]) -> Result<AuditReport> {
    let bad = |probe: usize, reason: String| Error::InconsistencyFound { probe, reason };
    if let Some((probe, reason)) = adv.faults.first() {
        return Err(bad(*probe, reason.clone()));
    }
    let poly = adv.final_polygon().ok_or_else(|| {
        bad(
            transcript.len(),
            "the game ended before the object was fixed".into(),
        )
    })?;
    if poly.len() != adv.n {
        return Err(bad(
            transcript.len(),
            format!(
                "final polygon has {} vertices, expected {}",
                poly.len(),
                adv.n
            ),
        ));
    }
    if let Some(i) = poly.internal_angles().iter().position(|&a| a <= adv.omega) {
        return Err(bad(transcript.len(), format!("vertex {i} is narrow")));
    }
    if transcript.len() != adv.steps.len() {
        return Err(bad(
            transcript.len(),
            "transcript length differs from the game".into(),
        ));
    }
    replay(&poly, adv.omega, transcript)?;
    let commit = adv.committed_at.unwrap_or(usize::MAX);
    let mut prev = 0;
    let mut max_after = 0;
    for s in &adv.steps {
        let gain = s.phi - prev;
        let cap = if s.t < commit {
            2
        } else if s.t == commit {
            if is_right_angle(adv.omega) {
                3
            } else {
                2
            }
        } else {
            max_after = max_after.max(gain);
            1
        };
        if gain > cap {
            return Err(bad(s.t, format!("potential grew by {gain}")));
        }
        prev = s.phi;
    }
    let unconfirmed = adv.recompute_unconfirmed();
    if unconfirmed != adv.unconfirmed() {
        return Err(bad(
            transcript.len(),
            format!(
                "tracked {} unconfirmed edges, recomputed {unconfirmed}",
                adv.unconfirmed()
            ),
        ));
    }
    Ok(AuditReport {
        n: adv.n,
        probes: transcript.len(),
        valid_probes: transcript.iter().filter(|r| !r.result.is_miss()).count(),
        max_gain_after_init: max_after,
        phi: adv.phi(),
        unconfirmed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DuelReport {
    pub omega: f64,
    pub n: usize,
    pub algorithm: Algorithm,
    pub probes_used: usize,
    pub lower_bound: usize,
    /// The algorithm returned the adversary's final polygon.
    pub exact: bool,
    pub error: Option<String>,
    pub audit: Option<AuditReport>,
    pub audit_error: Option<String>,
}

impl DuelReport {
    pub fn meets_lower_bound(&self) -> bool {
        self.probes_used >= self.lower_bound
    }

    pub fn passed(&self) -> bool {
        self.error.is_none() && self.exact && self.audit_error.is_none() && self.meets_lower_bound()
    }
}

/// Plays `algorithm` against a fresh adversary and audits the game.
pub fn duel(
    omega: f64,
    n: usize,
    algorithm: Algorithm,
    seed: u64,
) -> Result<(DuelReport, AdversaryState)> {
    let mut adv = new_adversary(omega, n)?.with_seed(seed);
    let algorithm = algorithm.resolve(omega, n, 0);
    let result = algorithm.run(&mut adv, None);
    let (exact, error) = match &result {
        Ok(r) => {
            let exact = r.is_exact()
                && adv.final_polygon().is_some_and(|p| {
                    hausdorff_aligned(&r.vertices, p.vertices()) <= 1e-6 * p.diameter()
                });
            (exact, None)
        }
        Err(e) => (false, Some(e.to_string())),
    };
    let (audit, audit_error) = match audit(&adv, adv.transcript()) {
        Ok(a) => (Some(a), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let report = DuelReport {
        omega,
        n,
        algorithm,
        probes_used: adv.probes_used(),
        lower_bound: lower_bound(omega, n),
        exact,
        error,
        audit,
        audit_error,
    };
    Ok((report, adv))
}
