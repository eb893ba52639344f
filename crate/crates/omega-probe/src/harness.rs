//! Random instances with a prescribed number of narrow vertices, and probe
//! budget experiments over them.

use std::f64::consts::{FRAC_PI_3, PI, TAU};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cloud::{count_narrow, narrow_vertices};
use crate::error::{Error, Result};
use crate::geometry::{angle_at, ConvexPolygon, Point, TAU_ANG};
use crate::oracle::{new_session, ArmPolicy, Prober};
use crate::reconstruct::{
    general_bound, no_narrow_bound, reconstruct_general, reconstruct_greedy, reconstruct_no_narrow,
    reconstruct_right_angle, right_angle_bound, Reconstruction, Status,
};

/// Environment variable that overrides the configured seed.
pub const SEED_ENV: &str = "OMEGA_PROBE_SEED";

/// Smallest exterior angle the generator produces.
const MIN_EXTERIOR: f64 = 0.02;
const MAX_ATTEMPTS: usize = 2_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Pick from ω and the narrow-vertex count.
    #[default]
    Auto,
    Input1,
    Input2,
    General,
    Greedy,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::Input1 => "input1",
            Algorithm::Input2 => "input2",
            Algorithm::General => "general",
            Algorithm::Greedy => "greedy",
        }
    }

    /// Concrete algorithm for an instance.
    pub fn resolve(self, omega: f64, n: usize, n_b: usize) -> Algorithm {
        match self {
            Algorithm::Auto if n_b > 0 => Algorithm::General,
            Algorithm::Auto if (omega - PI / 2.0).abs() <= 1e-12 && n >= 5 => Algorithm::Input2,
            Algorithm::Auto => Algorithm::Input1,
            other => other,
        }
    }

    /// Probe budget the algorithm is held to.
    pub fn bound(self, n: usize, n_b: usize) -> usize {
        match self {
            Algorithm::Input1 | Algorithm::Greedy => no_narrow_bound(n),
            Algorithm::Input2 => right_angle_bound(n),
            _ => general_bound(n, n_b),
        }
    }

    pub fn run<P: Prober + ?Sized>(
        self,
        s: &mut P,
        epsilon: Option<f64>,
    ) -> Result<Reconstruction> {
        match self {
            Algorithm::Input1 => reconstruct_no_narrow(s),
            Algorithm::Input2 => reconstruct_right_angle(s),
            Algorithm::Greedy => reconstruct_greedy(s),
            Algorithm::General | Algorithm::Auto => reconstruct_general(s, epsilon),
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(Algorithm::Auto),
            "input1" => Ok(Algorithm::Input1),
            "input2" => Ok(Algorithm::Input2),
            "general" => Ok(Algorithm::General),
            "greedy" => Ok(Algorithm::Greedy),
            _ => Err(format!("unknown algorithm `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub omega: f64,
    pub n_min: usize,
    pub n_max: usize,
    pub trials: usize,
    pub target_narrow: usize,
    /// Minimum gap between any internal angle and ω.
    pub margin: f64,
    pub epsilon: Option<f64>,
    pub seed: u64,
    pub algorithm: Algorithm,
    /// Place two narrow vertices next to each other.
    pub adjacent_narrow: bool,
    pub arm_policy: ArmPolicy,
}

impl ExperimentConfig {
    pub fn new(
        omega: f64,
        n_min: usize,
        n_max: usize,
        trials: usize,
        target_narrow: usize,
    ) -> Self {
        ExperimentConfig {
            omega,
            n_min,
            n_max,
            trials,
            target_narrow,
            margin: 0.05,
            epsilon: (target_narrow >= 2).then_some(omega / 10.0),
            seed: 0,
            algorithm: Algorithm::Auto,
            adjacent_narrow: false,
            arm_policy: ArmPolicy::default(),
        }
    }

    /// Applies the seed override from the environment, if set.
    pub fn with_env_seed(mut self) -> Result<Self> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.seed = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParams(format!("{SEED_ENV}={v} is not an integer")))?;
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega <= PI / 2.0 + TAU_ANG) {
            return Err(Error::InvalidOmega(self.omega));
        }
        if self.margin.is_nan() || self.margin <= 0.0 {
            return Err(Error::InvalidParams("margin must be positive".into()));
        }
        if self.n_min < 3 || self.n_min > self.n_max {
            return Err(Error::InvalidParams(format!(
                "bad vertex range [{}, {}]",
                self.n_min, self.n_max
            )));
        }
        if self.target_narrow > 3 {
            return Err(Error::Infeasible(
                "at most three narrow vertices exist".into(),
            ));
        }
        if self.target_narrow == 3 && self.omega <= FRAC_PI_3 {
            return Err(Error::Infeasible(
                "three narrow vertices need ω > π/3".into(),
            ));
        }
        if self.adjacent_narrow && self.target_narrow < 2 {
            return Err(Error::InvalidParams(
                "adjacent layout needs two narrow vertices".into(),
            ));
        }
        Ok(())
    }

    fn trial_rng(&self, trial: usize) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&self.seed.to_le_bytes());
        seed[8..16].copy_from_slice(&(trial as u64).to_le_bytes());
        seed[16..24].copy_from_slice(&self.omega.to_bits().to_le_bytes());
        seed[24] = self.target_narrow as u8;
        ChaCha8Rng::from_seed(seed)
    }
}

/// Whether every boundary chain between two narrow vertices that is not a
/// single edge has a vertex seeing them at angle at most `π − ε`.
pub fn satisfies_epsilon(poly: &ConvexPolygon, omega: f64, epsilon: f64) -> bool {
    let nb = narrow_vertices(poly, omega);
    let n = poly.len();
    for &a in &nb {
        for &b in &nb {
            if a == b {
                continue;
            }
            let chain: Vec<usize> = (1..n)
                .map(|k| (a + k) % n)
                .take_while(|&i| i != b)
                .collect();
            if chain.is_empty() {
                continue;
            }
            let ok = chain
                .iter()
                .any(|&v| angle_at(poly.vertex(b), poly.vertex(v), poly.vertex(a)) <= PI - epsilon);
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Checks the generator's contract on one polygon.
pub fn audit_instance(poly: &ConvexPolygon, cfg: &ExperimentConfig) -> bool {
    let w = cfg.omega;
    let angles_ok = poly
        .internal_angles()
        .iter()
        .all(|&a| a <= w - cfg.margin + 1e-9 || a >= w + cfg.margin - 1e-9);
    let eps_ok = match cfg.epsilon {
        Some(e) if cfg.target_narrow >= 2 => satisfies_epsilon(poly, w, e),
        _ => true,
    };
    angles_ok && eps_ok && count_narrow(poly, w) == cfg.target_narrow
}

/// A random strictly convex polygon with exactly `cfg.target_narrow` vertices
/// of angle at most `ω − margin` and every other angle at least `ω + margin`.
/// Centered on its centroid and scaled to unit circumradius about it.
pub fn gen_polygon(cfg: &ExperimentConfig, trial: usize) -> Result<ConvexPolygon> {
    cfg.validate()?;
    let mut rng = cfg.trial_rng(trial);
    let n = rng.gen_range(cfg.n_min..=cfg.n_max);
    gen_with_n(cfg, n, &mut rng)
}

pub fn gen_with_n(cfg: &ExperimentConfig, n: usize, rng: &mut impl Rng) -> Result<ConvexPolygon> {
    cfg.validate()?;
    let k = cfg.target_narrow;
    if k > n {
        return Err(Error::Infeasible(format!(
            "{k} narrow vertices in a {n}-gon"
        )));
    }
    let w = cfg.omega;
    // exterior-angle bounds; a narrow vertex keeps an angle of at least 0.3·ω
    let narrow = (PI - w + cfg.margin, PI - 0.3 * w);
    let wide = (MIN_EXTERIOR, PI - w - cfg.margin);
    if narrow.0 > narrow.1 || wide.0 > wide.1 {
        return Err(Error::Infeasible(format!(
            "margin {} too large for ω = {w}",
            cfg.margin
        )));
    }
    let lo = k as f64 * narrow.0 + (n - k) as f64 * wide.0;
    let hi = k as f64 * narrow.1 + (n - k) as f64 * wide.1;
    if lo >= TAU || hi <= TAU {
        return Err(Error::Infeasible(format!(
            "{k} narrow vertices among {n} cannot close at ω = {w}"
        )));
    }
    for _ in 0..MAX_ATTEMPTS {
        let mut is_narrow = vec![false; n];
        if cfg.adjacent_narrow {
            let s = rng.gen_range(0..n);
            for j in 0..k {
                is_narrow[(s + j) % n] = true;
            }
        } else {
            let mut placed = 0;
            while placed < k {
                let i = rng.gen_range(0..n);
                if !is_narrow[i] {
                    is_narrow[i] = true;
                    placed += 1;
                }
            }
        }
        let bounds: Vec<(f64, f64)> = is_narrow
            .iter()
            .map(|&b| if b { narrow } else { wide })
            .collect();
        let Some(ext) = exterior_angles(&bounds, rng) else {
            continue;
        };
        let Some(lengths) = closing_lengths(&ext, rng) else {
            continue;
        };
        let mut theta = rng.gen_range(0.0..TAU);
        let mut p = Point::default();
        let mut pts = Vec::with_capacity(n);
        for (i, len) in lengths.iter().enumerate() {
            pts.push(p);
            p = p + Point::polar(theta) * *len;
            theta += ext[(i + 1) % n];
        }
        let Ok(poly) = ConvexPolygon::new(pts) else {
            continue;
        };
        let c = poly.centroid();
        let r = poly.max_distance_from(c);
        let poly = poly.transformed(-c, 1.0 / r);
        if audit_instance(&poly, cfg) {
            return Ok(poly);
        }
    }
    Err(Error::Infeasible(format!(
        "no instance after {MAX_ATTEMPTS} attempts (n = {n}, ω = {w}, narrow = {k})"
    )))
}

/// Exterior angles within `bounds` summing to 2π: random weights scaled by a
/// common factor found by bisection, each clamped to its bounds.
fn exterior_angles(bounds: &[(f64, f64)], rng: &mut impl Rng) -> Option<Vec<f64>> {
    let weights: Vec<f64> = bounds
        .iter()
        .map(|(a, b)| a + rng.gen_range(0.05..1.0) * (b - a))
        .collect();
    let total = |t: f64| -> f64 {
        weights
            .iter()
            .zip(bounds)
            .map(|(w, (a, b))| (w * t).clamp(*a, *b))
            .sum()
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while total(hi) < TAU {
        hi *= 2.0;
        if hi > 1e9 {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total(mid) < TAU {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let mut ext: Vec<f64> = weights
        .iter()
        .zip(bounds)
        .map(|(w, (a, b))| (w * t).clamp(*a, *b))
        .collect();
    // put the rounding residue on the vertex with the most room
    let residue = TAU - ext.iter().sum::<f64>();
    let j = (0..ext.len())
        .max_by(|&i, &j| {
            let ri = (bounds[i].1 - ext[i]).min(ext[i] - bounds[i].0);
            let rj = (bounds[j].1 - ext[j]).min(ext[j] - bounds[j].0);
            ri.total_cmp(&rj)
        })
        .expect("non-empty");
    ext[j] += residue;
    Some(ext)
}

/// Positive edge lengths closing the polygon whose edge `i` has direction
/// `Σ_{j ≤ i} ext[j]` (after the first edge). Random lengths leave a residual
/// `r`; it is cancelled by lengthening the two consecutive edges whose
/// directions span `−r`, which exist because every exterior angle is below π.
fn closing_lengths(ext: &[f64], rng: &mut impl Rng) -> Option<Vec<f64>> {
    let n = ext.len();
    let mut theta = 0.0;
    let dirs: Vec<Point> = (0..n)
        .map(|i| {
            let d = Point::polar(theta);
            theta += ext[(i + 1) % n];
            d
        })
        .collect();
    let mut l: Vec<f64> = (0..n).map(|_| rng.gen_range(0.3..1.7)).collect();
    let r = dirs
        .iter()
        .zip(&l)
        .fold(Point::default(), |acc, (d, l)| acc + *d * *l);
    let target = -r;
    let k = (0..n).find(|&k| {
        let (a, b) = (dirs[k], dirs[(k + 1) % n]);
        a.cross(target) >= 0.0 && target.cross(b) >= 0.0
    })?;
    let (a, b) = (dirs[k], dirs[(k + 1) % n]);
    let det = a.cross(b);
    if det.abs() < 1e-12 {
        return None;
    }
    // target = α·a + β·b
    let alpha = target.cross(b) / det;
    let beta = a.cross(target) / det;
    l[k] += alpha;
    l[(k + 1) % n] += beta;
    l.iter().all(|&x| x > 0.0).then_some(l)
}

/// Vertex-to-vertex distance after the best cyclic alignment; infinite when
/// the vertex counts differ.
pub fn hausdorff_aligned(a: &[Point], b: &[Point]) -> f64 {
    if a.len() != b.len() || a.is_empty() {
        return f64::INFINITY;
    }
    let n = a.len();
    (0..n)
        .map(|s| {
            (0..n)
                .map(|i| a[i].dist(b[(i + s) % n]))
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub n: usize,
    pub n_b: usize,
    pub omega: f64,
    pub algorithm: Algorithm,
    pub probes_used: usize,
    pub bound: usize,
    pub exact_match: bool,
    pub hausdorff_error: f64,
    pub best_effort: bool,
    pub hit_gain: Option<i64>,
    pub error: Option<String>,
}

impl TrialRecord {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.exact_match && self.probes_used <= self.bound
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(TrialRecord::passed)
    }

    pub fn exact_count(&self) -> usize {
        self.records.iter().filter(|r| r.exact_match).count()
    }

    /// Largest `probes_used − bound` over all trials.
    pub fn worst_slack(&self) -> i64 {
        self.records
            .iter()
            .map(|r| r.probes_used as i64 - r.bound as i64)
            .max()
            .unwrap_or(0)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "trial,n,n_b,omega,algorithm,probes_used,bound,exact_match,hausdorff_error,error\n",
        );
        for r in &self.records {
            let _ = writeln!(
                s,
                "{},{},{},{:.17e},{},{},{},{},{:.3e},{}",
                r.trial,
                r.n,
                r.n_b,
                r.omega,
                r.algorithm.name(),
                r.probes_used,
                r.bound,
                r.exact_match,
                r.hausdorff_error,
                r.error.as_deref().unwrap_or("").replace(',', ";"),
            );
        }
        s
    }

    pub fn summary(&self) -> String {
        let total = self.records.len();
        let failed = self.records.iter().filter(|r| !r.passed()).count();
        let errors = self.records.iter().filter(|r| r.error.is_some()).count();
        format!(
            "trials: {total}\nexact: {}/{total}\nerrors: {errors}\nmax(probes - bound): {}\nfailed: {failed}\nresult: {}\n",
            self.exact_count(),
            self.worst_slack(),
            if failed == 0 { "PASS" } else { "FAIL" },
        )
    }
}

/// Runs one trial: generate, reconstruct, compare.
pub fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<TrialRecord> {
    let poly = gen_polygon(cfg, trial)?;
    let n = poly.len();
    let n_b = count_narrow(&poly, cfg.omega);
    let algorithm = cfg.algorithm.resolve(cfg.omega, n, n_b);
    let bound = algorithm.bound(n, n_b);
    let mut s = new_session(
        poly.clone(),
        cfg.omega,
        cfg.arm_policy,
        cfg.seed ^ trial as u64,
    )?;
    let mut rec = TrialRecord {
        trial,
        n,
        n_b,
        omega: cfg.omega,
        algorithm,
        probes_used: 0,
        bound,
        exact_match: false,
        hausdorff_error: f64::INFINITY,
        best_effort: false,
        hit_gain: None,
        error: None,
    };
    match algorithm.run(&mut s, cfg.epsilon) {
        Ok(r) => {
            let scale = poly.diameter();
            rec.probes_used = r.probes_used;
            rec.hausdorff_error = hausdorff_aligned(&r.vertices, poly.vertices());
            rec.best_effort = matches!(r.status, Status::BestEffort { .. });
            rec.exact_match = !rec.best_effort && rec.hausdorff_error <= 1e-6 * scale;
            rec.hit_gain = r.hit_gain;
        }
        Err(e) => {
            rec.probes_used = s.probes_used();
            rec.error = Some(e.to_string());
        }
    }
    Ok(rec)
}

/// Runs every trial in order; a failing trial is recorded, not fatal.
pub fn run_suite(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let records = (0..cfg.trials)
        .map(|t| run_trial(cfg, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentReport {
        config: cfg.clone(),
        records,
    })
}
