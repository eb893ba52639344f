//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use omega_probe::cloud::narrow_vertices;
use omega_probe::harness::{gen_with_n, run_trial};
use omega_probe::reconstruct::general_bound;
use omega_probe::{
    brute_force_probe, build_cloud, count_narrow, duel, new_session, reconstruct_general,
    Algorithm, ArmPolicy, ConvexPolygon, DirectedLine, ExperimentConfig, Point, ProbeResult,
    Prober, Status,
};

const OMEGAS: [f64; 4] = [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3, FRAC_PI_2];
const SEED: u64 = 20_240_611;

type Check = fn() -> Outcome;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn seed() -> u64 {
    std::env::var("OMEGA_PROBE_SEED")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(SEED)
}

/// Whether `k` narrow vertices among `n` can exist with every angle at least
/// 0.05 away from ω: the exterior angles must be able to sum to 2π.
fn closable(omega: f64, n: usize, k: usize) -> bool {
    let m = 0.05;
    let (narrow_lo, narrow_hi) = (PI - omega + m, PI - 0.3 * omega);
    let (wide_lo, wide_hi) = (0.02, PI - omega - m);
    let lo = k as f64 * narrow_lo + (n - k) as f64 * wide_lo;
    let hi = k as f64 * narrow_hi + (n - k) as f64 * wide_hi;
    k <= n && lo < 2.0 * PI && 2.0 * PI < hi
}

fn random_polygon(rng: &mut ChaCha8Rng, omega: f64, n: usize, narrow: usize) -> ConvexPolygon {
    let cfg = ExperimentConfig::new(omega, n, n, 1, narrow);
    gen_with_n(&cfg, n, rng).expect("generator succeeds on feasible parameters")
}

/// A polygon with `n` in `sizes` and up to `max_narrow` narrow vertices,
/// resampling the pair until it can close.
fn random_instance(
    rng: &mut ChaCha8Rng,
    omega: f64,
    sizes: std::ops::RangeInclusive<usize>,
    max_narrow: usize,
) -> ConvexPolygon {
    loop {
        let n = rng.gen_range(sizes.clone());
        let k = rng.gen_range(0..=max_narrow);
        if closable(omega, n, k) {
            return random_polygon(rng, omega, n, k);
        }
    }
}

fn max_narrow(omega: f64) -> usize {
    if omega <= FRAC_PI_3 {
        2
    } else {
        3
    }
}

/// Largest angle between two vertex directions seen from `q`; equals the
/// angular width of the polygon when `q` is outside it.
fn width_from(q: Point, poly: &ConvexPolygon) -> f64 {
    let dirs: Vec<Point> = poly
        .vertices()
        .iter()
        .map(|&v| (v - q).normalized())
        .collect();
    let mut best: f64 = 0.0;
    for (i, a) in dirs.iter().enumerate() {
        for b in &dirs[i + 1..] {
            best = best.max(a.cross(*b).atan2(a.dot(*b)).abs());
        }
    }
    best
}

fn interior_angle(poly: &ConvexPolygon, i: usize) -> f64 {
    let n = poly.len();
    let v = poly.vertex(i);
    let a = poly.vertex((i + n - 1) % n) - v;
    let b = poly.vertex((i + 1) % n) - v;
    a.cross(b).abs().atan2(a.dot(b))
}

fn random_line(rng: &mut ChaCha8Rng, reach: f64) -> DirectedLine {
    let r = reach * rng.gen::<f64>().sqrt();
    let origin = Point::polar(rng.gen_range(0.0..2.0 * PI)) * r;
    DirectedLine::new(origin, Point::polar(rng.gen_range(0.0..2.0 * PI)))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    let mut valid = 0;
    for i in 0..1000 {
        let omega = OMEGAS[i % 4];
        let poly = random_instance(&mut rng, omega, 4..=20, max_narrow(omega));
        let diam = poly.diameter();
        let s = new_session(poly.clone(), omega, ArmPolicy::BisectorSymmetric, i as u64).unwrap();
        let line = random_line(&mut rng, 1.2);
        let brute = brute_force_probe(&s, &line);
        let mut s = s;
        let fast = s.probe(&line);
        match (fast, brute) {
            (ProbeResult::Miss, ProbeResult::Miss) => {}
            (ProbeResult::Outcome(a), ProbeResult::Outcome(b)) => {
                valid += 1;
                let d = a.q.dist(b.q);
                if d > 1e-6 * diam {
                    return fail(format!("pair {i}: apex differs by {d:.3e}"));
                }
                if !a.apex_on_polygon {
                    let w = width_from(a.q, &poly);
                    if (w - omega).abs() > 1e-7 {
                        return fail(format!(
                            "pair {i}: apex sees the polygon at {w}, not {omega}"
                        ));
                    }
                }
            }
            (a, b) => return fail(format!("pair {i}: validity differs ({a:?} vs {b:?})")),
        }
    }
    pass(format!("1000 pairs agree, {valid} valid"))
}

fn no_narrow_budget() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed() ^ 2);
    let mut worst = i64::MIN;
    for t in 0..200 {
        let omega = rng.gen_range(0.1..FRAC_PI_2 - 0.06);
        let mut cfg = ExperimentConfig::new(omega, 5, 30, 1, 0);
        cfg.algorithm = Algorithm::Input1;
        cfg.seed = seed();
        let r = run_trial(&cfg, t).unwrap();
        let budget = 2 * r.n - 2;
        worst = worst.max(r.probes_used as i64 - budget as i64);
        if let Some(e) = &r.error {
            return fail(format!("trial {t} (ω = {omega:.4}, n = {}): {e}", r.n));
        }
        if !r.exact_match || r.probes_used > budget {
            return fail(format!(
                "trial {t} (ω = {omega:.4}, n = {}): exact {}, {} probes > {budget}",
                r.n, r.exact_match, r.probes_used
            ));
        }
    }
    pass(format!("200 exact, max(probes - (2n-2)) = {worst}"))
}

fn right_angle_budget() -> Outcome {
    let mut cfg = ExperimentConfig::new(FRAC_PI_2, 5, 30, 200, 0);
    cfg.algorithm = Algorithm::Input2;
    cfg.seed = seed();
    let mut worst = i64::MIN;
    for t in 0..cfg.trials {
        let r = run_trial(&cfg, t).unwrap();
        let budget = 2 * r.n - 3;
        worst = worst.max(r.probes_used as i64 - budget as i64);
        if let Some(e) = &r.error {
            return fail(format!("trial {t} (n = {}): {e}", r.n));
        }
        if !r.exact_match || r.probes_used > budget {
            return fail(format!(
                "trial {t} (n = {}): exact {}, {} probes",
                r.n, r.exact_match, r.probes_used
            ));
        }
        if r.hit_gain != Some(2) {
            return fail(format!("trial {t}: hit probe gained {:?}", r.hit_gain));
        }
    }
    pass(format!(
        "200 exact, every hit probe gained 2, max(probes - (2n-3)) = {worst}"
    ))
}

fn general_budgets() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed() ^ 4);
    let mut parts = Vec::new();
    for (nb, extra, omegas) in [
        (
            1usize,
            -1i64,
            &[FRAC_PI_4, FRAC_PI_3, 0.4 * PI, FRAC_PI_2][..],
        ),
        (2, 3, &[FRAC_PI_4, FRAC_PI_3, 0.4 * PI, FRAC_PI_2][..]),
        (3, 5, &[0.42 * PI, 0.45 * PI, 0.48 * PI, FRAC_PI_2][..]),
    ] {
        let mut worst = i64::MIN;
        for t in 0..100 {
            let omega = omegas[t % omegas.len()];
            let n = loop {
                let n = rng.gen_range(5..=20);
                if closable(omega, n, nb) {
                    break n;
                }
            };
            let mut cfg = ExperimentConfig::new(omega, n, n, 1, nb);
            cfg.algorithm = Algorithm::General;
            cfg.epsilon = (nb >= 2).then_some(omega / 10.0);
            cfg.seed = seed() ^ nb as u64;
            let r = run_trial(&cfg, t).unwrap();
            let budget = 2 * r.n as i64 + extra;
            assert_eq!(budget as usize, general_bound(r.n, nb));
            worst = worst.max(r.probes_used as i64 - budget);
            if r.n_b != nb {
                return fail(format!("N_B = {nb} trial {t}: generated {} narrow", r.n_b));
            }
            if let Some(e) = &r.error {
                return fail(format!(
                    "N_B = {nb} trial {t} (ω = {omega:.4}, n = {}): {e}",
                    r.n
                ));
            }
            if !r.exact_match || r.probes_used as i64 > budget {
                return fail(format!(
                    "N_B = {nb} trial {t} (ω = {omega:.4}, n = {}): exact {}, {} probes > {budget}",
                    r.n, r.exact_match, r.probes_used
                ));
            }
        }
        parts.push(format!("N_B={nb}: slack {worst}"));
    }
    pass(format!("300 exact within budget ({})", parts.join(", ")))
}

fn adversary_lower_bound() -> Outcome {
    let mut cases = Vec::new();
    for n in [5, 6, 8, 10] {
        for alg in [Algorithm::Greedy, Algorithm::Input1] {
            cases.push((FRAC_PI_3, n, alg, 2 * n - 2));
        }
    }
    for n in [5, 6, 8, 10] {
        for alg in [Algorithm::Greedy, Algorithm::Input1, Algorithm::Input2] {
            cases.push((FRAC_PI_2, n, alg, 2 * n - 3));
        }
    }
    let mut min_slack = i64::MAX;
    for (omega, n, alg, floor) in cases {
        let (r, _) = duel(omega, n, alg, seed()).unwrap();
        let tag = format!("{} at ω = {omega:.4}, n = {n}", alg.name());
        if let Some(e) = &r.audit_error {
            return fail(format!("{tag}: audit failed: {e}"));
        }
        let Some(a) = &r.audit else {
            return fail(format!("{tag}: no audit"));
        };
        if a.max_gain_after_init > 1 {
            return fail(format!(
                "{tag}: potential grew by {}",
                a.max_gain_after_init
            ));
        }
        if r.probes_used < floor {
            return fail(format!("{tag}: only {} probes", r.probes_used));
        }
        if let Some(e) = &r.error {
            return fail(format!("{tag}: {e}"));
        }
        if !r.exact {
            return fail(format!(
                "{tag}: the algorithm did not recover the final polygon"
            ));
        }
        min_slack = min_slack.min(r.probes_used as i64 - floor as i64);
    }
    pass(format!(
        "20 audited games, min(probes - floor) = {min_slack}"
    ))
}

fn cloud_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed() ^ 6);
    let mut worst_width: f64 = 0.0;
    for i in 0..100 {
        let omega = OMEGAS[i % 4];
        let poly = random_instance(&mut rng, omega, 4..=20, max_narrow(omega));
        let n = poly.len();
        let c = build_cloud(&poly, omega).unwrap();
        let tau = 1e-9 * poly.diameter();
        if c.closure_gap() > tau {
            return fail(format!("polygon {i}: chain gap {:.3e}", c.closure_gap()));
        }
        for arc in &c.arcs {
            for k in 0..=8 {
                let q = arc.point_at(k as f64 / 8.0);
                if poly.vertices().iter().any(|v| v.dist(q) <= tau) {
                    continue;
                }
                let w = width_from(q, &poly);
                worst_width = worst_width.max((w - omega).abs());
                if (w - omega).abs() > 1e-7 {
                    return fail(format!(
                        "polygon {i}: arc point sees width {w}, not {omega}"
                    ));
                }
            }
        }
        let narrow: Vec<usize> = (0..n)
            .filter(|&v| interior_angle(&poly, v) <= omega)
            .collect();
        let mut pivots = c.pivot_vertices.clone();
        pivots.sort_unstable();
        if pivots != narrow {
            return fail(format!(
                "polygon {i}: pivots on {pivots:?}, narrow {narrow:?}"
            ));
        }
        for (&p, &v) in c.on_polygon_pivots.iter().zip(&c.pivot_vertices) {
            if c.pivots[p].dist(poly.vertex(v)) > tau {
                return fail(format!("polygon {i}: pivot {p} is off vertex {v}"));
            }
        }
        let count = count_narrow(&poly, omega);
        if count != narrow.len() || count > 3 || (omega < FRAC_PI_3 && count > 2) {
            return fail(format!(
                "polygon {i}: {count} narrow vertices at ω = {omega}"
            ));
        }
    }
    pass(format!("100 clouds, max |width - ω| = {worst_width:.2e}"))
}

fn uniqueness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed() ^ 7);
    let policies = [
        ArmPolicy::BisectorSymmetric,
        ArmPolicy::AdversarialMinimal,
        ArmPolicy::SeededRandom,
    ];
    let mut compared = 0;
    for i in 0..500 {
        let omega = OMEGAS[i % 4];
        let poly = random_instance(&mut rng, omega, 4..=14, max_narrow(omega));
        let tol = 1e-9 * poly.diameter();
        let line = random_line(&mut rng, 1.0);
        let mut answers = Vec::new();
        for (k, &policy) in policies.iter().enumerate() {
            let mut s = new_session(poly.clone(), omega, policy, (i * 3 + k) as u64).unwrap();
            let first = s.probe(&line);
            let again = s.probe(&line);
            match (first.outcome(), again.outcome()) {
                (None, None) => {}
                (Some(a), Some(b)) if a.q.dist(b.q) <= tol => {}
                _ => return fail(format!("pair {i}: repeated probe moved the apex")),
            }
            answers.push(first);
        }
        let Some(base) = answers[0].outcome() else {
            if answers.iter().any(|a| !a.is_miss()) {
                return fail(format!("pair {i}: validity depends on the arm policy"));
            }
            continue;
        };
        if base.apex_on_polygon {
            continue;
        }
        compared += 1;
        for a in &answers[1..] {
            let Some(o) = a.outcome() else {
                return fail(format!("pair {i}: validity depends on the arm policy"));
            };
            let same = o.q.dist(base.q) <= tol
                && o.dir1.dist(base.dir1) <= 1e-9
                && o.dir2.dist(base.dir2) <= 1e-9
                && o.p1.dist(base.p1) <= tol
                && o.p2.dist(base.p2) <= tol;
            if !same {
                return fail(format!("pair {i}: outcome depends on the arm policy"));
            }
        }
    }
    pass(format!(
        "500 pairs, {compared} off-polygon outcomes policy invariant"
    ))
}

fn epsilon_impossibility() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed() ^ 8);
    for t in 0..20 {
        let omega = [FRAC_PI_3, 0.4 * PI, FRAC_PI_2][t % 3];
        let n = rng.gen_range(5..=12);
        let mut cfg = ExperimentConfig::new(omega, n, n, 1, 2);
        cfg.adjacent_narrow = true;
        cfg.epsilon = None;
        let poly = gen_with_n(&cfg, n, &mut rng).unwrap();
        let nb = narrow_vertices(&poly, omega);
        if nb.len() != 2 || (nb[0] + 1) % n != nb[1] && (nb[1] + 1) % n != nb[0] {
            return fail(format!(
                "trial {t}: narrow vertices {nb:?} are not adjacent"
            ));
        }
        let (a, b) = (poly.vertex(nb[0]), poly.vertex(nb[1]));
        let tol = 1e-6 * poly.diameter();
        let mut s = new_session(poly.clone(), omega, ArmPolicy::default(), t as u64).unwrap();
        let r = match reconstruct_general(&mut s, None) {
            Ok(r) => r,
            Err(e) => return fail(format!("trial {t}: {e}")),
        };
        let Status::BestEffort { unresolved } = &r.status else {
            return fail(format!("trial {t}: claimed an exact result without ε"));
        };
        let listed = unresolved.iter().any(|&(u, w)| {
            (u.dist(a) <= tol && w.dist(b) <= tol) || (u.dist(b) <= tol && w.dist(a) <= tol)
        });
        if !listed {
            return fail(format!(
                "trial {t}: the adjacent narrow pair is not listed as unresolved"
            ));
        }
    }
    pass("20 best-effort results, adjacent pair unresolved in each")
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, Check); 8] = [
        (
            "1 oracle equivalence",
            Duration::from_secs(10),
            oracle_equivalence,
        ),
        (
            "2 no-narrow budget 2n-2",
            Duration::from_secs(30),
            no_narrow_budget,
        ),
        (
            "3 right-angle budget 2n-3",
            Duration::from_secs(30),
            right_angle_budget,
        ),
        (
            "4 general budgets",
            Duration::from_secs(60),
            general_budgets,
        ),
        (
            "5 adversary lower bound",
            Duration::from_secs(30),
            adversary_lower_bound,
        ),
        (
            "6 cloud invariants",
            Duration::from_secs(10),
            cloud_invariants,
        ),
        ("7 probe uniqueness", Duration::from_secs(5), uniqueness),
        (
            "8 unresolved adjacent pair",
            Duration::from_secs(5),
            epsilon_impossibility,
        ),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let out = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            fail(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        let timing = if took <= budget {
            ""
        } else {
            " (over time budget)"
        };
        println!(
            "{} criterion {name}: {} [{:.2}s of {}s{timing}]",
            if out.ok { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64(),
            budget.as_secs(),
        );
        if !out.ok {
            failed += 1;
        }
    }
    println!("acceptance: {} of 8 passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
