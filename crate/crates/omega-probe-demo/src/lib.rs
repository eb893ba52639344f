//! Browser bindings: every function takes and returns JSON strings so the
//! page stays a thin drawing layer.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use wasm_bindgen::prelude::*;

use omega_probe::harness::{gen_with_n, hausdorff_aligned};
use omega_probe::io::{polygon_from_json, polygon_to_json};
use omega_probe::{
    build_cloud, count_narrow, new_session, Algorithm, ArmPolicy, DirectedLine, ExperimentConfig,
    Point, Prober,
};

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// A random polygon with `narrow` vertices of angle below ω.
#[wasm_bindgen]
pub fn random_polygon(omega: f64, n: usize, narrow: usize, seed: u64) -> Result<String, String> {
    let cfg = ExperimentConfig::new(omega, n, n, 1, narrow);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let poly = gen_with_n(&cfg, n, &mut rng).map_err(err)?;
    Ok(polygon_to_json(&poly))
}

/// The ω-cloud as a closed polyline `[[x, y], ...]` plus the narrow count.
#[wasm_bindgen]
pub fn cloud(polygon: &str, omega: f64) -> Result<String, String> {
    let poly = polygon_from_json(polygon).map_err(err)?;
    let cloud = build_cloud(&poly, omega).map_err(err)?;
    let pts: Vec<[f64; 2]> = cloud.polyline(24).iter().map(|p| [p.x, p.y]).collect();
    Ok(json!({
        "polyline": pts,
        "arcs": cloud.len(),
        "narrow": count_narrow(&poly, omega),
    })
    .to_string())
}

/// One probe along the line through `(ox, oy)` with direction `(dx, dy)`.
#[wasm_bindgen]
pub fn probe(
    polygon: &str,
    omega: f64,
    ox: f64,
    oy: f64,
    dx: f64,
    dy: f64,
) -> Result<String, String> {
    let poly = polygon_from_json(polygon).map_err(err)?;
    if dx == 0.0 && dy == 0.0 {
        return Err("direction must be nonzero".into());
    }
    let mut s = new_session(poly, omega, ArmPolicy::default(), 0).map_err(err)?;
    let r = s.probe(&DirectedLine::new(Point::new(ox, oy), Point::new(dx, dy)));
    serde_json::to_string(&r).map_err(err)
}

/// Full reconstruction with its transcript. `algorithm` is one of `auto`,
/// `input1`, `input2`, `general`, `greedy`; a non-positive `epsilon` means none.
#[wasm_bindgen]
pub fn reconstruct(
    polygon: &str,
    omega: f64,
    algorithm: &str,
    epsilon: f64,
) -> Result<String, String> {
    let poly = polygon_from_json(polygon).map_err(err)?;
    let n_b = count_narrow(&poly, omega);
    let algorithm: Algorithm = algorithm.parse()?;
    let algorithm = algorithm.resolve(omega, poly.len(), n_b);
    let mut s = new_session(poly.clone(), omega, ArmPolicy::default(), 0).map_err(err)?;
    let eps = (epsilon > 0.0).then_some(epsilon);
    let result = algorithm.run(&mut s, eps);
    let bound = algorithm.bound(poly.len(), n_b);
    let body = match result {
        Ok(r) => {
            let error = hausdorff_aligned(&r.vertices, poly.vertices());
            json!({
                "algorithm": algorithm.name(),
                "vertices": r.vertices.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
                "exact": r.is_exact() && error <= 1e-6 * poly.diameter(),
                "probes_used": r.probes_used,
                "bound": bound,
                "transcript": s.transcript(),
                "error": null,
            })
        }
        Err(e) => json!({
            "algorithm": algorithm.name(),
            "vertices": [],
            "exact": false,
            "probes_used": s.probes_used(),
            "bound": bound,
            "transcript": s.transcript(),
            "error": e.to_string(),
        }),
    };
    Ok(body.to_string())
}
