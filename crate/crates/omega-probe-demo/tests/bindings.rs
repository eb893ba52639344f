use std::f64::consts::PI;

use omega_probe_demo::{cloud, probe, random_polygon, reconstruct};
use serde_json::Value;

#[test]
fn round_trip_through_the_bindings() {
    let poly = random_polygon(PI / 3.0, 7, 0, 5).unwrap();
    let c: Value = serde_json::from_str(&cloud(&poly, PI / 3.0).unwrap()).unwrap();
    assert_eq!(c["narrow"], 0);
    assert!(c["polyline"].as_array().unwrap().len() > 24);
    let p: Value =
        serde_json::from_str(&probe(&poly, PI / 3.0, -3.0, 0.0, 1.0, 0.0).unwrap()).unwrap();
    assert!(p.get("outcome").is_some());
    let r: Value =
        serde_json::from_str(&reconstruct(&poly, PI / 3.0, "auto", 0.0).unwrap()).unwrap();
    assert_eq!(r["exact"], true);
    assert!(r["probes_used"].as_u64().unwrap() <= 12);
    assert_eq!(
        r["transcript"].as_array().unwrap().len(),
        r["probes_used"].as_u64().unwrap() as usize
    );
}

#[test]
fn bad_input_is_an_error() {
    assert!(cloud("{\"vertices\": []}", 1.0).is_err());
    assert!(reconstruct("{\"vertices\": [[0,0],[1,0],[0,1]]}", 1.0, "nope", 0.0).is_err());
    assert!(random_polygon(PI / 4.0, 6, 3, 0).is_err());
    assert!(probe(
        "{\"vertices\": [[0,0],[1,0],[0,1]]}",
        1.0,
        0.0,
        0.0,
        0.0,
        0.0
    )
    .is_err());
}
