//! Reconstruction of hidden convex polygons with ω-wedge probes.
//!
//! A probe slides a wedge of fixed opening angle ω along a directed line until
//! both arms touch the hidden polygon, then reports the apex, the arm
//! directions and the contact points nearest the apex. This crate provides the
//! geometry kernel, an exact oracle over a hidden polygon, three reconstruction
//! algorithms with their probe budgets, an adversary that answers probes while
//! revealing as little as possible, and an experiment harness.

pub mod adversary;
pub mod cloud;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod oracle;
pub mod reconstruct;

pub use adversary::{audit, duel, new_adversary, AdversaryState};
pub use cloud::{build_cloud, count_narrow, OmegaCloud};
pub use error::{Error, Result};
pub use geometry::{
    internal_angle, line_arc_intersections, omega_arc, orient, ConvexPolygon, DirectedLine,
    OmegaArc, Orientation, Point,
};
pub use harness::{gen_polygon, run_suite, Algorithm, ExperimentConfig, ExperimentReport};
pub use oracle::{
    brute_force_probe, honest_probe, new_session, replay, ArmPolicy, Circle, ProbeOutcome,
    ProbeResult, ProbeSession, Prober, TranscriptRecord,
};
pub use reconstruct::{
    classify_narrow_pair, reconstruct_general, reconstruct_greedy, reconstruct_no_narrow,
    reconstruct_right_angle, NarrowClass, Reconstruction, Status,
};
