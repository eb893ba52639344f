use super::{
    check_cap, expect_outcome, general_bound, opening_line, ReconState, Reconstruction, Status,
};
use crate::cloud::count_narrow;
use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, DirectedLine, Point};
use crate::oracle::{ProbeOutcome, Prober};

/// Reconstructs any convex polygon, narrow vertices included, in at most
/// `2n − 1 + N_B + P_B` probes. Two or more narrow vertices need `epsilon`;
/// without it the result may be [`Status::BestEffort`].
pub fn reconstruct_general<P: Prober + ?Sized>(
    s: &mut P,
    epsilon: Option<f64>,
) -> Result<Reconstruction> {
    if let Some(e) = epsilon {
        if !(e > 0.0 && e < std::f64::consts::PI) {
            return Err(Error::InvalidParams(format!("ε = {e} must lie in (0, π)")));
        }
    }
    let omega = s.omega();
    let mut st = ReconState::new(s.tolerance());
    let mut rec = Reconstruction {
        vertices: Vec::new(),
        probes_used: 0,
        status: Status::Exact,
        phi_trace: Vec::new(),
        hit_gain: None,
        reverse_flush_events: 0,
        rotated_steps: 0,
    };

    initialize(s, &mut st, &mut rec)?;

    while st.f() > 0 {
        check_cap(s)?;
        let before = st.phi();
        let probe = s.probes_used();
        if let Some(u) = pick_open(&st, omega) {
            let v = st.next(u);
            edge_probe(s, &mut st, u, v)?;
        } else if let Some(u) = pick_reverse(&st) {
            let v = st.prev(u);
            edge_probe(s, &mut st, u, v)?;
        } else {
            let pairs = narrow_pairs(&st);
            let Some(eps) = epsilon else {
                rec.status = Status::BestEffort {
                    unresolved: pairs
                        .iter()
                        .map(|&u| (st.point(u), st.point(st.next(u))))
                        .collect(),
                };
                break;
            };
            let Some(&u) = pairs.iter().min_by_key(|&&u| st.verts[u].order) else {
                return Err(Error::Stalled { probe });
            };
            rec.rotated_steps += 1;
            rotated_probes(s, &mut st, u, eps)?;
        }
        rec.phi_trace.push(st.phi());
        if st.phi() <= before {
            return Err(Error::Stalled { probe });
        }
    }

    rec.vertices = st.points();
    rec.probes_used = s.probes_used();
    let n = st.len();
    let n_b = ConvexPolygon::new(st.points())
        .map(|q| count_narrow(&q, omega))
        .unwrap_or(0)
        .max(st.narrow_known());
    let bound = general_bound(n, n_b);
    if rec.probes_used > bound {
        return Err(Error::BudgetExceeded {
            used: rec.probes_used,
            bound,
        });
    }
    Ok(rec)
}

fn initialize<P: Prober + ?Sized>(
    s: &mut P,
    st: &mut ReconState,
    rec: &mut Reconstruction,
) -> Result<()> {
    let omega = s.omega();
    let line = opening_line(s);
    let o = expect_outcome(s.probe(&line), 0)?;
    if !o.apex_on_polygon {
        st.hull_insert(o.p1);
        st.hull_insert(o.p2);
        rec.phi_trace.push(st.phi());
        return Ok(());
    }
    let q = o.q;
    let i = st.hull_insert(q);
    st.verts[i].bvertex = true;
    rec.phi_trace.push(st.phi());

    // along the first wedge's bisector, from the far side of the circle back
    // towards q
    let bis = o.dir1.rotate(0.5 * omega);
    let c = s.enclosing_circle();
    let rel = q - c.center;
    let b = rel.dot(bis);
    let t = -b + (b * b - rel.dot(rel) + c.radius * c.radius).max(0.0).sqrt();
    let follow = DirectedLine::new(q + bis * t, -bis);
    let o2 = expect_outcome(s.probe(&follow), 1)?;
    if !o2.apex_on_polygon {
        if !st.same(o2.p1, q) {
            st.add_new(o2.p1);
        }
        if !st.same(o2.p2, q) {
            st.add_new(o2.p2);
        }
    } else if st.same(o2.q, q) {
        return Err(Error::Stalled { probe: 1 });
    } else if let Some(j) = st.add_new(o2.q) {
        st.verts[j].bvertex = true;
    }
    rec.phi_trace.push(st.phi());
    Ok(())
}

/// Step 1(a): an unconfirmed vertex not known to be narrow, preferring those
/// whose angle in Q exceeds ω.
fn pick_open(st: &ReconState, omega: f64) -> Option<usize> {
    let open: Vec<usize> = (0..st.len())
        .filter(|&i| !st.verts[i].flag && !st.verts[i].bvertex)
        .collect();
    let wide = open.iter().copied().filter(|&i| st.q_angle(i) > omega);
    wide.min_by_key(|&i| st.verts[i].order)
        .or_else(|| open.iter().copied().min_by_key(|&i| st.verts[i].order))
}

/// Step 1(b): a vertex not known to be narrow whose clockwise neighbour is a
/// known narrow vertex with an unconfirmed edge.
fn pick_reverse(st: &ReconState) -> Option<usize> {
    (0..st.len())
        .filter(|&u| {
            let v = st.prev(u);
            !st.verts[u].bvertex && !st.verts[v].flag && st.verts[v].bvertex
        })
        .min_by_key(|&u| st.verts[u].order)
}

/// Unconfirmed edges between two known narrow vertices, by start index.
fn narrow_pairs(st: &ReconState) -> Vec<usize> {
    (0..st.len())
        .filter(|&u| {
            let v = st.next(u);
            !st.verts[u].flag && st.verts[u].bvertex && st.verts[v].bvertex
        })
        .collect()
}

/// Steps 2–4: probe along `u → v` and record what the arms touched.
fn edge_probe<P: Prober + ?Sized>(
    s: &mut P,
    st: &mut ReconState,
    u: usize,
    v: usize,
) -> Result<()> {
    let (pu, pv) = (st.point(u), st.point(v));
    let flagged = st.verts[u].flag;
    let probe = s.probes_used();
    let o: ProbeOutcome = expect_outcome(s.probe_through(pu, pv), probe)?;
    let (p1, p2) = if flagged { (o.p2, o.p1) } else { (o.p1, o.p2) };
    if o.apex_on_polygon {
        if !st.same(o.q, pu) {
            return Err(Error::InconsistencyFound {
                probe,
                reason: "apex on a vertex other than the probe's start".into(),
            });
        }
        st.verts[u].bvertex = true;
        return Ok(());
    }
    if st.same(p1, pu) {
        if flagged {
            st.set_flag(pv);
        } else {
            st.set_flag(pu);
        }
    } else {
        st.add_new(p1);
    }
    if st.same(p2, pu) {
        // on a reversed probe this arm lies along the already confirmed edge
        if !flagged {
            st.set_flag(pv);
        }
    } else {
        st.add_new(p2);
    }
    Ok(())
}

/// Step 1(c): the two ε/2-rotated probes around an adjacent narrow pair.
fn rotated_probes<P: Prober + ?Sized>(
    s: &mut P,
    st: &mut ReconState,
    u: usize,
    eps: f64,
) -> Result<()> {
    let v = st.next(u);
    let (pu, pv) = (st.point(u), st.point(v));
    let edge = DirectedLine::through(pu, pv);
    let tol = s.tolerance();
    let insert = |st: &mut ReconState, p: Point, probe: usize| {
        if edge.side(p) >= -tol || st.add_new(p).is_none() {
            Err(Error::EpsilonViolated { probe })
        } else {
            Ok(())
        }
    };
    let probe = s.probes_used();
    let l = DirectedLine::new(pv, (pv - pu).rotate(0.5 * eps));
    let o = expect_outcome(s.probe(&l), probe)?;
    if !st.same(o.p1, pv) {
        return insert(st, o.p1, probe);
    }
    let probe = s.probes_used();
    let l2 = DirectedLine::new(pu, (pu - pv).rotate(-0.5 * eps));
    let o2 = expect_outcome(s.probe(&l2), probe)?;
    if !st.same(o2.p2, pu) {
        insert(st, o2.p2, probe)
    } else {
        st.verts[u].flag = true;
        Ok(())
    }
}
