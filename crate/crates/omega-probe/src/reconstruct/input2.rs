use super::input1::{edge_loop, finish, Pick};
use super::{
    expect_outcome, is_right_angle, opening_line, right_angle_bound, ReconState, Reconstruction,
    Status,
};
use crate::error::{Error, Result};
use crate::geometry::{angle_at, Point};
use crate::oracle::{ProbeOutcome, Prober};

fn probe_regular<P: Prober + ?Sized>(s: &mut P, a: Point, b: Point) -> Result<ProbeOutcome> {
    let probe = s.probes_used();
    let o = expect_outcome(s.probe_through(a, b), probe)?;
    if o.apex_on_polygon {
        return Err(Error::NarrowVertexEncountered { probe });
    }
    Ok(o)
}

/// Right-angle wedges: a longer initialization plus one probe that yields two
/// pieces of information, for at most `2n − 3` probes.
pub fn reconstruct_right_angle<P: Prober + ?Sized>(s: &mut P) -> Result<Reconstruction> {
    if !is_right_angle(s.omega()) {
        return Err(Error::OmegaMismatch(s.omega()));
    }
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

    let line = opening_line(s);
    let first = expect_outcome(s.probe(&line), 0)?;
    if first.apex_on_polygon {
        return Err(Error::NarrowVertexEncountered { probe: 0 });
    }
    let (q, v1, v2) = (first.q, first.p1, first.p2);
    st.hull_insert(v1);
    st.hull_insert(v2);
    rec.phi_trace.push(st.phi());

    let second = probe_regular(s, v1, v2)?;
    let (hit_from, hit_to);
    if st.same(second.p2, v1) {
        // the second arm lies along v1 v2: that edge is confirmed
        let v4 = second.p1;
        st.add_new(v4);
        st.set_flag(v2);
        rec.phi_trace.push(st.phi());
        let third = probe_regular(s, v4, v2)?;
        let v3 = third.p1;
        if st.add_new(v3).is_none() {
            return Err(Error::InconsistencyFound {
                probe: 2,
                reason: "third probe found no new vertex beyond v4 v2".into(),
            });
        }
        st.add_new(third.p2);
        rec.phi_trace.push(st.phi());
        (hit_from, hit_to) = (v3, v4);
    } else if st.same(second.p1, v1) {
        return Err(Error::InconsistencyFound {
            probe: 1,
            reason: "polygon lies inside the first wedge triangle".into(),
        });
    } else {
        let (v3, v4) = (second.p1, second.p2);
        st.add_new(v3);
        st.add_new(v4);
        rec.phi_trace.push(st.phi());
        if angle_at(v2, v3, second.q) < angle_at(q, v2, v3) {
            (hit_from, hit_to) = (v3, v1);
        } else {
            (hit_from, hit_to) = (v2, v4);
        }
    }

    let before = st.phi();
    let hit = probe_regular(s, hit_from, hit_to)?;
    // the reverse-direction probe: the outer pocket is on the left when the
    // edge is traversed backwards, and on the right otherwise
    let backwards = st
        .find(hit_to)
        .is_some_and(|j| st.find(hit_from) == Some(st.next(j)));
    if backwards {
        st.add_new(hit.p1);
        if st.same(hit.p2, hit_from) {
            st.set_flag(hit_to);
        } else {
            st.add_new(hit.p2);
        }
    } else {
        st.add_new(hit.p2);
        if st.same(hit.p1, hit_from) {
            st.set_flag(hit_from);
        } else {
            st.add_new(hit.p1);
        }
    }
    rec.phi_trace.push(st.phi());
    rec.hit_gain = Some(st.phi() - before);

    edge_loop(s, &mut st, Pick::Oldest, &mut rec)?;
    if st.len() < 5 {
        return Err(Error::InvalidParams(format!(
            "right-angle reconstruction needs at least 5 vertices, found {}",
            st.len()
        )));
    }
    finish(s, st, rec, right_angle_bound)
}
