use super::{
    check_cap, expect_outcome, no_narrow_bound, opening_line, ReconState, Reconstruction, Status,
};
use crate::error::{Error, Result};
use crate::oracle::Prober;

/// Which unconfirmed vertex the loop probes from next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Pick {
    /// Earliest discovered.
    Oldest,
    /// Longest unconfirmed edge.
    LongestEdge,
}

fn pick(st: &ReconState, how: Pick) -> usize {
    let open = (0..st.len()).filter(|&i| !st.verts[i].flag);
    match how {
        Pick::Oldest => open.min_by_key(|&i| st.verts[i].order),
        Pick::LongestEdge => open.max_by(|&i, &j| {
            let li = st.point(i).dist(st.point(st.next(i)));
            let lj = st.point(j).dist(st.point(st.next(j)));
            li.total_cmp(&lj)
                .then(st.verts[j].order.cmp(&st.verts[i].order))
        }),
    }
    .expect("loop runs only while F > 0")
}

/// Reconstructs a polygon without narrow vertices in at most `2n − 2` probes.
pub fn reconstruct_no_narrow<P: Prober + ?Sized>(s: &mut P) -> Result<Reconstruction> {
    run(s, Pick::Oldest)
}

/// Same loop, always extending the longest unconfirmed edge. Used as a
/// reference opponent for the adversary.
pub fn reconstruct_greedy<P: Prober + ?Sized>(s: &mut P) -> Result<Reconstruction> {
    run(s, Pick::LongestEdge)
}

fn run<P: Prober + ?Sized>(s: &mut P, how: Pick) -> Result<Reconstruction> {
    let mut st = ReconState::new(s.tolerance());
    let line = opening_line(s);
    let o = expect_outcome(s.probe(&line), 0)?;
    if o.apex_on_polygon {
        return Err(Error::NarrowVertexEncountered { probe: 0 });
    }
    st.hull_insert(o.p1);
    st.hull_insert(o.p2);
    let mut rec = Reconstruction {
        vertices: Vec::new(),
        probes_used: 0,
        status: Status::Exact,
        phi_trace: vec![st.phi()],
        hit_gain: None,
        reverse_flush_events: 0,
        rotated_steps: 0,
    };
    edge_loop(s, &mut st, how, &mut rec)?;
    finish(s, st, rec, no_narrow_bound)
}

/// The main loop: probe along each unconfirmed edge of Q until all are
/// confirmed.
pub(crate) fn edge_loop<P: Prober + ?Sized>(
    s: &mut P,
    st: &mut ReconState,
    how: Pick,
    rec: &mut Reconstruction,
) -> Result<()> {
    while st.f() > 0 {
        check_cap(s)?;
        let u = pick(st, how);
        let (pu, pv) = (st.point(u), st.point(st.next(u)));
        let probe = s.probes_used();
        let before = st.phi();
        let o = expect_outcome(s.probe_through(pu, pv), probe)?;
        if o.apex_on_polygon {
            return Err(Error::NarrowVertexEncountered { probe });
        }
        if st.same(o.p1, pu) {
            st.set_flag(pu);
            st.add_new(o.p2);
        } else if st.same(o.p2, pu) {
            rec.reverse_flush_events += 1;
            st.set_flag(pv);
            st.add_new(o.p1);
        } else {
            st.add_new(o.p1);
            st.add_new(o.p2);
        }
        rec.phi_trace.push(st.phi());
        if st.phi() <= before {
            return Err(Error::Stalled { probe });
        }
    }
    Ok(())
}

pub(crate) fn finish<P: Prober + ?Sized>(
    s: &P,
    st: ReconState,
    mut rec: Reconstruction,
    bound: fn(usize) -> usize,
) -> Result<Reconstruction> {
    rec.vertices = st.points();
    rec.probes_used = s.probes_used();
    let b = bound(st.len());
    if rec.probes_used > b {
        return Err(Error::BudgetExceeded {
            used: rec.probes_used,
            bound: b,
        });
    }
    Ok(rec)
}
