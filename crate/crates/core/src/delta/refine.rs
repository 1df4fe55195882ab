//! Nested refinements `V^{(0)} ⊇ V^{(1)} ⊇ …` with times `k_j > j` such that
//! `T^{k_j} A^{-j} V_T^{(n)} ⊆ V_T` and `S^{k_j} A^{-j} V_S^{(n)} ⊆ V_S`.
//!
//! All three maps must be shift powers, so `A^n` of an open set is an exact
//! cylinder image.

use serde::Serialize;

use crate::cylinder::{CylinderUnion, CylinderUnionJson};
use crate::error::{Error, Result};
use crate::symbolic::ShiftSpace;
use crate::systems::MapSpec;
use crate::windows::{solve, Window, DEFAULT_MAX_LEN};

/// How far past `j` the search for `k_j` goes by default.
pub const DEFAULT_K_SEARCH: usize = 64;

#[derive(Clone, Debug)]
pub struct RefinementTrace {
    pub ks: Vec<usize>,
    pub vts: Vec<CylinderUnion>,
    pub vss: Vec<CylinderUnion>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinementTraceJson {
    pub ks: Vec<usize>,
    pub vts: Vec<CylinderUnionJson>,
    pub vss: Vec<CylinderUnionJson>,
}

impl RefinementTrace {
    pub fn to_json(&self) -> RefinementTraceJson {
        RefinementTraceJson {
            ks: self.ks.clone(),
            vts: self.vts.iter().map(|u| u.normalize().to_json()).collect(),
            vss: self.vss.iter().map(|u| u.normalize().to_json()).collect(),
        }
    }
}

fn power(map: &MapSpec, role: &str) -> Result<usize> {
    match map {
        MapSpec::ShiftPower(p) => Ok(*p),
        other => Err(Error::NotShiftPower(format!("{role} is {}", other.describe()))),
    }
}

/// `σ^{push} σ^{-pull} V` for a union `V`, with the pull applied first.
fn pull_push(v: &CylinderUnion, pull: usize, push: usize) -> Result<CylinderUnion> {
    v.preimage_shift_power(pull)?.image_shift_power(push)
}

pub fn lemma1_refine(
    space: &ShiftSpace,
    t: &MapSpec,
    s: &MapSpec,
    a: &MapSpec,
    v_t: &CylinderUnion,
    v_s: &CylinderUnion,
    n: usize,
) -> Result<RefinementTrace> {
    lemma1_refine_with_bound(space, t, s, a, v_t, v_s, n, DEFAULT_K_SEARCH)
}

#[allow(clippy::too_many_arguments)]
pub fn lemma1_refine_with_bound(
    space: &ShiftSpace,
    t: &MapSpec,
    s: &MapSpec,
    a: &MapSpec,
    v_t: &CylinderUnion,
    v_s: &CylinderUnion,
    n: usize,
    k_search: usize,
) -> Result<RefinementTrace> {
    let (tp, sp, ap) = (power(t, "T")?, power(s, "S")?, power(a, "A")?);
    if v_t.space() != space || v_s.space() != space {
        return Err(Error::SpaceMismatch);
    }
    if v_t.is_empty() || v_s.is_empty() {
        return Err(Error::InvalidArgument("V_T and V_S must be nonempty".into()));
    }
    let mut trace = RefinementTrace {
        ks: Vec::new(),
        vts: Vec::new(),
        vss: Vec::new(),
    };
    for j in 0..=n {
        let (prev_t, prev_s) = if j == 0 {
            (v_t.clone(), v_s.clone())
        } else {
            (trace.vts[j - 1].clone(), trace.vss[j - 1].clone())
        };
        // U = A^{-j} V^{(j-1)}, which is V itself at j = 0.
        let u_t = prev_t.preimage_shift_power(ap * j).map_err(|e| e.at_n(j))?;
        let u_s = prev_s.preimage_shift_power(ap * j).map_err(|e| e.at_n(j))?;
        let mut k_found = None;
        // Also ask p·k ≥ a·j so that A^{-j} A^{j} cancels on T^{-k} V.
        for k in j + 1..=j + k_search {
            if tp * k < ap * j || sp * k < ap * j {
                continue;
            }
            let hit_t = solve(space, &[Window::new(0, u_t.clone()), Window::new(tp * k, v_t.clone())], DEFAULT_MAX_LEN)?;
            if hit_t.is_none() {
                continue;
            }
            let hit_s = solve(space, &[Window::new(0, u_s.clone()), Window::new(sp * k, v_s.clone())], DEFAULT_MAX_LEN)?;
            if hit_s.is_some() {
                k_found = Some(k);
                break;
            }
        }
        let Some(k) = k_found else {
            return Err(Error::Budget {
                what: "transitivity witness",
                limit: j + k_search,
                n_reached: Some(j),
            });
        };
        let next_t = prev_t.intersect(&pull_push(v_t, tp * k, ap * j)?)?;
        let next_s = prev_s.intersect(&pull_push(v_s, sp * k, ap * j)?)?;
        if next_t.is_empty() || next_s.is_empty() {
            return Err(Error::InvalidArgument(format!("refinement became empty at step {j}")));
        }
        trace.ks.push(k);
        trace.vts.push(next_t.normalize());
        trace.vss.push(next_s.normalize());
    }
    Ok(trace)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TraceCheck {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl TraceCheck {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Recomputes every inclusion of the trace from scratch.
pub fn validate_trace(
    t: &MapSpec,
    s: &MapSpec,
    a: &MapSpec,
    v_t: &CylinderUnion,
    v_s: &CylinderUnion,
    trace: &RefinementTrace,
) -> Result<TraceCheck> {
    let (tp, sp, ap) = (power(t, "T")?, power(s, "S")?, power(a, "A")?);
    let mut check = TraceCheck {
        checks: 0,
        failures: Vec::new(),
    };
    let mut expect = |ok: bool, what: String| {
        check.checks += 1;
        if !ok {
            check.failures.push(what);
        }
    };
    if trace.vts.len() != trace.ks.len() || trace.vss.len() != trace.ks.len() {
        expect(false, "trace lists have different lengths".into());
    }
    for (side, v, vs, p) in [("T", v_t, &trace.vts, tp), ("S", v_s, &trace.vss, sp)] {
        for (level, cur) in vs.iter().enumerate() {
            expect(!cur.is_empty(), format!("V_{side}^({level}) is empty"));
            let parent = if level == 0 { v } else { &vs[level - 1] };
            expect(cur.is_subset(parent)?, format!("V_{side}^({level}) not inside its parent"));
            expect(cur.is_subset(v)?, format!("V_{side}^({level}) not inside V_{side}"));
            for (j, &k) in trace.ks.iter().enumerate().take(level + 1) {
                let moved = pull_push(cur, ap * j, p * k)?;
                expect(
                    moved.is_subset(v)?,
                    format!("{side}^{k} A^-{j} V_{side}^({level}) not inside V_{side}"),
                );
            }
        }
    }
    for (j, &k) in trace.ks.iter().enumerate() {
        expect(k > j, format!("k_{j} = {k} is not greater than {j}"));
    }
    Ok(check)
}
