//! Common return times for `U_0 ∩ T_1^{-n} U_1 ∩ … ∩ T_H^{-n} U_H`, the
//! finite-depth certification built on them, and diagonal orbit hits.

use serde::Serialize;

use crate::cylinder::{CylinderUnion, CylinderUnionJson};
use crate::error::{Error, Result};
use crate::symbolic::{Point, ShiftSpace, Word};
use crate::systems::{apply, MapSpec, ProductSystem};
use crate::windows::{pull_back, solve, Window, DEFAULT_MAX_LEN};

/// A time `n` and a nonempty cylinder inside the intersection at `n`.
#[derive(Clone, Debug)]
pub struct CommonTimeCertificate {
    pub n: usize,
    pub witness: CylinderUnion,
    pub factors: Vec<MapSpec>,
    pub targets: Vec<CylinderUnion>,
}

#[derive(Clone, Debug)]
pub enum CommonTime {
    Found(CommonTimeCertificate),
    /// Nothing up to `n_max`. Not a disproof.
    NotFound { n_max: usize },
}

impl CommonTime {
    pub fn n(&self) -> Option<usize> {
        match self {
            CommonTime::Found(c) => Some(c.n),
            CommonTime::NotFound { .. } => None,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CertificateJson {
    pub n: usize,
    pub witness_words: Vec<String>,
    pub depth: usize,
    pub budget_used: usize,
    pub factors: Vec<String>,
    pub targets: Vec<CylinderUnionJson>,
}

impl CommonTimeCertificate {
    /// Rebuilds a point in the witness cylinder and checks every coordinate
    /// by iterating the maps.
    pub fn recheck(&self) -> Result<bool> {
        let space = self.witness.space();
        let Some(w) = self.witness.words().iter().next() else {
            return Ok(false);
        };
        let x = space.extend_to_point(w)?;
        if !self.targets[0].contains_point(&x) {
            return Ok(false);
        }
        for (map, target) in self.factors.iter().zip(&self.targets[1..]) {
            let mut y = x.clone();
            for _ in 0..self.n {
                y = apply(map, &y)?;
            }
            if !target.contains_point(&y) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> CertificateJson {
        let alphabet = self.witness.space().alphabet();
        CertificateJson {
            n: self.n,
            witness_words: self.witness.words().iter().map(|w| alphabet.format_word(w)).collect(),
            depth: self.witness.depth(),
            budget_used: self.witness.depth(),
            factors: self.factors.iter().map(MapSpec::describe).collect(),
            targets: self.targets.iter().map(CylinderUnion::to_json).collect(),
        }
    }
}

fn check_inputs(space: &ShiftSpace, factors: &[MapSpec], targets: &[CylinderUnion]) -> Result<()> {
    if targets.len() != factors.len() + 1 {
        return Err(Error::InvalidArgument(format!(
            "{} factors need {} target unions, got {}",
            factors.len(),
            factors.len() + 1,
            targets.len()
        )));
    }
    for f in factors {
        f.validate(space)?;
    }
    for u in targets {
        if u.space() != space {
            return Err(Error::SpaceMismatch);
        }
    }
    Ok(())
}

/// Smallest `n` in `1..=n_max` with `U_0 ∩ ⋂ T_i^{-n} U_i ≠ ∅`. The witness
/// is the lexicographically smallest word of the shortest length that
/// determines membership.
pub fn find_common_time(
    space: &ShiftSpace,
    factors: &[MapSpec],
    targets: &[CylinderUnion],
    n_max: usize,
) -> Result<CommonTime> {
    check_inputs(space, factors, targets)?;
    if targets.iter().any(CylinderUnion::is_empty) {
        return Ok(CommonTime::NotFound { n_max });
    }
    let mut pulled: Vec<Window> = targets[1..].iter().map(|u| Window::new(0, u.clone())).collect();
    for n in 1..=n_max {
        for (w, f) in pulled.iter_mut().zip(factors) {
            *w = pull_back(f, w).map_err(|e| e.at_n(n))?;
        }
        let mut windows = Vec::with_capacity(pulled.len() + 1);
        windows.push(Window::new(0, targets[0].clone()));
        windows.extend(pulled.iter().cloned());
        if let Some(word) = solve(space, &windows, DEFAULT_MAX_LEN).map_err(|e| e.at_n(n))? {
            return Ok(CommonTime::Found(CommonTimeCertificate {
                n,
                witness: CylinderUnion::cylinder(space, word)?,
                factors: factors.to_vec(),
                targets: targets.to_vec(),
            }));
        }
    }
    Ok(CommonTime::NotFound { n_max })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TupleResult {
    pub targets: Vec<String>,
    pub n: Option<usize>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DeltaReport {
    pub factors: Vec<String>,
    pub depth: usize,
    pub n_max: usize,
    pub tuples_total: usize,
    pub tuples_satisfied: usize,
    pub max_n: Option<usize>,
    pub all_satisfied: bool,
    pub tuples: Vec<TupleResult>,
    pub note: String,
}

/// All `(H+1)`-tuples of `items`, in lexicographic order of indices.
pub(crate) fn tuples<T: Clone>(items: &[T], arity: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                items.iter().map(move |it| {
                    let mut t = prefix.clone();
                    t.push(it.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Runs [`find_common_time`] on every tuple of depth-`depth` cylinders.
pub fn certify_delta_transitive(
    space: &ShiftSpace,
    factors: &[MapSpec],
    depth: usize,
    n_max: usize,
) -> Result<DeltaReport> {
    if depth > crate::cylinder::MAX_DEPTH {
        return Err(Error::budget("cylinder depth", crate::cylinder::MAX_DEPTH));
    }
    let words = space.admissible_words(depth)?;
    let alphabet = space.alphabet();
    let mut results = Vec::new();
    for tuple in tuples(&words, factors.len() + 1) {
        let targets = tuple
            .iter()
            .map(|w| CylinderUnion::cylinder(space, w.clone()))
            .collect::<Result<Vec<_>>>()?;
        let found = find_common_time(space, factors, &targets, n_max)?;
        results.push(TupleResult {
            targets: tuple.iter().map(|w| alphabet.format_word(w)).collect(),
            n: found.n(),
        });
    }
    let satisfied = results.iter().filter(|r| r.n.is_some()).count();
    let all = satisfied == results.len();
    let note = if all {
        format!("every tuple of depth-{depth} cylinders has a common time; deeper cylinders are not covered")
    } else {
        format!("{} tuple(s) without a common time up to n = {n_max}; this is a search bound, not a disproof", results.len() - satisfied)
    };
    Ok(DeltaReport {
        factors: factors.iter().map(MapSpec::describe).collect(),
        depth,
        n_max,
        tuples_total: results.len(),
        tuples_satisfied: satisfied,
        max_n: results.iter().filter_map(|r| r.n).max(),
        all_satisfied: all,
        tuples: results,
        note,
    })
}

/// For each target tuple, the least `n ≤ n_max` with `T_i^n x ∈ U_i` for
/// every `i`, found by iterating the maps.
pub fn diagonal_orbit_hits(
    sys: &ProductSystem,
    x: &Point,
    targets: &[Vec<CylinderUnion>],
    n_max: usize,
) -> Result<Vec<Option<usize>>> {
    if !sys.space().contains_point(x)? {
        return Err(Error::PointNotInSpace);
    }
    for t in targets {
        if t.len() != sys.arity() {
            return Err(Error::InvalidArgument(format!(
                "target tuple of length {} for a system of arity {}",
                t.len(),
                sys.arity()
            )));
        }
    }
    let mut hits = vec![None; targets.len()];
    let mut coords = vec![x.clone(); sys.arity()];
    for n in 0..=n_max {
        if n > 0 {
            for (c, f) in coords.iter_mut().zip(sys.factors()) {
                *c = apply(f, c)?;
            }
        }
        for (hit, t) in hits.iter_mut().zip(targets) {
            if hit.is_none() && t.iter().zip(&coords).all(|(u, c)| u.contains_point(c)) {
                *hit = Some(n);
            }
        }
        if hits.iter().all(Option::is_some) {
            break;
        }
    }
    Ok(hits)
}

/// A point whose diagonal orbit was steered through every target tuple.
#[derive(Clone, Debug)]
pub struct ChainedPoint {
    pub point: Point,
    pub targets: Vec<Vec<CylinderUnion>>,
    pub claimed: Vec<usize>,
}

impl ChainedPoint {
    /// Checks each claimed time by iterating the maps from the point.
    pub fn recheck(&self, sys: &ProductSystem) -> Result<bool> {
        for (tuple, &n) in self.targets.iter().zip(&self.claimed) {
            for (f, u) in sys.factors().iter().zip(tuple) {
                let mut y = self.point.clone();
                for _ in 0..n {
                    y = apply(f, &y)?;
                }
                if !u.contains_point(&y) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Greedy witness chaining: visit the depth-`depth` tuples in order and give
/// each the first `n ≤ n_limit` that is compatible with all earlier choices.
pub fn chain_transitive_point(sys: &ProductSystem, depth: usize, n_limit: usize) -> Result<ChainedPoint> {
    let space = sys.space();
    let words = space.admissible_words(depth)?;
    let mut fixed: Vec<Window> = Vec::new();
    let mut all_targets = Vec::new();
    let mut claimed = Vec::new();
    for tuple in tuples(&words, sys.arity()) {
        let targets: Vec<CylinderUnion> = tuple
            .iter()
            .map(|w: &Word| CylinderUnion::cylinder(space, w.clone()))
            .collect::<Result<_>>()?;
        let mut current: Vec<Window> = targets.iter().map(|u| Window::new(0, u.clone())).collect();
        let mut chosen = None;
        for n in 0..=n_limit {
            if n > 0 {
                for (w, f) in current.iter_mut().zip(sys.factors()) {
                    *w = pull_back(f, w).map_err(|e| e.at_n(n))?;
                }
            }
            let mut trial = fixed.clone();
            trial.extend(current.iter().cloned());
            if solve(space, &trial, DEFAULT_MAX_LEN)?.is_some() {
                chosen = Some(n);
                fixed = trial;
                break;
            }
        }
        let Some(n) = chosen else {
            return Err(Error::budget("chaining time", n_limit));
        };
        all_targets.push(targets);
        claimed.push(n);
    }
    let word = solve(space, &fixed, DEFAULT_MAX_LEN)?.unwrap_or_else(Word::empty);
    Ok(ChainedPoint {
        point: space.extend_to_point(&word)?,
        targets: all_targets,
        claimed,
    })
}
