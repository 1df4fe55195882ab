//! Bounded sums versus coboundaries: evaluates the four equivalent statements
//! for `F = f_1 ⊗ … ⊗ f_H` under `𝒯 = σ^{p_1} × … × σ^{p_H}` at finite budgets.
//!
//! (i) diagonal sums over points of `U`, (ii) periodic orbit sums,
//! (iii) a coboundary solve on the product, (iv) sums over arbitrary product
//! points.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cylinder::CylinderUnion;
use crate::error::{Error, Result};
use crate::livsic::coboundary::{cycle_length_bound, solve_product_coboundary, SolveJson};
use crate::livsic::functions::{LocallyConstantFn, ProductFn};
use crate::livsic::obstruction::{obstruction_sums, ObstructionJson};
use crate::livsic::sums::{orbit_drift, product_sums};
use crate::rational::{self, Q};
use crate::symbolic::{Point, ShiftSpace, Symbol};
use crate::systems::{diagonal, ProductPoint, ProductSystem};

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct StatementVerdict {
    pub status: Status,
    /// A proof at this budget, not just evidence.
    pub definitive: bool,
    pub detail: String,
}

impl StatementVerdict {
    fn new(status: Status, definitive: bool, detail: impl Into<String>) -> Self {
        StatementVerdict {
            status,
            definitive,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub horizon: usize,
    pub k_max: usize,
    /// Random points per sample set, on top of the deterministic ones.
    pub samples: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            horizon: 1000,
            k_max: 4,
            samples: 16,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SampleSummary {
    pub points: usize,
    pub sup_abs: String,
    pub drifting: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_drifting: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ExperimentReport {
    pub powers: Vec<usize>,
    pub horizon: usize,
    pub k_max: usize,
    pub seed: u64,
    pub cycle_length_bound: Option<usize>,
    pub i: StatementVerdict,
    pub ii: StatementVerdict,
    pub iii: StatementVerdict,
    pub iv: StatementVerdict,
    pub diagonal: SampleSummary,
    pub off_diagonal: SampleSummary,
    pub obstructions: Vec<ObstructionJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solve: Option<SolveJson>,
    /// No two definitive verdicts disagree.
    pub consistent: bool,
    /// `"pass"` or `"fail"` when some verdict is definitive, else `"open"`.
    pub pattern: String,
}

impl ExperimentReport {
    pub fn verdicts(&self) -> [&StatementVerdict; 4] {
        [&self.i, &self.ii, &self.iii, &self.iv]
    }
}

fn random_word(rng: &mut ChaCha8Rng, k: usize, len: usize) -> Vec<Symbol> {
    (0..len).map(|_| rng.gen_range(0..k) as Symbol).collect()
}

/// A random eventually periodic point of `space` starting with `prefix`.
/// Falls back to the canonical extension when sampling keeps missing.
fn random_point(space: &ShiftSpace, prefix: &[Symbol], rng: &mut ChaCha8Rng) -> Result<Point> {
    let k = space.alphabet().size();
    for _ in 0..64 {
        let mut pre = prefix.to_vec();
        let extra = rng.gen_range(0..=6);
        pre.extend(random_word(rng, k, extra));
        let per_len = rng.gen_range(1..=4);
        let per = random_word(rng, k, per_len);
        let x = Point::new(space.alphabet(), pre, per)?;
        if space.contains_point(&x)? {
            return Ok(x);
        }
    }
    space.extend_to_point(prefix)
}

/// Deterministic points of `U`: `w c^∞` where admissible, and the canonical
/// extension of each word, followed by `extra` random ones.
fn sample_cylinder(u: &CylinderUnion, extra: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Point>> {
    let space = u.space();
    let mut out: Vec<Point> = Vec::new();
    for w in u.words() {
        for c in 0..space.alphabet().size() as Symbol {
            let x = Point::new(space.alphabet(), w.to_vec(), vec![c])?;
            if space.contains_point(&x)? {
                out.push(x);
            }
        }
        out.push(space.extend_to_point(w)?);
    }
    let words: Vec<_> = u.words().iter().collect();
    if !words.is_empty() {
        for _ in 0..extra {
            let w = words[rng.gen_range(0..words.len())];
            out.push(random_point(space, w, rng)?);
        }
    }
    out.sort_by_key(|x| x.to_string());
    out.dedup();
    Ok(out)
}

fn summarize(f: &ProductFn, sys: &ProductSystem, powers: &[usize], points: &[ProductPoint], horizon: usize) -> Result<SampleSummary> {
    let mut sup = Q::zero();
    let mut drifting = 0;
    let mut first = None;
    for x in points {
        let t = product_sums(f, sys, x, horizon)?;
        if t.sup_abs > sup {
            sup = t.sup_abs;
        }
        if !orbit_drift(f, powers, x).0.is_zero() {
            drifting += 1;
            first.get_or_insert_with(|| x.coords.iter().map(ToString::to_string).collect());
        }
    }
    Ok(SampleSummary {
        points: points.len(),
        sup_abs: rational::format(&sup),
        drifting,
        first_drifting: first,
    })
}

fn sums_verdict(s: &SampleSummary, horizon: usize, what: &str) -> StatementVerdict {
    if s.drifting > 0 {
        StatementVerdict::new(
            Status::Fail,
            true,
            format!("{} of {} {what} points drift by a nonzero amount per period, so S_n is unbounded", s.drifting, s.points),
        )
    } else if s.points == 0 {
        StatementVerdict::new(Status::Inconclusive, false, format!("no {what} points sampled"))
    } else {
        StatementVerdict::new(
            Status::Pass,
            false,
            format!("sup |S_n| = {} for n ≤ {horizon} over {} {what} points, none drifting", s.sup_abs, s.points),
        )
    }
}

/// Runs all four checks on `F = ⊗ f_i` and compares their verdicts.
pub fn equivalence_experiment(
    fs: &[LocallyConstantFn],
    sys: &ProductSystem,
    u: &CylinderUnion,
    cfg: ExperimentConfig,
) -> Result<ExperimentReport> {
    let powers = sys.require_shift_powers()?;
    if fs.len() != sys.arity() {
        return Err(Error::InvalidArgument("one function per factor".into()));
    }
    if u.space() != sys.space() {
        return Err(Error::SpaceMismatch);
    }
    let f = ProductFn::tensor(fs)?;
    let space = sys.space();
    let h = sys.arity();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let diag_points: Vec<ProductPoint> = sample_cylinder(u, cfg.samples, &mut rng)?
        .into_iter()
        .map(|x| if h == 1 { ProductPoint::new(vec![x]) } else { diagonal(&x, h) })
        .collect::<Result<_>>()?;
    let diag = summarize(&f, sys, &powers, &diag_points, cfg.horizon)?;
    let i = sums_verdict(&diag, cfg.horizon, "diagonal");

    let mut off_points = Vec::new();
    let constants: Vec<Point> = (0..space.alphabet().size() as Symbol)
        .filter_map(|c| Point::constant(space.alphabet(), c).ok())
        .filter(|x| space.contains_point(x).unwrap_or(false))
        .collect();
    if !constants.is_empty() {
        let mut idx = vec![0usize; h];
        'tuples: loop {
            off_points.push(ProductPoint::new(idx.iter().map(|&j| constants[j].clone()).collect())?);
            for c in (0..h).rev() {
                idx[c] += 1;
                if idx[c] < constants.len() {
                    continue 'tuples;
                }
                idx[c] = 0;
            }
            break;
        }
    }
    for _ in 0..cfg.samples {
        let coords = (0..h).map(|_| random_point(space, &[], &mut rng)).collect::<Result<_>>()?;
        off_points.push(ProductPoint::new(coords)?);
    }
    let off = summarize(&f, sys, &powers, &off_points, cfg.horizon)?;
    let iv = sums_verdict(&off, cfg.horizon, "product");

    let bound = cycle_length_bound(&f, &powers).ok();
    let (ii, obstructions) = match obstruction_sums(&f, sys, cfg.k_max) {
        Ok(reports) => {
            let json: Vec<ObstructionJson> = reports.iter().map(|r| r.to_json()).collect();
            let verdict = match reports.iter().find(|r| !r.max_abs_sum.is_zero()) {
                Some(r) => StatementVerdict::new(
                    Status::Fail,
                    true,
                    format!("nonzero orbit sum at period {} (max |sum| = {})", r.k, rational::format(&r.max_abs_sum)),
                ),
                None => {
                    let definitive = bound.is_some_and(|b| cfg.k_max >= b);
                    StatementVerdict::new(
                        Status::Pass,
                        definitive,
                        match bound {
                            Some(b) => format!("all orbit sums vanish for k ≤ {}; cycle length bound {b}", cfg.k_max),
                            None => format!("all orbit sums vanish for k ≤ {}", cfg.k_max),
                        },
                    )
                }
            };
            (verdict, json)
        }
        Err(e @ Error::Budget { .. }) => (StatementVerdict::new(Status::Inconclusive, false, e.to_string()), Vec::new()),
        Err(e) => return Err(e),
    };

    let (iii, solve) = match solve_product_coboundary(&f, &powers) {
        Ok(s) => {
            let verdict = if s.is_coboundary() {
                StatementVerdict::new(Status::Pass, true, "potential recovered with residual 0")
            } else {
                StatementVerdict::new(Status::Fail, true, "closed walk with nonzero sum found")
            };
            (verdict, Some(s.to_json()))
        }
        Err(e @ (Error::Reducible | Error::NotFiniteType | Error::Budget { .. })) => {
            (StatementVerdict::new(Status::Inconclusive, false, e.to_string()), None)
        }
        Err(e) => return Err(e),
    };

    let definitive: Vec<Status> = [&i, &ii, &iii, &iv]
        .iter()
        .filter(|v| v.definitive)
        .map(|v| v.status)
        .collect();
    let consistent = definitive.windows(2).all(|w| w[0] == w[1]);
    let pattern = match definitive.first() {
        _ if !consistent => "mixed",
        Some(Status::Pass) => "pass",
        Some(Status::Fail) => "fail",
        _ => "open",
    };
    Ok(ExperimentReport {
        powers,
        horizon: cfg.horizon,
        k_max: cfg.k_max,
        seed: cfg.seed,
        cycle_length_bound: bound,
        i,
        ii,
        iii,
        iv,
        diagonal: diag,
        off_diagonal: off,
        obstructions,
        solve,
        consistent,
        pattern: pattern.into(),
    })
}

/// `sup |V|` for the telescoping bound `|S_n| ≤ 2 sup |V|`.
pub fn telescoping_bound(v: &ProductFn) -> Q {
    v.sup_abs() * Q::from_integer(2.into())
}

/// Largest `|S_n|` along any of `points` (diagonal) for `n ≤ horizon`.
pub fn max_diagonal_sum(f: &ProductFn, sys: &ProductSystem, points: &[Point], horizon: usize) -> Result<Q> {
    let h = sys.arity();
    let mut sup = Q::zero();
    for x in points {
        let p = if h == 1 { ProductPoint::new(vec![x.clone()])? } else { diagonal(x, h)? };
        let t = product_sums(f, sys, &p, horizon)?;
        if t.sup_abs.abs() > sup {
            sup = t.sup_abs;
        }
    }
    Ok(sup)
}
