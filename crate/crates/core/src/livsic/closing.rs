//! Closing property: approximate returns `d(x, T^k x) < δ0` are shadowed by
//! the periodic point `p = (x_0…x_{qk−1})^∞` with
//! `d(T^i x, T^i p) ≤ D d(x, T^k x) e^{−δ min(i, k−i)}`, where `T = σ^q`.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolic::{distance_from_index, first_disagreement_shifted, Point, ShiftSpace, Symbol};

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct ClosingConstants {
    #[serde(rename = "D")]
    pub d: f64,
    pub delta: f64,
    pub delta0: f64,
}

impl Default for ClosingConstants {
    fn default() -> Self {
        ClosingConstants {
            d: 2.0,
            delta: std::f64::consts::LN_2,
            delta0: 0.5,
        }
    }
}

impl ClosingConstants {
    pub fn new(d: f64, delta: f64, delta0: f64) -> Result<Self> {
        if !(d > 0.0 && delta > 0.0 && delta0 > 0.0) {
            return Err(Error::InvalidArgument("closing constants must be positive".into()));
        }
        Ok(ClosingConstants { d, delta, delta0 })
    }

    /// Whether `2^{−s} ≤ D 2^{−r} e^{−δ m}`, indices `None` meaning distance 0.
    /// Also returns the ratio of the two sides.
    fn check(&self, r: Option<usize>, s: Option<usize>, m: usize) -> (bool, f64) {
        let Some(s) = s else { return (true, 0.0) };
        let Some(r) = r else { return (false, f64::INFINITY) };
        let log_ratio = (r as f64 - s as f64) * std::f64::consts::LN_2 + self.delta * m as f64 - self.d.ln();
        (log_ratio <= 1e-12, log_ratio.exp())
    }

    fn precondition(&self, r: Option<usize>) -> bool {
        distance_from_index(r) < self.delta0
    }
}

/// Componentwise `(max D, min δ, min δ0)`.
pub fn product_closing(cs: &[ClosingConstants]) -> Result<ClosingConstants> {
    let first = cs.first().ok_or_else(|| Error::InvalidArgument("no closing constants".into()))?;
    Ok(cs.iter().fold(*first, |acc, c| ClosingConstants {
        d: acc.d.max(c.d),
        delta: acc.delta.min(c.delta),
        delta0: acc.delta0.min(c.delta0),
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShadowResult {
    pub p: Point,
    pub verified: bool,
    pub constants: ClosingConstants,
    pub distance: f64,
    /// `d(T^i x, T^i p)` for `0 ≤ i ≤ k`.
    pub errors: Vec<f64>,
}

/// Shadow an approximate `σ`-return with the default constants.
pub fn shadow(space: &ShiftSpace, x: &Point, k: usize) -> Result<ShadowResult> {
    shadow_with(space, x, k, 1, ClosingConstants::default())
}

/// Shadow an approximate return of `T = σ^q` after `k` steps.
pub fn shadow_with(space: &ShiftSpace, x: &Point, k: usize, q: usize, c: ClosingConstants) -> Result<ShadowResult> {
    if k == 0 || q == 0 {
        return Err(Error::InvalidArgument("k and q must be positive".into()));
    }
    if !space.contains_point(x)? {
        return Err(Error::PointNotInSpace);
    }
    let r = first_disagreement_shifted(x, 0, x, q * k);
    if !c.precondition(r) {
        return Err(Error::ClosingPrecondition {
            distance: distance_from_index(r),
            delta0: c.delta0,
        });
    }
    let p = Point::periodic(x.alphabet(), x.prefix(q * k).into_inner())?;
    let mut verified = space.contains_point(&p)?;
    let mut errors = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let s = first_disagreement_shifted(x, q * i, &p, q * i);
        errors.push(distance_from_index(s));
        verified &= c.check(r, s, i.min(k - i)).0;
    }
    Ok(ShadowResult {
        p,
        verified,
        constants: c,
        distance: distance_from_index(r),
        errors,
    })
}

/// `u v^∞` with `u` and `v` given as slices, for the exhaustive sweeps.
struct Seq<'a> {
    pre: &'a [Symbol],
    per: &'a [Symbol],
}

impl Seq<'_> {
    #[inline]
    fn at(&self, j: usize) -> Symbol {
        if j < self.pre.len() {
            self.pre[j]
        } else {
            self.per[(j - self.pre.len()) % self.per.len()]
        }
    }

    /// First `j` with `x_{a+j} ≠ f(j)`, scanning `j < horizon`.
    #[inline]
    fn diff(&self, a: usize, horizon: usize, f: impl Fn(usize) -> Symbol) -> Option<usize> {
        (0..horizon).find(|&j| self.at(a + j) != f(j))
    }

    /// `(r, [s_0, …, s_k])` for `T = σ^q`: first disagreement of `x` with
    /// `T^k x`, and of `T^i x` with `T^i p`.
    fn signature(&self, q: usize, k: usize) -> (Option<usize>, Vec<Option<usize>>) {
        let n = q * k;
        let tail = self.pre.len() + self.per.len();
        let r = self.diff(0, tail, |j| self.at(j + n));
        let horizon = self.pre.len() + n + n.lcm(&self.per.len());
        let s = (0..=k)
            .map(|i| self.diff(q * i, horizon, |j| self.at((q * i + j) % n)))
            .collect();
        (r, s)
    }
}

fn all_words(alphabet_size: usize, len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..alphabet_size as Symbol).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

/// Every point `u v^∞` with `|u| = preperiod` and `1 ≤ |v| ≤ max_period`.
/// Unrolling the period shows this covers every preperiod `≤ preperiod`.
fn sweep_points(alphabet_size: usize, preperiod: usize, max_period: usize) -> (Vec<Vec<Symbol>>, Vec<Vec<Symbol>>) {
    let pres = all_words(alphabet_size, preperiod);
    let pers = (1..=max_period).flat_map(|l| all_words(alphabet_size, l)).collect();
    (pres, pers)
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SweepConfig {
    pub preperiod: usize,
    pub max_period: usize,
    pub k_max: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            preperiod: 10,
            max_period: 3,
            k_max: 8,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FactorValidation {
    pub alphabet_size: usize,
    pub power: usize,
    pub constants: ClosingConstants,
    pub points: u64,
    /// `(x, k)` pairs meeting the precondition.
    pub cases: u64,
    pub violations: u64,
    /// Largest observed left side over right side.
    pub worst_ratio: f64,
}

/// Exhaustive check of the shadowing inequality for `σ^q` on the full shift.
pub fn validate_factor(alphabet_size: usize, power: usize, c: ClosingConstants, cfg: SweepConfig) -> Result<FactorValidation> {
    if alphabet_size < 2 || power == 0 {
        return Err(Error::InvalidArgument("need an alphabet of size ≥ 2 and a positive power".into()));
    }
    let (pres, pers) = sweep_points(alphabet_size, cfg.preperiod, cfg.max_period);
    let mut out = FactorValidation {
        alphabet_size,
        power,
        constants: c,
        points: (pres.len() * pers.len()) as u64,
        cases: 0,
        violations: 0,
        worst_ratio: 0.0,
    };
    for pre in &pres {
        for per in &pers {
            let x = Seq { pre, per };
            for k in 1..=cfg.k_max {
                // Cheap precondition filter before computing the signature.
                let n = power * k;
                let r = x.diff(0, pre.len() + per.len(), |j| x.at(j + n));
                if !c.precondition(r) {
                    continue;
                }
                let (r, s) = x.signature(power, k);
                out.cases += 1;
                let mut bad = false;
                for (i, &si) in s.iter().enumerate() {
                    let (ok, ratio) = c.check(r, si, i.min(k - i));
                    bad |= !ok;
                    out.worst_ratio = out.worst_ratio.max(ratio);
                }
                out.violations += bad as u64;
            }
        }
    }
    Ok(out)
}

/// First `(D, δ)` on a doubling/halving grid that passes, starting from the
/// defaults.
pub fn search_constants(alphabet_size: usize, power: usize, cfg: SweepConfig) -> Result<Option<FactorValidation>> {
    let base = ClosingConstants::default();
    for d_exp in 0..6 {
        for delta_exp in 0..6 {
            let c = ClosingConstants::new(
                base.d * f64::from(1u32 << d_exp),
                base.delta / f64::from(1u32 << delta_exp),
                base.delta0,
            )?;
            let v = validate_factor(alphabet_size, power, c, cfg)?;
            if v.violations == 0 {
                return Ok(Some(v));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ProductValidation {
    pub alphabet_size: usize,
    pub powers: Vec<usize>,
    pub constants: ClosingConstants,
    pub signatures: u64,
    pub cases: u64,
    pub violations: u64,
    pub worst_ratio: f64,
}

type Signature = (Option<usize>, Vec<Option<usize>>);

fn min_index(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Exhaustive check for `σ^{p_1} × … × σ^{p_H}` under the max metric. The
/// product distance only depends on the per-coordinate disagreement indices,
/// so tuples are grouped by their combined index vector with multiplicity.
pub fn validate_product(
    alphabet_size: usize,
    powers: &[usize],
    c: ClosingConstants,
    cfg: SweepConfig,
) -> Result<ProductValidation> {
    if powers.is_empty() || powers.contains(&0) || alphabet_size < 2 {
        return Err(Error::InvalidArgument("need positive powers and an alphabet of size ≥ 2".into()));
    }
    let (pres, pers) = sweep_points(alphabet_size, cfg.preperiod, cfg.max_period);
    let mut out = ProductValidation {
        alphabet_size,
        powers: powers.to_vec(),
        constants: c,
        signatures: 0,
        cases: 0,
        violations: 0,
        worst_ratio: 0.0,
    };
    for k in 1..=cfg.k_max {
        let mut combined: BTreeMap<Signature, u64> = BTreeMap::new();
        for (h, &q) in powers.iter().enumerate() {
            let mut sigs: BTreeMap<Signature, u64> = BTreeMap::new();
            for pre in &pres {
                for per in &pers {
                    *sigs.entry(Seq { pre, per }.signature(q, k)).or_default() += 1;
                }
            }
            combined = if h == 0 {
                sigs
            } else {
                let mut next = BTreeMap::new();
                for ((ra, sa), ma) in &combined {
                    for ((rb, sb), mb) in &sigs {
                        let s = sa.iter().zip(sb).map(|(&x, &y)| min_index(x, y)).collect();
                        *next.entry((min_index(*ra, *rb), s)).or_default() += ma * mb;
                    }
                }
                next
            };
        }
        out.signatures += combined.len() as u64;
        for ((r, s), m) in &combined {
            if !c.precondition(*r) {
                continue;
            }
            out.cases += m;
            let mut bad = false;
            for (i, &si) in s.iter().enumerate() {
                let (ok, ratio) = c.check(*r, si, i.min(k - i));
                bad |= !ok;
                out.worst_ratio = out.worst_ratio.max(ratio);
            }
            if bad {
                out.violations += m;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ClosingManifest {
    pub metric: String,
    pub sweep: SweepConfig,
    pub factors: Vec<FactorValidation>,
    pub product: ProductValidation,
}

impl ClosingManifest {
    pub fn violations(&self) -> u64 {
        self.factors.iter().map(|f| f.violations).sum::<u64>() + self.product.violations
    }

    /// Accepted constants for `σ^q` on the full `k`-shift.
    pub fn constants_for(&self, alphabet_size: usize, power: usize) -> Option<ClosingConstants> {
        self.factors
            .iter()
            .find(|f| f.alphabet_size == alphabet_size && f.power == power)
            .map(|f| f.constants)
    }
}

/// Validates `σ` on the full 2- and 3-shifts and `σ²` on the full 2-shift,
/// then the `(σ, σ²)` product with the combined constants.
pub fn closing_manifest(cfg: SweepConfig) -> Result<ClosingManifest> {
    let mut factors = Vec::new();
    for (a, q) in [(2, 1), (3, 1), (2, 2)] {
        let v = validate_factor(a, q, ClosingConstants::default(), cfg)?;
        let v = if v.violations == 0 {
            v
        } else {
            search_constants(a, q, cfg)?.unwrap_or(v)
        };
        factors.push(v);
    }
    let parts: Vec<ClosingConstants> = factors
        .iter()
        .filter(|f| f.alphabet_size == 2)
        .map(|f| f.constants)
        .collect();
    let product = validate_product(2, &[1, 2], product_closing(&parts)?, cfg)?;
    Ok(ClosingManifest {
        metric: "d(x,y) = 2^-k, k the first disagreement".into(),
        sweep: cfg,
        factors,
        product,
    })
}
