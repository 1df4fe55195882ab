//! Orbit sums of `F` over the periodic points of `𝒯 = σ^{p_1} × … × σ^{p_H}`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::livsic::functions::ProductFn;
use crate::rational::{self, Q};
use crate::symbolic::Point;
use crate::systems::{ProductPoint, ProductSystem};

/// Most product periodic points enumerated for one period.
pub const MAX_ORBITS: usize = 1 << 20;

#[derive(Clone, Debug)]
pub struct OrbitSum {
    pub point: ProductPoint,
    pub sum: Q,
}

#[derive(Clone, Debug)]
pub struct ObstructionReport {
    pub k: usize,
    pub orbits: Vec<OrbitSum>,
    pub max_abs_sum: Q,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ObstructionJson {
    pub k: usize,
    pub points: usize,
    pub nonzero: usize,
    pub max_abs_sum: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_nonzero: Option<(Vec<String>, String)>,
}

impl ObstructionReport {
    pub fn nonzero(&self) -> impl Iterator<Item = &OrbitSum> {
        self.orbits.iter().filter(|o| !o.sum.is_zero())
    }

    pub fn to_json(&self) -> ObstructionJson {
        ObstructionJson {
            k: self.k,
            points: self.orbits.len(),
            nonzero: self.nonzero().count(),
            max_abs_sum: rational::format(&self.max_abs_sum),
            first_nonzero: self.nonzero().next().map(|o| {
                (
                    o.point.coords.iter().map(ToString::to_string).collect(),
                    rational::format(&o.sum),
                )
            }),
        }
    }
}

/// `∑_{j<k} F(𝒯^j p)`.
pub fn orbit_sum(f: &ProductFn, powers: &[usize], p: &ProductPoint, k: usize) -> Q {
    (0..k)
        .map(|j| {
            let offsets: Vec<usize> = powers.iter().map(|q| q * j).collect();
            f.eval_at(&p.coords, &offsets)
        })
        .sum()
}

/// For each `k ≤ k_max`, every `p` with `𝒯^k p = p` and its orbit sum.
/// Coordinate `i` ranges over the `σ^{p_i k}`-periodic points.
pub fn obstruction_sums(f: &ProductFn, sys: &ProductSystem, k_max: usize) -> Result<Vec<ObstructionReport>> {
    let powers = sys.require_shift_powers()?;
    if f.arity() != sys.arity() {
        return Err(Error::InvalidArgument(format!(
            "function of arity {} on a system of arity {}",
            f.arity(),
            sys.arity()
        )));
    }
    if f.space() != sys.space() {
        return Err(Error::SpaceMismatch);
    }
    let mut reports = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let lists: Vec<Vec<Point>> = powers
            .iter()
            .map(|p| sys.space().periodic_points(p * k))
            .collect::<Result<_>>()
            .map_err(|e| e.at_n(k))?;
        let total = lists.iter().fold(1usize, |a, l| a.saturating_mul(l.len()));
        if total > MAX_ORBITS {
            return Err(Error::Budget {
                what: "periodic orbits",
                limit: MAX_ORBITS,
                n_reached: Some(k),
            });
        }
        let mut orbits = Vec::with_capacity(total);
        let mut idx = vec![0usize; lists.len()];
        if total > 0 {
            loop {
                let coords: Vec<Point> = idx.iter().zip(&lists).map(|(&i, l)| l[i].clone()).collect();
                let point = ProductPoint::new(coords)?;
                let sum = orbit_sum(f, &powers, &point, k);
                orbits.push(OrbitSum { point, sum });
                let mut c = lists.len();
                let done = loop {
                    if c == 0 {
                        break true;
                    }
                    c -= 1;
                    idx[c] += 1;
                    if idx[c] < lists[c].len() {
                        break false;
                    }
                    idx[c] = 0;
                };
                if done {
                    break;
                }
            }
        }
        let max_abs_sum = orbits.iter().map(|o| o.sum.abs()).max().unwrap_or_else(Q::zero);
        reports.push(ObstructionReport { k, orbits, max_abs_sum });
    }
    Ok(reports)
}
