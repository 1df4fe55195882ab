//! The binary shift on which `σ^{p_1} × … × σ^{p_t}` is not Δ-transitive.
//!
//! Its points have no `11` and never carry a one at all of `i, i+n·p_1, …,
//! i+n·p_t`. Equivalently, no factor `1 u_1 1 u_2 … 1 u_t 1` has gap vector
//! `n·(p_1, p_2−p_1, …, p_t−p_{t−1}) − (1, …, 1)` for `n ≥ n0`; smaller `n`
//! would put two ones side by side.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symbolic::{Alphabet, Point, ShiftSpace, Symbol};

/// Longest word `verify_counterexample` will build.
pub const MAX_WORD_LEN: usize = 4096;

/// Lengths up to which shift invariance and prolongability are enumerated.
pub const INVARIANCE_LEN: usize = 12;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CounterexampleSpec {
    pub powers: Vec<usize>,
    pub n0: usize,
    pub t: usize,
}

/// `min{n ≥ 1 : min_i n(p_{i+1} − p_i) − 1 ≥ 1}`.
pub fn n0_for(powers: &[usize]) -> usize {
    let dmin = powers.windows(2).map(|w| w[1] - w[0]).min().unwrap_or(1);
    (1..).find(|n| n * dmin >= 2).unwrap()
}

pub fn counterexample_shift(powers: &[usize]) -> Result<(CounterexampleSpec, ShiftSpace)> {
    let space = ShiftSpace::gap_excluded(powers.to_vec())?;
    let spec = CounterexampleSpec {
        powers: powers.to_vec(),
        n0: n0_for(powers),
        t: powers.len(),
    };
    Ok((spec, space))
}

impl CounterexampleSpec {
    pub fn is_consistent(&self) -> bool {
        self.t == self.powers.len() && self.n0 == n0_for(&self.powers)
    }

    fn steps(&self) -> Vec<usize> {
        let mut prev = 0;
        self.powers
            .iter()
            .map(|&p| {
                let d = p - prev;
                prev = p;
                d
            })
            .collect()
    }

    /// Is `gaps` of the form `n·(p_1, p_2−p_1, …) − 1` for some `n ≥ n0`?
    /// Only `n` up to `(max gap + 1) / min step + 1` can match.
    pub fn excluded_gaps(&self, gaps: &[usize]) -> bool {
        let steps = self.steps();
        if gaps.len() != steps.len() {
            return false;
        }
        let min_step = *steps.iter().min().unwrap();
        let max_gap = *gaps.iter().max().unwrap();
        let bound = (max_gap + 1) / min_step + 1;
        (self.n0..=bound).any(|n| gaps.iter().zip(&steps).all(|(&g, &d)| g + 1 == n * d))
    }

    /// Membership straight from the gap-vector description: no `11`, and no
    /// chain of `t + 1` ones whose gaps form an excluded vector.
    pub fn admits(&self, w: &[Symbol]) -> bool {
        if w.iter().any(|&s| s > 1) || w.windows(2).any(|p| p == [1, 1]) {
            return false;
        }
        let ones: Vec<usize> = (0..w.len()).filter(|&i| w[i] == 1).collect();
        let mut gaps = Vec::with_capacity(self.t);
        !(0..ones.len()).any(|start| self.chain(&ones, start, &mut gaps))
    }

    fn chain(&self, ones: &[usize], from: usize, gaps: &mut Vec<usize>) -> bool {
        if gaps.len() == self.t {
            return self.excluded_gaps(gaps);
        }
        let steps = self.steps();
        for next in from + 1..ones.len() {
            let g = ones[next] - ones[from] - 1;
            gaps.push(g);
            // Keep only prefixes that some admissible n can still complete.
            let n_ok = (g + 1).is_multiple_of(steps[gaps.len() - 1]) && {
                let n = (g + 1) / steps[gaps.len() - 1];
                n >= self.n0 && gaps.iter().zip(&steps).all(|(&h, &d)| h + 1 == n * d)
            };
            if n_ok && self.chain(ones, next, gaps) {
                gaps.pop();
                return true;
            }
            gaps.pop();
        }
        false
    }

    /// `1 0^{n p_1 − 1} 1 0^{n(p_2−p_1) − 1} 1 …`, the only shape a point of
    /// `C(1) ∩ ⋂ σ^{-p_i n} C(1)` could start with once other ones are erased.
    pub fn forced_word(&self, n: usize) -> Vec<Symbol> {
        let len = self.powers.last().unwrap() * n + 1;
        let mut w = vec![0; len];
        w[0] = 1;
        for p in &self.powers {
            w[p * n] = 1;
        }
        w
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TimeCheck {
    pub n: usize,
    pub word_length: usize,
    pub empty: bool,
    pub forced_word_admissible: bool,
    pub nodes: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CounterexampleReport {
    pub spec: CounterexampleSpec,
    pub n_check: usize,
    pub checks: Vec<TimeCheck>,
    pub all_empty: bool,
    pub zero_point_admissible: bool,
    pub isolated_ones_admissible: bool,
    pub shift_invariant_up_to: usize,
    pub shift_invariant: bool,
}

impl CounterexampleReport {
    pub fn verified(&self) -> bool {
        self.all_empty
            && self.checks.iter().all(|c| !c.forced_word_admissible)
            && self.zero_point_admissible
            && self.isolated_ones_admissible
            && self.shift_invariant
    }
}

/// Enumerates the admissible words of length `p_t·n + 1` that have a one at
/// `0` and at every `p_i·n`. Since erasing ones keeps a word admissible, a
/// branch is cut as soon as its prefix plus the remaining pinned ones is
/// already forbidden.
fn search_pinned(space: &ShiftSpace, pins: &[bool], buf: &mut Vec<Symbol>, nodes: &mut usize) -> bool {
    *nodes += 1;
    let pos = buf.len();
    if pos == pins.len() {
        return true;
    }
    let mut bound = buf.clone();
    bound.extend(pins[pos..].iter().map(|&p| p as Symbol));
    if !space.accepts(&bound) {
        return false;
    }
    let choices: &[Symbol] = if pins[pos] { &[1] } else { &[0, 1] };
    for &s in choices {
        if space.extends(buf, s) {
            buf.push(s);
            if search_pinned(space, pins, buf, nodes) {
                return true;
            }
            buf.pop();
        }
    }
    false
}

pub fn verify_counterexample(spec: &CounterexampleSpec, n_check: usize) -> Result<CounterexampleReport> {
    if !spec.is_consistent() {
        return Err(Error::InvalidArgument(format!(
            "stored n0 = {} does not match the powers (expected {})",
            spec.n0,
            n0_for(&spec.powers)
        )));
    }
    let space = ShiftSpace::gap_excluded(spec.powers.clone())?;
    let last = *spec.powers.last().unwrap();
    let mut checks = Vec::with_capacity(n_check);
    for n in 1..=n_check {
        let len = last * n + 1;
        if len > MAX_WORD_LEN {
            return Err(Error::Budget {
                what: "counterexample word length",
                limit: MAX_WORD_LEN,
                n_reached: Some(n),
            });
        }
        let forced = spec.forced_word(n);
        let pins: Vec<bool> = forced.iter().map(|&s| s == 1).collect();
        let mut nodes = 0;
        let found = search_pinned(&space, &pins, &mut Vec::with_capacity(len), &mut nodes);
        checks.push(TimeCheck {
            n,
            word_length: len,
            empty: !found,
            forced_word_admissible: spec.admits(&forced) || space.accepts(&forced),
            nodes,
        });
    }
    let alphabet = Alphabet::binary();
    let zero = Point::constant(alphabet, 0)?;
    let zero_point_admissible = space.contains_point(&zero)?;
    let isolated_ones_admissible = (0..INVARIANCE_LEN).all(|a| {
        (0..INVARIANCE_LEN - a).all(|b| {
            let mut w = vec![0; a];
            w.push(1);
            w.extend(std::iter::repeat_n(0, b));
            space.accepts(&w) && spec.admits(&w)
        })
    });
    let mut shift_invariant = true;
    for len in 1..=INVARIANCE_LEN {
        let longer = space.admissible_words(len + 1)?;
        let words = space.admissible_words(len)?;
        let tails_ok = longer.iter().all(|w| space.accepts(&w[1..]));
        let extend_ok = words.iter().all(|w| (0..2).any(|s| space.extends(w, s)));
        shift_invariant &= tails_ok && extend_ok;
    }
    Ok(CounterexampleReport {
        spec: spec.clone(),
        n_check,
        all_empty: checks.iter().all(|c| c.empty),
        checks,
        zero_point_admissible,
        isolated_ones_admissible,
        shift_invariant_up_to: INVARIANCE_LEN,
        shift_invariant,
    })
}
