//! Brute-force oracles and generators shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symdyn::cylinder::CylinderUnion;
use symdyn::livsic::LocallyConstantFn;
use symdyn::rational::{ratio, Q};
use symdyn::symbolic::{Point, ShiftSpace, Symbol, Word};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All words of length `len` over `k` symbols, lexicographic.
pub fn all_words(k: usize, len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..k as Symbol).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

/// Whether the infinite extensions of `w` starting at `at` lie in `u`.
pub fn word_in(u: &CylinderUnion, w: &[Symbol], at: usize) -> bool {
    u.words().contains(&Word::from(&w[at..at + u.depth()]))
}

/// The words of length `len` all of whose extensions lie in `u`.
pub fn as_word_set(u: &CylinderUnion, len: usize) -> Vec<Vec<Symbol>> {
    all_words(u.space().alphabet().size(), len)
        .into_iter()
        .filter(|w| word_in(u, w, 0))
        .collect()
}

/// Symbols forced at each position by `(offset, word)` constraints, or `None`
/// when two constraints clash. Exact for intersections of shifted cylinders
/// in a full shift.
pub fn pin(constraints: &[(usize, &[Symbol])]) -> Option<Vec<Option<Symbol>>> {
    let len = constraints.iter().map(|(o, w)| o + w.len()).max().unwrap_or(0);
    let mut out = vec![None; len];
    for (o, w) in constraints {
        for (i, &s) in w.iter().enumerate() {
            match out[o + i] {
                Some(t) if t != s => return None,
                _ => out[o + i] = Some(s),
            }
        }
    }
    Some(out)
}

/// Least `n ≤ n_max` with `[w_0] ∩ σ^{-p_1 n}[w_1] ∩ … ≠ ∅` in a full shift.
pub fn common_time_full(powers: &[usize], words: &[Vec<Symbol>], n_max: usize) -> Option<usize> {
    (1..=n_max).find(|&n| {
        let mut cs: Vec<(usize, &[Symbol])> = vec![(0, &words[0])];
        for (p, w) in powers.iter().zip(&words[1..]) {
            cs.push((p * n, w));
        }
        pin(&cs).is_some()
    })
}

/// The same question answered by listing every admissible word long enough to
/// decide it.
pub fn common_time_enumerated(space: &ShiftSpace, powers: &[usize], words: &[Vec<Symbol>], n_max: usize) -> Option<usize> {
    (1..=n_max).find(|&n| {
        let len = powers
            .iter()
            .zip(&words[1..])
            .map(|(p, w)| p * n + w.len())
            .max()
            .unwrap()
            .max(words[0].len());
        space.admissible_words(len).unwrap().iter().any(|x| {
            x.starts_with(&words[0])
                && powers
                    .iter()
                    .zip(&words[1..])
                    .all(|(p, w)| x[p * n..].starts_with(w))
        })
    })
}

pub fn random_word(rng: &mut ChaCha8Rng, k: usize, len: usize) -> Vec<Symbol> {
    (0..len).map(|_| rng.gen_range(0..k) as Symbol).collect()
}

/// A random eventually periodic point of `space`.
pub fn random_point(space: &ShiftSpace, rng: &mut ChaCha8Rng) -> Point {
    let k = space.alphabet().size();
    loop {
        let pre_len = rng.gen_range(0..8);
        let per_len = rng.gen_range(1..5);
        let pre = random_word(rng, k, pre_len);
        let per = random_word(rng, k, per_len);
        let x = Point::new(space.alphabet(), pre, per).unwrap();
        if space.contains_point(&x).unwrap() {
            return x;
        }
    }
}

/// A point of `space` sharing a random-length prefix with `x`.
pub fn nearby_point(space: &ShiftSpace, x: &Point, rng: &mut ChaCha8Rng) -> Point {
    let k = space.alphabet().size();
    loop {
        let keep = rng.gen_range(0..12);
        let mut pre = x.prefix(keep).into_inner();
        let extra = rng.gen_range(0..4);
        pre.extend(random_word(rng, k, extra));
        let per_len = rng.gen_range(1..4);
        let per = random_word(rng, k, per_len);
        let y = Point::new(space.alphabet(), pre, per).unwrap();
        if space.contains_point(&y).unwrap() {
            return y;
        }
    }
}

/// A rational with small numerator and denominator, possibly zero.
pub fn random_q(rng: &mut ChaCha8Rng) -> Q {
    ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

pub fn random_fn(space: &ShiftSpace, depth: usize, rng: &mut ChaCha8Rng) -> LocallyConstantFn {
    LocallyConstantFn::from_fn(space, depth, |_| random_q(rng)).unwrap()
}

/// `∑_{j<k} f(σ^j p)` evaluated by shifting the point itself.
pub fn orbit_sum_by_shifting(f: &LocallyConstantFn, p: &Point, k: usize) -> Q {
    (0..k).map(|j| f.eval(&p.shift(j))).sum()
}
