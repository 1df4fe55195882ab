//! Library results against brute-force enumeration.

mod common;

use common::*;
use rand::Rng;
use symdyn::cylinder::CylinderUnion;
use symdyn::delta::{counterexample_shift, find_common_time, verify_counterexample};
use symdyn::symbolic::{ShiftSpace, Symbol, Word};
use symdyn::systems::{CellularAutomaton, MapSpec};

fn words_of(u: &CylinderUnion, len: usize) -> Vec<Vec<Symbol>> {
    u.refine(len).unwrap().words().iter().map(|w| w.to_vec()).collect()
}

fn random_union(space: &ShiftSpace, depth: usize, rng: &mut rand_chacha::ChaCha8Rng) -> CylinderUnion {
    let count = rng.gen_range(0..6);
    let words: Vec<Vec<Symbol>> = (0..count).map(|_| random_word(rng, space.alphabet().size(), depth)).collect();
    CylinderUnion::new(space, depth, words.into_iter().map(Word::from)).unwrap()
}

#[test]
fn cylinder_operations_match_word_sets() {
    let full = ShiftSpace::full(2).unwrap();
    let mut rng = rng(1);
    for round in 0..40 {
        let d = if round < 4 { 12 } else { rng.gen_range(0..=6) };
        let len = d + 8;
        let u = random_union(&full, d, &mut rng);
        let v = random_union(&full, rng.gen_range(0..=d), &mut rng);
        let brute_u = as_word_set(&u, len);
        let brute_v = as_word_set(&v, len);

        let meet: Vec<_> = brute_u.iter().filter(|w| brute_v.contains(w)).cloned().collect();
        assert_eq!(words_of(&u.intersect(&v).unwrap(), len), meet);
        let mut join: Vec<_> = brute_u.iter().chain(&brute_v).cloned().collect();
        join.sort();
        join.dedup();
        assert_eq!(words_of(&u.union(&v).unwrap(), len), join);

        let p = rng.gen_range(0..=8);
        let pre: Vec<_> = all_words(2, len).into_iter().filter(|w| word_in(&u, w, p)).collect();
        assert_eq!(words_of(&u.preimage_shift_power(p).unwrap(), len), pre, "preimage p={p} d={d}");

        let q = rng.gen_range(0..=4);
        let image: Vec<_> = all_words(2, len)
            .into_iter()
            .filter(|w| all_words(2, q).iter().any(|a| word_in(&u, &[a.as_slice(), w].concat(), 0)))
            .collect();
        assert_eq!(words_of(&u.image_shift_power(q).unwrap(), len), image, "image q={q} d={d}");

        let a = rng.gen_range(1..=2);
        let rule = random_word(&mut rng, 2, 1 << (a + 1));
        let ca = CellularAutomaton::new(2, a, rule).unwrap();
        let ca_pre: Vec<_> = all_words(2, len)
            .into_iter()
            .filter(|w| word_in(&u, &ca.apply_word(w), 0))
            .collect();
        assert_eq!(words_of(&u.preimage_ca(&ca).unwrap(), len), ca_pre);
    }
}

#[test]
fn sft_unions_keep_only_admissible_words() {
    let gm = ShiftSpace::golden_mean();
    let mut rng = rng(2);
    for _ in 0..30 {
        let d = rng.gen_range(1..=6);
        let u = random_union(&gm, d, &mut rng);
        let len = d + 6;
        let brute: Vec<_> = gm
            .admissible_words(len)
            .unwrap()
            .into_iter()
            .map(|w| w.to_vec())
            .filter(|w| word_in(&u, w, 0))
            .collect();
        assert_eq!(words_of(&u, len), brute);
        let p = rng.gen_range(1..=3);
        let pre: Vec<_> = gm
            .admissible_words(len)
            .unwrap()
            .into_iter()
            .map(|w| w.to_vec())
            .filter(|w| len >= p + d && word_in(&u, w, p))
            .collect();
        if len >= p + d {
            assert_eq!(words_of(&u.preimage_shift_power(p).unwrap(), len), pre);
        }
    }
}

#[test]
fn common_times_match_pinning_oracle() {
    let full = ShiftSpace::full(2).unwrap();
    for powers in [[1, 2], [2, 1], [1, 3], [2, 3]] {
        let factors: Vec<MapSpec> = powers.iter().map(|&p| MapSpec::shift(p)).collect();
        for d in 1..=2 {
            let words = all_words(2, d);
            for a in &words {
                for b in &words {
                    for c in &words {
                        let targets: Vec<CylinderUnion> = [a, b, c]
                            .iter()
                            .map(|w| CylinderUnion::cylinder(&full, w.to_vec()).unwrap())
                            .collect();
                        let found = find_common_time(&full, &factors, &targets, 12).unwrap().n();
                        let ws = [a.clone(), b.clone(), c.clone()];
                        assert_eq!(found, common_time_full(&powers, &ws, 12));
                        if d == 1 {
                            assert_eq!(found, common_time_enumerated(&full, &powers, &ws, 6));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn golden_mean_common_times_match_enumeration() {
    let gm = ShiftSpace::golden_mean();
    let factors = [MapSpec::shift(1), MapSpec::shift(2)];
    let words: Vec<Vec<Symbol>> = gm.admissible_words(2).unwrap().into_iter().map(|w| w.to_vec()).collect();
    for a in &words {
        for b in &words {
            for c in &words {
                let targets: Vec<CylinderUnion> = [a, b, c]
                    .iter()
                    .map(|w| CylinderUnion::cylinder(&gm, w.to_vec()).unwrap())
                    .collect();
                let found = find_common_time(&gm, &factors, &targets, 6).unwrap().n();
                let ws = [a.clone(), b.clone(), c.clone()];
                assert_eq!(found, common_time_enumerated(&gm, &[1, 2], &ws, 6), "{ws:?}");
            }
        }
    }
}

/// Membership in the gap-excluded shift straight from its definition.
fn gap_excluded_by_definition(w: &[Symbol], powers: &[usize]) -> bool {
    if w.windows(2).any(|p| p == [1, 1]) {
        return false;
    }
    for i in 0..w.len() {
        for n in 1..w.len() {
            let last = i + n * powers.last().unwrap();
            if last >= w.len() {
                break;
            }
            if w[i] == 1 && powers.iter().all(|p| w[i + n * p] == 1) {
                return false;
            }
        }
    }
    true
}

#[test]
fn counterexample_language_matches_definition() {
    for powers in [vec![1, 2], vec![2, 3], vec![1, 3], vec![1, 2, 4]] {
        let (_, space) = counterexample_shift(&powers).unwrap();
        for len in 0..=13 {
            for w in all_words(2, len) {
                assert_eq!(space.admissible(&w).unwrap(), gap_excluded_by_definition(&w, &powers), "{powers:?} {w:?}");
            }
        }
    }
}

#[test]
fn counterexample_small_times_by_enumeration() {
    for powers in [[1, 2], [2, 3]] {
        let (spec, space) = counterexample_shift(&powers).unwrap();
        let report = verify_counterexample(&spec, 6).unwrap();
        for n in 1..=6 {
            let len = powers[1] * n + 1;
            let hit = space
                .admissible_words(len)
                .unwrap()
                .iter()
                .any(|w| w[0] == 1 && powers.iter().all(|p| w[p * n] == 1));
            assert!(!hit);
            assert!(report.checks[n - 1].empty);
        }
    }
}

fn trace_of_power(m: &[Vec<u8>], k: usize) -> u64 {
    let n = m.len();
    let mut acc: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect();
    for _ in 0..k {
        acc = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|l| acc[i][l] * m[l][j] as u64).sum()).collect())
            .collect();
    }
    (0..n).map(|i| acc[i][i]).sum()
}

#[test]
fn periodic_points_match_matrix_traces() {
    let mut rng = rng(3);
    for _ in 0..25 {
        let n = rng.gen_range(2..=4);
        let m: Vec<Vec<u8>> = (0..n).map(|_| (0..n).map(|_| rng.gen_bool(0.6) as u8).collect()).collect();
        let Ok(space) = ShiftSpace::from_matrix(&m) else { continue };
        for k in 1..=8 {
            assert_eq!(space.periodic_points(k).unwrap().len() as u64, trace_of_power(&m, k), "{m:?} k={k}");
        }
    }
}
