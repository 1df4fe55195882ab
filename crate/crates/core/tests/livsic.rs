mod common;

use common::*;
use num_traits::Zero;
use rand::Rng;
use symdyn::livsic::{
    obstruction_sums, shadow, solve_coboundary, solve_product_coboundary, CoboundaryOutcome, LocallyConstantFn,
    ProductFn, ProductSolve,
};
use symdyn::rational::{int, Q};
use symdyn::symbolic::{Point, ShiftSpace};
use symdyn::systems::{MapSpec, ProductSystem};
use symdyn::Error;

fn spaces() -> [ShiftSpace; 2] {
    [ShiftSpace::full(2).unwrap(), ShiftSpace::golden_mean()]
}

/// `f = g − g∘σ^p` on every admissible word long enough to fix both sides.
fn assert_solves(f: &LocallyConstantFn, g: &LocallyConstantFn, p: usize) {
    let len = f.depth().max(g.depth() + p);
    for w in f.space().admissible_words(len).unwrap() {
        let x = f.space().extend_to_point(&w).unwrap();
        assert_eq!(f.eval(&x), g.eval(&x) - g.eval_at(&x, p), "{w:?}");
    }
}

fn all_orbit_sums_vanish(f: &LocallyConstantFn, k_max: usize) -> bool {
    let sys = ProductSystem::single(f.space().clone(), MapSpec::shift(1)).unwrap();
    let single = ProductFn::from_single(f).unwrap();
    obstruction_sums(&single, &sys, k_max)
        .unwrap()
        .iter()
        .all(|r| r.max_abs_sum.is_zero())
}

#[test]
fn solver_agrees_with_orbit_sums() {
    let mut rng = rng(21);
    for space in spaces() {
        for round in 0..60 {
            let m = rng.gen_range(1..=3);
            let f = if round % 2 == 0 {
                let g = random_fn(&space, m.max(2) - 1, &mut rng);
                LocallyConstantFn::coboundary(&g, 1).unwrap()
            } else {
                // Sparse tables hit coboundaries now and then.
                LocallyConstantFn::from_fn(&space, m, |_| if rng.gen_bool(0.3) { int(rng.gen_range(-1..=1)) } else { Q::zero() })
                    .unwrap()
            };
            let nodes = space.admissible_words(f.depth() - 1).unwrap().len();
            let vanish = all_orbit_sums_vanish(&f, nodes + 1);
            match solve_coboundary(&f, 1).unwrap() {
                CoboundaryOutcome::Coboundary(c) => {
                    assert!(vanish);
                    assert!(c.residual.is_zero());
                    assert_solves(&f, &c.g, 1);
                }
                CoboundaryOutcome::Obstruction(w) => {
                    assert!(!vanish);
                    assert_eq!(w.point.shift(w.k), w.point);
                    assert!(!w.sum.is_zero());
                    assert_eq!(orbit_sum_by_shifting(&f, &w.point, w.k), w.sum);
                }
            }
        }
    }
}

#[test]
fn potentials_are_unique_up_to_a_constant() {
    let mut rng = rng(22);
    for space in spaces() {
        for _ in 0..30 {
            let g = random_fn(&space, rng.gen_range(1..=3), &mut rng);
            let f = LocallyConstantFn::coboundary(&g, 1).unwrap();
            let CoboundaryOutcome::Coboundary(c) = solve_coboundary(&f, 1).unwrap() else {
                panic!("coboundary not recognised");
            };
            let depth = c.g.depth().max(g.depth());
            let (a, b) = (c.g.deepen(depth).unwrap(), g.deepen(depth).unwrap());
            let diffs: Vec<Q> = a.entries().iter().map(|(w, v)| *v - b.value(w)).collect();
            assert!(diffs.windows(2).all(|d| d[0] == d[1]), "{diffs:?}");
        }
    }
}

#[test]
fn second_power_of_the_shift() {
    let mut rng = rng(23);
    for space in spaces() {
        for _ in 0..20 {
            let g = random_fn(&space, rng.gen_range(1..=2), &mut rng);
            let f = LocallyConstantFn::coboundary(&g, 2).unwrap();
            let CoboundaryOutcome::Coboundary(c) = solve_coboundary(&f, 2).unwrap() else {
                panic!("σ² coboundary not recognised");
            };
            assert_solves(&f, &c.g, 2);
            let bumped = f.with_entry(&f.entries()[0].0, f.entries()[0].1 + int(1)).unwrap();
            match solve_coboundary(&bumped, 2).unwrap() {
                CoboundaryOutcome::Obstruction(w) => {
                    assert_eq!(w.point.shift(2 * w.k), w.point);
                    let direct: Q = (0..w.k).map(|j| bumped.eval(&w.point.shift(2 * j))).sum();
                    assert_eq!(direct, w.sum);
                    assert!(!direct.is_zero());
                }
                CoboundaryOutcome::Coboundary(_) => panic!("bumped table still solved"),
            }
        }
    }
}

#[test]
fn product_witnesses_recheck() {
    let full = ShiftSpace::full(2).unwrap();
    let mut rng = rng(24);
    for _ in 0..20 {
        let fs = [random_fn(&full, 1, &mut rng), random_fn(&full, 2, &mut rng)];
        let f = ProductFn::tensor(&fs).unwrap();
        match solve_product_coboundary(&f, &[1, 2]).unwrap() {
            ProductSolve::Obstruction(w) => {
                let direct: Q = (0..w.k)
                    .map(|j| fs[0].eval(&w.point.coords[0].shift(j)) * fs[1].eval(&w.point.coords[1].shift(2 * j)))
                    .sum();
                assert_eq!(direct, w.sum);
                assert!(!direct.is_zero());
            }
            ProductSolve::Coboundary(c) => assert!(c.residual.is_zero()),
        }
    }
}

#[test]
fn gap_shift_is_not_finite_type() {
    let (_, space) = symdyn::delta::counterexample_shift(&[1, 2]).unwrap();
    let f = LocallyConstantFn::first_symbol(&space).unwrap();
    assert!(matches!(solve_coboundary(&f, 1), Err(Error::NotFiniteType)));
}

#[test]
fn shadowing_holds_on_random_returns() {
    let mut rng = rng(25);
    for k_alpha in [2usize, 3] {
        let space = ShiftSpace::full(k_alpha).unwrap();
        let mut checked = 0;
        while checked < 500 {
            let k = rng.gen_range(1..=8);
            let body = random_word(&mut rng, k_alpha, k);
            // Repeat the first k symbols a little, then go anywhere.
            let reps = rng.gen_range(1..=3);
            let mut pre: Vec<u8> = body.iter().cycle().take(k * reps + rng.gen_range(0..k)).copied().collect();
            let tail_len = rng.gen_range(0..4);
            pre.extend(random_word(&mut rng, k_alpha, tail_len));
            let per_len = rng.gen_range(1..=3);
            let x = Point::new(space.alphabet(), pre, random_word(&mut rng, k_alpha, per_len)).unwrap();
            match shadow(&space, &x, k) {
                Ok(r) => {
                    assert!(r.verified, "{x} k={k}");
                    assert_eq!(r.p.shift(k), r.p);
                    checked += 1;
                }
                Err(Error::ClosingPrecondition { .. }) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
}
