mod common;

use symdyn::cylinder::CylinderUnion;
use symdyn::delta::{
    certify_delta_transitive, chain_transitive_point, counterexample_shift, diagonal_orbit_hits, lemma1_refine,
    validate_trace, verify_counterexample,
};
use symdyn::symbolic::ShiftSpace;
use symdyn::systems::{MapSpec, ProductSystem};

#[test]
fn counterexample_is_stable_when_checking_further() {
    let (spec, _) = counterexample_shift(&[1, 2]).unwrap();
    let short = verify_counterexample(&spec, 30).unwrap();
    let long = verify_counterexample(&spec, 60).unwrap();
    assert!(short.verified() && long.verified());
    assert_eq!(short.checks[..], long.checks[..30]);
}

#[test]
fn counterexample_fails_certification() {
    let (_, space) = counterexample_shift(&[1, 2]).unwrap();
    let report = certify_delta_transitive(&space, &[MapSpec::shift(1), MapSpec::shift(2)], 1, 20).unwrap();
    assert!(!report.all_satisfied);
    let ones = report
        .tuples
        .iter()
        .find(|t| t.targets == ["1", "1", "1"])
        .unwrap();
    assert_eq!(ones.n, None);
}

#[test]
fn chained_points_visit_every_tuple() {
    for (space, powers) in [
        (ShiftSpace::full(2).unwrap(), [1, 2]),
        (ShiftSpace::full(2).unwrap(), [2, 3]),
        (ShiftSpace::golden_mean(), [1, 2]),
    ] {
        let factors: Vec<MapSpec> = powers.iter().map(|&p| MapSpec::shift(p)).collect();
        let report = certify_delta_transitive(&space, &factors, 2, 40).unwrap();
        assert!(report.all_satisfied);
        let sys = ProductSystem::new(space.clone(), factors).unwrap();
        let horizon = 2 * report.max_n.unwrap() * report.tuples_total;
        let chained = chain_transitive_point(&sys, 2, horizon).unwrap();
        assert!(chained.recheck(&sys).unwrap());
        let hits = diagonal_orbit_hits(&sys, &chained.point, &chained.targets, horizon).unwrap();
        assert!(hits.iter().all(Option::is_some));
    }
}

#[test]
fn refinement_traces_validate() {
    let full = ShiftSpace::full(2).unwrap();
    let cyl = |w: &[u8]| CylinderUnion::cylinder(&full, w.to_vec()).unwrap();
    for (t, s) in [(1, 2), (2, 3), (1, 3)] {
        for (vt, vs) in [(cyl(&[0]), cyl(&[1])), (cyl(&[0, 1]), cyl(&[1, 1]))] {
            let (t, s) = (MapSpec::shift(t), MapSpec::shift(s));
            let trace = lemma1_refine(&full, &t, &s, &t, &vt, &vs, 3).unwrap();
            let check = validate_trace(&t, &s, &t, &vt, &vs, &trace).unwrap();
            assert!(check.ok(), "{:?}", check.failures);
        }
    }
}
