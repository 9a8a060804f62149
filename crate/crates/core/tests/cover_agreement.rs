//! Cross-checks of the coverability machinery against brute-force forward
//! search on random nets.

use resound_core::budget::Budget;
use resound_core::closed::minimize;
use resound_core::cover::{backward_cover, extract_covering_run, karp_miller, KMError};
use resound_core::minsky::{builtin, BuiltinNet};
use resound_core::net::Marking;
use resound_testkit as testkit;

#[test]
fn fig2_membership_agrees_with_forward_search() {
    let BuiltinNet::Workflow(w) = builtin("fig2").unwrap() else {
        panic!("fig2 is a workflow net");
    };
    let net = w.net();
    let goal = Marking::from_pairs(7, &[(w.final_place(), 1)]);
    let cb = backward_cover(net, &minimize(7, [goal.clone()]));
    let mut rng = testkit::rng(0xC0FE);
    for _ in 0..50 {
        let m = testkit::random_marking(&mut rng, 7, 3);
        let expected = testkit::covers_oracle(net, &m, &goal, 10_000)
            .expect("fig2 state spaces at 3 tokens/place stay small");
        assert_eq!(cb.member(&m), expected, "marking {}", net.display_marking(&m));
    }
}

#[test]
fn random_corpus_membership_agrees_with_forward_search() {
    let mut rng = testkit::rng(11);
    let mut checked = 0;
    for case in 0..60 {
        let net = testkit::random_net(&mut rng, testkit::NetShape::small());
        let target = testkit::random_marking(&mut rng, net.place_count(), 2);
        let cb = backward_cover(&net, &minimize(net.place_count(), [target.clone()]));
        for _ in 0..5 {
            let m0 = testkit::random_marking(&mut rng, net.place_count(), 2);
            let Some(expected) = testkit::covers_oracle(&net, &m0, &target, 5_000) else {
                continue;
            };
            assert_eq!(cb.member(&m0), expected, "case {case}");
            if expected {
                let run = extract_covering_run(&cb, &net, &m0).unwrap();
                let end = net.fire_run(&m0, &run).unwrap();
                assert!(target.leq(&end), "case {case}: end misses the target");
            } else {
                assert_eq!(extract_covering_run(&cb, &net, &m0), None);
            }
            checked += 1;
        }
    }
    assert!(checked >= 150, "oracle skipped too many samples: {checked}");
}

#[test]
fn km_reach_set_matches_bfs_on_bounded_plain_corpus() {
    let mut rng = testkit::rng(12);
    let mut bounded_cases = 0;
    let shape =
        testkit::NetShape { places: 4, transitions: 4, max_weight: 2, arc_prob: 0.45, reset_prob: 0.0 };
    for case in 0..200 {
        let net = testkit::random_net(&mut rng, shape);
        let m0 = testkit::random_marking(&mut rng, net.place_count(), 2);
        let Some(expected) = testkit::reach_set(&net, &m0, 5_000) else {
            continue;
        };
        match karp_miller(&net, &m0, Budget::states(500_000)) {
            Ok(tree) => {
                assert!(tree.bounded(), "case {case}: finite space reported unbounded");
                assert_eq!(tree.reach_set().unwrap(), expected, "case {case}");
                bounded_cases += 1;
            }
            // tree blow-up on a diamond-heavy net; rare and not a correctness issue
            Err(KMError::Budget(_)) => continue,
            Err(err) => panic!("case {case}: {err}"),
        }
    }
    assert!(bounded_cases >= 40, "too few bounded cases: {bounded_cases}");
}

#[test]
fn km_pump_witnesses_replay_on_unbounded_corpus() {
    let mut rng = testkit::rng(13);
    let mut unbounded_cases = 0;
    for case in 0..60 {
        let net = testkit::random_net(&mut rng, testkit::NetShape::small().plain());
        let m0 = testkit::random_marking(&mut rng, net.place_count(), 2);
        let Ok(tree) = karp_miller(&net, &m0, Budget::states(200_000)) else {
            continue;
        };
        if tree.bounded() {
            continue;
        }
        let pump = tree.pump().expect("unbounded tree has an acceleration");
        let m1 = net.fire_run(&m0, &pump.prefix).unwrap_or_else(|e| panic!("case {case}: {e}"));
        let m2 = net.fire_run(&m1, &pump.cycle).unwrap_or_else(|e| panic!("case {case}: {e}"));
        assert!(m1.lt(&m2), "case {case}: cycle does not strictly pump");
        unbounded_cases += 1;
    }
    assert!(unbounded_cases >= 10, "too few unbounded cases: {unbounded_cases}");
}
