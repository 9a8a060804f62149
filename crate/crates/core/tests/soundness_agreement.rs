//! Cross-checks of the soundness deciders against brute-force definitions,
//! and consistency between the property pipeline and the semi-decision.

use std::collections::BTreeMap;

use resound_core::budget::Budget;
use resound_core::minsky::{builtin, BuiltinNet, BUILTIN_NAMES};
use resound_core::net::{validate_workflow, WorkflowNet};
use resound_core::soundness::{
    coverability_clean, full_reset_run, k_sound_exact_plain, k_sound_semi, pk_check,
    strict_cover_witness, up_to_k, FullResetOutcome, PkOutcome, Verdict,
};
use resound_core::structure::{redundancy_info, res_project, skeleton};
use resound_testkit as testkit;

/// Brute-force k-soundness: every reachable marking completes to `{f : k}`.
/// The reach set is forward closed, so one backward sweep from the goal
/// inside it classifies every marking.
fn sound_by_definition(w: &WorkflowNet, k: u64, cap: usize) -> Option<bool> {
    let net = w.net();
    let reach: Vec<_> =
        testkit::reach_set(net, &w.initial_marking(k), cap)?.into_iter().collect();
    let index: BTreeMap<_, _> = reach.iter().zip(0..).collect();
    let Some(&goal) = index.get(&w.final_marking(k)) else {
        return Some(false);
    };
    let mut incoming = vec![Vec::new(); reach.len()];
    for (i, m) in reach.iter().enumerate() {
        for t in net.transition_ids() {
            if let Ok(next) = net.fire(m, t) {
                incoming[index[&next]].push(i);
            }
        }
    }
    let mut completes = vec![false; reach.len()];
    let mut stack = vec![goal];
    completes[goal] = true;
    while let Some(i) = stack.pop() {
        for &j in &incoming[i] {
            if !completes[j] {
                completes[j] = true;
                stack.push(j);
            }
        }
    }
    Some(completes.iter().all(|&c| c))
}

fn workflow_builtins() -> Vec<(&'static str, WorkflowNet)> {
    BUILTIN_NAMES
        .iter()
        .filter_map(|name| match builtin(name).unwrap() {
            BuiltinNet::Workflow(w) => Some((*name, w)),
            BuiltinNet::Petri(_) => None,
        })
        .collect()
}

fn is_valid_workflow(w: &WorkflowNet) -> bool {
    validate_workflow(w.net(), w.initial(), w.final_place(), false).is_empty()
}

/// Random workflow nets kept small enough that backward covers from
/// `{f : z}` stay cheap; the summed witness budgets z grow with every
/// transition in the net.
fn slim_shape() -> testkit::NetShape {
    testkit::NetShape { places: 3, transitions: 4, max_weight: 1, arc_prob: 0.35, reset_prob: 0.15 }
}

#[test]
fn deciders_match_brute_force_on_plain_corpus() {
    let mut rng = testkit::rng(51);
    let budget = Budget::states(200_000);
    let mut decided = 0;
    for case in 0..150 {
        let w = testkit::random_workflow(&mut rng, testkit::NetShape::small().plain());
        for k in 1..=2 {
            let Some(expected) = sound_by_definition(&w, k, 3_000) else {
                continue;
            };
            let exact = k_sound_exact_plain(&w, k, budget).expect("corpus is plain");
            match exact {
                Verdict::Holds(_) => assert!(expected, "case {case} k={k}: false positive"),
                Verdict::Fails(cx) => {
                    assert!(!expected, "case {case} k={k}: false negative");
                    let end = w.net().fire_run(&w.initial_marking(k), &cx.run).unwrap();
                    assert_eq!(end, cx.witness, "case {case}: witness does not replay");
                }
                Verdict::Unknown(_) => continue,
            }
            match k_sound_semi(&w, k, budget) {
                Verdict::Holds(_) => assert!(expected, "case {case} k={k}: semi false positive"),
                Verdict::Fails(_) => assert!(!expected, "case {case} k={k}: semi false negative"),
                Verdict::Unknown(_) => {}
            }
            decided += 1;
        }
    }
    assert!(decided >= 100, "too few decided cases: {decided}");
}

#[test]
fn up_to_k_agrees_with_the_per_k_scan() {
    let mut rng = testkit::rng(52);
    let budget = Budget::states(200_000);
    let mut decided = 0;
    for case in 0..80 {
        let w = testkit::random_workflow(&mut rng, testkit::NetShape::small().plain());
        let per_k: Vec<_> = (1..=3).map(|j| sound_by_definition(&w, j, 6_000)).collect();
        let Some(all) = per_k.iter().copied().collect::<Option<Vec<bool>>>() else {
            continue;
        };
        match up_to_k(&w, 3, budget) {
            Verdict::Holds(_) => assert!(all.iter().all(|&s| s), "case {case}"),
            Verdict::Fails(_) => assert!(all.iter().any(|&s| !s), "case {case}"),
            Verdict::Unknown(_) => continue,
        }
        decided += 1;
    }
    assert!(decided >= 25, "too few decided cases: {decided}");
}

#[test]
fn pipeline_never_contradicts_the_semi_decision() {
    let budget = Budget::states(30_000);
    let mut corpus: Vec<(String, WorkflowNet)> =
        workflow_builtins().into_iter().map(|(n, w)| (n.to_string(), w)).collect();
    let mut rng = testkit::rng(53);
    for case in 0..25 {
        corpus.push((format!("random-{case}"), testkit::random_workflow(&mut rng, slim_shape())));
    }

    for (name, w) in &corpus {
        for k in 1..=2 {
            let report = pk_check(w, k, 4, budget);
            match report.overall {
                PkOutcome::UpToKSound => {
                    assert!(
                        !matches!(up_to_k(w, k, budget), Verdict::Fails(_)),
                        "{name} k={k}: pipeline affirms, semi refutes"
                    );
                }
                PkOutcome::NotGeneralisedSound { k_hint } => {
                    if let Some(cx) = &report.counterexample {
                        let j = k_hint.expect("a counterexample always names its k");
                        let end = w.net().fire_run(&w.initial_marking(j), &cx.run).unwrap();
                        assert_eq!(end, cx.witness, "{name}: witness does not replay");
                    }
                    // the hinted k is certified unsound, provided the net
                    // satisfies the workflow conditions the lemma needs
                    if let Some(j) = k_hint {
                        if is_valid_workflow(w) {
                            assert!(
                                matches!(k_sound_semi(w, j, budget), Verdict::Fails(_)),
                                "{name}: semi decision cannot confirm {j}-unsoundness"
                            );
                        }
                    }
                }
                PkOutcome::Unknown => {}
            }
        }
    }
}

#[test]
fn full_reset_run_certificates_replay() {
    let BuiltinNet::Workflow(rd) = builtin("reset-diamond").unwrap() else {
        panic!("reset-diamond is a workflow net");
    };
    let net = rd.net();
    let info = redundancy_info(&rd);
    let FullResetOutcome::Has(frr) = full_reset_run(&rd, &info) else {
        panic!("reset-diamond has a full reset run");
    };
    let start = rd.initial_marking(frr.z);
    let goal = rd.final_marking(frr.z);
    assert_eq!(net.fire_run(&start, &frr.zeta).unwrap(), goal);

    let skel = skeleton(&rd, &info);
    let trace = net.replay(&start, &frr.zeta).unwrap();
    assert_eq!(frr.prefix_certificates.len(), frr.zeta.len());
    for (position, cert) in frr.prefix_certificates.iter().enumerate() {
        let res = res_project(&rd, &skel, &trace[position]);
        assert_eq!(
            net.fire_run(&res, cert).unwrap(),
            goal,
            "certificate {position} misses the goal"
        );
    }

    // zeta flushes any reachable surplus: from {i : z} + m it lands on
    // {f : z} + Res(m), because every resetable place is reset along zeta
    // and the other places only see zeta's own additive flow
    let reach = testkit::reach_set(net, &rd.initial_marking(3), 10_000)
        .expect("reset-diamond is bounded from {i : 3}");
    assert!(reach.len() >= 10, "too few markings to exercise: {}", reach.len());
    for m in &reach {
        let end = net.fire_run(&start.plus(m), &frr.zeta).unwrap();
        assert_eq!(end, goal.plus(&res_project(&rd, &skel, m)), "surplus not flushed");
    }
}

#[test]
fn cleanliness_matches_forward_search() {
    let mut corpus: Vec<WorkflowNet> = workflow_builtins().into_iter().map(|(_, w)| w).collect();
    let mut rng = testkit::rng(55);
    for _ in 0..60 {
        corpus.push(testkit::random_workflow(&mut rng, testkit::NetShape::small()));
    }

    let mut decided = 0;
    for (case, w) in corpus.iter().enumerate() {
        let net = w.net();
        for k in 1..=2 {
            let Some(reach) = testkit::reach_set(net, &w.initial_marking(k), 4_000) else {
                continue;
            };
            let goal = w.final_marking(k);
            let expected_clean = !reach.iter().any(|m| goal.lt(m));
            assert_eq!(coverability_clean(w, k), expected_clean, "case {case} k={k}");
            match strict_cover_witness(w, k) {
                None => assert!(expected_clean, "case {case} k={k}: witness missing"),
                Some(cx) => {
                    assert!(!expected_clean, "case {case} k={k}: witness on a clean net");
                    let end = net.fire_run(&w.initial_marking(k), &cx.run).unwrap();
                    assert_eq!(end, cx.witness);
                    assert!(goal.lt(&cx.witness));
                }
            }
            decided += 1;
        }
    }
    assert!(decided >= 60, "too few decided cases: {decided}");
}
