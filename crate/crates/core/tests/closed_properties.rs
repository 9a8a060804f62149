//! Randomized invariants of the order-theoretic layer: monotone firing,
//! basis minimization, complements, and one-step predecessor bases.

use resound_core::closed::{complement_up_to_down, minimize, pred_basis, UpSet};
use resound_core::net::{Marking, ResetNet};
use resound_testkit as testkit;

/// Every marking of `net` with all counts at most `max`, by odometer.
fn grid(net: &ResetNet, max: u64) -> Vec<Marking> {
    let dim = net.place_count();
    let mut out = Vec::new();
    let mut counts = vec![0u64; dim];
    loop {
        out.push(Marking::new(counts.clone()));
        let mut i = 0;
        loop {
            if i == dim {
                return out;
            }
            counts[i] += 1;
            if counts[i] <= max {
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn firing_is_strongly_monotone() {
    let mut rng = testkit::rng(31);
    for case in 0..120 {
        let net = testkit::random_net(&mut rng, testkit::NetShape::small());
        let dim = net.place_count();
        let low = testkit::random_marking(&mut rng, dim, 2);
        let high = low.plus(&testkit::random_marking(&mut rng, dim, 2));
        for t in net.transition_ids() {
            if !net.is_enabled(&low, t) {
                continue;
            }
            assert!(net.is_enabled(&high, t), "case {case}: enabling lost under ≤");
            let a = net.fire(&low, t).unwrap();
            let b = net.fire(&high, t).unwrap();
            assert!(a.leq(&b), "case {case}: firing not monotone");
        }
    }
}

#[test]
fn minimize_keeps_membership_and_yields_an_antichain() {
    let mut rng = testkit::rng(32);
    for case in 0..200 {
        let dim = 4;
        let gens: Vec<Marking> =
            (0..6).map(|_| testkit::random_marking(&mut rng, dim, 3)).collect();
        let u = minimize(dim, gens.clone());

        for (i, a) in u.basis().iter().enumerate() {
            for (j, b) in u.basis().iter().enumerate() {
                assert!(i == j || !a.leq(b), "case {case}: basis is not an antichain");
            }
        }
        for _ in 0..40 {
            let m = testkit::random_marking(&mut rng, dim, 4);
            let expected = gens.iter().any(|g| g.leq(&m));
            assert_eq!(u.contains(&m), expected, "case {case}");
        }
    }
}

#[test]
fn complement_membership_is_exact() {
    let mut rng = testkit::rng(33);
    for case in 0..150 {
        let dim = 4;
        let u = minimize(dim, (0..4).map(|_| testkit::random_marking(&mut rng, dim, 3)));
        let d = complement_up_to_down(&u, 100_000).expect("small complements fit the cap");
        for _ in 0..60 {
            let m = testkit::random_marking(&mut rng, dim, 5);
            assert_eq!(d.contains(&m), !u.contains(&m), "case {case}");
        }
        // the empty upset complements to everything
        let full = complement_up_to_down(&UpSet::empty(dim), 10).unwrap();
        assert!(full.contains(&testkit::random_marking(&mut rng, dim, 6)));
    }
}

#[test]
fn pred_basis_matches_the_definitional_predecessor_set() {
    let mut rng = testkit::rng(34);
    let shape =
        testkit::NetShape { places: 4, transitions: 3, max_weight: 2, arc_prob: 0.45, reset_prob: 0.2 };
    for case in 0..80 {
        let net = testkit::random_net(&mut rng, shape);
        let dim = net.place_count();
        let u = minimize(dim, (0..3).map(|_| testkit::random_marking(&mut rng, dim, 2)));
        for t in net.transition_ids() {
            let basis = pred_basis(&net, t, &u);
            for (i, a) in basis.basis().iter().enumerate() {
                for (j, b) in basis.basis().iter().enumerate() {
                    assert!(i == j || !a.leq(b), "case {case}: pred basis not minimal");
                }
            }
            // firing into an upset is itself upward closed, so the basis
            // must carve out exactly that set on a bounding grid
            for m in grid(&net, 3) {
                let expected =
                    net.is_enabled(&m, t) && u.contains(&net.fire(&m, t).unwrap());
                assert_eq!(
                    basis.contains(&m),
                    expected,
                    "case {case}, transition {t:?}, marking {}",
                    net.display_marking(&m)
                );
            }
        }
    }
}
