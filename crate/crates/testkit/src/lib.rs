//! Seeded random generators and brute-force oracles shared by test suites.
//!
//! Everything here is deliberately naive: exhaustive searches with hard caps
//! that give up loudly instead of approximating. The production algorithms
//! live in resound-core; this crate only cross-checks them.

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use resound_core::net::{Marking, NetBuilder, ResetNet, Run, TransId, WorkflowNet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape parameters for random nets.
#[derive(Clone, Copy, Debug)]
pub struct NetShape {
    pub places: usize,
    pub transitions: usize,
    pub max_weight: u64,
    pub arc_prob: f64,
    pub reset_prob: f64,
}

impl NetShape {
    pub fn small() -> NetShape {
        NetShape { places: 5, transitions: 5, max_weight: 2, arc_prob: 0.35, reset_prob: 0.15 }
    }

    pub fn plain(self) -> NetShape {
        NetShape { reset_prob: 0.0, ..self }
    }
}

/// A random reset net. Every transition touches at least one place.
pub fn random_net(rng: &mut ChaCha8Rng, shape: NetShape) -> ResetNet {
    let mut b = NetBuilder::new();
    let places: Vec<_> =
        (0..shape.places).map(|i| b.place(format!("p{i}")).expect("fresh name")).collect();
    for i in 0..shape.transitions {
        let mut pre = Vec::new();
        let mut post = Vec::new();
        let mut reset = Vec::new();
        for &p in &places {
            if rng.random_bool(shape.arc_prob) {
                pre.push((p, rng.random_range(1..=shape.max_weight)));
            }
            if rng.random_bool(shape.arc_prob) {
                post.push((p, rng.random_range(1..=shape.max_weight)));
            }
            if rng.random_bool(shape.reset_prob) {
                reset.push(p);
            }
        }
        if pre.is_empty() && post.is_empty() && reset.is_empty() {
            post.push((places[rng.random_range(0..places.len())], 1));
        }
        b.transition(format!("t{i}"), &pre, &post, &reset).expect("fresh name");
    }
    b.build()
}

/// A random valid workflow net: a chain through every internal place
/// guarantees the path condition, then `shape.transitions` extra transitions
/// add concurrency and resets without breaking the initial/final place roles.
pub fn random_workflow(rng: &mut ChaCha8Rng, shape: NetShape) -> WorkflowNet {
    let mut b = NetBuilder::new();
    let i = b.place("i").expect("fresh name");
    let mut spine: Vec<_> =
        (0..shape.places).map(|n| b.place(format!("p{n}")).expect("fresh name")).collect();
    let f = b.place("f").expect("fresh name");
    for n in (1..spine.len()).rev() {
        spine.swap(n, rng.random_range(0..=n));
    }
    spine.insert(0, i);
    spine.push(f);
    for (n, pair) in spine.windows(2).enumerate() {
        b.transition(format!("s{n}"), &[(pair[0], 1)], &[(pair[1], 1)], &[]).expect("fresh name");
    }

    let sources: Vec<_> = spine.iter().copied().filter(|&p| p != f).collect();
    let sinks: Vec<_> = spine.iter().copied().filter(|&p| p != i).collect();
    let internals: Vec<_> = spine.iter().copied().filter(|&p| p != i && p != f).collect();
    for n in 0..shape.transitions {
        let mut pre = Vec::new();
        let mut post = Vec::new();
        for _ in 0..rng.random_range(1..=2) {
            pre.push((
                sources[rng.random_range(0..sources.len())],
                rng.random_range(1..=shape.max_weight),
            ));
        }
        for _ in 0..rng.random_range(1..=2) {
            post.push((
                sinks[rng.random_range(0..sinks.len())],
                rng.random_range(1..=shape.max_weight),
            ));
        }
        let reset: Vec<_> = internals
            .iter()
            .copied()
            .filter(|_| rng.random_bool(shape.reset_prob))
            .collect();
        b.transition(format!("t{n}"), &pre, &post, &reset).expect("fresh name");
    }
    WorkflowNet::new(b.build(), i, f).expect("construction keeps the workflow conditions")
}

/// A sparse random marking.
pub fn random_marking(rng: &mut ChaCha8Rng, dim: usize, max_tokens: u64) -> Marking {
    Marking::new((0..dim).map(|_| rng.random_range(0..=max_tokens)).collect())
}

/// Fires up to `max_len` uniformly random enabled transitions from `m0`.
pub fn random_run(
    rng: &mut ChaCha8Rng,
    net: &ResetNet,
    m0: &Marking,
    max_len: usize,
) -> (Run, Marking) {
    let mut m = m0.clone();
    let mut steps = Vec::new();
    for _ in 0..max_len {
        let enabled: Vec<TransId> =
            net.transition_ids().filter(|&t| net.is_enabled(&m, t)).collect();
        if enabled.is_empty() {
            break;
        }
        let t = enabled[rng.random_range(0..enabled.len())];
        m = net.fire(&m, t).expect("enabled transition fires");
        steps.push(t);
    }
    (Run::new(steps), m)
}

/// Exhaustive forward reach set, or None once it exceeds `cap` markings.
pub fn reach_set(net: &ResetNet, m0: &Marking, cap: usize) -> Option<BTreeSet<Marking>> {
    let mut seen = BTreeSet::from([m0.clone()]);
    let mut queue = VecDeque::from([m0.clone()]);
    while let Some(m) = queue.pop_front() {
        for t in net.transition_ids() {
            if net.is_enabled(&m, t) {
                let next = net.fire(&m, t).expect("enabled transition fires");
                if seen.insert(next.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    queue.push_back(next);
                }
            }
        }
    }
    Some(seen)
}

/// Can `m0` reach a marking covering `target`? None means the search hit the
/// cap before the answer was certain (positives always return early).
pub fn covers_oracle(net: &ResetNet, m0: &Marking, target: &Marking, cap: usize) -> Option<bool> {
    let mut seen = BTreeSet::from([m0.clone()]);
    let mut queue = VecDeque::from([m0.clone()]);
    while let Some(m) = queue.pop_front() {
        if target.leq(&m) {
            return Some(true);
        }
        for t in net.transition_ids() {
            if net.is_enabled(&m, t) {
                let next = net.fire(&m, t).expect("enabled transition fires");
                if seen.insert(next.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    queue.push_back(next);
                }
            }
        }
    }
    Some(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use resound_core::net::validate_workflow;

    #[test]
    fn workflow_generator_is_always_valid() {
        let mut rng = rng(7);
        for _ in 0..50 {
            let w = random_workflow(&mut rng, NetShape::small());
            assert!(validate_workflow(w.net(), w.initial(), w.final_place(), false).is_empty());
        }
    }

    #[test]
    fn generators_are_deterministic_per_seed() {
        let a = random_net(&mut rng(42), NetShape::small());
        let b = random_net(&mut rng(42), NetShape::small());
        assert_eq!(a, b);
    }

    #[test]
    fn reach_set_respects_cap() {
        let mut r = rng(3);
        let net = random_net(&mut r, NetShape::small());
        let m0 = random_marking(&mut r, net.place_count(), 1);
        if let Some(set) = reach_set(&net, &m0, 200) {
            assert!(set.contains(&m0));
            assert!(set.len() <= 201);
        }
    }
}
