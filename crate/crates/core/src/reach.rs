//! Reachability of mixed constraint targets in plain Petri nets.
//!
//! Decided by a three-pronged attack: per-atom state-equation certificates
//! (exact integer infeasibility implies unreachability), forward search with
//! per-place token caps growing in rounds, and exhaustive closure whenever a
//! round completes without ever hitting its cap (the state space is then
//! provably finite and fully known). Anything else is an honest Unknown.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use thiserror::Error;

use crate::budget::{Budget, BudgetReport, Meter};
use crate::closed::{Atom, Bound, MixedTarget, OmegaNat};
use crate::diophantine::{nat_feasibility, Feasibility};
use crate::net::{Marking, ResetNet, Run, TransId};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ReachError {
    #[error("net has reset arcs; state-equation reasoning needs plain nets")]
    ResetArcs,
    #[error("budget must allow at least one state")]
    ZeroBudget,
}

/// How an atom was ruled out.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AtomCertificate {
    /// No nonnegative firing-count vector balances the tokens for this atom.
    StateEquation { atom: usize },
    /// The reachable space is finite, fully explored, and misses the atom.
    ExhaustedSpace { atom: usize },
}

#[derive(Debug)]
pub enum ReachVerdict {
    Found(Run),
    Unreachable(Vec<AtomCertificate>),
    Unknown(BudgetReport),
}

/// Is there a marking `m` satisfying `atom` with `m = m0 + C y` for some
/// nonnegative integer firing-count vector `y`? False certifies that no run
/// reaches the atom; true promises nothing.
pub fn state_equation_feasible(
    net: &ResetNet,
    m0: &Marking,
    atom: &Atom,
) -> Result<bool, ReachError> {
    if net.has_reset_arcs() {
        return Err(ReachError::ResetArcs);
    }
    let tcount = net.transition_count();
    // one row per inequality, rewritten as an equality with a slack variable
    let mut rows: Vec<(Vec<i128>, i128, i128)> = Vec::new();
    for p in net.places() {
        let effect: Vec<i128> =
            net.transitions().iter().map(|t| t.post(p) as i128 - t.pre(p) as i128).collect();
        let m0p = m0.get(p) as i128;
        match atom.bound(p) {
            Bound::AtLeast(c) => rows.push((effect, -1, c as i128 - m0p)),
            Bound::AtMost(OmegaNat::Fin(c)) => {
                rows.push((effect.clone(), 1, c as i128 - m0p));
                rows.push((effect, -1, -m0p));
            }
            Bound::AtMost(OmegaNat::Omega) => rows.push((effect, -1, -m0p)),
        }
    }
    let nrows = rows.len();
    let mut a = Vec::with_capacity(nrows);
    let mut b = Vec::with_capacity(nrows);
    for (i, (effect, slack, rhs)) in rows.into_iter().enumerate() {
        let mut row = vec![0i128; tcount + nrows];
        row[..tcount].copy_from_slice(&effect);
        row[tcount + i] = slack;
        a.push(row);
        b.push(rhs);
    }
    // Degenerate systems can have exponentially many minimal solutions.
    // A capped search that gives up counts as feasible; certificates only
    // ever rest on a fully exhausted frontier.
    Ok(nat_feasibility(&a, &b, STATE_EQUATION_NODE_CAP) != Feasibility::Unsolvable)
}

/// Search nodes the equation pre-check may expand before giving up.
const STATE_EQUATION_NODE_CAP: usize = 200_000;

enum RoundOutcome {
    Found(Run),
    ExhaustedComplete,
    Truncated,
    Budget(BudgetReport),
}

fn rebuild(parent: &BTreeMap<Marking, Option<(Marking, TransId)>>, end: Marking) -> Run {
    let mut steps = Vec::new();
    let mut cur = end;
    while let Some(Some((prev, t))) = parent.get(&cur) {
        steps.push(*t);
        cur = prev.clone();
    }
    steps.reverse();
    Run::new(steps)
}

fn capped_bfs(
    net: &ResetNet,
    m0: &Marking,
    tgt: &MixedTarget,
    cap: u64,
    meter: &mut Meter,
) -> RoundOutcome {
    if m0.counts().iter().any(|&c| c > cap) {
        return RoundOutcome::Truncated;
    }
    if let Err(r) = meter.charge(1) {
        return RoundOutcome::Budget(r);
    }
    if tgt.contains(m0) {
        return RoundOutcome::Found(Run::empty());
    }
    let mut parent: BTreeMap<Marking, Option<(Marking, TransId)>> =
        BTreeMap::from([(m0.clone(), None)]);
    let mut truncated = false;
    let mut level = vec![m0.clone()];
    while !level.is_empty() {
        // smallest markings first, for reproducible shortest witnesses
        level.sort_by_key(|m| (m.total(), m.counts().to_vec()));
        let mut next_level = Vec::new();
        for m in level {
            for t in net.transition_ids() {
                if !net.is_enabled(&m, t) {
                    continue;
                }
                let next = net.fire(&m, t).expect("enabled transition fires");
                if next.counts().iter().any(|&c| c > cap) {
                    truncated = true;
                    continue;
                }
                if let Entry::Vacant(e) = parent.entry(next.clone()) {
                    e.insert(Some((m.clone(), t)));
                    if let Err(r) = meter.charge(1) {
                        return RoundOutcome::Budget(r);
                    }
                    if tgt.contains(&next) {
                        return RoundOutcome::Found(rebuild(&parent, next));
                    }
                    next_level.push(next);
                }
            }
        }
        level = next_level;
    }
    if truncated {
        RoundOutcome::Truncated
    } else {
        RoundOutcome::ExhaustedComplete
    }
}

/// Decides whether some run from `m0` ends inside `tgt`.
///
/// Found always carries a validated run. Unreachable lists the certificate
/// that discharged each atom. Unknown reports what the search consumed.
pub fn decide_mixed_reach(
    net: &ResetNet,
    m0: &Marking,
    tgt: &MixedTarget,
    budget: Budget,
) -> Result<ReachVerdict, ReachError> {
    if net.has_reset_arcs() {
        return Err(ReachError::ResetArcs);
    }
    if budget.max_states == 0 {
        return Err(ReachError::ZeroBudget);
    }
    debug_assert_eq!(tgt.dim(), net.place_count());

    let mut certs: Vec<Option<AtomCertificate>> = Vec::new();
    for (idx, atom) in tgt.atoms().iter().enumerate() {
        let feasible = state_equation_feasible(net, m0, atom)?;
        certs.push((!feasible).then_some(AtomCertificate::StateEquation { atom: idx }));
    }
    if certs.iter().all(Option::is_some) {
        return Ok(ReachVerdict::Unreachable(certs.into_iter().flatten().collect()));
    }

    let mut meter = Meter::new(budget);
    let mut cap = {
        let m0_max = m0.counts().iter().copied().max().unwrap_or(0);
        let bound_max = tgt
            .atoms()
            .iter()
            .flat_map(|a| a.bounds())
            .map(|b| match *b {
                Bound::AtLeast(c) => c,
                Bound::AtMost(OmegaNat::Fin(c)) => c,
                Bound::AtMost(OmegaNat::Omega) => 0,
            })
            .max()
            .unwrap_or(0);
        m0_max.max(bound_max).max(1) + 1
    };
    loop {
        match capped_bfs(net, m0, tgt, cap, &mut meter) {
            RoundOutcome::Found(run) => {
                let end = net.fire_run(m0, &run).expect("witness run replays");
                assert!(tgt.contains(&end), "witness run must land in the target");
                return Ok(ReachVerdict::Found(run));
            }
            RoundOutcome::ExhaustedComplete => {
                let certs = certs
                    .into_iter()
                    .enumerate()
                    .map(|(idx, c)| c.unwrap_or(AtomCertificate::ExhaustedSpace { atom: idx }))
                    .collect();
                return Ok(ReachVerdict::Unreachable(certs));
            }
            RoundOutcome::Truncated => match cap.checked_mul(2) {
                Some(next) => cap = next,
                None => return Ok(ReachVerdict::Unknown(meter.report())),
            },
            RoundOutcome::Budget(report) => return Ok(ReachVerdict::Unknown(report)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minsky::{builtin, BuiltinNet};
    use crate::net::{NetBuilder, WorkflowNet};

    fn workflow(name: &str) -> WorkflowNet {
        match builtin(name).unwrap() {
            BuiltinNet::Workflow(w) => w,
            BuiltinNet::Petri(_) => panic!("expected workflow net"),
        }
    }

    fn atom(net: &ResetNet, bounds: &[(&str, Bound)]) -> Atom {
        let mut a = Atom::unconstrained(net.place_count());
        for (name, b) in bounds {
            a.set(net.place_by_name(name).unwrap(), *b);
        }
        a
    }

    fn single(net: &ResetNet, bounds: &[(&str, Bound)]) -> MixedTarget {
        MixedTarget::new(net.place_count(), vec![atom(net, bounds)])
    }

    #[test]
    fn state_equation_on_the_chain() {
        let w = workflow("chain");
        let net = w.net();
        let m0 = w.initial_marking(1);
        let two = atom(net, &[("f", Bound::AtLeast(2))]);
        assert!(!state_equation_feasible(net, &m0, &two).unwrap());
        let one = atom(net, &[("f", Bound::AtLeast(1))]);
        assert!(state_equation_feasible(net, &m0, &one).unwrap());
    }

    #[test]
    fn state_equation_on_the_pump() {
        let w = workflow("pump");
        let m0 = w.initial_marking(1);
        let ten = atom(w.net(), &[("q", Bound::AtLeast(10))]);
        assert!(state_equation_feasible(w.net(), &m0, &ten).unwrap());
    }

    #[test]
    fn state_equation_rejects_reset_nets() {
        let w = workflow("fig2");
        let a = Atom::unconstrained(7);
        assert_eq!(
            state_equation_feasible(w.net(), &w.initial_marking(1), &a),
            Err(ReachError::ResetArcs)
        );
    }

    #[test]
    fn chain_verdicts() {
        let w = workflow("chain");
        let net = w.net();
        let m0 = w.initial_marking(1);

        let tgt = single(net, &[("f", Bound::AtLeast(2))]);
        match decide_mixed_reach(net, &m0, &tgt, Budget::default()).unwrap() {
            ReachVerdict::Unreachable(certs) => {
                assert_eq!(certs, vec![AtomCertificate::StateEquation { atom: 0 }]);
            }
            other => panic!("expected Unreachable, got {other:?}"),
        }

        let tgt = single(net, &[("f", Bound::AtLeast(1))]);
        match decide_mixed_reach(net, &m0, &tgt, Budget::default()).unwrap() {
            ReachVerdict::Found(run) => assert_eq!(net.display_run(&run), "t"),
            other => panic!("expected Found, got {other:?}"),
        }
    }

    #[test]
    fn pump_witness_is_shortest() {
        let w = workflow("pump");
        let net = w.net();
        let tgt = single(
            net,
            &[("q", Bound::AtLeast(3)), ("p", Bound::AtMost(OmegaNat::Omega))],
        );
        match decide_mixed_reach(net, &w.initial_marking(1), &tgt, Budget::default()).unwrap() {
            ReachVerdict::Found(run) => assert_eq!(net.display_run(&run), "t1 t2 t2 t2"),
            other => panic!("expected Found, got {other:?}"),
        }
    }

    #[test]
    fn exhaustion_discharges_feasible_atoms() {
        // t needs b to mint a, but b is never marked: the state equation
        // believes in {a:2}, exhaustive exploration rules it out.
        let mut bld = NetBuilder::new();
        let a = bld.place("a").unwrap();
        let b = bld.place("b").unwrap();
        bld.transition("t", &[(b, 1)], &[(a, 1), (b, 1)], &[]).unwrap();
        let net = bld.build();
        let m0 = Marking::from_pairs(2, &[(a, 1)]);

        let want = Atom::new(vec![Bound::AtLeast(2), Bound::none()]);
        assert!(state_equation_feasible(&net, &m0, &want).unwrap());
        let tgt = MixedTarget::new(2, vec![want]);
        match decide_mixed_reach(&net, &m0, &tgt, Budget::default()).unwrap() {
            ReachVerdict::Unreachable(certs) => {
                assert_eq!(certs, vec![AtomCertificate::ExhaustedSpace { atom: 0 }]);
            }
            other => panic!("expected Unreachable, got {other:?}"),
        }
    }

    #[test]
    fn mixed_union_takes_any_atom() {
        let w = workflow("chain");
        let net = w.net();
        let impossible = atom(net, &[("f", Bound::AtLeast(5))]);
        let easy = atom(net, &[("f", Bound::AtLeast(1))]);
        let tgt = MixedTarget::new(net.place_count(), vec![impossible, easy]);
        match decide_mixed_reach(net, &w.initial_marking(1), &tgt, Budget::default()).unwrap() {
            ReachVerdict::Found(run) => assert_eq!(run.len(), 1),
            other => panic!("expected Found, got {other:?}"),
        }
    }

    #[test]
    fn budget_exhaustion_is_honest() {
        let w = workflow("pump");
        let net = w.net();
        let tgt = single(net, &[("q", Bound::AtLeast(5))]);
        match decide_mixed_reach(net, &w.initial_marking(1), &tgt, Budget::states(3)).unwrap() {
            ReachVerdict::Unknown(report) => assert!(report.states >= 3),
            other => panic!("expected Unknown, got {other:?}"),
        }
    }

    #[test]
    fn zero_budget_is_an_input_error() {
        let w = workflow("chain");
        let tgt = single(w.net(), &[("f", Bound::AtLeast(1))]);
        let res = decide_mixed_reach(w.net(), &w.initial_marking(1), &tgt, Budget::states(0));
        assert_eq!(res.unwrap_err(), ReachError::ZeroBudget);
    }

    #[test]
    fn empty_union_is_unreachable() {
        let w = workflow("chain");
        let tgt = MixedTarget::new(2, vec![]);
        match decide_mixed_reach(w.net(), &w.initial_marking(1), &tgt, Budget::default()).unwrap()
        {
            ReachVerdict::Unreachable(certs) => assert!(certs.is_empty()),
            other => panic!("expected Unreachable, got {other:?}"),
        }
    }

    #[test]
    fn found_from_start_marking_is_empty_run() {
        let w = workflow("chain");
        let net = w.net();
        let tgt = single(net, &[("i", Bound::AtLeast(1))]);
        match decide_mixed_reach(net, &w.initial_marking(1), &tgt, Budget::default()).unwrap() {
            ReachVerdict::Found(run) => assert!(run.is_empty()),
            other => panic!("expected Found, got {other:?}"),
        }
    }
}
