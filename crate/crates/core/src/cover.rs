//! Backward coverability for reset nets and the Karp-Miller tree for plain
//! nets.
//!
//! Backward coverability computes the minimal basis of "can cover the
//! target" and never deletes generated markings: evicted antichain entries
//! stay in an arena so that provenance chains stay intact, which is what
//! makes covering-run extraction possible after the fixpoint.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::budget::{Budget, BudgetReport, Meter};
use crate::closed::{minimize, pred_of, OmegaMarking, OmegaNat, UpSet};
use crate::net::{Marking, ResetNet, Run, TransId};

struct CoverNode {
    marking: Marking,
    /// Transition to fire plus the arena entry whose upward closure the
    /// firing reaches; None for target elements.
    provenance: Option<(TransId, usize)>,
    depth: usize,
}

/// Result of the backward coverability fixpoint. `minimal` indexes the
/// antichain inside the arena; `basis` is the same antichain in normal form.
pub struct CoverBasis {
    arena: Vec<CoverNode>,
    minimal: Vec<usize>,
    basis: UpSet,
}

impl CoverBasis {
    pub fn basis(&self) -> &UpSet {
        &self.basis
    }

    /// Can the target be covered starting from `m`?
    pub fn member(&self, m: &Marking) -> bool {
        self.basis.contains(m)
    }
}

fn insert_minimal(arena: &mut Vec<CoverNode>, minimal: &mut Vec<usize>, node: CoverNode) -> Option<usize> {
    if minimal.iter().any(|&i| arena[i].marking.leq(&node.marking)) {
        return None;
    }
    minimal.retain(|&i| !node.marking.leq(&arena[i].marking));
    arena.push(node);
    minimal.push(arena.len() - 1);
    Some(arena.len() - 1)
}

/// Least upward-closed set containing `target` and closed under one-step
/// predecessors. Membership in the result is exactly "some run from here
/// ends in a marking covering the target".
pub fn backward_cover(net: &ResetNet, target: &UpSet) -> CoverBasis {
    backward_cover_budgeted(net, target, Budget::unlimited())
        .expect("an unlimited budget cannot run out")
}

/// [`backward_cover`] with a cap. The fixpoint terminates on its own
/// (markings are well-quasi-ordered); the budget only serves callers that
/// would rather give up early on hostile instances.
pub fn backward_cover_budgeted(
    net: &ResetNet,
    target: &UpSet,
    budget: Budget,
) -> Result<CoverBasis, BudgetReport> {
    let mut meter = Meter::new(budget);
    let mut arena: Vec<CoverNode> = Vec::new();
    let mut minimal: Vec<usize> = Vec::new();
    let mut work: VecDeque<usize> = VecDeque::new();

    for b in target.basis() {
        meter.charge(1)?;
        let node = CoverNode { marking: b.clone(), provenance: None, depth: 0 };
        if let Some(idx) = insert_minimal(&mut arena, &mut minimal, node) {
            work.push_back(idx);
        }
    }
    while let Some(idx) = work.pop_front() {
        // Entries dominated since they were enqueued can be skipped: the
        // dominating entry is queued too and pred_of is monotone, so its
        // predecessors dominate ours.
        if !minimal.contains(&idx) {
            continue;
        }
        for t in net.transition_ids() {
            let Some(pred) = pred_of(net, t, &arena[idx].marking) else {
                continue;
            };
            let node = CoverNode {
                marking: pred,
                provenance: Some((t, idx)),
                depth: arena[idx].depth + 1,
            };
            if let Some(new_idx) = insert_minimal(&mut arena, &mut minimal, node) {
                meter.charge(1)?;
                work.push_back(new_idx);
            }
        }
    }
    let basis = minimize(net.place_count(), minimal.iter().map(|&i| arena[i].marking.clone()));
    Ok(CoverBasis { arena, minimal, basis })
}

/// A run replayable from `m` whose end marking covers the original target,
/// or None when `m` lies outside the coverability set.
///
/// Picks the provenance chain of smallest depth (ties broken
/// lexicographically), so a marking that already covers the target yields
/// the empty run. Replay rides strong monotonicity: the concrete marking
/// dominates the chain marking at every step. The end may strictly exceed
/// the target; it is returned as-is.
pub fn extract_covering_run(cb: &CoverBasis, net: &ResetNet, m: &Marking) -> Option<Run> {
    let mut best: Option<usize> = None;
    for &idx in &cb.minimal {
        if !cb.arena[idx].marking.leq(m) {
            continue;
        }
        let better = match best {
            None => true,
            Some(cur) => {
                let (a, b) = (&cb.arena[idx], &cb.arena[cur]);
                (a.depth, a.marking.counts()) < (b.depth, b.marking.counts())
            }
        };
        if better {
            best = Some(idx);
        }
    }
    let mut idx = best?;
    let mut cur = m.clone();
    let mut steps = Vec::new();
    while let Some((t, next)) = cb.arena[idx].provenance {
        debug_assert!(cb.arena[idx].marking.leq(&cur));
        cur = net.fire(&cur, t).expect("predecessor marking enables its transition");
        steps.push(t);
        idx = next;
    }
    Some(Run::new(steps))
}

#[derive(Error, Debug)]
pub enum KMError {
    #[error("net has reset arcs; omega acceleration is unsound for them")]
    ResetArcs,
    #[error("node budget exhausted after {} nodes", .0.states)]
    Budget(BudgetReport),
}

/// A Karp-Miller node: the (possibly accelerated) marking plus the tree
/// edge that created it.
pub struct KMNode {
    pub marking: OmegaMarking,
    pub parent: Option<(usize, TransId)>,
}

/// The Karp-Miller tree of a plain net.
pub struct KMTree {
    nodes: Vec<KMNode>,
    bounded: bool,
    first_accel: Option<(usize, usize)>,
}

/// Witness of unboundedness: replaying `prefix` from the root marking lands
/// on some m1, appending `cycle` lands on m2 > m1. By strong monotonicity
/// the cycle then repeats forever, growing the marking each time.
#[derive(Clone, Debug)]
pub struct Pump {
    pub prefix: Run,
    pub cycle: Run,
}

impl KMTree {
    pub fn bounded(&self) -> bool {
        self.bounded
    }

    pub fn nodes(&self) -> &[KMNode] {
        &self.nodes
    }

    /// The exact reachability set, or None when the net is unbounded from
    /// the root (markings then contain omega placeholders).
    pub fn reach_set(&self) -> Option<BTreeSet<Marking>> {
        self.bounded.then(|| {
            self.nodes
                .iter()
                .map(|n| n.marking.to_marking().expect("bounded tree has no omega"))
                .collect()
        })
    }

    /// A run from the root to the first node carrying exactly `m`. Nodes
    /// are in BFS order, so the run has minimal length. None if `m` is not
    /// in the tree or carries omega coordinates.
    pub fn run_to(&self, m: &Marking) -> Option<Run> {
        let target = OmegaMarking::from_marking(m);
        let idx = self.nodes.iter().position(|n| n.marking == target)?;
        Some(Run::new(self.path_to(idx)))
    }

    fn path_to(&self, target: usize) -> Vec<TransId> {
        let mut steps = Vec::new();
        let mut cur = target;
        while let Some((parent, t)) = self.nodes[cur].parent {
            steps.push(t);
            cur = parent;
        }
        steps.reverse();
        steps
    }

    /// The pumping witness behind the first acceleration, None on bounded
    /// trees. The involved path is omega-free, so both runs replay
    /// concretely from the root marking.
    pub fn pump(&self) -> Option<Pump> {
        let (node, ancestor) = self.first_accel?;
        let full = self.path_to(node);
        let prefix = self.path_to(ancestor);
        let cycle = full[prefix.len()..].to_vec();
        Some(Pump { prefix: Run::new(prefix), cycle: Run::new(cycle) })
    }
}

fn fire_omega(net: &ResetNet, m: &OmegaMarking, t: TransId) -> Option<OmegaMarking> {
    let tr = net.transition(t);
    let mut out = m.clone();
    for p in net.places() {
        if let OmegaNat::Fin(n) = m.get(p) {
            if n < tr.pre(p) {
                return None;
            }
            out.set(p, OmegaNat::Fin(n - tr.pre(p) + tr.post(p)));
        }
    }
    Some(out)
}

/// Classical Karp-Miller for plain nets: BFS expansion, a child equal to an
/// ancestor becomes a leaf, a child strictly dominating an ancestor gets the
/// strictly grown coordinates accelerated to omega (repeated until stable).
/// The tree is bounded iff no omega ever appears, and in that case the node
/// markings are exactly the reachable markings.
pub fn karp_miller(net: &ResetNet, m0: &Marking, budget: Budget) -> Result<KMTree, KMError> {
    if net.has_reset_arcs() {
        return Err(KMError::ResetArcs);
    }
    let mut meter = Meter::new(budget);
    let mut nodes = vec![KMNode { marking: OmegaMarking::from_marking(m0), parent: None }];
    meter.charge(1).map_err(KMError::Budget)?;
    let mut first_accel: Option<(usize, usize)> = None;
    let mut queue = VecDeque::from([0usize]);

    while let Some(n) = queue.pop_front() {
        for t in net.transition_ids() {
            let Some(mut next) = fire_omega(net, &nodes[n].marking, t) else {
                continue;
            };
            loop {
                let mut changed = false;
                let mut chain = Some(n);
                while let Some(a) = chain {
                    let am = &nodes[a].marking;
                    if am.leq(&next) && *am != next {
                        let grown: Vec<_> = net
                            .places()
                            .filter(|&p| match (am.get(p), next.get(p)) {
                                (OmegaNat::Fin(lo), OmegaNat::Fin(hi)) => lo < hi,
                                _ => false,
                            })
                            .collect();
                        if !grown.is_empty() {
                            if first_accel.is_none() {
                                first_accel = Some((nodes.len(), a));
                            }
                            for p in grown {
                                next.set(p, OmegaNat::Omega);
                            }
                            changed = true;
                        }
                    }
                    chain = nodes[a].parent.map(|(parent, _)| parent);
                }
                if !changed {
                    break;
                }
            }
            let mut repeat = false;
            let mut chain = Some(n);
            while let Some(a) = chain {
                if nodes[a].marking == next {
                    repeat = true;
                    break;
                }
                chain = nodes[a].parent.map(|(parent, _)| parent);
            }
            let idx = nodes.len();
            nodes.push(KMNode { marking: next, parent: Some((n, t)) });
            meter.charge(1).map_err(KMError::Budget)?;
            if !repeat {
                queue.push_back(idx);
            }
        }
    }
    let bounded = nodes.iter().all(|n| !n.marking.has_omega());
    Ok(KMTree { nodes, bounded, first_accel })
}
