//! Redundancy analysis, skeleton extraction, and structural utilities.
//!
//! A place is redundant when no initial marking `{i : k}` can ever mark it;
//! a transition is redundant when no `{i : k}` can ever enable it. Removing
//! redundant items together with the places reset by surviving transitions
//! yields the skeleton, a plain Petri net that simulates the original on
//! the remaining coordinates.

use std::collections::BTreeSet;

use crate::closed::UpSet;
use crate::cover::{backward_cover, extract_covering_run, CoverBasis};
use crate::net::{
    remove_subnet, validate_workflow, Marking, PlaceId, ResetNet, Run, RunError, TransId,
    Violation, WorkflowNet,
};
use crate::soundness::FullResetRun;

/// Certificate of nonredundancy: the smallest initial budget whose
/// backward-coverability basis is supported on the initial place alone,
/// together with a covering run from that budget.
#[derive(Debug, Clone)]
pub struct Witness {
    pub budget: u64,
    pub run: Run,
}

/// Per-place and per-transition redundancy classification, each
/// nonredundant item carrying its witness.
#[derive(Debug)]
pub struct RedundancyInfo {
    places: Vec<Option<Witness>>,
    transitions: Vec<Option<Witness>>,
}

impl RedundancyInfo {
    pub fn place_witness(&self, p: PlaceId) -> Option<&Witness> {
        self.places[p.index()].as_ref()
    }

    pub fn transition_witness(&self, t: TransId) -> Option<&Witness> {
        self.transitions[t.index()].as_ref()
    }

    pub fn is_place_nonredundant(&self, p: PlaceId) -> bool {
        self.places[p.index()].is_some()
    }

    pub fn is_transition_nonredundant(&self, t: TransId) -> bool {
        self.transitions[t.index()].is_some()
    }

    pub fn nonredundant_places(&self) -> impl Iterator<Item = PlaceId> + '_ {
        self.places.iter().enumerate().filter(|(_, w)| w.is_some()).map(|(i, _)| PlaceId(i))
    }

    pub fn redundant_places(&self) -> impl Iterator<Item = PlaceId> + '_ {
        self.places.iter().enumerate().filter(|(_, w)| w.is_none()).map(|(i, _)| PlaceId(i))
    }

    pub fn nonredundant_transitions(&self) -> impl Iterator<Item = TransId> + '_ {
        self.transitions.iter().enumerate().filter(|(_, w)| w.is_some()).map(|(i, _)| TransId(i))
    }

    pub fn redundant_transitions(&self) -> impl Iterator<Item = TransId> + '_ {
        self.transitions.iter().enumerate().filter(|(_, w)| w.is_none()).map(|(i, _)| TransId(i))
    }
}

/// A target is witnessed iff its backward-coverability basis has an element
/// supported on `i` alone; the witness budget is the least such i-count.
fn witness_from_cover(cb: &CoverBasis, net: &ResetNet, i: PlaceId) -> Option<Witness> {
    let budget = cb
        .basis()
        .basis()
        .iter()
        .filter(|b| b.support().all(|p| p == i))
        .map(|b| b.get(i))
        .min()?;
    let start = Marking::from_pairs(net.place_count(), &[(i, budget)]);
    let run = extract_covering_run(cb, net, &start)
        .expect("a basis element below the start marking guarantees extraction");
    Some(Witness { budget, run })
}

/// Classifies every place and transition of `w`. A place is nonredundant
/// iff some `{i : k}` covers `{p : 1}`; a transition iff some `{i : k}`
/// covers its precondition.
pub fn redundancy_info(w: &WorkflowNet) -> RedundancyInfo {
    let net = w.net();
    let i = w.initial();
    let places = net
        .places()
        .map(|p| {
            let target = UpSet::above(Marking::unit(net.place_count(), p));
            witness_from_cover(&backward_cover(net, &target), net, i)
        })
        .collect();
    let transitions = net
        .transitions()
        .iter()
        .map(|t| {
            let target = UpSet::above(t.pre_marking());
            witness_from_cover(&backward_cover(net, &target), net, i)
        })
        .collect();
    RedundancyInfo { places, transitions }
}

/// Places reset by at least one nonredundant transition.
pub fn resetable_places(w: &WorkflowNet, info: &RedundancyInfo) -> BTreeSet<PlaceId> {
    let net = w.net();
    let mut out = BTreeSet::new();
    for t in net.transition_ids() {
        if info.is_transition_nonredundant(t) {
            out.extend(net.transition(t).reset_set().iter().copied());
        }
    }
    out
}

/// The skeleton of a workflow net plus the bookkeeping to move markings and
/// runs between the two nets. `place_map`/`trans_map` are indexed by the
/// original ids; `None` marks a removed node.
#[derive(Debug)]
pub struct SkeletonResult {
    pub skeleton: ResetNet,
    pub place_map: Vec<Option<PlaceId>>,
    pub trans_map: Vec<Option<TransId>>,
    pub resetable: BTreeSet<PlaceId>,
    /// Initial and final place of the skeleton when it is again a workflow
    /// net, otherwise the violations found.
    pub workflow_status: Result<(PlaceId, PlaceId), Vec<Violation>>,
}

impl SkeletonResult {
    pub fn keeps_place(&self, p: PlaceId) -> bool {
        self.place_map[p.index()].is_some()
    }

    pub fn keeps_transition(&self, t: TransId) -> bool {
        self.trans_map[t.index()].is_some()
    }

    /// Restriction of a marking of the original net to the skeleton's
    /// coordinate space.
    pub fn project_marking(&self, m: &Marking) -> Marking {
        debug_assert_eq!(m.dim(), self.place_map.len());
        let mut out = Marking::zero(self.skeleton.place_count());
        for (orig, mapped) in self.place_map.iter().enumerate() {
            if let Some(sp) = mapped {
                out.set(*sp, m.get(PlaceId(orig)));
            }
        }
        out
    }

    /// Inverse of [`project_marking`](Self::project_marking): a skeleton
    /// marking viewed in the original net, zero off the skeleton places.
    pub fn embed_marking(&self, ms: &Marking) -> Marking {
        debug_assert_eq!(ms.dim(), self.skeleton.place_count());
        let mut out = Marking::zero(self.place_map.len());
        for (orig, mapped) in self.place_map.iter().enumerate() {
            if let Some(sp) = mapped {
                out.set(PlaceId(orig), ms.get(*sp));
            }
        }
        out
    }

    /// The skeleton as a workflow net, when its status allows it.
    pub fn workflow(&self) -> Option<WorkflowNet> {
        let (i, f) = *self.workflow_status.as_ref().ok()?;
        Some(WorkflowNet::new_unchecked(self.skeleton.clone(), i, f))
    }
}

/// Removes redundant places, redundant transitions and resetable places,
/// then isolated leftovers. The result never carries a reset arc: a reset
/// arc either belongs to a removed transition or targets a resetable place.
pub fn skeleton(w: &WorkflowNet, info: &RedundancyInfo) -> SkeletonResult {
    let net = w.net();
    let resetable = resetable_places(w, info);
    let mut removed_places: BTreeSet<PlaceId> = info.redundant_places().collect();
    removed_places.extend(resetable.iter().copied());
    let removed_transitions: BTreeSet<TransId> = info.redundant_transitions().collect();
    let removal = remove_subnet(net, &removed_places, &removed_transitions);
    debug_assert!(!removal.net.has_reset_arcs());

    let initial = removal.place_map[w.initial().index()];
    let final_place = removal.place_map[w.final_place().index()];
    let workflow_status = match (initial, final_place) {
        (Some(i), Some(f)) => {
            let violations = validate_workflow(&removal.net, i, f, false);
            if violations.is_empty() {
                Ok((i, f))
            } else {
                Err(violations)
            }
        }
        (i, f) => {
            let mut violations = Vec::new();
            if i.is_none() {
                violations.push(Violation::InitialRemoved);
            }
            if f.is_none() {
                violations.push(Violation::FinalRemoved);
            }
            Err(violations)
        }
    };

    SkeletonResult {
        skeleton: removal.net,
        place_map: removal.place_map,
        trans_map: removal.trans_map,
        resetable,
        workflow_status,
    }
}

/// Zeroes every coordinate outside the skeleton places. The result lives in
/// the original net's coordinate space.
pub fn res_project(w: &WorkflowNet, skel: &SkeletonResult, m: &Marking) -> Marking {
    debug_assert_eq!(m.dim(), w.net().place_count());
    let mut out = m.clone();
    for p in w.net().places() {
        if !skel.keeps_place(p) {
            out.set(p, 0);
        }
    }
    out
}

/// Maps a run of `w` to the skeleton by dropping removed transitions. The
/// input must replay from `start`; the projection is guaranteed to replay
/// in the skeleton between the projected end markings and this is checked.
///
/// The guarantee relies on the run never firing a redundant transition,
/// which holds for every run from an initial marking.
pub fn project_run(
    w: &WorkflowNet,
    skel: &SkeletonResult,
    start: &Marking,
    run: &Run,
) -> Result<Run, RunError> {
    let end = w.net().fire_run(start, run)?;
    let projected = Run::new(
        run.steps().iter().filter_map(|&t| skel.trans_map[t.index()]).collect(),
    );
    let got = skel
        .skeleton
        .fire_run(&skel.project_marking(start), &projected)
        .expect("projected runs replay in the skeleton");
    assert_eq!(
        got,
        skel.project_marking(&end),
        "projected run must land on the projected end marking"
    );
    Ok(projected)
}

/// A run of the original net simulating a skeleton run, together with the
/// extra token budget it consumed and produced.
#[derive(Debug)]
pub struct LiftedRun {
    pub run: Run,
    /// Tokens added on `i` beyond the skeleton budget; the lifted run ends
    /// with the same count on `f`.
    pub added_budget: u64,
}

/// Simulates the skeleton run `pi_s` (replaying from `{i : l}` in the
/// skeleton) inside the original net. The lifted run starts from
/// `{i : l + k'}` and ends at the skeleton's end marking plus `{f : k'}`,
/// with `k' = 2z|pi_s|`.
///
/// Each skeleton step is expanded into four segments: the full-reset-run
/// prefix enabling the original transition, the transition itself, the full
/// reset run to flush the off-skeleton places, and the stored completion
/// certificate. Both runs and the final equality are checked; a failure is
/// an internal inconsistency, not an input error.
pub fn lift_skeleton_run(
    w: &WorkflowNet,
    skel: &SkeletonResult,
    frr: &FullResetRun,
    l: u64,
    pi_s: &Run,
) -> LiftedRun {
    let net = w.net();
    let z = frr.z;

    let mut original_of = vec![None; skel.skeleton.transition_count()];
    for t in net.transition_ids() {
        if let Some(ts) = skel.trans_map[t.index()] {
            original_of[ts.index()] = Some(t);
        }
    }

    let added_budget = 2 * z * pi_s.len() as u64;
    let start = Marking::from_pairs(net.place_count(), &[(w.initial(), l + added_budget)]);
    let mut cur = start;
    let mut out = Run::empty();
    let mut fire_segment = |cur: &mut Marking, seg: &Run| {
        *cur = net.fire_run(cur, seg).expect("lifted segments replay");
        out.extend(seg);
    };

    for &ts in pi_s.steps() {
        let t = original_of[ts.index()].expect("skeleton transitions stem from the original net");
        let pos = frr
            .zeta
            .steps()
            .iter()
            .position(|&u| u == t)
            .expect("a full reset run fires every nonredundant transition");
        let prefix = Run::new(frr.zeta.steps()[..pos].to_vec());
        fire_segment(&mut cur, &prefix);
        fire_segment(&mut cur, &Run::new(vec![t]));
        fire_segment(&mut cur, &frr.zeta);
        fire_segment(&mut cur, &frr.prefix_certificates[pos]);
    }

    let skel_start = Marking::from_pairs(
        skel.skeleton.place_count(),
        &[(skel.place_map[w.initial().index()].expect("lifting needs i in the skeleton"), l)],
    );
    let skel_end = skel.skeleton.fire_run(&skel_start, pi_s).expect("skeleton run replays");
    let mut expected = skel.embed_marking(&skel_end);
    expected.set(w.final_place(), expected.get(w.final_place()) + added_budget);
    assert_eq!(cur, expected, "lifted run must end at the embedded skeleton marking");

    LiftedRun { run: out, added_budget }
}

/// Every transition producing into `s` also consumes from `s`; an unmarked
/// siphon then stays unmarked. Reset arcs are ignored, so the reading is
/// only meaningful for plain nets.
pub fn is_siphon(net: &ResetNet, s: &BTreeSet<PlaceId>) -> bool {
    net.transitions().iter().all(|t| {
        let produces = s.iter().any(|&p| t.post(p) > 0);
        !produces || s.iter().any(|&p| t.pre(p) > 0)
    })
}

/// Every transition consuming from `s` also produces into `s`; a marked
/// trap then stays marked. Same plain-net caveat as [`is_siphon`].
pub fn is_trap(net: &ResetNet, s: &BTreeSet<PlaceId>) -> bool {
    net.transitions().iter().all(|t| {
        let consumes = s.iter().any(|&p| t.pre(p) > 0);
        !consumes || s.iter().any(|&p| t.post(p) > 0)
    })
}
