//! Soundness deciders and the five-property pipeline.
//!
//! k-soundness is undecidable for reset workflow nets, so the pipeline
//! brackets it: `up_to_k` is a semi-decision refuting unsound nets with
//! replayable witnesses, `pk_check` is a decidable property implied by
//! generalised soundness and implying up-to-k soundness. A net failing
//! `pk_check` definitively is not generalised sound; a net passing it is
//! up-to-k sound.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::budget::{Budget, BudgetReport, Meter};
use crate::closed::{
    complement_up_to_down, Atom, Bound, IdealBudgetError, MixedTarget, OmegaNat, UpSet,
    DEFAULT_IDEAL_CAP,
};
use crate::cover::{backward_cover, extract_covering_run, karp_miller, CoverBasis, KMError};
use crate::net::{Marking, NetBuilder, PlaceId, ResetNet, Run, TransId, WorkflowNet};
use crate::reach::{decide_mixed_reach, ReachVerdict};
use crate::structure::{redundancy_info, res_project, skeleton, RedundancyInfo, SkeletonResult};

/// Outcome of a soundness query. Fails always carries a marking that cannot
/// complete together with a run producing it from the queried initial
/// marking.
#[derive(Clone, Debug)]
pub enum Verdict {
    Holds(Evidence),
    Fails(CounterExample),
    Unknown(UnknownReason),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds(_))
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }
}

/// Why a Holds verdict is definite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// Forward exploration terminated and every marking completes.
    ExploredAll { states: usize },
    /// The net is bounded from the initial marking and the exact
    /// reachability set was screened.
    BoundedComplete { states: usize },
    /// The stuck-marking target was empty before any search.
    EmptyTarget,
    /// A reachability query refuted every target atom.
    CertifiedUnreachable,
}

/// A marking refuting the queried property, with a producing run.
#[derive(Clone, Debug)]
pub struct CounterExample {
    pub witness: Marking,
    pub run: Run,
}

#[derive(Clone, Debug)]
pub enum UnknownReason {
    Budget(BudgetReport),
    Ideals(IdealBudgetError),
}

/// Classification of a single marking against completion to `{f : k}`.
#[derive(Clone, Debug)]
pub enum Completion {
    /// The run ends exactly at `{f : k}`.
    Completes(Run),
    /// The covering run lands strictly above `{f : k}`. Such an end marking
    /// can never shrink back: every transition has nonempty post and f is
    /// never reset, so each firing keeps a token outside f or keeps f too
    /// high.
    Overshoot { end: Marking, run: Run },
    /// The marking cannot even cover `{f : k}`.
    CannotCover,
}

/// One backward coverability pass of `{f : k}`, reusable across the many
/// markings a soundness search screens.
pub struct CompletionOracle {
    cover: CoverBasis,
    goal: Marking,
}

impl CompletionOracle {
    pub fn new(w: &WorkflowNet, k: u64) -> Self {
        let goal = w.final_marking(k);
        let cover = backward_cover(w.net(), &UpSet::above(goal.clone()));
        CompletionOracle { cover, goal }
    }

    pub fn goal(&self) -> &Marking {
        &self.goal
    }

    pub fn check(&self, net: &ResetNet, m: &Marking) -> Completion {
        if !self.cover.member(m) {
            return Completion::CannotCover;
        }
        let run = extract_covering_run(&self.cover, net, m).expect("members admit covering runs");
        let end = net.fire_run(m, &run).expect("covering runs replay");
        if end == self.goal {
            Completion::Completes(run)
        } else {
            debug_assert!(self.goal.lt(&end));
            Completion::Overshoot { end, run }
        }
    }
}

/// Screens one marking against completion to `{f : k}`. For repeated queries
/// at the same k build a [`CompletionOracle`] once instead.
pub fn can_complete_or_witness(w: &WorkflowNet, m: &Marking, k: u64) -> Completion {
    CompletionOracle::new(w, k).check(w.net(), m)
}

fn rebuild(parent: &BTreeMap<Marking, Option<(Marking, TransId)>>, m: &Marking) -> Run {
    let mut steps = Vec::new();
    let mut cur = m;
    while let Some((prev, t)) = parent.get(cur).expect("marking was discovered") {
        steps.push(*t);
        cur = prev;
    }
    steps.reverse();
    Run::new(steps)
}

/// Semi-decision of k-soundness: forward search from `{i : k}`, each
/// discovered marking screened against completion. Finds every witness of
/// unsoundness eventually; termination of the Holds branch needs the
/// reachability set to be finite.
pub fn k_sound_semi(w: &WorkflowNet, k: u64, budget: Budget) -> Verdict {
    let net = w.net();
    let oracle = CompletionOracle::new(w, k);
    let mut meter = Meter::new(budget);

    let m0 = w.initial_marking(k);
    let mut parent: BTreeMap<Marking, Option<(Marking, TransId)>> = BTreeMap::new();
    parent.insert(m0.clone(), None);
    let mut frontier = vec![m0];

    while !frontier.is_empty() {
        // small markings first: token loss is the common failure shape
        frontier.sort_by(|a, b| (a.total(), a.counts()).cmp(&(b.total(), b.counts())));
        for m in &frontier {
            if let Err(report) = meter.charge(1) {
                return Verdict::Unknown(UnknownReason::Budget(report));
            }
            match oracle.check(net, m) {
                Completion::Completes(_) => {}
                Completion::CannotCover => {
                    return Verdict::Fails(CounterExample { witness: m.clone(), run: rebuild(&parent, m) });
                }
                Completion::Overshoot { end, run } => {
                    let mut full = rebuild(&parent, m);
                    full.extend(&run);
                    return Verdict::Fails(CounterExample { witness: end, run: full });
                }
            }
        }
        let mut next = Vec::new();
        for m in &frontier {
            for t in net.transition_ids() {
                if net.is_enabled(m, t) {
                    let succ = net.fire(m, t).expect("enabled transitions fire");
                    if !parent.contains_key(&succ) {
                        parent.insert(succ.clone(), Some((m.clone(), t)));
                        next.push(succ);
                    }
                }
            }
        }
        frontier = next;
    }
    Verdict::Holds(Evidence::ExploredAll { states: meter.states() })
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("the exact decider needs a net without reset arcs")]
pub struct ResetArcsError;

/// Decides k-soundness of a plain workflow net. Unbounded nets are unsound:
/// from reachable m1 < m2 either m1 cannot complete, or its completion
/// replayed from m2 strands the surplus strictly above `{f : k}`. Bounded
/// nets are screened exhaustively.
pub fn k_sound_exact_plain(
    w: &WorkflowNet,
    k: u64,
    budget: Budget,
) -> Result<Verdict, ResetArcsError> {
    let net = w.net();
    let m0 = w.initial_marking(k);
    let tree = match karp_miller(net, &m0, budget) {
        Ok(tree) => tree,
        Err(KMError::ResetArcs) => return Err(ResetArcsError),
        Err(KMError::Budget(report)) => return Ok(Verdict::Unknown(UnknownReason::Budget(report))),
    };
    let oracle = CompletionOracle::new(w, k);

    if !tree.bounded() {
        let pump = tree.pump().expect("unbounded trees carry a pump");
        let m1 = net.fire_run(&m0, &pump.prefix).expect("pump prefix replays");
        let m2 = net.fire_run(&m1, &pump.cycle).expect("pump cycle replays");
        debug_assert!(m1.lt(&m2));
        return Ok(Verdict::Fails(match oracle.check(net, &m1) {
            Completion::Completes(completion) => {
                let end = net.fire_run(&m2, &completion).expect("plain replays are monotone");
                debug_assert!(oracle.goal().lt(&end));
                CounterExample {
                    witness: end,
                    run: Run::concat(&[&pump.prefix, &pump.cycle, &completion]),
                }
            }
            Completion::CannotCover => CounterExample { witness: m1, run: pump.prefix.clone() },
            Completion::Overshoot { end, run } => {
                CounterExample { witness: end, run: Run::concat(&[&pump.prefix, &run]) }
            }
        }));
    }

    let reach = tree.reach_set().expect("bounded trees enumerate their markings");
    for m in &reach {
        match oracle.check(net, m) {
            Completion::Completes(_) => {}
            Completion::CannotCover => {
                let run = tree.run_to(m).expect("reachable markings sit in the tree");
                return Ok(Verdict::Fails(CounterExample { witness: m.clone(), run }));
            }
            Completion::Overshoot { end, run } => {
                let mut full = tree.run_to(m).expect("reachable markings sit in the tree");
                full.extend(&run);
                return Ok(Verdict::Fails(CounterExample { witness: end, run: full }));
            }
        }
    }
    Ok(Verdict::Holds(Evidence::BoundedComplete { states: reach.len() }))
}

fn strict_cover_basis(net: &ResetNet, goal: &Marking) -> UpSet {
    let mut strict = UpSet::empty(net.place_count());
    for p in net.places() {
        strict.insert(goal.plus(&Marking::unit(net.place_count(), p)));
    }
    strict
}

/// True iff `{i : k}` cannot cover any marking strictly above `{f : k}`.
/// Decidable even with reset arcs.
pub fn coverability_clean(w: &WorkflowNet, k: u64) -> bool {
    let net = w.net();
    let strict = strict_cover_basis(net, &w.final_marking(k));
    !backward_cover(net, &strict).member(&w.initial_marking(k))
}

/// The run refuting cleanliness: from `{i : k}` to a marking strictly above
/// `{f : k}`, which can then never complete. None when the net is clean.
pub fn strict_cover_witness(w: &WorkflowNet, k: u64) -> Option<CounterExample> {
    let net = w.net();
    let goal = w.final_marking(k);
    let cover = backward_cover(net, &strict_cover_basis(net, &goal));
    let m0 = w.initial_marking(k);
    if !cover.member(&m0) {
        return None;
    }
    let run = extract_covering_run(&cover, net, &m0).expect("members admit covering runs");
    let witness = net.fire_run(&m0, &run).expect("covering runs replay");
    debug_assert!(goal.lt(&witness));
    Some(CounterExample { witness, run })
}

/// A run certifying that the net can fire all its nonredundant transitions
/// and still terminate cleanly, from any reachable side state.
///
/// `zeta` replays `{i : z}` to exactly `{f : z}` and fires every
/// nonredundant transition. For each position j, `prefix_certificates[j]`
/// replays the skeleton restriction of the marking before step j to exactly
/// `{f : z}`.
#[derive(Clone, Debug)]
pub struct FullResetRun {
    pub z: u64,
    pub zeta: Run,
    pub prefix_certificates: Vec<Run>,
}

/// Where the full-reset-run search failed. Every variant certifies that the
/// net is not generalised sound.
#[derive(Clone, Debug)]
pub enum FullResetFailure {
    /// A nonredundant transition resets the initial place.
    InitialResetable { by: TransId },
    /// The pooled all-transitions run ends where `{f : z}` is not coverable.
    /// `via` replays `{i : z}` to `end`.
    CannotCover { z: u64, end: Marking, via: Run },
    /// The covering completion lands strictly above `{f : z}`. `via`
    /// replays `{i : z}` to `end`.
    Overshoot { z: u64, end: Marking, via: Run },
    /// The skeleton restriction of the marking before step `position` of
    /// zeta does not complete to exactly `{f : z}`.
    PrefixIncomplete { z: u64, position: usize },
}

#[derive(Debug)]
pub enum FullResetOutcome {
    Has(FullResetRun),
    NotGeneralisedSound(FullResetFailure),
}

/// Searches for a full reset run by pooling the redundancy witnesses: fire
/// every nonredundant transition once from `{i : z}` with z the summed
/// witness budgets, complete to exactly `{f : z}`, then certify every
/// prefix. Each failure mode refutes generalised soundness outright.
pub fn full_reset_run(w: &WorkflowNet, info: &RedundancyInfo) -> FullResetOutcome {
    let net = w.net();
    for t in info.nonredundant_transitions() {
        if net.transition(t).resets(w.initial()) {
            return FullResetOutcome::NotGeneralisedSound(FullResetFailure::InitialResetable { by: t });
        }
    }

    let mut z = 0;
    let mut delta = Run::empty();
    for t in info.nonredundant_transitions() {
        let wit = info.transition_witness(t).expect("nonredundant transitions carry witnesses");
        z += wit.budget;
        delta.extend(&wit.run);
        delta.push(t);
    }

    let start = w.initial_marking(z);
    let goal = w.final_marking(z);
    // each witness run replays from its own {i : k_t}; pooling the budgets
    // keeps every replay enabled because i is never produced or reset here
    let mid = net.fire_run(&start, &delta).expect("pooled witness runs replay");

    let cover = backward_cover(net, &UpSet::above(goal.clone()));
    if !cover.member(&mid) {
        return FullResetOutcome::NotGeneralisedSound(FullResetFailure::CannotCover {
            z,
            end: mid,
            via: delta,
        });
    }
    let completion = extract_covering_run(&cover, net, &mid).expect("members admit covering runs");
    let end = net.fire_run(&mid, &completion).expect("covering runs replay");
    let mut zeta = delta;
    zeta.extend(&completion);
    if end != goal {
        return FullResetOutcome::NotGeneralisedSound(FullResetFailure::Overshoot { z, end, via: zeta });
    }

    let skel = skeleton(w, info);
    let trace = net.replay(&start, &zeta).expect("zeta replays by construction");
    let mut certificates = Vec::with_capacity(zeta.len());
    for (position, m) in trace[..zeta.len()].iter().enumerate() {
        let res = res_project(w, &skel, m);
        let fail = FullResetOutcome::NotGeneralisedSound(FullResetFailure::PrefixIncomplete { z, position });
        if !cover.member(&res) {
            return fail;
        }
        let run = extract_covering_run(&cover, net, &res).expect("members admit covering runs");
        if net.fire_run(&res, &run).expect("covering runs replay") != goal {
            return fail;
        }
        certificates.push(run);
    }
    FullResetOutcome::Has(FullResetRun { z, zeta, prefix_certificates: certificates })
}

/// Generalised-soundness verdict for a plain skeleton.
#[derive(Debug)]
pub enum GsVerdict {
    /// The skeleton fails k-soundness, so the original net is not
    /// generalised sound.
    NotGeneralisedSound { k: u64, counterexample: CounterExample },
    /// A sufficient condition closed the quantifier over all k.
    HoldsProved(GsEvidence),
    /// Sound for every checked k but nothing proves the rest.
    BoundedOnly { k_max: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GsEvidence {
    /// 1-sound state machine: tokens evolve independently, so k-soundness
    /// holds for every k.
    StateMachine,
}

/// Scans k = 1..k_max with the exact plain decider, then tries to close the
/// remaining quantifier with a structural argument.
pub fn skeleton_gs_check(skel_w: &WorkflowNet, k_max: u64, budget: Budget) -> GsVerdict {
    for k in 1..=k_max {
        match k_sound_exact_plain(skel_w, k, budget).expect("skeletons are plain") {
            Verdict::Fails(counterexample) => {
                return GsVerdict::NotGeneralisedSound { k, counterexample };
            }
            Verdict::Holds(_) if k == 1 && skel_w.net().is_state_machine() => {
                return GsVerdict::HoldsProved(GsEvidence::StateMachine);
            }
            Verdict::Holds(_) | Verdict::Unknown(_) => {}
        }
    }
    GsVerdict::BoundedOnly { k_max }
}

fn fresh_place_name(net: &ResetNet, base: &str) -> String {
    let mut name = String::from(base);
    while net.place_by_name(&name).is_some() {
        name.push('\'');
    }
    name
}

fn fresh_transition_name(net: &ResetNet, base: &str) -> String {
    let mut name = String::from(base);
    while net.transition_by_name(&name).is_some() {
        name.push('\'');
    }
    name
}

/// Checks that no stuck component of the original net survives on the
/// skeleton places.
///
/// A stuck marking is a nonzero marking that cannot cover `{f : 1}`. The
/// check builds a simulation net: the skeleton, a faucet transition feeding
/// i one token at a time, and a sum place mirroring the non-final skeleton
/// places. Reaching the skeleton restriction of a stuck marking with the
/// sum place nonempty refutes generalised soundness; refuting the query for
/// every stuck ideal discharges the property.
pub fn property5_check(w: &WorkflowNet, skel: &SkeletonResult, budget: Budget) -> Verdict {
    let net = w.net();
    let (skel_i, skel_f) =
        *skel.workflow_status.as_ref().expect("the check needs a workflow skeleton");

    let unit_f = Marking::unit(net.place_count(), w.final_place());
    let cover_f = backward_cover(net, &UpSet::above(unit_f));
    let stuck = match complement_up_to_down(cover_f.basis(), DEFAULT_IDEAL_CAP) {
        Ok(d) => d,
        Err(e) => return Verdict::Unknown(UnknownReason::Ideals(e)),
    };
    for d in stuck.ideals() {
        // one token on f covers {f : 1} outright
        assert_eq!(
            d.get(w.final_place()),
            OmegaNat::Fin(0),
            "stuck ideals cannot allow tokens on the final place",
        );
    }

    let ns = &skel.skeleton;
    let mut b = NetBuilder::new();
    for p in ns.places() {
        b.place(ns.place_name(p)).expect("skeleton names stay valid");
    }
    let p_all =
        b.place(fresh_place_name(ns, "all")).expect("the uniquified name is valid");
    for t in ns.transitions() {
        let mut pre = Vec::new();
        let mut post = Vec::new();
        let mut pre_sum = 0;
        let mut post_sum = 0;
        for p in ns.places() {
            if t.pre(p) > 0 {
                pre.push((p, t.pre(p)));
            }
            if t.post(p) > 0 {
                post.push((p, t.post(p)));
            }
            if p != skel_f {
                pre_sum += t.pre(p);
                post_sum += t.post(p);
            }
        }
        if pre_sum > 0 {
            pre.push((p_all, pre_sum));
        }
        if post_sum > 0 {
            post.push((p_all, post_sum));
        }
        b.transition(t.name(), &pre, &post, &[]).expect("skeleton transition names stay valid");
    }
    b.transition(&fresh_transition_name(ns, "feed"), &[], &[(skel_i, 1), (p_all, 1)], &[])
        .expect("the uniquified name is valid");
    let sim = b.build();
    let dim = sim.place_count();

    let mut atoms = Vec::new();
    for d in stuck.ideals() {
        let mut atom = Atom::unconstrained(dim);
        let mut all_zero = true;
        for p in net.places() {
            let Some(sp) = skel.place_map[p.index()] else { continue };
            if sp == skel_f {
                continue;
            }
            let bound = d.get(p);
            if bound != OmegaNat::Fin(0) {
                all_zero = false;
            }
            atom.set(sp, Bound::AtMost(bound));
        }
        atom.set(p_all, Bound::AtLeast(1));
        // the sum place mirrors the non-final skeleton places, so bounding
        // them all by zero contradicts p_all >= 1
        if !all_zero {
            atoms.push(atom);
        }
    }
    if atoms.is_empty() {
        return Verdict::Holds(Evidence::EmptyTarget);
    }

    let zero = Marking::zero(dim);
    let target = MixedTarget::new(dim, atoms);
    match decide_mixed_reach(&sim, &zero, &target, budget) {
        Ok(ReachVerdict::Found(run)) => {
            let end = sim.fire_run(&zero, &run).expect("found runs replay");
            debug_assert!(target.contains(&end));
            Verdict::Fails(CounterExample { witness: end, run })
        }
        Ok(ReachVerdict::Unreachable(_)) => Verdict::Holds(Evidence::CertifiedUnreachable),
        Ok(ReachVerdict::Unknown(report)) => Verdict::Unknown(UnknownReason::Budget(report)),
        Err(e) => unreachable!("the simulation net is plain: {e}"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropStatus {
    Holds,
    Fails,
    Unknown,
    Skipped,
}

/// One pipeline property with a human-readable justification.
#[derive(Clone, Debug)]
pub struct PropertyRecord {
    pub status: PropStatus,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PkOutcome {
    UpToKSound,
    /// `k_hint` names a k the net provably is not k-sound for, when the
    /// failing property exposes one.
    NotGeneralisedSound { k_hint: Option<u64> },
    Unknown,
}

/// Outcome of the five-property pipeline, one record per property in
/// definition order.
#[derive(Debug)]
pub struct PkReport {
    pub properties: [PropertyRecord; 5],
    pub overall: PkOutcome,
    /// Present when the failing property exposes a concrete unsoundness
    /// witness: `run` replays from `{i : k_hint}` to `witness`, which can
    /// never reach `{f : k_hint}`.
    pub counterexample: Option<CounterExample>,
}

const PROPERTY_COUNT: usize = 5;

fn records() -> [PropertyRecord; PROPERTY_COUNT] {
    std::array::from_fn(|_| PropertyRecord {
        status: PropStatus::Skipped,
        detail: "not evaluated".into(),
    })
}

fn holds(detail: String) -> PropertyRecord {
    PropertyRecord { status: PropStatus::Holds, detail }
}

fn fails(detail: String) -> PropertyRecord {
    PropertyRecord { status: PropStatus::Fails, detail }
}

fn unknown(detail: String) -> PropertyRecord {
    PropertyRecord { status: PropStatus::Unknown, detail }
}

/// The decidable five-property check bracketing k-soundness.
///
/// All five properties hold on every generalised sound net, and together
/// they imply up-to-k soundness. The first definite failure short-circuits
/// to NotGeneralisedSound; an indefinite property downgrades the overall
/// verdict to Unknown unless a later property fails definitively.
pub fn pk_check(w: &WorkflowNet, k: u64, k_max_gs: u64, budget: Budget) -> PkReport {
    assert!(k >= 1, "the pipeline needs k >= 1");
    let net = w.net();
    let mut props = records();
    let mut undecided = false;
    let not_gs = |props: [PropertyRecord; PROPERTY_COUNT], k_hint, counterexample| PkReport {
        properties: props,
        overall: PkOutcome::NotGeneralisedSound { k_hint },
        counterexample,
    };

    let info = redundancy_info(w);
    let skel = skeleton(w, &info);

    let reset_ends: Vec<PlaceId> = [w.initial(), w.final_place()]
        .into_iter()
        .filter(|p| skel.resetable.contains(p))
        .collect();
    if !reset_ends.is_empty() {
        let names: Vec<&str> = reset_ends.iter().map(|&p| net.place_name(p)).collect();
        props[0] = fails(format!("resetable: {}", names.join(", ")));
        return not_gs(props, None, None);
    }
    props[0] = holds("initial and final place are never reset".into());

    let frr = match full_reset_run(w, &info) {
        FullResetOutcome::Has(frr) => {
            props[1] = holds(format!("full reset run with z = {}", frr.z));
            frr
        }
        FullResetOutcome::NotGeneralisedSound(failure) => {
            let (hint, cx, detail) = match failure {
                FullResetFailure::InitialResetable { by } => {
                    (None, None, format!("{} resets the initial place", net.transition(by).name()))
                }
                FullResetFailure::CannotCover { z, end, via } => {
                    let detail = format!(
                        "all-transitions run ends at {}, short of {{f:{z}}}",
                        net.display_marking(&end)
                    );
                    (Some(z), Some(CounterExample { witness: end, run: via }), detail)
                }
                FullResetFailure::Overshoot { z, end, via } => {
                    let detail =
                        format!("completion overshoots to {}", net.display_marking(&end));
                    (Some(z), Some(CounterExample { witness: end, run: via }), detail)
                }
                // the failing projection need not itself be reachable, so no
                // single k is named unsound
                FullResetFailure::PrefixIncomplete { z, position } => {
                    (None, None, format!("prefix {position} cannot complete to {{f:{z}}}"))
                }
            };
            props[1] = fails(detail);
            return not_gs(props, hint, cx);
        }
    };

    match &skel.workflow_status {
        Err(violations) => {
            let what: Vec<String> = violations.iter().map(|v| v.describe(&skel.skeleton)).collect();
            props[2] = fails(format!("skeleton is not a workflow net: {}", what.join("; ")));
            return not_gs(props, None, None);
        }
        Ok(_) => {
            let skel_w = skel.workflow().expect("status says workflow");
            match skeleton_gs_check(&skel_w, k_max_gs, budget) {
                GsVerdict::NotGeneralisedSound { k: bad_k, .. } => {
                    props[2] = fails(format!("skeleton is not {bad_k}-sound"));
                    return not_gs(props, None, None);
                }
                GsVerdict::HoldsProved(GsEvidence::StateMachine) => {
                    props[2] = holds("skeleton is a 1-sound state machine".into());
                }
                GsVerdict::BoundedOnly { k_max } => {
                    props[2] = unknown(format!("skeleton sound up to k = {k_max}, rest unproved"));
                    undecided = true;
                }
            }
        }
    }

    match (1..=k).find(|&j| !coverability_clean(w, j)) {
        Some(j) => {
            props[3] = fails(format!("{{i:{j}}} covers strictly above {{f:{j}}}"));
            return not_gs(props, Some(j), strict_cover_witness(w, j));
        }
        None => props[3] = holds(format!("no strict cover of the final marking for k <= {k}")),
    }

    match property5_check(w, &skel, budget) {
        Verdict::Holds(Evidence::EmptyTarget) => {
            props[4] = holds("no stuck component exists".into());
        }
        Verdict::Holds(_) => {
            props[4] = holds("no stuck component is reachable".into());
        }
        Verdict::Fails(cx) => {
            props[4] = fails(format!(
                "a stuck component is reachable in the simulation net via {} steps",
                cx.run.len()
            ));
            return not_gs(props, None, None);
        }
        Verdict::Unknown(_) => {
            props[4] = unknown("stuck-component query exhausted its budget".into());
            undecided = true;
        }
    }

    let overall = if undecided {
        PkOutcome::Unknown
    } else {
        let _ = &frr;
        // certified nets never reset their end places
        for t in info.nonredundant_transitions() {
            let tr = net.transition(t);
            assert!(!tr.resets(w.initial()) && !tr.resets(w.final_place()));
        }
        PkOutcome::UpToKSound
    };
    PkReport { properties: props, overall, counterexample: None }
}

/// Conjunction of the k-soundness semi-decision for j = 1..k. The first
/// refutation wins; an exhausted budget downgrades Holds to Unknown.
pub fn up_to_k(w: &WorkflowNet, k: u64, budget: Budget) -> Verdict {
    let mut states = 0;
    let mut undecided = None;
    for j in 1..=k {
        match k_sound_semi(w, j, budget) {
            Verdict::Fails(cx) => return Verdict::Fails(cx),
            Verdict::Holds(Evidence::ExploredAll { states: s }) => states += s,
            Verdict::Holds(_) => {}
            Verdict::Unknown(reason) => {
                undecided.get_or_insert(reason);
            }
        }
    }
    match undecided {
        Some(reason) => Verdict::Unknown(reason),
        None => Verdict::Holds(Evidence::ExploredAll { states }),
    }
}
