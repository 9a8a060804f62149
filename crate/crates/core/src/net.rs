//! Petri nets with reset arcs, and the workflow-net specialisation.
//!
//! Firing order matters: a transition first consumes its preset, then empties
//! its reset places, then produces its postset. Tokens produced into a place
//! the same transition resets therefore survive.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Dense place index into a net's place table.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PlaceId(pub usize);

/// Dense transition index into a net's transition table.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TransId(pub usize);

impl PlaceId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl TransId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for PlaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

impl fmt::Display for TransId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.0)
    }
}

/// Token counts per place, indexed by [`PlaceId`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Marking(Vec<u64>);

impl Marking {
    pub fn zero(dim: usize) -> Self {
        Marking(vec![0; dim])
    }

    pub fn new(counts: Vec<u64>) -> Self {
        Marking(counts)
    }

    /// Marking with the given counts on the given places, zero elsewhere.
    pub fn from_pairs(dim: usize, pairs: &[(PlaceId, u64)]) -> Self {
        let mut m = Marking::zero(dim);
        for &(p, n) in pairs {
            m.0[p.0] += n;
        }
        m
    }

    pub fn unit(dim: usize, p: PlaceId) -> Self {
        Marking::from_pairs(dim, &[(p, 1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, p: PlaceId) -> u64 {
        self.0[p.0]
    }

    pub fn set(&mut self, p: PlaceId, n: u64) {
        self.0[p.0] = n;
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&n| n == 0)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn leq(&self, other: &Marking) -> bool {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lt(&self, other: &Marking) -> bool {
        self.leq(other) && self != other
    }

    pub fn plus(&self, other: &Marking) -> Marking {
        debug_assert_eq!(self.dim(), other.dim());
        Marking(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn support(&self) -> impl Iterator<Item = PlaceId> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(i, _)| PlaceId(i))
    }
}

/// One transition: dense pre/post weight vectors plus a reset place set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Transition {
    name: String,
    pre: Vec<u64>,
    post: Vec<u64>,
    reset: BTreeSet<PlaceId>,
}

impl Transition {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pre(&self, p: PlaceId) -> u64 {
        self.pre[p.0]
    }

    pub fn post(&self, p: PlaceId) -> u64 {
        self.post[p.0]
    }

    pub fn pre_marking(&self) -> Marking {
        Marking(self.pre.clone())
    }

    pub fn post_marking(&self) -> Marking {
        Marking(self.post.clone())
    }

    pub fn resets(&self, p: PlaceId) -> bool {
        self.reset.contains(&p)
    }

    pub fn reset_set(&self) -> &BTreeSet<PlaceId> {
        &self.reset
    }

    /// Places adjacent through a pre or post arc. Reset arcs do not count.
    pub fn arc_places(&self) -> impl Iterator<Item = PlaceId> + '_ {
        (0..self.pre.len())
            .map(PlaceId)
            .filter(|&p| self.pre[p.0] > 0 || self.post[p.0] > 0)
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum NetBuildError {
    #[error("place name {0:?} is empty or contains whitespace")]
    BadPlaceName(String),
    #[error("transition name {0:?} is empty or contains whitespace")]
    BadTransitionName(String),
    #[error("duplicate place name {0:?}")]
    DuplicatePlace(String),
    #[error("duplicate transition name {0:?}")]
    DuplicateTransition(String),
    #[error("arc weight 0 on {place:?} at transition {transition:?}")]
    ZeroWeight { transition: String, place: String },
}

/// Builder collecting places and transitions in declaration order.
#[derive(Default)]
pub struct NetBuilder {
    places: Vec<String>,
    transitions: Vec<Transition>,
}

impl NetBuilder {
    pub fn new() -> Self {
        NetBuilder::default()
    }

    pub fn place(&mut self, name: impl Into<String>) -> Result<PlaceId, NetBuildError> {
        let name = name.into();
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(NetBuildError::BadPlaceName(name));
        }
        if self.places.iter().any(|n| *n == name) {
            return Err(NetBuildError::DuplicatePlace(name));
        }
        self.places.push(name);
        Ok(PlaceId(self.places.len() - 1))
    }

    pub fn transition(
        &mut self,
        name: impl Into<String>,
        pre: &[(PlaceId, u64)],
        post: &[(PlaceId, u64)],
        reset: &[PlaceId],
    ) -> Result<TransId, NetBuildError> {
        let name = name.into();
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(NetBuildError::BadTransitionName(name));
        }
        if self.transitions.iter().any(|t| t.name == name) {
            return Err(NetBuildError::DuplicateTransition(name));
        }
        let dim = self.places.len();
        let mut pre_v = vec![0; dim];
        let mut post_v = vec![0; dim];
        for &(p, w) in pre {
            if w == 0 {
                return Err(NetBuildError::ZeroWeight {
                    transition: name,
                    place: self.places[p.0].clone(),
                });
            }
            pre_v[p.0] += w;
        }
        for &(p, w) in post {
            if w == 0 {
                return Err(NetBuildError::ZeroWeight {
                    transition: name,
                    place: self.places[p.0].clone(),
                });
            }
            post_v[p.0] += w;
        }
        self.transitions.push(Transition {
            name,
            pre: pre_v,
            post: post_v,
            reset: reset.iter().copied().collect(),
        });
        Ok(TransId(self.transitions.len() - 1))
    }

    pub fn build(self) -> ResetNet {
        ResetNet {
            places: self.places,
            transitions: self.transitions,
        }
    }
}

/// A Petri net with reset arcs. Plain Petri nets are the special case with
/// every reset set empty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResetNet {
    places: Vec<String>,
    transitions: Vec<Transition>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FireError {
    #[error("transition {t} is disabled")]
    Disabled { t: TransId },
    #[error("marking has dimension {got}, net has {want} places")]
    DimensionMismatch { got: usize, want: usize },
}

/// A run failed to replay: step `index` was not firable from `marking`.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("run fails at step {index}: {cause}")]
pub struct RunError {
    pub index: usize,
    pub marking: Marking,
    pub cause: FireError,
}

impl ResetNet {
    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn places(&self) -> impl Iterator<Item = PlaceId> {
        (0..self.places.len()).map(PlaceId)
    }

    pub fn transition_ids(&self) -> impl Iterator<Item = TransId> {
        (0..self.transitions.len()).map(TransId)
    }

    pub fn place_name(&self, p: PlaceId) -> &str {
        &self.places[p.0]
    }

    pub fn place_names(&self) -> &[String] {
        &self.places
    }

    pub fn place_by_name(&self, name: &str) -> Option<PlaceId> {
        self.places.iter().position(|n| n == name).map(PlaceId)
    }

    pub fn transition(&self, t: TransId) -> &Transition {
        &self.transitions[t.0]
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition_by_name(&self, name: &str) -> Option<TransId> {
        self.transitions.iter().position(|t| t.name == name).map(TransId)
    }

    pub fn has_reset_arcs(&self) -> bool {
        self.transitions.iter().any(|t| !t.reset.is_empty())
    }

    /// Transitions with a pre arc from `p` (reset arcs excluded).
    pub fn consumers(&self, p: PlaceId) -> impl Iterator<Item = TransId> + '_ {
        self.transition_ids().filter(move |&t| self.transitions[t.0].pre[p.0] > 0)
    }

    /// Transitions with a post arc into `p`.
    pub fn producers(&self, p: PlaceId) -> impl Iterator<Item = TransId> + '_ {
        self.transition_ids().filter(move |&t| self.transitions[t.0].post[p.0] > 0)
    }

    pub fn is_enabled(&self, m: &Marking, t: TransId) -> bool {
        let tr = &self.transitions[t.0];
        m.counts().iter().zip(&tr.pre).all(|(have, need)| have >= need)
    }

    /// Every transition moves a token from exactly one place to exactly one
    /// place, with weight 1 and no resets.
    pub fn is_state_machine(&self) -> bool {
        self.transitions.iter().all(|t| {
            t.reset.is_empty()
                && t.pre.iter().sum::<u64>() == 1
                && t.post.iter().sum::<u64>() == 1
        })
    }

    pub fn fire(&self, m: &Marking, t: TransId) -> Result<Marking, FireError> {
        if m.dim() != self.places.len() {
            return Err(FireError::DimensionMismatch {
                got: m.dim(),
                want: self.places.len(),
            });
        }
        if !self.is_enabled(m, t) {
            return Err(FireError::Disabled { t });
        }
        let tr = &self.transitions[t.0];
        let mut out = Vec::with_capacity(m.dim());
        for p in 0..m.dim() {
            let v = if tr.reset.contains(&PlaceId(p)) {
                tr.post[p]
            } else {
                m.counts()[p] - tr.pre[p] + tr.post[p]
            };
            out.push(v);
        }
        Ok(Marking(out))
    }

    pub fn fire_run(&self, m: &Marking, run: &Run) -> Result<Marking, RunError> {
        let mut cur = m.clone();
        for (index, &t) in run.steps().iter().enumerate() {
            cur = self.fire(&cur, t).map_err(|cause| RunError {
                index,
                marking: cur.clone(),
                cause,
            })?;
        }
        Ok(cur)
    }

    /// Like [`fire_run`](Self::fire_run) but returns the whole marking
    /// sequence, starting marking included.
    pub fn replay(&self, m: &Marking, run: &Run) -> Result<Vec<Marking>, RunError> {
        let mut trace = Vec::with_capacity(run.len() + 1);
        trace.push(m.clone());
        for (index, &t) in run.steps().iter().enumerate() {
            let cur = trace.last().unwrap();
            let next = self.fire(cur, t).map_err(|cause| RunError {
                index,
                marking: cur.clone(),
                cause,
            })?;
            trace.push(next);
        }
        Ok(trace)
    }

    /// Renders a marking in `{place:count, ...}` form, zero entries omitted.
    pub fn display_marking(&self, m: &Marking) -> String {
        let mut parts = Vec::new();
        for p in self.places() {
            let n = m.get(p);
            if n > 0 {
                parts.push(format!("{}:{}", self.places[p.0], n));
            }
        }
        format!("{{{}}}", parts.join(", "))
    }

    pub fn display_run(&self, run: &Run) -> String {
        run.steps()
            .iter()
            .map(|&t| self.transitions[t.0].name.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A firing sequence, stored as transition indices.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Run(Vec<TransId>);

impl Run {
    pub fn empty() -> Self {
        Run(Vec::new())
    }

    pub fn new(steps: Vec<TransId>) -> Self {
        Run(steps)
    }

    pub fn steps(&self) -> &[TransId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, t: TransId) {
        self.0.push(t);
    }

    pub fn extend(&mut self, other: &Run) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(parts: &[&Run]) -> Run {
        let mut out = Run::empty();
        for part in parts {
            out.extend(part);
        }
        out
    }
}

impl FromIterator<TransId> for Run {
    fn from_iter<I: IntoIterator<Item = TransId>>(iter: I) -> Self {
        Run(iter.into_iter().collect())
    }
}

/// A reset net with distinguished source and sink places.
///
/// Construction through [`WorkflowNet::new`] validates the structural
/// conditions; `new_unchecked` is for nets built programmatically whose
/// callers accept the obligations themselves.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WorkflowNet {
    net: ResetNet,
    initial: PlaceId,
    final_place: PlaceId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    InitialEqualsFinal,
    InitialHasProducer(TransId),
    FinalHasConsumer(TransId),
    FinalReset(TransId),
    PlaceOffPath(PlaceId),
    TransitionOffPath(TransId),
    NonUnitWeight { trans: TransId, place: PlaceId },
    InitialRemoved,
    FinalRemoved,
}

impl Violation {
    pub fn describe(&self, net: &ResetNet) -> String {
        match *self {
            Violation::InitialEqualsFinal => "initial and final place coincide".into(),
            Violation::InitialHasProducer(t) => format!(
                "initial place has producer {}",
                net.transition(t).name()
            ),
            Violation::FinalHasConsumer(t) => format!(
                "final place has consumer {}",
                net.transition(t).name()
            ),
            Violation::FinalReset(t) => {
                format!("final place is reset by {}", net.transition(t).name())
            }
            Violation::PlaceOffPath(p) => format!(
                "place {} is not on a path from the initial to the final place",
                net.place_name(p)
            ),
            Violation::TransitionOffPath(t) => format!(
                "transition {} is not on a path from the initial to the final place",
                net.transition(t).name()
            ),
            Violation::NonUnitWeight { trans, place } => format!(
                "arc between {} and {} has weight above 1",
                net.transition(trans).name(),
                net.place_name(place)
            ),
            Violation::InitialRemoved => "initial place was removed".into(),
            Violation::FinalRemoved => "final place was removed".into(),
        }
    }
}

/// Checks the workflow-net conditions and returns every violation found.
///
/// The path condition walks the arc graph only; reset arcs never contribute
/// edges. With `strict` set, arc weights must be 0 or 1.
pub fn validate_workflow(
    net: &ResetNet,
    initial: PlaceId,
    final_place: PlaceId,
    strict: bool,
) -> Vec<Violation> {
    let mut out = Vec::new();
    if initial == final_place {
        out.push(Violation::InitialEqualsFinal);
    }
    for t in net.transition_ids() {
        let tr = net.transition(t);
        if tr.post(initial) > 0 {
            out.push(Violation::InitialHasProducer(t));
        }
        if tr.pre(final_place) > 0 {
            out.push(Violation::FinalHasConsumer(t));
        }
        if tr.resets(final_place) {
            out.push(Violation::FinalReset(t));
        }
    }

    // Forward closure from i and backward closure from f over the bipartite
    // arc graph; a node is on an i-to-f path iff it is in both.
    let np = net.place_count();
    let nt = net.transition_count();
    let mut fwd_p = vec![false; np];
    let mut fwd_t = vec![false; nt];
    let mut bwd_p = vec![false; np];
    let mut bwd_t = vec![false; nt];
    fwd_p[initial.0] = true;
    bwd_p[final_place.0] = true;
    loop {
        let mut changed = false;
        for t in net.transition_ids() {
            let tr = net.transition(t);
            if !fwd_t[t.0] && net.places().any(|p| fwd_p[p.0] && tr.pre(p) > 0) {
                fwd_t[t.0] = true;
                changed = true;
            }
            if fwd_t[t.0] {
                for p in net.places() {
                    if tr.post(p) > 0 && !fwd_p[p.0] {
                        fwd_p[p.0] = true;
                        changed = true;
                    }
                }
            }
            if !bwd_t[t.0] && net.places().any(|p| bwd_p[p.0] && tr.post(p) > 0) {
                bwd_t[t.0] = true;
                changed = true;
            }
            if bwd_t[t.0] {
                for p in net.places() {
                    if tr.pre(p) > 0 && !bwd_p[p.0] {
                        bwd_p[p.0] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    for p in net.places() {
        if !(fwd_p[p.0] && bwd_p[p.0]) {
            out.push(Violation::PlaceOffPath(p));
        }
    }
    for t in net.transition_ids() {
        if !(fwd_t[t.0] && bwd_t[t.0]) {
            out.push(Violation::TransitionOffPath(t));
        }
    }

    if strict {
        for t in net.transition_ids() {
            let tr = net.transition(t);
            for p in net.places() {
                if tr.pre(p) > 1 || tr.post(p) > 1 {
                    out.push(Violation::NonUnitWeight { trans: t, place: p });
                }
            }
        }
    }
    out
}

impl WorkflowNet {
    pub fn new(
        net: ResetNet,
        initial: PlaceId,
        final_place: PlaceId,
    ) -> Result<WorkflowNet, Vec<Violation>> {
        let violations = validate_workflow(&net, initial, final_place, false);
        if violations.is_empty() {
            Ok(WorkflowNet { net, initial, final_place })
        } else {
            Err(violations)
        }
    }

    pub fn new_unchecked(net: ResetNet, initial: PlaceId, final_place: PlaceId) -> WorkflowNet {
        WorkflowNet { net, initial, final_place }
    }

    pub fn net(&self) -> &ResetNet {
        &self.net
    }

    pub fn initial(&self) -> PlaceId {
        self.initial
    }

    pub fn final_place(&self) -> PlaceId {
        self.final_place
    }

    /// The marking with `k` tokens on the initial place.
    pub fn initial_marking(&self, k: u64) -> Marking {
        Marking::from_pairs(self.net.place_count(), &[(self.initial, k)])
    }

    /// The marking with `k` tokens on the final place.
    pub fn final_marking(&self, k: u64) -> Marking {
        Marking::from_pairs(self.net.place_count(), &[(self.final_place, k)])
    }
}

/// Result of [`remove_subnet`]: the reduced net plus index maps from the old
/// net into the new one (`None` for removed nodes).
pub struct SubnetRemoval {
    pub net: ResetNet,
    pub place_map: Vec<Option<PlaceId>>,
    pub trans_map: Vec<Option<TransId>>,
}

/// Removes the places `removed_places` and transitions `removed_transitions`
/// and prunes nodes left without any arc:
/// a surviving place must have an adjacent transition outside the removal
/// set, and a surviving transition an adjacent place outside the removal set.
/// Arcs and reset arcs are restricted to the surviving nodes.
///
/// The output never contains an isolated node.
pub fn remove_subnet(
    net: &ResetNet,
    removed_places: &BTreeSet<PlaceId>,
    removed_transitions: &BTreeSet<TransId>,
) -> SubnetRemoval {
    let keep_place: Vec<bool> = net
        .places()
        .map(|p| {
            if removed_places.contains(&p) {
                return false;
            }
            let mut adjacent = net
                .transition_ids()
                .filter(|&t| net.transition(t).pre(p) > 0 || net.transition(t).post(p) > 0);
            adjacent.any(|t| !removed_transitions.contains(&t))
        })
        .collect();
    let keep_trans: Vec<bool> = net
        .transition_ids()
        .map(|t| {
            if removed_transitions.contains(&t) {
                return false;
            }
            net.transition(t)
                .arc_places()
                .any(|p| !removed_places.contains(&p))
        })
        .collect();

    let mut place_map = vec![None; net.place_count()];
    let mut builder = NetBuilder::new();
    for p in net.places() {
        if keep_place[p.0] {
            let id = builder.place(net.place_name(p)).expect("names stay valid");
            place_map[p.0] = Some(id);
        }
    }
    let mut trans_map = vec![None; net.transition_count()];
    for t in net.transition_ids() {
        if !keep_trans[t.0] {
            continue;
        }
        let tr = net.transition(t);
        let mut pre = Vec::new();
        let mut post = Vec::new();
        let mut reset = Vec::new();
        for p in net.places() {
            if let Some(np) = place_map[p.0] {
                if tr.pre(p) > 0 {
                    pre.push((np, tr.pre(p)));
                }
                if tr.post(p) > 0 {
                    post.push((np, tr.post(p)));
                }
                if tr.resets(p) {
                    reset.push(np);
                }
            }
        }
        let id = builder
            .transition(tr.name(), &pre, &post, &reset)
            .expect("names stay valid");
        trans_map[t.0] = Some(id);
    }
    SubnetRemoval {
        net: builder.build(),
        place_map,
        trans_map,
    }
}
