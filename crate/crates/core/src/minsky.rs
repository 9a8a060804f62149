//! Two-counter Minsky machines and their encodings as reset nets.
//!
//! The encoding trades exact counters for budgeted ones: each counter `c`
//! becomes a pair of places `x_c` (current value) and `xb_c` (remaining
//! budget), so increments move a token from `xb_c` to `x_c` and decrements
//! move it back. A zero test is simulated weakly by resetting `x_c`; runs
//! that cheat (test while `x_c > 0`) destroy tokens and can never restore
//! the full budget, which is what the workflow wrapper checks for.
//!
//! This module also hosts the builtin example nets used by the test suites
//! and the CLI.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::net::{NetBuilder, PlaceId, ResetNet, WorkflowNet};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Counter {
    C1,
    C2,
}

impl Counter {
    pub fn other(self) -> Counter {
        match self {
            Counter::C1 => Counter::C2,
            Counter::C2 => Counter::C1,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum MinskyOp {
    Inc(Counter),
    Dec(Counter),
    Zero(Counter),
}

impl MinskyOp {
    pub const ALL: [MinskyOp; 6] = [
        MinskyOp::Inc(Counter::C1),
        MinskyOp::Dec(Counter::C1),
        MinskyOp::Zero(Counter::C1),
        MinskyOp::Inc(Counter::C2),
        MinskyOp::Dec(Counter::C2),
        MinskyOp::Zero(Counter::C2),
    ];

    pub fn counter(self) -> Counter {
        match self {
            MinskyOp::Inc(c) | MinskyOp::Dec(c) | MinskyOp::Zero(c) => c,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            MinskyOp::Inc(Counter::C1) => "inc1",
            MinskyOp::Dec(Counter::C1) => "dec1",
            MinskyOp::Zero(Counter::C1) => "zrt1",
            MinskyOp::Inc(Counter::C2) => "inc2",
            MinskyOp::Dec(Counter::C2) => "dec2",
            MinskyOp::Zero(Counter::C2) => "zrt2",
        }
    }

    pub fn parse(s: &str) -> Option<MinskyOp> {
        MinskyOp::ALL.into_iter().find(|op| op.code() == s)
    }
}

impl fmt::Display for MinskyOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MachineBuildError {
    #[error("state name {0:?} is empty or contains whitespace")]
    BadStateName(String),
    #[error("duplicate state name {0:?}")]
    DuplicateState(String),
    #[error("{0:?} is not a declared state")]
    UnknownState(String),
    #[error("source and target must be distinct states")]
    SourceIsTarget,
}

/// A two-counter machine with designated source and target control states.
#[derive(Clone, Debug)]
pub struct MinskyMachine {
    states: Vec<String>,
    transitions: Vec<(usize, MinskyOp, usize)>,
    source: usize,
    target: usize,
}

impl MinskyMachine {
    pub fn new(
        states: Vec<String>,
        transitions: &[(&str, MinskyOp, &str)],
        source: &str,
        target: &str,
    ) -> Result<MinskyMachine, MachineBuildError> {
        for (idx, name) in states.iter().enumerate() {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(MachineBuildError::BadStateName(name.clone()));
            }
            if states[..idx].contains(name) {
                return Err(MachineBuildError::DuplicateState(name.clone()));
            }
        }
        let index = |name: &str| {
            states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| MachineBuildError::UnknownState(name.to_string()))
        };
        let source = index(source)?;
        let target = index(target)?;
        if source == target {
            return Err(MachineBuildError::SourceIsTarget);
        }
        let transitions = transitions
            .iter()
            .map(|&(from, op, to)| Ok((index(from)?, op, index(to)?)))
            .collect::<Result<Vec<_>, MachineBuildError>>()?;
        Ok(MinskyMachine { states, transitions, source, target })
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.states[s]
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn transitions(&self) -> &[(usize, MinskyOp, usize)] {
        &self.transitions
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }
}

/// A configuration: control state plus the two counter values.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MinskyConfig {
    pub state: usize,
    pub counters: (u64, u64),
}

impl MinskyConfig {
    pub fn get(&self, c: Counter) -> u64 {
        match c {
            Counter::C1 => self.counters.0,
            Counter::C2 => self.counters.1,
        }
    }

    fn set(&mut self, c: Counter, v: u64) {
        match c {
            Counter::C1 => self.counters.0 = v,
            Counter::C2 => self.counters.1 = v,
        }
    }
}

/// One-step successors of `cfg`, in transition declaration order, without
/// duplicates. With `bound = Some(k)` successors that would push a counter
/// above `k` are dropped.
pub fn minsky_step(m: &MinskyMachine, cfg: MinskyConfig, bound: Option<u64>) -> Vec<MinskyConfig> {
    let mut out = Vec::new();
    for &(from, op, to) in &m.transitions {
        if from != cfg.state {
            continue;
        }
        let c = op.counter();
        let mut next = cfg;
        next.state = to;
        match op {
            MinskyOp::Inc(_) => {
                let v = cfg.get(c) + 1;
                if bound.is_some_and(|k| v > k) {
                    continue;
                }
                next.set(c, v);
            }
            MinskyOp::Dec(_) => {
                if cfg.get(c) == 0 {
                    continue;
                }
                next.set(c, cfg.get(c) - 1);
            }
            MinskyOp::Zero(_) => {
                if cfg.get(c) != 0 {
                    continue;
                }
            }
        }
        if !out.contains(&next) {
            out.push(next);
        }
    }
    out
}

/// Exact bounded reachability by BFS over states x [0..k]^2: can the source
/// state with both counters zero reach the target state with both counters
/// zero while the counters stay within [0..k]?
pub fn minsky_reach_bounded(m: &MinskyMachine, k: u64) -> bool {
    let start = MinskyConfig { state: m.source, counters: (0, 0) };
    let goal = MinskyConfig { state: m.target, counters: (0, 0) };
    let mut seen = std::collections::BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(cfg) = queue.pop_front() {
        if cfg == goal {
            return true;
        }
        for next in minsky_step(m, cfg, Some(k)) {
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    false
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("target state {target_state:?} is unreachable from {source_state:?} in the state graph")]
pub struct UnreachableTarget {
    pub source_state: String,
    pub target_state: String,
}

/// Restricts the machine to states lying on a source-to-target path of the
/// state graph (counter values ignored) and prepends the warm-up gadget: a
/// fresh source state carrying Inc/Dec self-loops on both counters, then a
/// zero-test chain through a relay state into the old source. The gadget
/// lets the encoded net load any counter budget before simulation starts
/// and ensures every state has both a predecessor and a successor.
pub fn preprocess(m: &MinskyMachine) -> Result<MinskyMachine, UnreachableTarget> {
    let n = m.states.len();
    let closure = |seeds: &[usize], step_from: &dyn Fn(usize, usize) -> bool| {
        let mut hit = vec![false; n];
        let mut stack = seeds.to_vec();
        for &s in seeds {
            hit[s] = true;
        }
        while let Some(s) = stack.pop() {
            for u in 0..n {
                if !hit[u] && step_from(s, u) {
                    hit[u] = true;
                    stack.push(u);
                }
            }
        }
        hit
    };
    let fwd = closure(&[m.source], &|s, u| {
        m.transitions.iter().any(|&(from, _, to)| from == s && to == u)
    });
    if !fwd[m.target] {
        return Err(UnreachableTarget {
            source_state: m.states[m.source].clone(),
            target_state: m.states[m.target].clone(),
        });
    }
    let bwd = closure(&[m.target], &|s, u| {
        m.transitions.iter().any(|&(from, _, to)| to == s && from == u)
    });

    let mut states = Vec::new();
    let mut remap = vec![usize::MAX; n];
    for s in 0..n {
        if fwd[s] && bwd[s] {
            remap[s] = states.len();
            states.push(m.states[s].clone());
        }
    }
    let mut transitions: Vec<(usize, MinskyOp, usize)> = m
        .transitions
        .iter()
        .filter(|&&(from, _, to)| fwd[from] && bwd[from] && fwd[to] && bwd[to])
        .map(|&(from, op, to)| (remap[from], op, remap[to]))
        .collect();

    let mut fresh = |base: String| {
        let mut name = base;
        while states.contains(&name) {
            name.push('\'');
        }
        states.push(name);
        states.len() - 1
    };
    let warmup = fresh(format!("{}'", m.states[m.source]));
    let relay = fresh("r".to_string());
    for c in [Counter::C1, Counter::C2] {
        transitions.push((warmup, MinskyOp::Inc(c), warmup));
        transitions.push((warmup, MinskyOp::Dec(c), warmup));
    }
    transitions.push((warmup, MinskyOp::Zero(Counter::C1), relay));
    transitions.push((relay, MinskyOp::Zero(Counter::C2), remap[m.source]));

    Ok(MinskyMachine {
        states,
        transitions,
        source: warmup,
        target: remap[m.target],
    })
}

fn counter_place_name(c: Counter, budget: bool) -> &'static str {
    match (c, budget) {
        (Counter::C1, false) => "x1",
        (Counter::C1, true) => "xb1",
        (Counter::C2, false) => "x2",
        (Counter::C2, true) => "xb2",
    }
}

/// Place name for a control state.
pub fn state_place_name(state: &str) -> String {
    format!("q.{state}")
}

/// Encodes a machine as a reset Petri net over places
/// `{q.<state> : state} ∪ {x1, xb1, x2, xb2}`. Increments move a token from
/// the budget place to the counter place, decrements move it back, zero
/// tests reset the counter place and leave the budget untouched.
///
/// From `{q.<source>: 1, xb1: k, xb2: k}` the net weakly simulates the
/// machine with counters bounded by `k`: honest runs keep
/// `m(x_c) + m(xb_c) = k`, and a cheating zero test only ever loses tokens.
pub fn minsky_to_reset_pn(m: &MinskyMachine) -> ResetNet {
    let mut b = NetBuilder::new();
    let q: Vec<PlaceId> = m
        .states
        .iter()
        .map(|s| b.place(state_place_name(s)).expect("state names are valid place names"))
        .collect();
    let mut xs = [PlaceId(0); 2];
    let mut xbs = [PlaceId(0); 2];
    for (idx, c) in [Counter::C1, Counter::C2].into_iter().enumerate() {
        xs[idx] = b.place(counter_place_name(c, false)).unwrap();
        xbs[idx] = b.place(counter_place_name(c, true)).unwrap();
    }
    let x = |c: Counter| xs[(c != Counter::C1) as usize];
    let xb = |c: Counter| xbs[(c != Counter::C1) as usize];
    for (idx, &(from, op, to)) in m.transitions.iter().enumerate() {
        let name = format!("d{idx}.{}", op.code());
        let c = op.counter();
        match op {
            MinskyOp::Inc(_) => {
                b.transition(name, &[(q[from], 1), (xb(c), 1)], &[(q[to], 1), (x(c), 1)], &[])
            }
            MinskyOp::Dec(_) => {
                b.transition(name, &[(q[from], 1), (x(c), 1)], &[(q[to], 1), (xb(c), 1)], &[])
            }
            MinskyOp::Zero(_) => b.transition(name, &[(q[from], 1)], &[(q[to], 1)], &[x(c)]),
        }
        .expect("generated transition names are unique");
    }
    b.build()
}

/// Full reduction to a reset workflow net: preprocesses the machine, encodes
/// it, and wraps the encoding in initial/final plumbing. `t1` converts each
/// initial token into one unit of counter budget (restarting the control
/// part), `t2` abandons a run wholesale, and `t3` closes out a run that
/// reached the target with both counters zero and the full budget intact.
///
/// The result is generalised sound iff the machine cannot reach its target
/// state with both counters zero.
pub fn minsky_to_rwf(m: &MinskyMachine) -> Result<WorkflowNet, UnreachableTarget> {
    let m = preprocess(m)?;
    let pn = minsky_to_reset_pn(&m);

    let mut b = NetBuilder::new();
    let i = b.place("i").unwrap();
    let inner: Vec<PlaceId> = pn
        .place_names()
        .iter()
        .map(|name| b.place(name.clone()).expect("inner names avoid the wrapper names"))
        .collect();
    let r = b.place("r").unwrap();
    let f = b.place("f").unwrap();

    for t in pn.transitions() {
        let arcs = |weight: &dyn Fn(PlaceId) -> u64| {
            pn.places()
                .filter_map(|p| {
                    let w = weight(p);
                    (w > 0).then_some((inner[p.index()], w))
                })
                .collect::<Vec<_>>()
        };
        let reset: Vec<PlaceId> = pn
            .places()
            .filter(|&p| t.resets(p))
            .map(|p| inner[p.index()])
            .collect();
        b.transition(t.name().to_string(), &arcs(&|p| t.pre(p)), &arcs(&|p| t.post(p)), &reset)
            .expect("inner transition names are unique");
    }

    let by_name = |name: &str| inner[pn.place_by_name(name).expect("generated place").index()];
    let qsrc = by_name(&state_place_name(m.state_name(m.source)));
    let qtgt = by_name(&state_place_name(m.state_name(m.target)));
    let x1 = by_name("x1");
    let xb1 = by_name("xb1");
    let x2 = by_name("x2");
    let xb2 = by_name("xb2");

    let not_budget: Vec<PlaceId> =
        inner.iter().copied().filter(|&p| p != xb1 && p != xb2).collect();
    b.transition("t1", &[(i, 1)], &[(r, 1), (qsrc, 1), (xb1, 1), (xb2, 1)], &not_budget)
        .unwrap();
    b.transition("t2", &[(r, 1)], &[(f, 1)], &inner).unwrap();
    b.transition(
        "t3",
        &[(r, 1), (xb1, 1), (xb2, 1), (qtgt, 1)],
        &[(f, 1), (qtgt, 1)],
        &[x1, x2],
    )
    .unwrap();

    Ok(WorkflowNet::new(b.build(), i, f).expect("reduction output is a valid workflow net"))
}

/// A builtin example net. Fig-based nets follow the source figures
/// arc-for-arc; the rest are small purpose-built shapes for tests.
#[derive(Clone, Debug)]
pub enum BuiltinNet {
    Petri(ResetNet),
    Workflow(WorkflowNet),
}

impl BuiltinNet {
    pub fn net(&self) -> &ResetNet {
        match self {
            BuiltinNet::Petri(net) => net,
            BuiltinNet::Workflow(w) => w.net(),
        }
    }
}

/// Names accepted by [`builtin`], in catalog order.
pub const BUILTIN_NAMES: [&str; 6] =
    ["fig1", "fig2", "chain", "pump", "reset-diamond", "mutex-reset"];

pub fn builtin(name: &str) -> Option<BuiltinNet> {
    match name {
        "fig1" => Some(BuiltinNet::Petri(fig1())),
        "fig2" => Some(BuiltinNet::Workflow(fig2())),
        "chain" => Some(BuiltinNet::Workflow(chain())),
        "pump" => Some(BuiltinNet::Workflow(pump())),
        "reset-diamond" => Some(BuiltinNet::Workflow(reset_diamond())),
        "mutex-reset" => Some(BuiltinNet::Workflow(mutex_reset())),
        _ => None,
    }
}

fn fig1() -> ResetNet {
    let mut b = NetBuilder::new();
    let p1 = b.place("p1").unwrap();
    let p2 = b.place("p2").unwrap();
    let p3 = b.place("p3").unwrap();
    let p4 = b.place("p4").unwrap();
    b.transition("t1", &[(p1, 1)], &[(p2, 1), (p3, 1)], &[]).unwrap();
    b.transition("t2", &[(p2, 1)], &[(p1, 1)], &[]).unwrap();
    b.transition("t3", &[(p2, 1)], &[(p4, 1)], &[p3]).unwrap();
    b.build()
}

fn fig2() -> WorkflowNet {
    let mut b = NetBuilder::new();
    let i = b.place("i").unwrap();
    let p1 = b.place("p1").unwrap();
    let p2 = b.place("p2").unwrap();
    let q1 = b.place("q1").unwrap();
    let q2 = b.place("q2").unwrap();
    let q3 = b.place("q3").unwrap();
    let f = b.place("f").unwrap();
    b.transition("s", &[(i, 1)], &[(p1, 1), (p2, 1)], &[]).unwrap();
    b.transition("t1", &[(p1, 1)], &[(q1, 1)], &[]).unwrap();
    b.transition("t2", &[(p2, 1)], &[(q2, 1), (q3, 1)], &[]).unwrap();
    b.transition("u1", &[(q1, 1), (q3, 1)], &[(f, 1)], &[q2]).unwrap();
    b.transition("u2", &[(q2, 1)], &[(f, 1)], &[p1, p2, q1, q2, q3]).unwrap();
    WorkflowNet::new(b.build(), i, f).expect("figure net is a workflow net")
}

fn chain() -> WorkflowNet {
    let mut b = NetBuilder::new();
    let i = b.place("i").unwrap();
    let f = b.place("f").unwrap();
    b.transition("t", &[(i, 1)], &[(f, 1)], &[]).unwrap();
    WorkflowNet::new(b.build(), i, f).expect("chain is a workflow net")
}

fn pump() -> WorkflowNet {
    let mut b = NetBuilder::new();
    let i = b.place("i").unwrap();
    let p = b.place("p").unwrap();
    let q = b.place("q").unwrap();
    let f = b.place("f").unwrap();
    b.transition("t1", &[(i, 1)], &[(p, 1)], &[]).unwrap();
    b.transition("t2", &[(p, 1)], &[(p, 1), (q, 1)], &[]).unwrap();
    b.transition("t3", &[(q, 1)], &[(f, 1)], &[]).unwrap();
    b.transition("t4", &[(p, 1)], &[(f, 1)], &[]).unwrap();
    WorkflowNet::new(b.build(), i, f).expect("pump is a workflow net")
}

// Place q is dead weight for the skeleton machinery: only ever reset, never
// consumed. It breaks the path-to-final condition, so construction bypasses
// the validator; callers that care run validate_workflow themselves.
fn reset_diamond() -> WorkflowNet {
    let mut b = NetBuilder::new();
    let i = b.place("i").unwrap();
    let p = b.place("p").unwrap();
    let q = b.place("q").unwrap();
    let f = b.place("f").unwrap();
    b.transition("s", &[(i, 1)], &[(p, 1), (q, 1)], &[]).unwrap();
    b.transition("u", &[(p, 1)], &[(f, 1)], &[q]).unwrap();
    WorkflowNet::new_unchecked(b.build(), i, f)
}

fn mutex_reset() -> WorkflowNet {
    let mut b = NetBuilder::new();
    let i = b.place("i").unwrap();
    let c1 = b.place("c1").unwrap();
    let c2 = b.place("c2").unwrap();
    let a = b.place("a").unwrap();
    let f = b.place("f").unwrap();
    b.transition("d1", &[(i, 1)], &[(c1, 1)], &[c2]).unwrap();
    b.transition("d2", &[(i, 1)], &[(c2, 1)], &[c1]).unwrap();
    b.transition("g", &[(c1, 1), (c2, 1)], &[(a, 1)], &[]).unwrap();
    b.transition("h", &[(a, 1)], &[(f, 1)], &[]).unwrap();
    WorkflowNet::new_unchecked(b.build(), i, f)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::net::{validate_workflow, Marking, Run};

    fn m0() -> MinskyMachine {
        MinskyMachine::new(
            vec!["qsrc".into(), "qtgt".into()],
            &[("qsrc", MinskyOp::Zero(Counter::C1), "qtgt")],
            "qsrc",
            "qtgt",
        )
        .unwrap()
    }

    fn m1() -> MinskyMachine {
        MinskyMachine::new(
            vec!["qsrc".into(), "qtgt".into()],
            &[("qsrc", MinskyOp::Inc(Counter::C1), "qtgt")],
            "qsrc",
            "qtgt",
        )
        .unwrap()
    }

    fn m2() -> MinskyMachine {
        MinskyMachine::new(
            vec!["qsrc".into(), "a".into(), "qtgt".into()],
            &[
                ("qsrc", MinskyOp::Inc(Counter::C1), "a"),
                ("a", MinskyOp::Dec(Counter::C1), "qtgt"),
            ],
            "qsrc",
            "qtgt",
        )
        .unwrap()
    }

    fn cfg(state: usize, a: u64, b: u64) -> MinskyConfig {
        MinskyConfig { state, counters: (a, b) }
    }

    /// All markings reachable from `m0`, with a hard cap against blow-ups.
    fn explore(net: &ResetNet, m0: &Marking, cap: usize) -> BTreeSet<Marking> {
        let mut seen = BTreeSet::from([m0.clone()]);
        let mut queue = std::collections::VecDeque::from([m0.clone()]);
        while let Some(m) = queue.pop_front() {
            for t in net.transition_ids() {
                if let Ok(next) = net.fire(&m, t) {
                    if seen.insert(next.clone()) {
                        assert!(seen.len() <= cap, "exploration exceeded {cap} markings");
                        queue.push_back(next);
                    }
                }
            }
        }
        seen
    }

    #[test]
    fn machine_validation() {
        let err = MinskyMachine::new(
            vec!["a".into(), "a".into()],
            &[],
            "a",
            "a",
        )
        .unwrap_err();
        assert_eq!(err, MachineBuildError::DuplicateState("a".into()));

        let err =
            MinskyMachine::new(vec!["a".into(), "b".into()], &[], "a", "a").unwrap_err();
        assert_eq!(err, MachineBuildError::SourceIsTarget);

        let err = MinskyMachine::new(
            vec!["a".into(), "b".into()],
            &[("a", MinskyOp::Inc(Counter::C1), "c")],
            "a",
            "b",
        )
        .unwrap_err();
        assert_eq!(err, MachineBuildError::UnknownState("c".into()));
    }

    #[test]
    fn op_codes_round_trip() {
        for op in MinskyOp::ALL {
            assert_eq!(MinskyOp::parse(op.code()), Some(op));
        }
        assert_eq!(MinskyOp::parse("inc3"), None);
    }

    #[test]
    fn step_semantics() {
        let inc = m1();
        assert_eq!(minsky_step(&inc, cfg(0, 0, 0), None), vec![cfg(1, 1, 0)]);
        assert_eq!(minsky_step(&inc, cfg(0, 0, 0), Some(0)), vec![]);

        let dec = MinskyMachine::new(
            vec!["q".into(), "q'".into()],
            &[("q", MinskyOp::Dec(Counter::C1), "q'")],
            "q",
            "q'",
        )
        .unwrap();
        assert_eq!(minsky_step(&dec, cfg(0, 0, 0), None), vec![]);
        assert_eq!(minsky_step(&dec, cfg(0, 3, 0), None), vec![cfg(1, 2, 0)]);

        let zero = m0();
        assert_eq!(minsky_step(&zero, cfg(0, 0, 5), None), vec![cfg(1, 0, 5)]);
        assert_eq!(minsky_step(&zero, cfg(0, 1, 0), None), vec![]);
    }

    #[test]
    fn bounded_reachability() {
        assert!(minsky_reach_bounded(&m0(), 0));
        for k in 0..4 {
            assert!(!minsky_reach_bounded(&m1(), k));
        }
        assert!(!minsky_reach_bounded(&m2(), 0));
        assert!(minsky_reach_bounded(&m2(), 1));
    }

    #[test]
    fn preprocess_adds_warmup_gadget() {
        let m = preprocess(&m0()).unwrap();
        assert_eq!(m.states(), &["qsrc", "qtgt", "qsrc'", "r"]);
        assert_eq!(m.state_name(m.source()), "qsrc'");
        assert_eq!(m.state_name(m.target()), "qtgt");
        assert_eq!(m.transitions().len(), 7);
        let warmup = m.source();
        let self_loops: Vec<MinskyOp> = m
            .transitions()
            .iter()
            .filter(|&&(from, _, to)| from == warmup && to == warmup)
            .map(|&(_, op, _)| op)
            .collect();
        assert_eq!(
            self_loops,
            vec![
                MinskyOp::Inc(Counter::C1),
                MinskyOp::Dec(Counter::C1),
                MinskyOp::Inc(Counter::C2),
                MinskyOp::Dec(Counter::C2),
            ]
        );
        assert_eq!(m.transitions()[5], (warmup, MinskyOp::Zero(Counter::C1), 3));
        assert_eq!(m.transitions()[6], (3, MinskyOp::Zero(Counter::C2), 0));
    }

    #[test]
    fn preprocess_prunes_off_path_states() {
        let m = MinskyMachine::new(
            vec!["qsrc".into(), "qtgt".into(), "island".into(), "deadend".into()],
            &[
                ("qsrc", MinskyOp::Zero(Counter::C1), "qtgt"),
                ("qsrc", MinskyOp::Inc(Counter::C1), "deadend"),
            ],
            "qsrc",
            "qtgt",
        )
        .unwrap();
        let m = preprocess(&m).unwrap();
        assert_eq!(m.states(), &["qsrc", "qtgt", "qsrc'", "r"]);
    }

    #[test]
    fn preprocess_rejects_unreachable_target() {
        let m = MinskyMachine::new(
            vec!["qsrc".into(), "qtgt".into()],
            &[("qtgt", MinskyOp::Inc(Counter::C1), "qsrc")],
            "qsrc",
            "qtgt",
        )
        .unwrap();
        assert!(preprocess(&m).is_err());
    }

    #[test]
    fn preprocess_uniquifies_gadget_names() {
        let m = MinskyMachine::new(
            vec!["qsrc".into(), "qsrc'".into(), "r".into()],
            &[
                ("qsrc", MinskyOp::Inc(Counter::C1), "qsrc'"),
                ("qsrc'", MinskyOp::Dec(Counter::C1), "r"),
            ],
            "qsrc",
            "r",
        )
        .unwrap();
        let m = preprocess(&m).unwrap();
        assert_eq!(m.states(), &["qsrc", "qsrc'", "r", "qsrc''", "r'"]);
        assert_eq!(m.state_name(m.source()), "qsrc''");
    }

    #[test]
    fn gadget_run_reloads_source() {
        // With zero budget the warm-up gadget is just the two zero tests.
        let m = preprocess(&m0()).unwrap();
        let net = minsky_to_reset_pn(&m);
        let start = Marking::from_pairs(
            net.place_count(),
            &[(net.place_by_name("q.qsrc'").unwrap(), 1)],
        );
        let run = Run::new(vec![
            net.transition_by_name("d5.zrt1").unwrap(),
            net.transition_by_name("d6.zrt2").unwrap(),
        ]);
        let end = net.fire_run(&start, &run).unwrap();
        assert_eq!(
            end,
            Marking::from_pairs(net.place_count(), &[(net.place_by_name("q.qsrc").unwrap(), 1)])
        );
    }

    #[test]
    fn encoding_matches_bounded_reachability() {
        for machine in [m0(), m1(), m2()] {
            let pre = preprocess(&machine).unwrap();
            let net = minsky_to_reset_pn(&pre);
            let dim = net.place_count();
            let qsrc = net.place_by_name(&state_place_name(pre.state_name(pre.source()))).unwrap();
            let qtgt = net.place_by_name(&state_place_name(pre.state_name(pre.target()))).unwrap();
            let xb1 = net.place_by_name("xb1").unwrap();
            let xb2 = net.place_by_name("xb2").unwrap();
            for k in 0..4 {
                let start = Marking::from_pairs(dim, &[(qsrc, 1), (xb1, k), (xb2, k)]);
                let goal = Marking::from_pairs(dim, &[(qtgt, 1), (xb1, k), (xb2, k)]);
                let net_reaches = explore(&net, &start, 100_000).contains(&goal);
                assert_eq!(
                    net_reaches,
                    minsky_reach_bounded(&machine, k),
                    "k = {k}"
                );
            }
        }
    }

    #[test]
    fn exploration_invariant_one_control_token_bounded_counters() {
        let pre = preprocess(&m2()).unwrap();
        let net = minsky_to_reset_pn(&pre);
        let qsrc = net.place_by_name(&state_place_name(pre.state_name(pre.source()))).unwrap();
        let control: Vec<_> = net
            .places()
            .filter(|&p| net.place_name(p).starts_with("q."))
            .collect();
        let k = 2;
        let start = Marking::from_pairs(
            net.place_count(),
            &[
                (qsrc, 1),
                (net.place_by_name("xb1").unwrap(), k),
                (net.place_by_name("xb2").unwrap(), k),
            ],
        );
        for m in explore(&net, &start, 100_000) {
            let on_control: u64 = control.iter().map(|&p| m.get(p)).sum();
            assert_eq!(on_control, 1);
            for c in ["1", "2"] {
                let held = m.get(net.place_by_name(&format!("x{c}")).unwrap())
                    + m.get(net.place_by_name(&format!("xb{c}")).unwrap());
                assert!(held <= k);
            }
        }
    }

    #[test]
    fn rwf_wrapper_shape() {
        let w = minsky_to_rwf(&m0()).unwrap();
        let net = w.net();
        assert!(validate_workflow(net, w.initial(), w.final_place(), false).is_empty());

        let inner: BTreeSet<PlaceId> = net
            .places()
            .filter(|&p| !["i", "r", "f"].contains(&net.place_name(p)))
            .collect();
        let t1 = net.transition(net.transition_by_name("t1").unwrap());
        let t2 = net.transition(net.transition_by_name("t2").unwrap());
        let t3 = net.transition(net.transition_by_name("t3").unwrap());

        let xb1 = net.place_by_name("xb1").unwrap();
        let xb2 = net.place_by_name("xb2").unwrap();
        let budget = BTreeSet::from([xb1, xb2]);
        assert_eq!(
            t1.reset_set().clone(),
            inner.difference(&budget).copied().collect::<BTreeSet<_>>()
        );
        assert_eq!(t2.reset_set().clone(), inner);
        assert_eq!(
            t3.reset_set().clone(),
            BTreeSet::from([net.place_by_name("x1").unwrap(), net.place_by_name("x2").unwrap()])
        );
        let qtgt = net.place_by_name("q.qtgt").unwrap();
        assert_eq!(t3.pre(qtgt), 1);
        assert_eq!(t3.post(qtgt), 1);
        assert_eq!(t3.pre(xb1), 1);
        assert_eq!(t3.pre(xb2), 1);
    }

    #[test]
    fn rwf_validates_for_all_samples() {
        for machine in [m0(), m1(), m2()] {
            let w = minsky_to_rwf(&machine).unwrap();
            assert!(validate_workflow(w.net(), w.initial(), w.final_place(), false).is_empty());
        }
    }

    #[test]
    fn builtin_catalog() {
        for name in BUILTIN_NAMES {
            assert!(builtin(name).is_some(), "missing builtin {name}");
        }
        assert!(builtin("nope").is_none());

        let BuiltinNet::Workflow(fig2) = builtin("fig2").unwrap() else {
            panic!("fig2 is a workflow net");
        };
        let net = fig2.net();
        assert_eq!(net.place_count(), 7);
        assert_eq!(net.transition_count(), 5);
        let u1 = net.transition(net.transition_by_name("u1").unwrap());
        let u2 = net.transition(net.transition_by_name("u2").unwrap());
        let by_name =
            |names: &[&str]| names.iter().map(|n| net.place_by_name(n).unwrap()).collect();
        assert_eq!(u1.reset_set().clone(), by_name(&["q2"]));
        assert_eq!(u2.reset_set().clone(), by_name(&["p1", "p2", "q1", "q2", "q3"]));
        for t in ["s", "t1", "t2"] {
            assert!(net.transition(net.transition_by_name(t).unwrap()).reset_set().is_empty());
        }

        let BuiltinNet::Workflow(chain) = builtin("chain").unwrap() else {
            panic!("chain is a workflow net");
        };
        assert_eq!(chain.net().place_count(), 2);
        assert_eq!(chain.net().transition_count(), 1);

        let BuiltinNet::Petri(fig1) = builtin("fig1").unwrap() else {
            panic!("fig1 is a plain reset net, not a workflow net");
        };
        assert!(fig1.has_reset_arcs());
    }
}
