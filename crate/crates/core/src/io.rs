//! File formats: net documents, marking and run literals, counter machine
//! documents, and JSON views of closed sets.
//!
//! The net document is the interchange contract: emitting a parsed
//! canonical document reproduces it byte for byte. Canonical means the
//! field order and map ordering produced by [`emit_net`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::closed::{Atom, Bound, DownSet, MixedTarget, OmegaNat, UpSet};
use crate::minsky::{MachineBuildError, MinskyMachine, MinskyOp};
use crate::net::{
    validate_workflow, Marking, NetBuildError, NetBuilder, PlaceId, ResetNet, Run, WorkflowNet,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Build(#[from] NetBuildError),
    #[error(transparent)]
    Machine(#[from] MachineBuildError),
    #[error("unknown place {0:?}")]
    UnknownPlace(String),
    #[error("unknown transition {0:?}")]
    UnknownTransition(String),
    #[error("a workflow net needs `initial` and `final` places")]
    MissingEnds,
    #[error("not a workflow net: {0}")]
    NotWorkflow(String),
    #[error("bad marking literal {input:?}: {reason}")]
    BadMarking { input: String, reason: String },
    #[error("unknown counter operation {0:?}")]
    UnknownOp(String),
    #[error("omega must be spelled \"w\", got {0:?}")]
    BadOmega(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetKind {
    Workflow,
    Petri,
}

/// One transition of a net document. Weights map place names to naturals;
/// absent entries are zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDoc {
    pub name: String,
    pub pre: BTreeMap<String, u64>,
    pub post: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reset: Vec<String>,
}

/// The on-disk shape of a net. `kind` defaults to workflow exactly when
/// both end places are named.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<NetKind>,
    pub places: Vec<String>,
    pub transitions: Vec<TransitionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "final")]
    pub final_place: Option<String>,
}

#[derive(Debug)]
pub enum ParsedNet {
    Workflow(WorkflowNet),
    Petri(ResetNet),
}

impl ParsedNet {
    pub fn net(&self) -> &ResetNet {
        match self {
            ParsedNet::Workflow(w) => w.net(),
            ParsedNet::Petri(net) => net,
        }
    }

    pub fn workflow(&self) -> Option<&WorkflowNet> {
        match self {
            ParsedNet::Workflow(w) => Some(w),
            ParsedNet::Petri(_) => None,
        }
    }
}

/// Builds the net a document describes. Workflow documents are validated
/// unless `lenient`; violations come back as one joined message.
pub fn net_from_doc(doc: &NetDoc, lenient: bool) -> Result<ParsedNet, IoError> {
    let mut b = NetBuilder::new();
    let mut ids: BTreeMap<&str, PlaceId> = BTreeMap::new();
    for name in &doc.places {
        ids.insert(name, b.place(name.clone())?);
    }
    let resolve = |name: &String| {
        ids.get(name.as_str()).copied().ok_or_else(|| IoError::UnknownPlace(name.clone()))
    };
    for t in &doc.transitions {
        let arcs = |side: &BTreeMap<String, u64>| {
            side.iter()
                .map(|(name, &w)| Ok((resolve(name)?, w)))
                .collect::<Result<Vec<_>, IoError>>()
        };
        let reset = t.reset.iter().map(resolve).collect::<Result<Vec<_>, IoError>>()?;
        b.transition(t.name.clone(), &arcs(&t.pre)?, &arcs(&t.post)?, &reset)?;
    }
    let net = b.build();

    let workflow = match doc.kind {
        Some(NetKind::Workflow) => true,
        Some(NetKind::Petri) => false,
        None => doc.initial.is_some() && doc.final_place.is_some(),
    };
    if !workflow {
        return Ok(ParsedNet::Petri(net));
    }
    let (Some(initial), Some(final_place)) = (&doc.initial, &doc.final_place) else {
        return Err(IoError::MissingEnds);
    };
    let i = resolve(initial)?;
    let f = resolve(final_place)?;
    if !lenient {
        let violations = validate_workflow(&net, i, f, false);
        if !violations.is_empty() {
            let msgs: Vec<String> = violations.iter().map(|v| v.describe(&net)).collect();
            return Err(IoError::NotWorkflow(msgs.join("; ")));
        }
    }
    Ok(ParsedNet::Workflow(WorkflowNet::new_unchecked(net, i, f)))
}

pub fn parse_net(input: &str, lenient: bool) -> Result<ParsedNet, IoError> {
    let doc: NetDoc = serde_json::from_str(input)?;
    net_from_doc(&doc, lenient)
}

/// The canonical document for a net: declaration order everywhere, weight
/// maps sorted by place name.
pub fn doc_from_net(parsed: &ParsedNet) -> NetDoc {
    let net = parsed.net();
    let transitions = net
        .transitions()
        .iter()
        .map(|t| {
            let side = |weights: &dyn Fn(PlaceId) -> u64| {
                net.places()
                    .filter(|&p| weights(p) > 0)
                    .map(|p| (net.place_name(p).to_string(), weights(p)))
                    .collect::<BTreeMap<_, _>>()
            };
            TransitionDoc {
                name: t.name().to_string(),
                pre: side(&|p| t.pre(p)),
                post: side(&|p| t.post(p)),
                reset: net
                    .places()
                    .filter(|&p| t.resets(p))
                    .map(|p| net.place_name(p).to_string())
                    .collect(),
            }
        })
        .collect();
    let ends = match parsed {
        ParsedNet::Workflow(w) => {
            Some((net.place_name(w.initial()).to_string(), net.place_name(w.final_place()).to_string()))
        }
        ParsedNet::Petri(_) => None,
    };
    NetDoc {
        kind: Some(if ends.is_some() { NetKind::Workflow } else { NetKind::Petri }),
        places: net.place_names().iter().cloned().collect(),
        transitions,
        initial: ends.as_ref().map(|(i, _)| i.clone()),
        final_place: ends.map(|(_, f)| f),
    }
}

pub fn emit_net(parsed: &ParsedNet) -> String {
    let mut out = serde_json::to_string_pretty(&doc_from_net(parsed)).expect("documents serialize");
    out.push('\n');
    out
}

/// Parses the `{p1:2, f:1}` marking syntax. Braces are optional, omitted
/// places are zero, `{}` is the zero marking.
pub fn parse_marking(net: &ResetNet, input: &str) -> Result<Marking, IoError> {
    let bad = |reason: &str| IoError::BadMarking { input: input.to_string(), reason: reason.to_string() };
    let mut body = input.trim();
    if let Some(rest) = body.strip_prefix('{') {
        body = rest.strip_suffix('}').ok_or_else(|| bad("unclosed brace"))?;
    }
    let mut m = Marking::zero(net.place_count());
    for part in body.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (name, count) = part.split_once(':').ok_or_else(|| bad("expected place:count"))?;
        let p = net
            .place_by_name(name.trim())
            .ok_or_else(|| IoError::UnknownPlace(name.trim().to_string()))?;
        let count: u64 = count.trim().parse().map_err(|_| bad("count is not a natural"))?;
        if m.get(p) > 0 {
            return Err(bad("place listed twice"));
        }
        m.set(p, count);
    }
    Ok(m)
}

/// Parses a whitespace-separated list of transition names.
pub fn parse_run(net: &ResetNet, input: &str) -> Result<Run, IoError> {
    input
        .split_whitespace()
        .map(|name| {
            net.transition_by_name(name).ok_or_else(|| IoError::UnknownTransition(name.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Run::new)
}

fn omega_value(v: OmegaNat) -> Value {
    match v {
        OmegaNat::Fin(n) => json!(n),
        OmegaNat::Omega => json!("w"),
    }
}

/// `[{place: count, ...}, ...]`, basis elements in basis order.
pub fn upset_to_json(net: &ResetNet, u: &UpSet) -> Value {
    Value::Array(u.basis().iter().map(|m| marking_to_json(net, m)).collect())
}

/// Ideals as marking objects with unbounded coordinates spelled `"w"`.
pub fn downset_to_json(net: &ResetNet, d: &DownSet) -> Value {
    Value::Array(
        d.ideals()
            .iter()
            .map(|om| {
                let mut obj = serde_json::Map::new();
                for p in net.places() {
                    if om.get(p) != OmegaNat::Fin(0) {
                        obj.insert(net.place_name(p).to_string(), omega_value(om.get(p)));
                    }
                }
                Value::Object(obj)
            })
            .collect(),
    )
}

pub fn marking_to_json(net: &ResetNet, m: &Marking) -> Value {
    let mut obj = serde_json::Map::new();
    for p in m.support() {
        obj.insert(net.place_name(p).to_string(), json!(m.get(p)));
    }
    Value::Object(obj)
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum BoundDoc {
    AtLeast(u64),
    AtMost(Value),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetDoc {
    atoms: Vec<BTreeMap<String, BoundDoc>>,
}

/// Parses a mixed reachability target: `{"atoms": [{place: {"at_least": 1},
/// place: {"at_most": 2 | "w"}}, ...]}`. Unlisted places are unconstrained.
pub fn parse_target(net: &ResetNet, input: &str) -> Result<MixedTarget, IoError> {
    let doc: TargetDoc = serde_json::from_str(input)?;
    let dim = net.place_count();
    let mut atoms = Vec::new();
    for entry in &doc.atoms {
        let mut atom = Atom::unconstrained(dim);
        for (name, bound) in entry {
            let p = net.place_by_name(name).ok_or_else(|| IoError::UnknownPlace(name.clone()))?;
            let bound = match bound {
                BoundDoc::AtLeast(n) => Bound::AtLeast(*n),
                BoundDoc::AtMost(v) => Bound::AtMost(match v {
                    Value::Number(n) => {
                        OmegaNat::Fin(n.as_u64().ok_or_else(|| IoError::BadOmega(n.to_string()))?)
                    }
                    Value::String(s) if s == "w" => OmegaNat::Omega,
                    other => return Err(IoError::BadOmega(other.to_string())),
                }),
            };
            atom.set(p, bound);
        }
        atoms.push(atom);
    }
    Ok(MixedTarget::new(dim, atoms))
}

/// The on-disk shape of a two-counter machine: transitions are
/// `[from, op, to]` triples with ops `inc1, dec1, zrt1, inc2, dec2, zrt2`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineDoc {
    pub states: Vec<String>,
    pub transitions: Vec<(String, String, String)>,
    pub source: String,
    pub target: String,
}

pub fn machine_from_doc(doc: &MachineDoc) -> Result<MinskyMachine, IoError> {
    let transitions = doc
        .transitions
        .iter()
        .map(|(from, op, to)| {
            let op = MinskyOp::parse(op).ok_or_else(|| IoError::UnknownOp(op.clone()))?;
            Ok((from.as_str(), op, to.as_str()))
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(MinskyMachine::new(doc.states.clone(), &transitions, &doc.source, &doc.target)?)
}

pub fn parse_machine(input: &str) -> Result<MinskyMachine, IoError> {
    machine_from_doc(&serde_json::from_str(input)?)
}

/// Renders a run one transition name per step, space separated.
pub fn format_run(net: &ResetNet, run: &Run) -> String {
    let mut out = String::new();
    for (idx, &t) in run.steps().iter().enumerate() {
        if idx > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{}", net.transition(t).name());
    }
    out
}
