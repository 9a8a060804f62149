//! resound: soundness analyses for reset workflow nets.
//!
//! Exit codes: 0 the queried property holds, 1 it fails (a witness is part
//! of the report), 2 the analysis gave up within its budget, 3 the input
//! was unusable. Every witness run is replayed once more right before it is
//! printed.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use resound_core::budget::{Budget, BudgetReport, DEFAULT_MAX_SECS, DEFAULT_MAX_STATES};
use resound_core::closed::UpSet;
use resound_core::cover::{backward_cover, extract_covering_run};
use resound_core::io::{
    emit_net, format_run, marking_to_json, parse_machine, parse_marking, parse_net, parse_run,
    parse_target, upset_to_json, ParsedNet,
};
use resound_core::minsky::{builtin, minsky_to_rwf, BuiltinNet, BUILTIN_NAMES};
use resound_core::net::{validate_workflow, Marking, ResetNet, Run, WorkflowNet};
use resound_core::reach::{decide_mixed_reach, AtomCertificate, ReachVerdict};
use resound_core::soundness::{
    can_complete_or_witness, coverability_clean, k_sound_semi, pk_check, strict_cover_witness,
    up_to_k, Completion, CounterExample, Evidence, PkOutcome, PropStatus, UnknownReason, Verdict,
};
use resound_core::structure::{redundancy_info, resetable_places, skeleton};
use resound_testkit::{random_workflow, rng, NetShape};

use report::{NetSummary, Report};

#[derive(Parser)]
#[command(name = "resound", version, about = "Soundness analyses for reset workflow nets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: Config,
}

#[derive(Args)]
struct Config {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Cap on stored configurations per search.
    #[arg(
        long = "budget-states",
        alias = "budget",
        global = true,
        default_value_t = DEFAULT_MAX_STATES as u64,
        value_parser = clap::value_parser!(u64).range(1..)
    )]
    budget_states: u64,
    /// Wall clock cap per search, in seconds.
    #[arg(
        long = "budget-secs",
        env = "RESOUND_BUDGET_SECS",
        global = true,
        default_value_t = DEFAULT_MAX_SECS,
        value_parser = clap::value_parser!(u64).range(1..)
    )]
    budget_secs: u64,
    /// Accept workflow nets that fail validation.
    #[arg(long, global = true)]
    lenient: bool,
}

impl Config {
    fn budget(&self) -> Budget {
        Budget {
            max_states: self.budget_states as usize,
            max_time: Some(Duration::from_secs(self.budget_secs)),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the workflow-net conditions of a net file.
    Validate {
        /// Also require arc weights 0 or 1.
        #[arg(long)]
        strict: bool,
        net: PathBuf,
    },
    /// Replay a run and print the marking it ends in.
    Simulate {
        /// Start marking, e.g. '{i:2}'. Defaults to one token on the
        /// initial place, or the empty marking for non-workflow nets.
        #[arg(long)]
        from: Option<String>,
        /// Whitespace-separated transition names.
        #[arg(long)]
        run: String,
        net: PathBuf,
    },
    /// Compute the backward coverability basis of a target marking.
    Cover {
        /// Target marking, e.g. '{f:1}'.
        #[arg(long)]
        target: String,
        /// Also decide whether this marking covers the target.
        #[arg(long)]
        from: Option<String>,
        net: PathBuf,
    },
    /// Decide reachability of a constraint target in a plain net.
    Reach {
        /// Target as JSON, e.g. '{"atoms":[{"f":{"at_least":1}}]}'.
        #[arg(long)]
        target: String,
        /// Start marking. Defaults like simulate.
        #[arg(long)]
        from: Option<String>,
        net: PathBuf,
    },
    /// Report nonredundant places and transitions with their witnesses.
    Redundancy { net: PathBuf },
    /// Build the reset-free skeleton.
    Skeleton {
        /// Write the skeleton as a net file.
        #[arg(short, long)]
        out: Option<PathBuf>,
        net: PathBuf,
    },
    /// Run a soundness analysis.
    Check {
        #[arg(long, value_enum)]
        property: Property,
        /// Soundness parameter k.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Largest k the skeleton generalised-soundness scan tries.
        #[arg(
            long = "kmax-gs",
            default_value_t = 4,
            value_parser = clap::value_parser!(u64).range(1..)
        )]
        kmax_gs: u64,
        net: PathBuf,
    },
    /// Emit net files.
    #[command(subcommand)]
    Generate(Generate),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    /// k-soundness, semi-decided by forward search.
    Ksound,
    /// j-soundness for every j up to k.
    Upto,
    /// No marking strictly above the final marking is coverable.
    Clean,
    /// The five-property pipeline bracketing k-soundness.
    Pk,
}

#[derive(Subcommand)]
enum Generate {
    /// Workflow net encoding a two-counter machine.
    Minsky {
        machine: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// One of the named example nets.
    Builtin {
        name: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Seeded random workflow net.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        places: usize,
        #[arg(long, default_value_t = 5)]
        transitions: usize,
        /// Suppress reset arcs.
        #[arg(long)]
        plain: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests land here as well and exit cleanly
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.config.format;
    match run(cli) {
        Ok((report, code)) => {
            let rendered = match format {
                Format::Text => report.text.trim_end().to_string(),
                Format::Json => serde_json::to_string_pretty(&report.to_json())
                    .expect("reports serialize"),
            };
            // a closed pipe downstream is not our failure; keep the verdict code
            use std::io::Write;
            let _ = writeln!(std::io::stdout(), "{rendered}");
            ExitCode::from(code)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(Report, u8)> {
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let started = Instant::now();
    let cfg = &cli.config;
    let (summary, verdict, text, code) = match &cli.command {
        Command::Validate { strict, net } => cmd_validate(*strict, net)?,
        Command::Simulate { from, run, net } => cmd_simulate(cfg, from.as_deref(), run, net)?,
        Command::Cover { target, from, net } => cmd_cover(cfg, target, from.as_deref(), net)?,
        Command::Reach { target, from, net } => cmd_reach(cfg, target, from.as_deref(), net)?,
        Command::Redundancy { net } => cmd_redundancy(cfg, net)?,
        Command::Skeleton { out, net } => cmd_skeleton(cfg, out.as_deref(), net)?,
        Command::Check { property, k, kmax_gs, net } => {
            cmd_check(cfg, *property, *k, *kmax_gs, net)?
        }
        Command::Generate(gen) => cmd_generate(gen)?,
    };
    let report = Report {
        command: echo.join(" "),
        net: summary,
        verdict,
        text,
        elapsed: started.elapsed(),
    };
    Ok((report, code))
}

fn load_net(path: &Path, lenient: bool) -> Result<ParsedNet> {
    let input =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_net(&input, lenient).with_context(|| format!("parsing {}", path.display()))
}

fn need_workflow(parsed: &ParsedNet, path: &Path) -> Result<WorkflowNet> {
    parsed.workflow().cloned().ok_or_else(|| {
        anyhow!("{} is not a workflow net; this analysis needs initial and final places", path.display())
    })
}

fn run_names(net: &ResetNet, run: &Run) -> Vec<String> {
    run.steps().iter().map(|&t| net.transition(t).name().to_string()).collect()
}

type Outcome = (Option<NetSummary>, Value, String, u8);

fn cmd_validate(strict: bool, path: &Path) -> Result<Outcome> {
    // parse leniently so violations become the verdict instead of an error
    let parsed = load_net(path, true)?;
    let summary = Some(NetSummary::of(&parsed));
    match &parsed {
        ParsedNet::Workflow(w) => {
            let net = w.net();
            let violations = validate_workflow(net, w.initial(), w.final_place(), strict);
            if violations.is_empty() {
                let text = format!(
                    "workflow net: {} places, {} transitions, initial {}, final {}",
                    net.place_count(),
                    net.transition_count(),
                    net.place_name(w.initial()),
                    net.place_name(w.final_place()),
                );
                Ok((summary, json!({"kind": "workflow", "valid": true}), text, 0))
            } else {
                let what: Vec<String> = violations.iter().map(|v| v.describe(net)).collect();
                let text = format!("not a workflow net:\n  {}", what.join("\n  "));
                Ok((summary, json!({"kind": "workflow", "valid": false, "violations": what}), text, 1))
            }
        }
        ParsedNet::Petri(net) => {
            let text = format!(
                "petri net: {} places, {} transitions (no workflow conditions to check)",
                net.place_count(),
                net.transition_count(),
            );
            Ok((summary, json!({"kind": "petri", "valid": true}), text, 0))
        }
    }
}

fn default_start(parsed: &ParsedNet) -> Marking {
    match parsed {
        ParsedNet::Workflow(w) => w.initial_marking(1),
        ParsedNet::Petri(net) => Marking::zero(net.place_count()),
    }
}

fn cmd_simulate(cfg: &Config, from: Option<&str>, run: &str, path: &Path) -> Result<Outcome> {
    let parsed = load_net(path, cfg.lenient)?;
    let net = parsed.net();
    let start = match from {
        Some(s) => parse_marking(net, s)?,
        None => default_start(&parsed),
    };
    let run = parse_run(net, run)?;
    let trace = net.replay(&start, &run).context("replaying the run")?;
    let end = trace.last().expect("replay includes the start").clone();
    let verdict = json!({
        "end": marking_to_json(net, &end),
        "trace": trace.iter().map(|m| marking_to_json(net, m)).collect::<Vec<_>>(),
    });
    let text = net.display_marking(&end);
    Ok((Some(NetSummary::of(&parsed)), verdict, text, 0))
}

fn cmd_cover(cfg: &Config, target: &str, from: Option<&str>, path: &Path) -> Result<Outcome> {
    let parsed = load_net(path, cfg.lenient)?;
    let net = parsed.net();
    let target = parse_marking(net, target)?;
    let cb = backward_cover(net, &UpSet::above(target.clone()));
    let summary = Some(NetSummary::of(&parsed));
    let basis = upset_to_json(net, cb.basis());
    let basis_text: Vec<String> =
        cb.basis().basis().iter().map(|m| net.display_marking(m)).collect();
    match from {
        None => {
            let text = format!(
                "backward coverability basis ({} markings):\n{}",
                cb.basis().basis().len(),
                basis_text.join("\n"),
            );
            Ok((summary, json!({"basis": basis}), text, 0))
        }
        Some(s) => {
            let m = parse_marking(net, s)?;
            if cb.member(&m) {
                let run = extract_covering_run(&cb, net, &m)
                    .expect("members admit covering runs");
                let end = net.fire_run(&m, &run).expect("covering runs replay");
                assert!(target.leq(&end), "extracted run must cover the target");
                let verdict = json!({
                    "covered": true,
                    "run": run_names(net, &run),
                    "end": marking_to_json(net, &end),
                    "basis": basis,
                });
                let text = format!(
                    "covered\nrun: {}\nend: {}",
                    format_run(net, &run),
                    net.display_marking(&end),
                );
                Ok((summary, verdict, text, 0))
            } else {
                let verdict = json!({"covered": false, "basis": basis});
                let text = format!(
                    "not covered: {} is below every basis marking's requirements",
                    net.display_marking(&m),
                );
                Ok((summary, verdict, text, 1))
            }
        }
    }
}

fn cmd_reach(cfg: &Config, target: &str, from: Option<&str>, path: &Path) -> Result<Outcome> {
    let parsed = load_net(path, cfg.lenient)?;
    let net = parsed.net();
    let tgt = parse_target(net, target)?;
    let start = match from {
        Some(s) => parse_marking(net, s)?,
        None => default_start(&parsed),
    };
    let summary = Some(NetSummary::of(&parsed));
    match decide_mixed_reach(net, &start, &tgt, cfg.budget())? {
        ReachVerdict::Found(run) => {
            let end = net.fire_run(&start, &run).expect("found runs replay");
            assert!(tgt.contains(&end), "found run must land in the target");
            let verdict = json!({
                "reachable": true,
                "run": run_names(net, &run),
                "end": marking_to_json(net, &end),
            });
            let text = format!(
                "reachable\nrun: {}\nend: {}",
                format_run(net, &run),
                net.display_marking(&end),
            );
            Ok((summary, verdict, text, 0))
        }
        ReachVerdict::Unreachable(certs) => {
            let cert_json: Vec<Value> = certs
                .iter()
                .map(|c| match c {
                    AtomCertificate::StateEquation { atom } => {
                        json!({"atom": atom, "kind": "state_equation"})
                    }
                    AtomCertificate::ExhaustedSpace { atom } => {
                        json!({"atom": atom, "kind": "exhausted_space"})
                    }
                })
                .collect();
            let lines: Vec<String> = certs
                .iter()
                .map(|c| match c {
                    AtomCertificate::StateEquation { atom } => {
                        format!("  atom {atom}: state equation infeasible")
                    }
                    AtomCertificate::ExhaustedSpace { atom } => {
                        format!("  atom {atom}: finite reachable space exhausted")
                    }
                })
                .collect();
            let verdict = json!({"reachable": false, "certificates": cert_json});
            let text = format!("unreachable:\n{}", lines.join("\n"));
            Ok((summary, verdict, text, 1))
        }
        ReachVerdict::Unknown(budget) => {
            let verdict = json!({"reachable": null, "budget": budget_json(&budget)});
            let text = budget_text(&budget);
            Ok((summary, verdict, text, 2))
        }
    }
}

fn cmd_redundancy(cfg: &Config, path: &Path) -> Result<Outcome> {
    let parsed = load_net(path, cfg.lenient)?;
    let w = need_workflow(&parsed, path)?;
    let net = w.net();
    let info = redundancy_info(&w);
    let resetable = resetable_places(&w, &info);

    let places: Vec<Value> = net
        .places()
        .map(|p| {
            let mut entry = json!({
                "name": net.place_name(p),
                "nonredundant": info.is_place_nonredundant(p),
            });
            if let Some(wit) = info.place_witness(p) {
                entry["budget"] = json!(wit.budget);
                entry["run"] = json!(run_names(net, &wit.run));
            }
            entry
        })
        .collect();
    let transitions: Vec<Value> = net
        .transition_ids()
        .map(|t| {
            let mut entry = json!({
                "name": net.transition(t).name(),
                "nonredundant": info.is_transition_nonredundant(t),
            });
            if let Some(wit) = info.transition_witness(t) {
                entry["budget"] = json!(wit.budget);
                entry["run"] = json!(run_names(net, &wit.run));
            }
            entry
        })
        .collect();
    let resetable_names: Vec<&str> = resetable.iter().map(|&p| net.place_name(p)).collect();

    let name_list = |mut it: Vec<&str>| -> String {
        if it.is_empty() {
            "none".into()
        } else {
            it.sort();
            it.join(", ")
        }
    };
    let text = format!(
        "nonredundant places: {}\nredundant places: {}\nnonredundant transitions: {}\nredundant transitions: {}\nresetable places: {}",
        name_list(info.nonredundant_places().map(|p| net.place_name(p)).collect()),
        name_list(info.redundant_places().map(|p| net.place_name(p)).collect()),
        name_list(info.nonredundant_transitions().map(|t| net.transition(t).name()).collect()),
        name_list(info.redundant_transitions().map(|t| net.transition(t).name()).collect()),
        name_list(resetable_names.clone()),
    );
    let verdict = json!({
        "places": places,
        "transitions": transitions,
        "resetable": resetable_names,
    });
    Ok((Some(NetSummary::of(&parsed)), verdict, text, 0))
}

fn cmd_skeleton(cfg: &Config, out: Option<&Path>, path: &Path) -> Result<Outcome> {
    let parsed = load_net(path, cfg.lenient)?;
    let w = need_workflow(&parsed, path)?;
    let net = w.net();
    let info = redundancy_info(&w);
    let skel = skeleton(&w, &info);

    let kept_places: Vec<&str> =
        skel.skeleton.places().map(|p| skel.skeleton.place_name(p)).collect();
    let kept_transitions: Vec<&str> =
        skel.skeleton.transitions().iter().map(|t| t.name()).collect();
    let removed: Vec<&str> = skel.resetable.iter().map(|&p| net.place_name(p)).collect();
    let (status_json, status_text) = match &skel.workflow_status {
        Ok((i, f)) => (
            json!({"workflow": true}),
            format!(
                "workflow conditions: ok (initial {}, final {})",
                skel.skeleton.place_name(*i),
                skel.skeleton.place_name(*f),
            ),
        ),
        Err(violations) => {
            let what: Vec<String> =
                violations.iter().map(|v| v.describe(&skel.skeleton)).collect();
            (
                json!({"workflow": false, "violations": what}),
                format!("workflow conditions violated:\n  {}", what.join("\n  ")),
            )
        }
    };

    let skeleton_net = match skel.workflow() {
        Some(sw) => ParsedNet::Workflow(sw),
        None => ParsedNet::Petri(skel.skeleton.clone()),
    };
    if let Some(out) = out {
        fs::write(out, emit_net(&skeleton_net))
            .with_context(|| format!("writing {}", out.display()))?;
    }

    let mut verdict = json!({
        "places": kept_places,
        "transitions": kept_transitions,
        "removed_resetable": removed,
    });
    verdict["status"] = status_json;
    let mut text = format!(
        "skeleton: {} places, {} transitions\nremoved resetable places: {}\n{}",
        kept_places.len(),
        kept_transitions.len(),
        if removed.is_empty() { "none".into() } else { removed.join(", ") },
        status_text,
    );
    if let Some(out) = out {
        text.push_str(&format!("\nwrote {}", out.display()));
    }
    Ok((Some(NetSummary::of(&parsed)), verdict, text, 0))
}

fn budget_json(b: &BudgetReport) -> Value {
    json!({"states": b.states, "elapsed_ms": b.elapsed.as_millis() as u64})
}

fn budget_text(b: &BudgetReport) -> String {
    format!("undecided: budget exhausted after {} states", b.states)
}

fn unknown_json(reason: &UnknownReason) -> Value {
    match reason {
        UnknownReason::Budget(b) => {
            json!({"kind": "budget", "states": b.states, "elapsed_ms": b.elapsed.as_millis() as u64})
        }
        UnknownReason::Ideals(e) => json!({"kind": "ideal_budget", "detail": e.to_string()}),
    }
}

fn unknown_text(reason: &UnknownReason) -> String {
    match reason {
        UnknownReason::Budget(b) => budget_text(b),
        UnknownReason::Ideals(e) => format!("undecided: {e}"),
    }
}

fn evidence_json(ev: &Evidence) -> Value {
    match ev {
        Evidence::ExploredAll { states } => json!({"kind": "explored_all", "states": states}),
        Evidence::BoundedComplete { states } => {
            json!({"kind": "bounded_complete", "states": states})
        }
        Evidence::EmptyTarget => json!({"kind": "empty_target"}),
        Evidence::CertifiedUnreachable => json!({"kind": "certified_unreachable"}),
    }
}

fn evidence_text(ev: &Evidence) -> String {
    match ev {
        Evidence::ExploredAll { states } => {
            format!("all {states} reachable markings complete")
        }
        Evidence::BoundedComplete { states } => {
            format!("bounded reachability set of {states} markings screened")
        }
        Evidence::EmptyTarget => "the refutation target was empty".into(),
        Evidence::CertifiedUnreachable => "every refutation atom was certified unreachable".into(),
    }
}

/// True iff the run replays from `{i : k}` to the witness and the witness
/// cannot reach `{f : k}`. Every witness goes through this before printing.
fn refutes_at(w: &WorkflowNet, cx: &CounterExample, k: u64) -> bool {
    w.net()
        .fire_run(&w.initial_marking(k), &cx.run)
        .is_ok_and(|end| end == cx.witness)
        && !matches!(can_complete_or_witness(w, &cx.witness, k), Completion::Completes(_))
}

fn witness_json(net: &ResetNet, cx: &CounterExample, k: u64) -> Value {
    json!({
        "k": k,
        "marking": marking_to_json(net, &cx.witness),
        "run": run_names(net, &cx.run),
    })
}

fn witness_text(net: &ResetNet, cx: &CounterExample) -> String {
    format!(
        "witness: {}\nrun: {}",
        net.display_marking(&cx.witness),
        format_run(net, &cx.run),
    )
}

fn cmd_check(
    cfg: &Config,
    property: Property,
    k: u64,
    kmax_gs: u64,
    path: &Path,
) -> Result<Outcome> {
    let parsed = load_net(path, cfg.lenient)?;
    let w = need_workflow(&parsed, path)?;
    let net = w.net();
    let summary = Some(NetSummary::of(&parsed));
    let budget = cfg.budget();

    let (verdict, text, code) = match property {
        Property::Ksound => match k_sound_semi(&w, k, budget) {
            Verdict::Holds(ev) => (
                json!({"property": "ksound", "k": k, "holds": true, "evidence": evidence_json(&ev)}),
                format!("{k}-sound: {}", evidence_text(&ev)),
                0,
            ),
            Verdict::Fails(cx) => {
                anyhow::ensure!(refutes_at(&w, &cx, k), "internal witness failed re-verification");
                (
                    json!({"property": "ksound", "k": k, "holds": false, "witness": witness_json(net, &cx, k)}),
                    format!("not {k}-sound\n{}", witness_text(net, &cx)),
                    1,
                )
            }
            Verdict::Unknown(reason) => (
                json!({"property": "ksound", "k": k, "holds": null, "reason": unknown_json(&reason)}),
                unknown_text(&reason),
                2,
            ),
        },
        Property::Upto => match up_to_k(&w, k, budget) {
            Verdict::Holds(ev) => (
                json!({"property": "upto", "k": k, "holds": true, "evidence": evidence_json(&ev)}),
                format!("up-to-{k} sound: {}", evidence_text(&ev)),
                0,
            ),
            Verdict::Fails(cx) => {
                let j = (1..=k)
                    .find(|&j| refutes_at(&w, &cx, j))
                    .ok_or_else(|| anyhow!("internal witness failed re-verification"))?;
                (
                    json!({"property": "upto", "k": k, "holds": false, "witness": witness_json(net, &cx, j)}),
                    format!("not up-to-{k} sound: fails at k = {j}\n{}", witness_text(net, &cx)),
                    1,
                )
            }
            Verdict::Unknown(reason) => (
                json!({"property": "upto", "k": k, "holds": null, "reason": unknown_json(&reason)}),
                unknown_text(&reason),
                2,
            ),
        },
        Property::Clean => match (1..=k).find(|&j| !coverability_clean(&w, j)) {
            None => (
                json!({"property": "clean", "k": k, "holds": true}),
                format!("coverability clean for every k up to {k}"),
                0,
            ),
            Some(j) => {
                let cx = strict_cover_witness(&w, j).expect("unclean nets expose a witness");
                let end = net
                    .fire_run(&w.initial_marking(j), &cx.run)
                    .context("internal witness failed re-verification")?;
                anyhow::ensure!(
                    end == cx.witness && w.final_marking(j).lt(&cx.witness),
                    "internal witness failed re-verification"
                );
                (
                    json!({"property": "clean", "k": k, "holds": false, "witness": witness_json(net, &cx, j)}),
                    format!("not clean at k = {j}\n{}", witness_text(net, &cx)),
                    1,
                )
            }
        },
        Property::Pk => {
            let report = pk_check(&w, k, kmax_gs, budget);
            let names =
                ["ends-not-resetable", "full-reset-run", "skeleton-generalised-sound", "coverability-clean", "no-stuck-component"];
            let props: Vec<Value> = report
                .properties
                .iter()
                .zip(names)
                .map(|(p, name)| {
                    json!({"name": name, "status": status_str(p.status), "detail": p.detail})
                })
                .collect();
            let width = names.iter().map(|n| n.len()).max().unwrap();
            let mut lines: Vec<String> = report
                .properties
                .iter()
                .zip(names)
                .enumerate()
                .map(|(n, (p, name))| {
                    format!(
                        "  {} {:width$}  {:7}  {}",
                        n + 1,
                        name,
                        status_str(p.status),
                        p.detail,
                    )
                })
                .collect();

            let (overall, headline, code) = match report.overall {
                PkOutcome::UpToKSound => ("up_to_k_sound", format!("up-to-{k} sound"), 0),
                PkOutcome::NotGeneralisedSound { .. } => {
                    ("not_generalised_sound", "not generalised sound".to_string(), 1)
                }
                PkOutcome::Unknown => ("unknown", "undecided".to_string(), 2),
            };
            let k_hint = match report.overall {
                PkOutcome::NotGeneralisedSound { k_hint } => k_hint,
                _ => None,
            };

            let mut verdict = json!({
                "property": "pk",
                "k": k,
                "overall": overall,
                "properties": props,
            });
            if let Some(hint) = k_hint {
                verdict["k_hint"] = json!(hint);
            }
            if let (Some(cx), Some(hint)) = (&report.counterexample, k_hint) {
                if refutes_at(&w, cx, hint) {
                    verdict["witness"] = witness_json(net, cx, hint);
                    lines.push(format!("witness of {hint}-unsoundness: {}", net.display_marking(&cx.witness)));
                    lines.push(format!("run: {}", format_run(net, &cx.run)));
                }
            }
            let text = format!("{headline}\n{}", lines.join("\n"));
            (verdict, text, code)
        }
    };
    Ok((summary, verdict, text, code))
}

fn status_str(status: PropStatus) -> &'static str {
    match status {
        PropStatus::Holds => "holds",
        PropStatus::Fails => "fails",
        PropStatus::Unknown => "unknown",
        PropStatus::Skipped => "skipped",
    }
}

fn cmd_generate(gen: &Generate) -> Result<Outcome> {
    let (parsed, out) = match gen {
        Generate::Minsky { machine, out } => {
            let input = fs::read_to_string(machine)
                .with_context(|| format!("reading {}", machine.display()))?;
            let m = parse_machine(&input)
                .with_context(|| format!("parsing {}", machine.display()))?;
            let w = minsky_to_rwf(&m)?;
            (ParsedNet::Workflow(w), out)
        }
        Generate::Builtin { name, out } => {
            let b = builtin(name).ok_or_else(|| {
                anyhow!("unknown builtin {name:?}; available: {}", BUILTIN_NAMES.join(", "))
            })?;
            let parsed = match b {
                BuiltinNet::Workflow(w) => ParsedNet::Workflow(w),
                BuiltinNet::Petri(net) => ParsedNet::Petri(net),
            };
            (parsed, out)
        }
        Generate::Random { seed, places, transitions, plain, out } => {
            let mut shape =
                NetShape { places: *places, transitions: *transitions, ..NetShape::small() };
            if *plain {
                shape = shape.plain();
            }
            let w = random_workflow(&mut rng(*seed), shape);
            (ParsedNet::Workflow(w), out)
        }
    };

    let emitted = emit_net(&parsed);
    let summary = NetSummary::of(&parsed);
    let (text, written) = match out {
        Some(path) => {
            fs::write(path, &emitted).with_context(|| format!("writing {}", path.display()))?;
            (
                format!(
                    "wrote {} ({} places, {} transitions)",
                    path.display(),
                    summary.places,
                    summary.transitions,
                ),
                json!(path.display().to_string()),
            )
        }
        None => (emitted.clone(), Value::Null),
    };
    let verdict = json!({
        "written": written,
        "doc": serde_json::from_str::<Value>(&emitted).expect("emitted nets are JSON"),
    });
    Ok((Some(summary), verdict, text, 0))
}
