//! Command-line front end: argument parsing, file IO, dispatch and
//! reporting.
//!
//! Exit codes: 0 holds / success, 1 violated, 2 inconclusive or
//! non-convergence, 3 input or contract error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::automaton::Automaton;
use crate::check::{check_property, over_plant};
use crate::error::{Error, Result};
use crate::gadgets::{random_plant, GadgetKind, GeneratorParams};
use crate::hierarchy::{
    build_abstraction, check_moc_modular, hier_synth_normal, hier_synth_relobs, hier_verify, lemma_distribute_q,
    ModularSystem, DEFAULT_BUDGET,
};
use crate::ops;
use crate::oracle::{oracle_check, OracleInputs, OracleProperty, OracleReport};
use crate::saut::{parse_automaton_with, serialize_automaton, ParseOptions};
use crate::sct;
use crate::verdict::Verdict;

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "hierctl",
    version,
    about = "Consistency checks and supremal sublanguage synthesis for hierarchical supervisory control"
)]
struct Cli {
    /// Candidate tuples examined before a consistency check gives up.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Also run the bounded reference oracle up to this string length.
    #[arg(long, global = true)]
    oracle_bound: Option<usize>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Write the produced automaton (or automata) here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Accept the reserved event names `@` and `#` in input files.
    #[arg(long, global = true)]
    allow_reserved: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide one property.
    Check {
        property: Property,
        #[command(flatten)]
        files: Files,
    },
    /// Compute a supremal sublanguage.
    Synth {
        kind: SynthKind,
        #[command(flatten)]
        files: Files,
        #[arg(long, value_enum, default_value_t = Level::Low)]
        level: Level,
        /// Round limit of the relative-observability fixpoint.
        #[arg(long, default_value_t = 100)]
        max_iters: usize,
    },
    /// Evaluate the hierarchical preservation results on an instance.
    Hier {
        action: HierAction,
        #[command(flatten)]
        files: Files,
        #[arg(long, default_value_t = 100)]
        max_iters: usize,
    },
    /// Checks on a composition of components (repeat --plant).
    Modular {
        action: ModularAction,
        #[arg(long = "plant", required = true)]
        plants: Vec<PathBuf>,
    },
    /// Build a reduction plant from an all-marked NFA.
    Gadget {
        kind: GadgetArg,
        #[arg(long)]
        input: PathBuf,
    },
    /// Generate a seeded random automaton.
    Random {
        #[arg(long, default_value_t = 4)]
        states: usize,
        #[arg(long, default_value_t = 3)]
        events: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        p_controllable: f64,
        #[arg(long, default_value_t = 0.5)]
        p_observable: f64,
        #[arg(long, default_value_t = 0.5)]
        p_highlevel: f64,
        #[arg(long, default_value_t = 0.6)]
        density: f64,
        #[arg(long, default_value_t = 1.0)]
        p_marked: f64,
        #[arg(long)]
        nondeterministic: bool,
    },
}

#[derive(Debug, Args)]
struct Files {
    /// Plant automaton G.
    #[arg(long)]
    plant: PathBuf,
    /// Specification K (prefix-closed for synthesis).
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Ambient language C for relative observability (defaults to K).
    #[arg(long)]
    ambient: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Property {
    Oc,
    Loc,
    Moc,
    Observer,
    Lcc,
    Controllability,
    Observability,
    Normality,
    Relobs,
    Nonconflicting,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SynthKind {
    Supn,
    Suprelobs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Level {
    Low,
    High,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HierAction {
    Verify,
    SynthNormal,
    SynthRelobs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModularAction {
    Moc,
    Distribute,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GadgetArg {
    Oc,
    Moc,
    Loc,
}

/// What a command produced: a JSON report, a human rendering and an exit
/// code, plus automata to write with `--out`.
struct Outcome {
    report: Value,
    human: String,
    code: i32,
    automata: Vec<(&'static str, Automaton)>,
}

impl Outcome {
    fn verdict(v: &Verdict) -> Outcome {
        Outcome {
            report: to_value(v),
            human: render_verdict(v),
            code: v.exit_code(),
            automata: Vec::new(),
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn render_verdict(v: &Verdict) -> String {
    let mut s = v.tag().to_string();
    match v {
        Verdict::Violated(w) => {
            for (name, word) in &w.strings {
                s.push_str(&format!("\n  {name} = {word}"));
            }
            if !w.note.is_empty() {
                s.push_str(&format!("\n  ({})", w.note));
            }
        }
        Verdict::Inconclusive(b) => s.push_str(&format!("\n  {}", b.note)),
        Verdict::Holds => {}
    }
    s
}

/// Runs the CLI on `args` (including the program name) with the given
/// output streams; returns the exit code.
pub fn run_with(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_HOLDS };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            if let Err(e) = write_automata(&cli, &outcome) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_ERROR;
            }
            if cli.json {
                let record = json!({
                    "invocation": invocation(&cli),
                    "report": outcome.report,
                    "exit_code": outcome.code,
                });
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&record).expect("json"));
            } else {
                let _ = writeln!(out, "{}", outcome.human);
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

pub fn run(args: impl IntoIterator<Item = OsString>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

fn invocation(cli: &Cli) -> Value {
    let (command, inputs, seed) = match &cli.command {
        Command::Check { property, files } => (format!("check {property:?}"), files_json(files), None),
        Command::Synth { kind, files, level, .. } => {
            (format!("synth {kind:?} --level {level:?}"), files_json(files), None)
        }
        Command::Hier { action, files, .. } => (format!("hier {action:?}"), files_json(files), None),
        Command::Modular { action, plants } => (format!("modular {action:?}"), json!({ "plants": plants }), None),
        Command::Gadget { kind, input } => (format!("gadget {kind:?}"), json!({ "input": input }), None),
        Command::Random { seed, .. } => ("random".to_string(), Value::Null, Some(*seed)),
    };
    json!({
        "command": command.to_lowercase(),
        "inputs": inputs,
        "budget": cli.budget,
        "oracle_bound": cli.oracle_bound,
        "seed": seed,
    })
}

fn files_json(f: &Files) -> Value {
    json!({ "plant": f.plant, "spec": f.spec, "ambient": f.ambient })
}

fn load(path: &Path, cli: &Cli) -> Result<Automaton> {
    let text = fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_automaton_with(
        &text,
        ParseOptions {
            allow_reserved: cli.allow_reserved,
        },
    )
    .map_err(|e| Error::Usage(format!("{}: {e}", path.display())))
}

fn required<'a>(p: &'a Option<PathBuf>, what: &str) -> Result<&'a PathBuf> {
    p.as_ref()
        .ok_or_else(|| Error::Usage(format!("this command needs --{what}")))
}

fn write_automata(cli: &Cli, outcome: &Outcome) -> Result<()> {
    let Some(out) = &cli.out else { return Ok(()) };
    let write = |path: &Path, a: &Automaton| {
        fs::write(path, serialize_automaton(a))
            .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))
    };
    match outcome.automata.as_slice() {
        [] => Err(Error::Usage(
            "--out given, but this command produces no automaton".into(),
        )),
        [(_, a)] => write(out, a),
        many => {
            for (label, a) in many {
                write(&labelled_path(out, label), a)?;
            }
            Ok(())
        }
    }
}

/// `dir/name.saut` with label `low` becomes `dir/name.low.saut`.
fn labelled_path(out: &Path, label: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = out
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "saut".into());
    out.with_file_name(format!("{stem}.{label}.{ext}"))
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Check { property, files } => check(cli, *property, files),
        Command::Synth {
            kind,
            files,
            level,
            max_iters,
        } => synth(cli, *kind, files, *level, *max_iters),
        Command::Hier {
            action,
            files,
            max_iters,
        } => hier(cli, *action, files, *max_iters),
        Command::Modular { action, plants } => {
            let components = plants.iter().map(|p| load(p, cli)).collect::<Result<Vec<_>>>()?;
            let ms = ModularSystem::new(components)?;
            match action {
                ModularAction::Moc => {
                    let r = check_moc_modular(&ms, cli.budget)?;
                    let mut human = format!("composition: {}", render_verdict(&r.verdict));
                    for (i, v) in r.components.iter().enumerate() {
                        human.push_str(&format!("\ncomponent {}: {}", i + 1, v.tag()));
                    }
                    Ok(Outcome {
                        code: r.verdict.exit_code(),
                        report: to_value(&r),
                        human,
                        automata: Vec::new(),
                    })
                }
                ModularAction::Distribute => Ok(Outcome::verdict(&lemma_distribute_q(&ms)?)),
            }
        }
        Command::Gadget { kind, input } => {
            let a = load(input, cli)?;
            let kind = match kind {
                GadgetArg::Oc => GadgetKind::Oc,
                GadgetArg::Moc => GadgetKind::Moc,
                GadgetArg::Loc => GadgetKind::Loc,
            };
            let b = kind.build(&a)?;
            Ok(automaton_outcome(cli, b))
        }
        Command::Random {
            states,
            events,
            seed,
            p_controllable,
            p_observable,
            p_highlevel,
            density,
            p_marked,
            nondeterministic,
        } => {
            let g = random_plant(&GeneratorParams {
                states: *states,
                events: *events,
                p_controllable: *p_controllable,
                p_observable: *p_observable,
                p_highlevel: *p_highlevel,
                transition_density: *density,
                nondeterministic: *nondeterministic,
                p_marked: *p_marked,
                seed: *seed,
            })?;
            Ok(automaton_outcome(cli, g))
        }
    }
}

/// A produced automaton: printed in `.saut` form unless written with --out.
fn automaton_outcome(cli: &Cli, a: Automaton) -> Outcome {
    let text = serialize_automaton(&a);
    let human = if cli.out.is_some() {
        format!("{} states, {} transitions", a.num_states(), a.num_transitions())
    } else {
        text.trim_end().to_string()
    };
    Outcome {
        report: json!({ "automaton": text }),
        human,
        code: EXIT_HOLDS,
        automata: vec![("result", a)],
    }
}

fn oracle_property(p: Property) -> OracleProperty {
    match p {
        Property::Oc => OracleProperty::Oc,
        Property::Loc => OracleProperty::Loc,
        Property::Moc => OracleProperty::Moc,
        Property::Observer => OracleProperty::Observer,
        Property::Lcc => OracleProperty::Lcc,
        Property::Controllability => OracleProperty::Controllability,
        Property::Observability => OracleProperty::Observability,
        Property::Normality => OracleProperty::Normality,
        Property::Relobs => OracleProperty::Relobs,
        Property::Nonconflicting => OracleProperty::Nonconflicting,
    }
}

fn check(cli: &Cli, property: Property, files: &Files) -> Result<Outcome> {
    let g = load(&files.plant, cli)?;
    let spec = files.spec.as_ref().map(|p| over_plant(load(p, cli)?, &g)).transpose()?;
    let ambient = files
        .ambient
        .as_ref()
        .map(|p| over_plant(load(p, cli)?, &g))
        .transpose()?;
    let inputs = OracleInputs {
        plant: &g,
        spec: spec.as_ref(),
        ambient: ambient.as_ref(),
    };
    let verdict = check_property(oracle_property(property), inputs, cli.budget)?;
    let oracle: Option<OracleReport> = match cli.oracle_bound {
        Some(bound) => Some(oracle_check(oracle_property(property), inputs, bound)?),
        None => None,
    };
    // an undecided check is settled by a violation the oracle exhibits
    let verdict = match (&verdict, &oracle) {
        (Verdict::Inconclusive(_), Some(r)) if r.is_violation() => {
            Verdict::Violated(r.witness().expect("violation").clone())
        }
        _ => verdict,
    };
    let mut outcome = Outcome::verdict(&verdict);
    if let Some(r) = oracle {
        outcome.human.push_str(&format!(
            "\noracle up to {}: {}",
            r.bound,
            if r.is_violation() { "violation" } else { "no violation" }
        ));
        outcome.report["oracle"] = to_value(&r);
    }
    Ok(outcome)
}

fn synth(cli: &Cli, kind: SynthKind, files: &Files, level: Level, max_iters: usize) -> Result<Outcome> {
    let g = load(&files.plant, cli)?;
    let k = load(required(&files.spec, "spec")?, cli)?;
    let ambient = files.ambient.as_ref().map(|p| load(p, cli)).transpose()?;
    let ctx = build_abstraction(&g)?;
    let l = &ctx.language;
    if level == Level::Both {
        return match kind {
            SynthKind::Supn => {
                if ambient.is_some() {
                    return Err(Error::Usage("supn takes no --ambient".into()));
                }
                let r = hier_synth_normal(&ctx, &k, cli.budget)?;
                Ok(both_outcome(to_value(&r), r.equal, &r.low, &r.high_lift, EXIT_HOLDS))
            }
            SynthKind::Suprelobs => {
                let r = hier_synth_relobs(&ctx, &k, ambient.as_ref(), max_iters, cli.budget)?;
                let equal = r.low_in_high_lift.is_holds() && r.high_lift_in_low.is_holds();
                let code = if r.low_convergence.converged && r.high_convergence.converged {
                    EXIT_HOLDS
                } else {
                    EXIT_INCONCLUSIVE
                };
                Ok(both_outcome(to_value(&r), equal, &r.low, &r.high_lift, code))
            }
        };
    }
    // one level: the low level works on K ∥ L within L, the high level on K
    // within Q(L)
    let (base, universe) = match level {
        Level::Low => (ops::parallel_compose(&k, l)?, l.clone()),
        _ => (k.clone(), ctx.abstract_language()?),
    };
    let lift = |c: &Automaton| -> Result<Automaton> {
        match level {
            Level::Low => ops::parallel_compose(c, l),
            _ => Ok(c.clone()),
        }
    };
    let (result, convergence) = match kind {
        SynthKind::Supn => {
            if ambient.is_some() {
                return Err(Error::Usage("supn takes no --ambient".into()));
            }
            (sct::sup_normal_closed(&base, &universe)?, None)
        }
        SynthKind::Suprelobs => {
            let c = match &ambient {
                Some(c) => lift(c)?,
                None => base.clone(),
            };
            let (r, report) = sct::sup_relobs_closed(&base, &c, &universe, max_iters)?;
            (r, Some(report))
        }
    };
    let converged = convergence.as_ref().is_none_or(|c| c.converged);
    let text = serialize_automaton(&result);
    let mut human = format!("{} states", result.num_states());
    if let Some(c) = &convergence {
        human.push_str(&format!(
            ", {} round(s){}",
            c.rounds,
            if c.converged { "" } else { ", not converged" }
        ));
    }
    if cli.out.is_none() {
        human.push('\n');
        human.push_str(text.trim_end());
    }
    Ok(Outcome {
        report: json!({ "automaton": text, "convergence": convergence }),
        human,
        code: if converged { EXIT_HOLDS } else { EXIT_INCONCLUSIVE },
        automata: vec![("result", result)],
    })
}

fn both_outcome(report: Value, equal: bool, low: &Automaton, high_lift: &Automaton, code: i32) -> Outcome {
    let human = format!(
        "LOW {} HIGH-LIFT\n--- low\n{}\n--- high-lift\n{}",
        if equal { "=" } else { "≠" },
        serialize_automaton(low).trim_end(),
        serialize_automaton(high_lift).trim_end()
    );
    Outcome {
        report,
        human,
        code,
        automata: vec![("low", low.clone()), ("high-lift", high_lift.clone())],
    }
}

fn hier(cli: &Cli, action: HierAction, files: &Files, max_iters: usize) -> Result<Outcome> {
    let g = load(&files.plant, cli)?;
    let k = load(required(&files.spec, "spec")?, cli)?;
    let ctx = build_abstraction(&g)?;
    match action {
        HierAction::Verify => {
            let r = hier_verify(&ctx, &k, cli.budget)?;
            let mut human = String::new();
            for (name, v) in &r.hypotheses {
                human.push_str(&format!("{name}: {}\n", v.tag()));
            }
            for (name, p) in &r.properties {
                human.push_str(&format!("{name}: high {}, low {}\n", p.high.tag(), p.low.tag()));
            }
            let mut contradicted = false;
            for (name, t) in &r.theorems {
                contradicted |= t.contradicted;
                let status = if t.contradicted {
                    "CONTRADICTED"
                } else if t.biconditional_witnessed {
                    "witnessed"
                } else if t.hypotheses_met {
                    "hypotheses met, undecided"
                } else {
                    "hypotheses not met"
                };
                human.push_str(&format!("theorem {name}: {status}\n"));
            }
            Ok(Outcome {
                report: to_value(&r),
                human: human.trim_end().to_string(),
                code: if contradicted { EXIT_VIOLATED } else { EXIT_HOLDS },
                automata: Vec::new(),
            })
        }
        HierAction::SynthNormal => {
            let r = hier_synth_normal(&ctx, &k, cli.budget)?;
            Ok(both_outcome(to_value(&r), r.equal, &r.low, &r.high_lift, EXIT_HOLDS))
        }
        HierAction::SynthRelobs => {
            let ambient = files.ambient.as_ref().map(|p| load(p, cli)).transpose()?;
            let r = hier_synth_relobs(&ctx, &k, ambient.as_ref(), max_iters, cli.budget)?;
            let equal = r.low_in_high_lift.is_holds() && r.high_lift_in_low.is_holds();
            let code = if r.low_convergence.converged && r.high_convergence.converged {
                EXIT_HOLDS
            } else {
                EXIT_INCONCLUSIVE
            };
            Ok(both_outcome(to_value(&r), equal, &r.low, &r.high_lift, code))
        }
    }
}
