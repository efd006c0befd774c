//! Command-line driver: validate inputs, transform decision trees into
//! world models, deliberate, model-check formulas, and run the seeded
//! verification harness.
//!
//! Exit codes: 0 success, 1 a checked property is false, 2 input error,
//! 3 internal invariant failure. Output never uses ANSI colors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use bdikit::deliberate::{
    deliberate, intention_formulas, policy_scores, pw_deliberate, Procedure,
};
use bdikit::dot::world_to_dot;
use bdikit::dtree::{load_dtree, validate, DtreeLoadError};
use bdikit::gen::{random_tree, TreeClass};
use bdikit::logic::{desugar, parse_state_formula, rewrite_conditional, StateFormula};
use bdikit::transform::{transform, BeliefExtras};
use bdikit::verify::run_trial;
use bdikit::worlds::{
    holds_state, load_interpretation, payoff_range, prob_measure, store_interpretation,
    Situation, TOLERANCE,
};

const EXIT_OK: u8 = 0;
const EXIT_FALSE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "bdikit", version, about = "Decision trees, BDI worlds, deliberation, and model checking")]
struct Cli {
    /// Emit machine-readable JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a `.dtree` or model file and list violations.
    Validate { file: PathBuf },
    /// Transform a decision tree into a world model file.
    Transform {
        dtree: PathBuf,
        out: PathBuf,
        /// Belief-only branches to attach (JSON extras file).
        #[arg(long)]
        extras: Option<PathBuf>,
        /// Also write one Graphviz file per world into this directory.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Deliberate over a decision tree and print value, plans, and
    /// intentions.
    Deliberate {
        dtree: PathBuf,
        /// `maximin` or `maxexpval`.
        #[arg(long)]
        procedure: String,
        /// Cross-check against exhaustive policy enumeration.
        #[arg(long)]
        oracle: bool,
        /// Write the post-deliberation model file.
        #[arg(long)]
        emit_model: Option<PathBuf>,
    },
    /// Model-check a formula against a model file.
    Check {
        model: PathBuf,
        formula: String,
        /// Situation `world@point`; defaults to the designated one.
        #[arg(long)]
        at: Option<String>,
    },
    /// Run seeded random end-to-end verification trials.
    Verify {
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// `maxexpval` or `maximin-restricted`.
        #[arg(long)]
        class: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Validate { file } => cmd_validate(&file, cli.json),
        Command::Transform {
            dtree,
            out,
            extras,
            dot,
        } => cmd_transform(&dtree, &out, extras.as_deref(), dot.as_deref(), cli.json),
        Command::Deliberate {
            dtree,
            procedure,
            oracle,
            emit_model,
        } => cmd_deliberate(&dtree, &procedure, oracle, emit_model.as_deref(), cli.json),
        Command::Check { model, formula, at } => cmd_check(&model, &formula, at.as_deref(), cli.json),
        Command::Verify {
            trials,
            seed,
            class,
        } => cmd_verify(trials, seed, &class, cli.json),
    };
    ExitCode::from(code)
}

fn input_error(message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    EXIT_INPUT
}

fn emit_json(value: serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(&value).expect("report serialization")
    );
}

fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

fn cmd_validate(file: &Path, json: bool) -> u8 {
    if !file.exists() {
        return input_error(format!("no such file: {}", file.display()));
    }
    let is_dtree = file.extension().is_some_and(|ext| ext == "dtree");
    let violations: Vec<String> = if is_dtree {
        let text = match std::fs::read_to_string(file) {
            Ok(text) => text,
            Err(e) => return input_error(e),
        };
        match bdikit::dtree::dtree_from_str(&text) {
            Ok(dt) => validate(&dt).iter().map(|v| v.to_string()).collect(),
            Err(DtreeLoadError::Invalid(violations)) => {
                violations.iter().map(|v| v.to_string()).collect()
            }
            Err(e) => return input_error(e),
        }
    } else {
        let text = match std::fs::read_to_string(file) {
            Ok(text) => text,
            Err(e) => return input_error(e),
        };
        match bdikit::worlds::interpretation_from_str(&text) {
            Ok(m) => m.validate(),
            Err(bdikit::worlds::LoadError::Invalid(problems)) => problems,
            Err(e) => return input_error(e),
        }
    };

    if json {
        emit_json(json!({
            "version": version(),
            "command": "validate",
            "file": file.display().to_string(),
            "ok": violations.is_empty(),
            "violations": violations,
        }));
    } else if violations.is_empty() {
        println!("ok: {}", file.display());
    } else {
        println!("invalid: {}", file.display());
        for violation in &violations {
            println!("  {violation}");
        }
    }
    if violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_FALSE
    }
}

fn cmd_transform(
    dtree: &Path,
    out: &Path,
    extras: Option<&Path>,
    dot: Option<&Path>,
    json: bool,
) -> u8 {
    let dt = match load_dtree(dtree) {
        Ok(dt) => dt,
        Err(e) => return input_error(e),
    };
    let extras = match extras {
        None => None,
        Some(path) => match BeliefExtras::load(path) {
            Ok(extras) => Some(extras),
            Err(e) => return input_error(e),
        },
    };
    let result = match transform(&dt, extras.as_ref()) {
        Ok(result) => result,
        Err(e) => return input_error(e),
    };
    let m = &result.interpretation;
    if let Err(e) = store_interpretation(m, out) {
        return input_error(e);
    }

    let mut dot_files = Vec::new();
    if let Some(dir) = dot {
        if let Err(e) = std::fs::create_dir_all(dir) {
            return input_error(e);
        }
        for world in m.worlds.values() {
            let path = dir.join(format!("{}.dot", world.id));
            if let Err(e) = std::fs::write(&path, world_to_dot(world)) {
                return input_error(e);
            }
            dot_files.push(path.display().to_string());
        }
    }

    let weights = &m.prob[&m.designated];
    let belief: BTreeMap<String, f64> = m
        .belief_at(&m.designated)
        .iter()
        .map(|w| (w.0.clone(), weights.get(w).copied().unwrap_or(0.0)))
        .collect();
    let goal: Vec<String> = m
        .goal_at(&m.designated)
        .iter()
        .map(|w| w.0.clone())
        .collect();

    if json {
        emit_json(json!({
            "version": version(),
            "command": "transform",
            "designated": m.designated.to_string(),
            "belief": belief,
            "goal": goal,
            "model": out.display().to_string(),
            "dot_files": dot_files,
        }));
    } else {
        println!("designated: {}", m.designated);
        println!("belief worlds:");
        for (id, weight) in &belief {
            println!("  {id} mu={weight}");
        }
        println!("goal worlds:");
        for id in &goal {
            println!("  {id}");
        }
        println!("wrote model: {}", out.display());
        for file in &dot_files {
            println!("wrote dot: {file}");
        }
    }
    EXIT_OK
}

fn cmd_deliberate(
    dtree: &Path,
    procedure: &str,
    oracle: bool,
    emit_model: Option<&Path>,
    json: bool,
) -> u8 {
    let proc: Procedure = match procedure.parse() {
        Ok(proc) => proc,
        Err(e) => return input_error(e),
    };
    let dt = match load_dtree(dtree) {
        Ok(dt) => dt,
        Err(e) => return input_error(e),
    };
    let outcome = match deliberate(&dt, proc) {
        Ok(outcome) => outcome,
        Err(e) => return input_error(e),
    };
    let plans: Vec<String> = outcome.plans.iter().map(|p| p.to_string()).collect();
    let intentions: Vec<String> = intention_formulas(&outcome)
        .iter()
        .map(|f| f.to_string())
        .collect();

    // The oracle and the emitted model both need the transformed worlds.
    let mut oracle_report = None;
    let mut internal_failure = false;
    let mut model_path = None;
    if oracle || emit_model.is_some() {
        let result = match transform(&dt, None) {
            Ok(result) => result,
            Err(e) => return input_error(e),
        };
        if oracle {
            let scored = match policy_scores(&result.interpretation, proc) {
                Ok(scored) => scored,
                Err(e) => return input_error(e),
            };
            let optimum = scored
                .iter()
                .map(|sp| sp.score)
                .fold(f64::NEG_INFINITY, f64::max);
            let agrees = (optimum - outcome.root_value).abs() <= TOLERANCE;
            // Worst-case selection over worlds may legitimately diverge
            // from per-node backward induction on trees that share a
            // chance variable across subtrees; that is reported, not
            // fatal. Expected-value agreement is required.
            if !agrees && proc == Procedure::Maxexpval {
                internal_failure = true;
            }
            oracle_report = Some((optimum, agrees));
        }
        if let Some(path) = emit_model {
            let deliberated = match pw_deliberate(&result.interpretation, proc) {
                Ok(m) => m,
                Err(e) => return input_error(e),
            };
            if let Err(e) = store_interpretation(&deliberated, path) {
                return input_error(e);
            }
            model_path = Some(path.display().to_string());
        }
    }

    if json {
        emit_json(json!({
            "version": version(),
            "command": "deliberate",
            "procedure": proc.name(),
            "root_value": outcome.root_value,
            "plans": plans,
            "intentions": intentions,
            "oracle": oracle_report.map(|(optimum, agrees)| json!({
                "policy_optimum": optimum,
                "agrees": agrees,
            })),
            "model": model_path,
        }));
    } else {
        println!("procedure: {}", proc.name());
        println!("root value: {}", outcome.root_value);
        println!("plans:");
        for plan in &plans {
            println!("  {plan}");
        }
        println!("intentions:");
        for intention in &intentions {
            println!("  {intention}");
        }
        if let Some((optimum, agrees)) = oracle_report {
            if agrees {
                println!("oracle: policy optimum {optimum} agrees");
            } else {
                println!(
                    "oracle: policy optimum {optimum} differs from root value {} ({})",
                    outcome.root_value,
                    if proc == Procedure::Maximin {
                        "reported only: worst-case selection is world-consistent, not per-node adversarial"
                    } else {
                        "internal invariant failure"
                    }
                );
            }
        }
        if let Some(path) = &model_path {
            println!("wrote model: {path}");
        }
    }
    if internal_failure {
        EXIT_INTERNAL
    } else {
        EXIT_OK
    }
}

fn cmd_check(model: &Path, formula: &str, at: Option<&str>, json: bool) -> u8 {
    let m = match load_interpretation(model) {
        Ok(m) => m,
        Err(e) => return input_error(e),
    };
    let parsed = match parse_state_formula(formula) {
        Ok(f) => f,
        Err(e) => return input_error(e),
    };
    let situation = match at {
        None => m.designated.clone(),
        Some(key) => match key.split_once('@') {
            Some((world, point)) if !world.is_empty() && !point.is_empty() => {
                Situation::new(world, point)
            }
            _ => return input_error(format!("bad situation `{key}`: expected world@point")),
        },
    };

    let core = match bdikit::logic::normalize(&parsed) {
        Ok(core) => core,
        Err(e) => return input_error(e),
    };
    let result = match holds_state(&m, &situation, &core) {
        Ok(result) => result,
        Err(e) => return input_error(e),
    };

    // For a top-level probability constraint, also report the measured
    // left-hand side; for a payoff constraint, the qualifying range.
    let mut measure = None;
    let mut range_text = None;
    match &parsed {
        StateFormula::Prob(c) => {
            let rewritten = match rewrite_conditional(c) {
                Ok(rewritten) => rewritten,
                Err(e) => return input_error(e),
            };
            let mut lhs = 0.0;
            for term in &rewritten.terms {
                match prob_measure(&m, &situation, &desugar(&term.formula)) {
                    Ok(p) => lhs += term.coeff * p,
                    Err(e) => return input_error(e),
                }
            }
            measure = Some(lhs);
        }
        StateFormula::Payoff(c) => {
            match payoff_range(&m, &situation, &bdikit::logic::desugar_path(&c.formula)) {
                Ok(range) => {
                    range_text = Some(match range {
                        Some((lo, hi)) => format!("[{lo}, {hi}]"),
                        None => "empty".to_string(),
                    })
                }
                Err(e) => return input_error(e),
            }
        }
        _ => {}
    }

    if json {
        emit_json(json!({
            "version": version(),
            "command": "check",
            "formula": formula,
            "at": situation.to_string(),
            "result": result,
            "measure": measure,
            "payoff_range": range_text,
        }));
    } else {
        println!("formula: {parsed}");
        println!("at: {situation}");
        println!("result: {result}");
        if let Some(measure) = measure {
            println!("measure: {measure}");
        }
        if let Some(range) = &range_text {
            println!("payoff range: {range}");
        }
    }
    if result {
        EXIT_OK
    } else {
        EXIT_FALSE
    }
}

fn cmd_verify(trials: u64, seed: u64, class: &str, json: bool) -> u8 {
    let class: TreeClass = match class.parse() {
        Ok(class) => class,
        Err(e) => return input_error(e),
    };
    let inject_fault = std::env::var_os("BDIKIT_VERIFY_INJECT_FAULT").is_some();

    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for i in 0..trials {
        let trial_seed = seed.wrapping_add(i);
        let mut report = run_trial(trial_seed, class);
        if inject_fault && i == 0 {
            // Self-test hook: force the failure path to prove the harness
            // dumps counterexamples and exits nonzero.
            report
                .failures
                .push("injected fault (BDIKIT_VERIFY_INJECT_FAULT is set)".to_string());
            report.tree_text = bdikit::dtree::dtree_to_string(&random_tree(trial_seed, class));
        }
        for note in &report.notes {
            notes.push(format!("seed {trial_seed}: {note}"));
        }
        if !report.pass() {
            let dump = format!("verify-failure-{trial_seed}.dtree");
            if let Err(e) = std::fs::write(&dump, &report.tree_text) {
                eprintln!("error: cannot write counterexample {dump}: {e}");
            }
            failures.push((trial_seed, report.failures.clone(), dump));
        }
    }

    if json {
        emit_json(json!({
            "version": version(),
            "command": "verify",
            "class": match class {
                TreeClass::Maxexpval => "maxexpval",
                TreeClass::MaximinRestricted => "maximin-restricted",
            },
            "trials": trials,
            "seed": seed,
            "failures": failures.iter().map(|(seed, problems, dump)| json!({
                "seed": seed,
                "problems": problems,
                "counterexample": dump,
            })).collect::<Vec<_>>(),
            "notes": notes,
        }));
    } else {
        println!("trials: {trials} (seed {seed})");
        for (seed, problems, dump) in &failures {
            println!("failure at seed {seed} (counterexample written to {dump}):");
            for problem in problems {
                println!("  {problem}");
            }
        }
        for note in &notes {
            println!("note: {note}");
        }
        println!(
            "result: {} failures, {} notes",
            failures.len(),
            notes.len()
        );
    }
    if failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_INTERNAL
    }
}
