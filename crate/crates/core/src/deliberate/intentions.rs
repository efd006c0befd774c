//! From selected plans to intended formulas, and the end-to-end check
//! that deliberation's plans are intended in the transformed model.

use crate::logic::{desugar, EventExpr, PathFormula, StateFormula};
use crate::transform::{transform, BeliefExtras};
use crate::worlds::holds_state;

use super::policy::pw_deliberate;
use super::{deliberate, DeliberateError, DeliberationOutcome, Plan, Procedure, Step};
use crate::dtree::DecisionTree;

/// The formulas the agent comes to intend, given a deliberation outcome.
///
/// Plans without tests contribute one unconditional intention per event
/// in their longest common suffix: `INTEND[proc](INEVITABLE(<> done(e)))`.
/// A plan with tests contributes, for each test, a conditional intention:
/// whenever the events before the test have been done and the observed
/// state holds, the events after it (up to the next test) eventually
/// follow.
pub fn intention_formulas(outcome: &DeliberationOutcome) -> Vec<StateFormula> {
    let proc = Some(outcome.procedure);
    let mut formulas = Vec::new();

    let untested: Vec<&Plan> = outcome.plans.iter().filter(|p| !p.has_tests()).collect();
    if !untested.is_empty() {
        for event in common_suffix(&untested) {
            formulas.push(
                StateFormula::inevitable(
                    PathFormula::done(EventExpr::primitive(event)).eventually(),
                )
                .intend(proc),
            );
        }
    }

    for plan in outcome.plans.iter().filter(|p| p.has_tests()) {
        for formula in conditional_intentions(plan) {
            let tagged = formula.intend(proc);
            if !formulas.contains(&tagged) {
                formulas.push(tagged);
            }
        }
    }
    formulas
}

/// The longest common suffix of the plans' event sequences.
fn common_suffix(plans: &[&Plan]) -> Vec<String> {
    let mut suffix: Option<Vec<String>> = None;
    for plan in plans {
        let events: Vec<String> = plan.events().map(str::to_string).collect();
        suffix = Some(match suffix {
            None => events,
            Some(current) => {
                let keep = current
                    .iter()
                    .rev()
                    .zip(events.iter().rev())
                    .take_while(|(a, b)| a == b)
                    .count();
                current[current.len() - keep..].to_vec()
            }
        });
    }
    suffix.unwrap_or_default()
}

/// One `INEVITABLE(<> (done(prefix) & s -> <> done(continuation)))` per
/// test of the plan, with the path implication expanded classically.
fn conditional_intentions(plan: &Plan) -> Vec<StateFormula> {
    let mut formulas = Vec::new();
    for (idx, step) in plan.steps.iter().enumerate() {
        let Step::Test(state) = step else { continue };
        let prefix: Vec<&str> = plan.steps[..idx]
            .iter()
            .filter_map(|s| match s {
                Step::Event(e) => Some(e.as_str()),
                Step::Test(_) => None,
            })
            .collect();
        let continuation: Vec<&str> = plan.steps[idx + 1..]
            .iter()
            .map_while(|s| match s {
                Step::Event(e) => Some(e.as_str()),
                Step::Test(_) => None,
            })
            .collect();
        if continuation.is_empty() {
            continue;
        }
        let antecedent = match seq_expr(&prefix) {
            Some(done_prefix) => PathFormula::done(done_prefix)
                .and(PathFormula::state(StateFormula::prop(state.clone()))),
            None => PathFormula::state(StateFormula::prop(state.clone())),
        };
        let consequent = PathFormula::done(seq_expr(&continuation).expect("nonempty")).eventually();
        let implication = antecedent.not().or(consequent);
        formulas.push(StateFormula::inevitable(implication.eventually()));
    }
    formulas
}

fn seq_expr(events: &[&str]) -> Option<EventExpr> {
    let mut iter = events.iter().map(|e| EventExpr::primitive(*e));
    let first = iter.next()?;
    Some(iter.fold(first, |acc, e| acc.then(e)))
}

/// The formulas whose truth realizes the deliberation-to-intention
/// bridge for this outcome.
///
/// For `maximin` the plans are alternatives, each individually intended:
/// one `INTEND[maximin](OPTIONAL(<> done(a)))` per plan. For `maxexpval`
/// the plans jointly form one conditional plan, so the branches are
/// intended disjunctively: a single
/// `INTEND[maxexpval](OPTIONAL(<> done(a1)) | ... )`: in every intention
/// world some branch of the conditional plan remains executable.
pub fn theorem_witnesses(outcome: &DeliberationOutcome) -> Vec<StateFormula> {
    let proc = outcome.procedure;
    let optionals: Vec<StateFormula> = outcome
        .plans
        .iter()
        .filter_map(|plan| plan.to_event_expr())
        .map(|expr| StateFormula::optional(PathFormula::done(expr).eventually()))
        .collect();
    if optionals.is_empty() {
        return Vec::new();
    }
    match proc {
        Procedure::Maximin => optionals
            .into_iter()
            .map(|f| f.intend(Some(proc)))
            .collect(),
        Procedure::Maxexpval => {
            let mut iter = optionals.into_iter();
            let first = iter.next().expect("nonempty");
            vec![iter.fold(first, |acc, f| acc.or(f)).intend(Some(proc))]
        }
    }
}

/// Runs the whole pipeline on a decision tree (deliberate, transform,
/// possible-worlds deliberation) and model-checks that every selected
/// plan is intended at the designated situation.
pub fn check_theorem1(
    dt: &DecisionTree,
    proc: Procedure,
    extras: Option<&BeliefExtras>,
) -> Result<bool, DeliberateError> {
    let outcome = deliberate(dt, proc)?;
    let result = transform(dt, extras)?;
    let deliberated = pw_deliberate(&result.interpretation, proc)?;
    for witness in theorem_witnesses(&outcome) {
        let core = desugar(&witness);
        if !holds_state(&deliberated, &deliberated.designated, &core)? {
            return Ok(false);
        }
    }
    Ok(true)
}
