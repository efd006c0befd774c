//! Seeded end-to-end verification trials: generate a random tree, run
//! the whole pipeline, and cross-check tree deliberation against
//! exhaustive policy enumeration, the intention bridge, and the semantic
//! conditions.

use std::collections::BTreeSet;

use crate::deliberate::{
    check_theorem1, deliberate, intention_formulas, plan_choice_pairs, policy_choice_pairs,
    policy_scores, pw_deliberate, Procedure,
};
use crate::dtree::{dtree_to_string, validate, DecisionTree};
use crate::gen::{random_tree, with_perturbed_probabilities, with_transformed_payoffs, TreeClass};
use crate::logic::desugar;
use crate::transform::transform;
use crate::worlds::{check_conditions, holds_state, TOLERANCE};

/// The outcome of one seeded trial. `failures` break the class's
/// guarantees; `notes` record observations that are reported but not
/// required (the worst-case procedure's plan/intention bridge, whose
/// divergence is documented).
#[derive(Debug, Clone)]
pub struct TrialReport {
    pub seed: u64,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub tree_text: String,
}

impl TrialReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every check of the class on the tree generated from this seed.
pub fn run_trial(seed: u64, class: TreeClass) -> TrialReport {
    let dt = random_tree(seed, class);
    let mut report = TrialReport {
        seed,
        failures: Vec::new(),
        notes: Vec::new(),
        tree_text: dtree_to_string(&dt),
    };
    let proc = match class {
        TreeClass::Maxexpval => Procedure::Maxexpval,
        TreeClass::MaximinRestricted => Procedure::Maximin,
    };

    if let Err(problem) = check_pipeline(&dt, proc, class, &mut report.notes) {
        report.failures.push(problem);
    }
    report
}

fn check_pipeline(
    dt: &DecisionTree,
    proc: Procedure,
    class: TreeClass,
    notes: &mut Vec<String>,
) -> Result<(), String> {
    let violations = validate(dt);
    if !violations.is_empty() {
        return Err(format!("generated tree is invalid: {violations:?}"));
    }

    let outcome = deliberate(dt, proc).map_err(|e| format!("deliberate: {e}"))?;
    let result = transform(dt, None).map_err(|e| format!("transform: {e}"))?;
    let m = &result.interpretation;

    let report = check_conditions(m, &m.designated).map_err(|e| format!("conditions: {e}"))?;
    if !report.pass_through_c3() {
        return Err(format!("C1-C3 fail after transform: {report:?}"));
    }
    let total: f64 = m.prob[&m.designated].values().sum();
    if (total - 1.0).abs() > TOLERANCE {
        return Err(format!("belief weights sum to {total}"));
    }

    // Independent oracle: exhaustive policy enumeration over the goal
    // worlds must reproduce the backward-induction optimum.
    let scored = policy_scores(m, proc).map_err(|e| format!("policy enumeration: {e}"))?;
    let best = scored
        .iter()
        .map(|sp| sp.score)
        .fold(f64::NEG_INFINITY, f64::max);
    if (best - outcome.root_value).abs() > TOLERANCE {
        return Err(format!(
            "policy optimum {best} differs from tree value {}",
            outcome.root_value
        ));
    }

    let deliberated = pw_deliberate(m, proc).map_err(|e| format!("pw_deliberate: {e}"))?;
    let after = check_conditions(&deliberated, &deliberated.designated)
        .map_err(|e| format!("conditions: {e}"))?;
    if !after.pass() {
        return Err(format!("C1-C4 fail after deliberation: {after:?}"));
    }

    match class {
        TreeClass::Maxexpval => {
            // The selected plans and the best policies use exactly the
            // same (history, event) choices on reachable paths.
            let mut policy_pairs = BTreeSet::new();
            for sp in scored.iter().filter(|sp| sp.score >= best - TOLERANCE) {
                policy_pairs.extend(
                    policy_choice_pairs(m, &sp.policy)
                        .map_err(|e| format!("policy pairs: {e}"))?,
                );
            }
            let mut plan_pairs = BTreeSet::new();
            for plan in &outcome.plans {
                plan_pairs
                    .extend(plan_choice_pairs(m, plan).map_err(|e| format!("plan pairs: {e}"))?);
            }
            if policy_pairs != plan_pairs {
                return Err(format!(
                    "plan choices {plan_pairs:?} differ from argmax policy choices {policy_pairs:?}"
                ));
            }

            let intended =
                check_theorem1(dt, proc, None).map_err(|e| format!("theorem check: {e}"))?;
            if !intended {
                return Err("selected plans are not intended after deliberation".into());
            }
        }
        TreeClass::MaximinRestricted => {
            // Worst-case selection ignores the probabilities entirely.
            let perturbed = with_perturbed_probabilities(dt, 0x9e3779b9);
            let perturbed_outcome =
                deliberate(&perturbed, proc).map_err(|e| format!("perturbed: {e}"))?;
            if perturbed_outcome.plans != outcome.plans {
                return Err(format!(
                    "plan set changed under probability perturbation: {:?} vs {:?}",
                    outcome.plans, perturbed_outcome.plans
                ));
            }

            // Strictly increasing payoff transforms leave the plan set
            // unchanged.
            let squeezed = with_transformed_payoffs(dt, |u| u.powi(3) / 500.0 + 2.0 * u - 750.0);
            let squeezed_outcome =
                deliberate(&squeezed, proc).map_err(|e| format!("transformed: {e}"))?;
            if squeezed_outcome.plans != outcome.plans {
                return Err(format!(
                    "plan set changed under a monotone payoff transform: {:?} vs {:?}",
                    outcome.plans, squeezed_outcome.plans
                ));
            }

            // The worst-case plan/intention bridge can genuinely diverge
            // when minimum-achieving branches continue differently, so
            // it is observed rather than required.
            match check_theorem1(dt, proc, None) {
                Ok(true) => {}
                Ok(false) => notes.push(
                    "worst-case plans are not all intended (documented divergence)".into(),
                ),
                Err(e) => return Err(format!("theorem check: {e}")),
            }
            for formula in intention_formulas(&outcome) {
                match holds_state(&deliberated, &deliberated.designated, &desugar(&formula)) {
                    Ok(true) => {}
                    Ok(false) => notes.push(format!(
                        "intention formula {formula} does not hold (documented divergence)"
                    )),
                    Err(e) => return Err(format!("intention formula {formula}: {e}")),
                }
            }
        }
    }
    Ok(())
}
