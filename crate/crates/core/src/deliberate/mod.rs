//! Deliberation over decision trees and possible worlds: the value and
//! plan-selection recursions for `maximin` and `maxexpval`, policy
//! enumeration over goal worlds, intention-world generation, and the
//! formulas an agent comes to intend.

mod intentions;
mod policy;

pub use intentions::{check_theorem1, intention_formulas, theorem_witnesses};
pub use policy::{
    plan_choice_pairs, policy_choice_pairs, policy_scores, pw_deliberate, Obs, Policy,
    ScoredPolicy,
};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use crate::logic::Procedure;

use crate::dtree::{validate, DecisionTree, NodeId, NodeKind, Violation};
use crate::logic::{EventExpr, StateFormula};
use crate::transform::TransformError;
use crate::worlds::{ModelError, PointId, WorldId, TOLERANCE};

/// One step of a plan: perform an event, or test a chance state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Step {
    Event(String),
    Test(String),
}

/// An executable plan: events interleaved with condition tests, written
/// `Poll;yes?;Sen`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Plan {
    pub steps: Vec<Step>,
}

impl Plan {
    pub fn from_steps(steps: impl IntoIterator<Item = Step>) -> Self {
        Plan {
            steps: steps.into_iter().collect(),
        }
    }

    fn prefixed(&self, step: Step) -> Plan {
        let mut steps = Vec::with_capacity(self.steps.len() + 1);
        steps.push(step);
        steps.extend(self.steps.iter().cloned());
        Plan { steps }
    }

    pub fn events(&self) -> impl Iterator<Item = &str> {
        self.steps.iter().filter_map(|s| match s {
            Step::Event(e) => Some(e.as_str()),
            Step::Test(_) => None,
        })
    }

    pub fn has_tests(&self) -> bool {
        self.steps.iter().any(|s| matches!(s, Step::Test(_)))
    }

    /// The composite event expression `done(...)` talks about: events
    /// become primitives and tests become `?state`, sequenced left to
    /// right. Empty plans have no event expression.
    pub fn to_event_expr(&self) -> Option<EventExpr> {
        let mut iter = self.steps.iter().map(|step| match step {
            Step::Event(e) => EventExpr::primitive(e.clone()),
            Step::Test(s) => EventExpr::test(StateFormula::prop(s.clone())),
        });
        let first = iter.next()?;
        Some(iter.fold(first, |acc, e| acc.then(e)))
    }
}

impl std::fmt::Display for Plan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rendered: Vec<String> = self
            .steps
            .iter()
            .map(|step| match step {
                Step::Event(e) => e.clone(),
                Step::Test(s) => format!("{s}?"),
            })
            .collect();
        f.write_str(&rendered.join(";"))
    }
}

/// What deliberation decided: the root value, the selected plans, and the
/// value of every node.
///
/// For `maximin` the plans are alternative unconditional plans: any one
/// of them suffices. For `maxexpval` the plans jointly form one
/// conditional plan covering all chance branches.
#[derive(Debug, Clone, PartialEq)]
pub struct DeliberationOutcome {
    pub procedure: Procedure,
    pub root_value: f64,
    pub plans: BTreeSet<Plan>,
    pub node_values: BTreeMap<NodeId, f64>,
}

#[derive(Debug, Error)]
pub enum DeliberateError {
    #[error("invalid decision tree:\n{}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n"))]
    InvalidTree(Vec<Violation>),
    #[error("unknown node `{0}`")]
    UnknownNode(NodeId),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("no goal-accessible worlds at the designated situation")]
    NoGoalWorlds,
    #[error("no event is available in every world after observations [{0}]")]
    NoCommonEvent(String),
    #[error("policy space has more than {0} policies; refusing to enumerate")]
    PolicySpaceTooLarge(usize),
    #[error("world `{world}` has no payoff on policy-reachable leaf `{leaf}`")]
    UndefinedPayoff { world: WorldId, leaf: PointId },
    #[error("no world has positive probability; worst-case scoring is undefined")]
    NoPositiveWeight,
}

/// Backward-induction value of a node: terminal payoff, maximum over a
/// decision's children, and minimum (`maximin`) or probability-weighted
/// sum (`maxexpval`) over a chance node's children.
pub fn value(dt: &DecisionTree, node: &NodeId, proc: Procedure) -> Result<f64, DeliberateError> {
    let violations = validate(dt);
    if !violations.is_empty() {
        return Err(DeliberateError::InvalidTree(violations));
    }
    if dt.kind(node).is_none() {
        return Err(DeliberateError::UnknownNode(node.clone()));
    }
    let mut memo = BTreeMap::new();
    Ok(node_value(dt, node, proc, &mut memo))
}

fn node_value(
    dt: &DecisionTree,
    node: &NodeId,
    proc: Procedure,
    memo: &mut BTreeMap<NodeId, f64>,
) -> f64 {
    if let Some(v) = memo.get(node) {
        return *v;
    }
    let v = match dt.kind(node).expect("node exists in a validated tree") {
        NodeKind::Terminal => dt.payoffs[node],
        NodeKind::Decision => dt
            .event_children(node)
            .iter()
            .map(|arc| node_value(dt, &arc.to, proc, memo))
            .fold(f64::NEG_INFINITY, f64::max),
        NodeKind::Chance => match proc {
            Procedure::Maximin => dt
                .chance_children(node)
                .iter()
                .map(|arc| node_value(dt, &arc.to, proc, memo))
                .fold(f64::INFINITY, f64::min),
            Procedure::Maxexpval => dt
                .chance_children(node)
                .iter()
                .map(|arc| arc.prob * node_value(dt, &arc.to, proc, memo))
                .sum(),
        },
    };
    memo.insert(node.clone(), v);
    v
}

/// The set of best plans at a node. At decisions, value-achieving events
/// prefix their subtree's plans; at chance nodes, `maximin` merges the
/// plans of minimum-achieving branches unprefixed while `maxexpval`
/// test-prefixes every branch; terminals contribute the empty
/// continuation. A test whose continuation is empty commits the agent to
/// nothing and is dropped.
pub fn delta(
    dt: &DecisionTree,
    node: &NodeId,
    proc: Procedure,
) -> Result<BTreeSet<Plan>, DeliberateError> {
    let violations = validate(dt);
    if !violations.is_empty() {
        return Err(DeliberateError::InvalidTree(violations));
    }
    if dt.kind(node).is_none() {
        return Err(DeliberateError::UnknownNode(node.clone()));
    }
    let mut memo = BTreeMap::new();
    node_value(dt, node, proc, &mut memo);
    Ok(node_plans(dt, node, proc, &memo))
}

fn node_plans(
    dt: &DecisionTree,
    node: &NodeId,
    proc: Procedure,
    values: &BTreeMap<NodeId, f64>,
) -> BTreeSet<Plan> {
    match dt.kind(node).expect("node exists in a validated tree") {
        NodeKind::Terminal => BTreeSet::from([Plan::default()]),
        NodeKind::Decision => {
            let own = values[node];
            let mut plans = BTreeSet::new();
            for arc in dt.event_children(node) {
                if (values[&arc.to] - own).abs() <= TOLERANCE {
                    for plan in node_plans(dt, &arc.to, proc, values) {
                        plans.insert(plan.prefixed(Step::Event(arc.event.clone())));
                    }
                }
            }
            plans
        }
        NodeKind::Chance => {
            let own = values[node];
            let mut plans = BTreeSet::new();
            for arc in dt.chance_children(node) {
                match proc {
                    Procedure::Maximin => {
                        if (values[&arc.to] - own).abs() <= TOLERANCE {
                            plans.extend(node_plans(dt, &arc.to, proc, values));
                        }
                    }
                    Procedure::Maxexpval => {
                        for plan in node_plans(dt, &arc.to, proc, values) {
                            if plan.steps.is_empty() {
                                plans.insert(plan);
                            } else {
                                plans.insert(plan.prefixed(Step::Test(arc.state.clone())));
                            }
                        }
                    }
                }
            }
            plans
        }
    }
}

/// Runs the full deliberation at the root: values everywhere, the root
/// value, and the selected plan set.
pub fn deliberate(
    dt: &DecisionTree,
    proc: Procedure,
) -> Result<DeliberationOutcome, DeliberateError> {
    let violations = validate(dt);
    if !violations.is_empty() {
        return Err(DeliberateError::InvalidTree(violations));
    }
    let mut memo = BTreeMap::new();
    for node in dt.nodes.keys() {
        node_value(dt, node, proc, &mut memo);
    }
    let root_value = memo[&dt.root];
    let plans = node_plans(dt, &dt.root, proc, &memo);
    Ok(DeliberationOutcome {
        procedure: proc,
        root_value,
        plans,
        node_values: memo,
    })
}
