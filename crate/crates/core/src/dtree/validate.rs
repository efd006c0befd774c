//! Structural and probabilistic validation of decision trees.

use std::collections::{BTreeMap, BTreeSet};

use crate::worlds::TOLERANCE;

use super::{DecisionTree, NodeId, NodeKind};

/// A violation of the decision-tree invariants. Violations are data, not
/// errors: [`validate`] returns all of them.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    UnknownNode { node: NodeId, context: String },
    RootMissing { node: NodeId },
    MultipleParents { node: NodeId },
    Unreachable { node: NodeId },
    NotRoot { declared: NodeId },
    DecisionWithoutEvents { node: NodeId },
    EventArcFromNonDecision { node: NodeId },
    ChanceArcFromNonChance { node: NodeId },
    ChanceTooFewArcs { node: NodeId },
    ChanceToChance { from: NodeId, to: NodeId },
    TerminalWithChildren { node: NodeId },
    TerminalMissingPayoff { node: NodeId },
    PayoffOnNonTerminal { node: NodeId },
    PayoffNotFinite { node: NodeId },
    ProbSum { node: NodeId, total: f64 },
    ProbOutOfRange { node: NodeId, state: String },
    StateOwnership { state: String },
    MixedVariables { node: NodeId },
    DuplicateStateArc { node: NodeId, state: String },
    MissingStateArc { node: NodeId, state: String },
    DuplicateEvent { node: NodeId, event: String },
    DuplicateVariable { name: String },
    TableKeys { variable: String, detail: String },
    TableRowSum { variable: String, total: f64 },
    TableCoverage { variable: String, detail: String },
    ChainConsistency {
        node: NodeId,
        state: String,
        expected: f64,
        actual: f64,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::UnknownNode { node, context } => {
                write!(f, "UnknownNodeViolation: {context} references unknown node `{node}`")
            }
            Violation::RootMissing { node } => {
                write!(f, "RootMissingViolation: declared root `{node}` is not a node")
            }
            Violation::MultipleParents { node } => {
                write!(f, "MultipleParentsViolation: node `{node}` has more than one incoming arc")
            }
            Violation::Unreachable { node } => {
                write!(f, "UnreachableViolation: node `{node}` is not reachable from the root")
            }
            Violation::NotRoot { declared } => {
                write!(f, "NotRootViolation: declared root `{declared}` has an incoming arc")
            }
            Violation::DecisionWithoutEvents { node } => {
                write!(f, "DecisionWithoutEventsViolation: decision node `{node}` has no outgoing event arcs")
            }
            Violation::EventArcFromNonDecision { node } => {
                write!(f, "EventArcFromNonDecisionViolation: event arc leaves non-decision node `{node}`")
            }
            Violation::ChanceArcFromNonChance { node } => {
                write!(f, "ChanceArcFromNonChanceViolation: chance arc leaves non-chance node `{node}`")
            }
            Violation::ChanceTooFewArcs { node } => {
                write!(f, "ChanceTooFewArcsViolation: chance node `{node}` has fewer than two outgoing arcs")
            }
            Violation::ChanceToChance { from, to } => {
                write!(f, "ChanceToChanceViolation: chance node `{from}` feeds chance node `{to}`; chance arcs may only reach decision or terminal nodes")
            }
            Violation::TerminalWithChildren { node } => {
                write!(f, "TerminalWithChildrenViolation: terminal node `{node}` has outgoing arcs")
            }
            Violation::TerminalMissingPayoff { node } => {
                write!(f, "TerminalMissingPayoffViolation: terminal node `{node}` has no payoff")
            }
            Violation::PayoffOnNonTerminal { node } => {
                write!(f, "PayoffOnNonTerminalViolation: payoff attached to non-terminal node `{node}`")
            }
            Violation::PayoffNotFinite { node } => {
                write!(f, "PayoffNotFiniteViolation: payoff at `{node}` is not a finite number")
            }
            Violation::ProbSum { node, total } => {
                write!(f, "ProbSumViolation: chance node `{node}` arc probabilities sum to {total}, not 1")
            }
            Violation::ProbOutOfRange { node, state } => {
                write!(f, "ProbOutOfRangeViolation: probability of state `{state}` at `{node}` is outside [0, 1]")
            }
            Violation::StateOwnership { state } => {
                write!(f, "StateOwnershipViolation: state `{state}` does not belong to exactly one declared variable")
            }
            Violation::MixedVariables { node } => {
                write!(f, "MixedVariablesViolation: chance node `{node}` mixes states of different variables")
            }
            Violation::DuplicateStateArc { node, state } => {
                write!(f, "DuplicateStateArcViolation: chance node `{node}` carries state `{state}` twice")
            }
            Violation::MissingStateArc { node, state } => {
                write!(f, "MissingStateArcViolation: chance node `{node}` has no arc for state `{state}`")
            }
            Violation::DuplicateEvent { node, event } => {
                write!(f, "DuplicateEventViolation: decision node `{node}` offers event `{event}` twice")
            }
            Violation::DuplicateVariable { name } => {
                write!(f, "DuplicateVariableViolation: variable `{name}` is declared twice")
            }
            Violation::TableKeys { variable, detail } => {
                write!(f, "TableKeysViolation: table of `{variable}`: {detail}")
            }
            Violation::TableRowSum { variable, total } => {
                write!(f, "TableRowSumViolation: a table row of `{variable}` sums to {total}, not 1")
            }
            Violation::TableCoverage { variable, detail } => {
                write!(f, "TableCoverageViolation: table of `{variable}`: {detail}")
            }
            Violation::ChainConsistency {
                node,
                state,
                expected,
                actual,
            } => {
                write!(f, "ChainConsistencyViolation: at `{node}`, state `{state}` carries probability {actual} but the chain tables imply {expected}")
            }
        }
    }
}

/// Checks every invariant, including cross-node chance-variable
/// consistency; empty exactly when the tree is well-formed.
pub fn validate(dt: &DecisionTree) -> Vec<Violation> {
    let mut out = Vec::new();
    check_structure(dt, &mut out);
    check_node_shapes(dt, &mut out);
    check_payoffs(dt, &mut out);
    let vars_ok = check_variables(dt, &mut out);
    check_chance_nodes(dt, &mut out, vars_ok);
    out
}

fn check_structure(dt: &DecisionTree, out: &mut Vec<Violation>) {
    let mut incoming: BTreeMap<&NodeId, usize> = BTreeMap::new();
    let mut targets: Vec<(&NodeId, &NodeId)> = Vec::new();
    for arc in &dt.event_arcs {
        targets.push((&arc.from, &arc.to));
    }
    for arc in &dt.chance_arcs {
        targets.push((&arc.from, &arc.to));
    }
    for (from, to) in &targets {
        for (node, context) in [(from, "an arc source"), (to, "an arc target")] {
            if !dt.nodes.contains_key(node) {
                out.push(Violation::UnknownNode {
                    node: (*node).clone(),
                    context: context.to_string(),
                });
            }
        }
        if dt.nodes.contains_key(*to) {
            *incoming.entry(to).or_default() += 1;
        }
    }

    if !dt.nodes.contains_key(&dt.root) {
        out.push(Violation::RootMissing {
            node: dt.root.clone(),
        });
        return;
    }
    if incoming.contains_key(&dt.root) {
        out.push(Violation::NotRoot {
            declared: dt.root.clone(),
        });
    }
    for (node, count) in &incoming {
        if *count > 1 {
            out.push(Violation::MultipleParents {
                node: (*node).clone(),
            });
        }
    }

    let mut reachable = BTreeSet::new();
    let mut stack = vec![dt.root.clone()];
    while let Some(node) = stack.pop() {
        if !reachable.insert(node.clone()) {
            continue;
        }
        for (from, to) in &targets {
            if **from == node && dt.nodes.contains_key(*to) {
                stack.push((*to).clone());
            }
        }
    }
    for node in dt.nodes.keys() {
        if !reachable.contains(node) {
            out.push(Violation::Unreachable { node: node.clone() });
        }
    }
}

fn check_node_shapes(dt: &DecisionTree, out: &mut Vec<Violation>) {
    for arc in &dt.event_arcs {
        if !matches!(dt.kind(&arc.from), Some(NodeKind::Decision) | None) {
            out.push(Violation::EventArcFromNonDecision {
                node: arc.from.clone(),
            });
        }
    }
    for arc in &dt.chance_arcs {
        match dt.kind(&arc.from) {
            Some(NodeKind::Chance) | None => {}
            _ => out.push(Violation::ChanceArcFromNonChance {
                node: arc.from.clone(),
            }),
        }
        if let Some(NodeKind::Chance) = dt.kind(&arc.to) {
            out.push(Violation::ChanceToChance {
                from: arc.from.clone(),
                to: arc.to.clone(),
            });
        }
    }

    for (node, kind) in &dt.nodes {
        let events = dt.event_arcs.iter().filter(|a| &a.from == node).count();
        let chances = dt.chance_arcs.iter().filter(|a| &a.from == node).count();
        match kind {
            NodeKind::Decision => {
                if events == 0 {
                    out.push(Violation::DecisionWithoutEvents { node: node.clone() });
                }
                let mut seen = BTreeSet::new();
                for arc in dt.event_arcs.iter().filter(|a| &a.from == node) {
                    if !seen.insert(&arc.event) {
                        out.push(Violation::DuplicateEvent {
                            node: node.clone(),
                            event: arc.event.clone(),
                        });
                    }
                }
            }
            NodeKind::Chance => {
                if chances < 2 {
                    out.push(Violation::ChanceTooFewArcs { node: node.clone() });
                }
            }
            NodeKind::Terminal => {
                if events + chances > 0 {
                    out.push(Violation::TerminalWithChildren { node: node.clone() });
                }
                if !dt.payoffs.contains_key(node) {
                    out.push(Violation::TerminalMissingPayoff { node: node.clone() });
                }
            }
        }
    }
}

fn check_payoffs(dt: &DecisionTree, out: &mut Vec<Violation>) {
    for (node, payoff) in &dt.payoffs {
        if !matches!(dt.kind(node), Some(NodeKind::Terminal)) {
            out.push(Violation::PayoffOnNonTerminal { node: node.clone() });
        }
        if !payoff.is_finite() {
            out.push(Violation::PayoffNotFinite { node: node.clone() });
        }
    }
}

/// Table well-formedness: unique variable names, chain-ordered parent
/// keys uniform across rows, rows covering each parent combination
/// exactly once, and rows summing to one. Returns whether the tables are
/// sound enough for chain-consistency checking.
fn check_variables(dt: &DecisionTree, out: &mut Vec<Violation>) -> bool {
    let mut ok = true;
    let mut seen_names = BTreeSet::new();
    let mut seen_states: BTreeMap<&str, &str> = BTreeMap::new();
    for var in &dt.variables {
        if !seen_names.insert(&var.name) {
            out.push(Violation::DuplicateVariable {
                name: var.name.clone(),
            });
            ok = false;
        }
        for state in &var.states {
            if seen_states.insert(state, &var.name).is_some() {
                out.push(Violation::StateOwnership {
                    state: state.clone(),
                });
                ok = false;
            }
        }
    }

    for (vi, var) in dt.variables.iter().enumerate() {
        let earlier: BTreeSet<&str> = dt.variables[..vi]
            .iter()
            .map(|v| v.name.as_str())
            .collect();
        if var.table.is_empty() {
            out.push(Violation::TableCoverage {
                variable: var.name.clone(),
                detail: "no rows".to_string(),
            });
            ok = false;
            continue;
        }
        let parents: BTreeSet<&str> = var.table[0].given.keys().map(String::as_str).collect();
        for parent in &parents {
            if !earlier.contains(parent) {
                out.push(Violation::TableKeys {
                    variable: var.name.clone(),
                    detail: format!("`{parent}` is not an earlier-declared variable"),
                });
                ok = false;
            }
        }
        let states: BTreeSet<&str> = var.states.iter().map(String::as_str).collect();
        let mut seen_rows = BTreeSet::new();
        for row in &var.table {
            let row_keys: BTreeSet<&str> = row.given.keys().map(String::as_str).collect();
            if row_keys != parents {
                out.push(Violation::TableKeys {
                    variable: var.name.clone(),
                    detail: "rows condition on different variable sets".to_string(),
                });
                ok = false;
            }
            let row_states: BTreeSet<&str> = row.probs.keys().map(String::as_str).collect();
            if row_states != states {
                out.push(Violation::TableCoverage {
                    variable: var.name.clone(),
                    detail: "a row does not assign a probability to every state".to_string(),
                });
                ok = false;
            }
            let total: f64 = row.probs.values().sum();
            if (total - 1.0).abs() > TOLERANCE {
                out.push(Violation::TableRowSum {
                    variable: var.name.clone(),
                    total,
                });
                ok = false;
            }
            if !seen_rows.insert(row.given.clone()) {
                out.push(Violation::TableCoverage {
                    variable: var.name.clone(),
                    detail: "duplicate row for the same parent assignment".to_string(),
                });
                ok = false;
            }
        }
        // Every combination of parent states must have a row.
        let mut expected_rows = 1usize;
        for parent in &parents {
            if let Some(parent_var) = dt.variable(parent) {
                expected_rows *= parent_var.states.len().max(1);
            }
        }
        if seen_rows.len() != expected_rows {
            out.push(Violation::TableCoverage {
                variable: var.name.clone(),
                detail: format!(
                    "{} rows cover {} parent combinations",
                    seen_rows.len(),
                    expected_rows
                ),
            });
            ok = false;
        }
    }
    ok
}

fn check_chance_nodes(dt: &DecisionTree, out: &mut Vec<Violation>, vars_ok: bool) {
    let chance_nodes: Vec<&NodeId> = dt
        .nodes
        .iter()
        .filter(|(_, kind)| matches!(kind, NodeKind::Chance))
        .map(|(node, _)| node)
        .collect();

    for node in chance_nodes {
        let arcs: Vec<_> = dt.chance_arcs.iter().filter(|a| &a.from == node).collect();
        if arcs.is_empty() {
            continue;
        }

        let total: f64 = arcs.iter().map(|a| a.prob).sum();
        if (total - 1.0).abs() > TOLERANCE {
            out.push(Violation::ProbSum {
                node: node.clone(),
                total,
            });
        }
        for arc in &arcs {
            if !(0.0..=1.0).contains(&arc.prob) || !arc.prob.is_finite() {
                out.push(Violation::ProbOutOfRange {
                    node: node.clone(),
                    state: arc.state.clone(),
                });
            }
        }

        let mut owners = BTreeSet::new();
        let mut states_seen = BTreeSet::new();
        let mut unknown_state = false;
        for arc in &arcs {
            match dt.state_index(&arc.state) {
                Some((vi, _)) => {
                    owners.insert(vi);
                }
                None => {
                    out.push(Violation::StateOwnership {
                        state: arc.state.clone(),
                    });
                    unknown_state = true;
                }
            }
            if !states_seen.insert(&arc.state) {
                out.push(Violation::DuplicateStateArc {
                    node: node.clone(),
                    state: arc.state.clone(),
                });
            }
        }
        if owners.len() > 1 {
            out.push(Violation::MixedVariables { node: node.clone() });
        }
        if unknown_state || owners.len() != 1 {
            continue;
        }

        let var = &dt.variables[*owners.iter().next().expect("one owner")];
        for state in &var.states {
            if !states_seen.contains(state) {
                out.push(Violation::MissingStateArc {
                    node: node.clone(),
                    state: state.clone(),
                });
            }
        }

        // Cross-node consistency: the arc probabilities must equal the
        // chain-implied conditionals given the states already resolved on
        // the path, marginalizing over unresolved conditioning variables.
        if vars_ok {
            let resolved = dt.resolved_on_path(node);
            for arc in &arcs {
                if let Some(expected) = dt.conditional_given(&resolved, &var.name, &arc.state) {
                    if (expected - arc.prob).abs() > TOLERANCE {
                        out.push(Violation::ChainConsistency {
                            node: node.clone(),
                            state: arc.state.clone(),
                            expected,
                            actual: arc.prob,
                        });
                    }
                }
            }
        }
    }
}
