//! Decision trees: decision, chance, and terminal nodes, event and chance
//! relations, chance variables with chain-consistent conditional tables,
//! and terminal payoffs.

mod io;
mod validate;

pub use io::{dtree_from_str, dtree_to_string, load_dtree, store_dtree, DtreeLoadError};
pub use validate::{validate, Violation};

use std::collections::BTreeMap;

use crate::worlds::TOLERANCE;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Decision,
    Chance,
    Terminal,
}

/// Agent choice: an event-labelled arc out of a decision node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventArc {
    pub from: NodeId,
    pub to: NodeId,
    pub event: String,
}

/// Nature's move: a state-labelled arc out of a chance node, carrying the
/// symbolic probability label and its numeric value.
#[derive(Debug, Clone, PartialEq)]
pub struct ChanceArc {
    pub from: NodeId,
    pub to: NodeId,
    pub state: String,
    pub prob_label: String,
    pub prob: f64,
}

/// One row of a conditional probability table: the distribution over the
/// variable's states given an assignment to its parent variables.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub given: BTreeMap<String, String>,
    pub probs: BTreeMap<String, f64>,
}

/// A chance variable with its ordered states and conditional table.
/// Variables form a chain: a row's `given` keys name only variables
/// declared earlier.
#[derive(Debug, Clone, PartialEq)]
pub struct ChanceVariable {
    pub name: String,
    pub states: Vec<String>,
    pub table: Vec<TableRow>,
}

impl ChanceVariable {
    /// Parent variables this one is conditioned on (from the first row;
    /// validation requires all rows to agree).
    pub fn parents(&self) -> Vec<&str> {
        self.table
            .first()
            .map(|row| row.given.keys().map(String::as_str).collect())
            .unwrap_or_default()
    }
}

/// A decision tree over decision, chance, and terminal nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    pub nodes: BTreeMap<NodeId, NodeKind>,
    pub event_arcs: Vec<EventArc>,
    pub chance_arcs: Vec<ChanceArc>,
    pub payoffs: BTreeMap<NodeId, f64>,
    pub root: NodeId,
    pub variables: Vec<ChanceVariable>,
}

impl DecisionTree {
    pub fn kind(&self, node: &NodeId) -> Option<NodeKind> {
        self.nodes.get(node).copied()
    }

    /// Outgoing event arcs in deterministic order (event label, then
    /// target).
    pub fn event_children(&self, node: &NodeId) -> Vec<&EventArc> {
        let mut arcs: Vec<_> = self.event_arcs.iter().filter(|a| &a.from == node).collect();
        arcs.sort_by(|a, b| (&a.event, &a.to).cmp(&(&b.event, &b.to)));
        arcs
    }

    /// Outgoing chance arcs in the variable's declared state order.
    pub fn chance_children(&self, node: &NodeId) -> Vec<&ChanceArc> {
        let mut arcs: Vec<_> = self
            .chance_arcs
            .iter()
            .filter(|a| &a.from == node)
            .collect();
        arcs.sort_by_key(|a| {
            self.state_index(&a.state)
                .unwrap_or((usize::MAX, usize::MAX))
        });
        arcs
    }

    /// The declaring variable of a state, as (variable index, state
    /// index). States are globally unique across variables.
    pub fn state_index(&self, state: &str) -> Option<(usize, usize)> {
        self.variables.iter().enumerate().find_map(|(vi, var)| {
            var.states
                .iter()
                .position(|s| s == state)
                .map(|si| (vi, si))
        })
    }

    pub fn variable(&self, name: &str) -> Option<&ChanceVariable> {
        self.variables.iter().find(|v| v.name == name)
    }

    /// The variable whose states label this chance node's arcs.
    pub fn node_variable(&self, node: &NodeId) -> Option<&ChanceVariable> {
        let arc = self.chance_arcs.iter().find(|a| &a.from == node)?;
        let (vi, _) = self.state_index(&arc.state)?;
        self.variables.get(vi)
    }

    /// The incoming arc of a node: `(parent, Some(state))` for a chance
    /// arc, `(parent, None)` for an event arc.
    pub fn incoming(&self, node: &NodeId) -> Option<(&NodeId, Option<&str>)> {
        if let Some(arc) = self.event_arcs.iter().find(|a| &a.to == node) {
            return Some((&arc.from, None));
        }
        self.chance_arcs
            .iter()
            .find(|a| &a.to == node)
            .map(|a| (&a.from, Some(a.state.as_str())))
    }

    /// Chance states resolved on the path from the root to this node,
    /// keyed by variable name.
    pub fn resolved_on_path(&self, node: &NodeId) -> BTreeMap<String, String> {
        let mut resolved = BTreeMap::new();
        let mut current = node;
        while let Some((parent, state)) = self.incoming(current) {
            if let Some(state) = state {
                if let Some((vi, _)) = self.state_index(state) {
                    resolved.insert(self.variables[vi].name.clone(), state.to_string());
                }
            }
            current = parent;
        }
        resolved
    }

    /// The joint distribution over all declared variables by the chain
    /// rule, enumerated in declaration order, then state order. A tree
    /// without variables yields the empty assignment with weight one.
    pub fn joint_distribution(&self) -> Vec<(Vec<(String, String)>, f64)> {
        let mut combos: Vec<(Vec<(String, String)>, f64)> = vec![(Vec::new(), 1.0)];
        for var in &self.variables {
            let mut next = Vec::with_capacity(combos.len() * var.states.len());
            for (assignment, weight) in &combos {
                let row = var.table.iter().find(|row| {
                    row.given.iter().all(|(name, state)| {
                        assignment
                            .iter()
                            .any(|(n, s)| n == name && s == state)
                    })
                });
                for state in &var.states {
                    let p = row
                        .and_then(|r| r.probs.get(state))
                        .copied()
                        .unwrap_or(0.0);
                    let mut extended = assignment.clone();
                    extended.push((var.name.clone(), state.clone()));
                    next.push((extended, weight * p));
                }
            }
            combos = next;
        }
        combos
    }

    /// `P(variable = state | resolved)` from the chain tables, with
    /// unresolved conditioning variables marginalized out. `None` when
    /// the resolved context itself has probability zero.
    pub fn conditional_given(
        &self,
        resolved: &BTreeMap<String, String>,
        variable: &str,
        state: &str,
    ) -> Option<f64> {
        let joint = self.joint_distribution();
        let consistent = |assignment: &[(String, String)]| {
            resolved.iter().all(|(name, state)| {
                assignment
                    .iter()
                    .any(|(n, s)| n == name && s == state)
            })
        };
        let mut context = 0.0;
        let mut matching = 0.0;
        for (assignment, weight) in &joint {
            if !consistent(assignment) {
                continue;
            }
            context += weight;
            if assignment
                .iter()
                .any(|(n, s)| n == variable && s == state)
            {
                matching += weight;
            }
        }
        if context <= TOLERANCE {
            None
        } else {
            Some(matching / context)
        }
    }
}
