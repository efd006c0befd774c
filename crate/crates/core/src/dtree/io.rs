//! `.dtree` file format: a JSON document with `nodes`, `event_arcs`,
//! `chance_arcs`, `payoffs`, `root`, and `variables`. Unknown fields and
//! node kinds are rejected, and the loader refuses invalid trees. See
//! `docs/formats.md` for the exact schema.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::worlds::is_identifier;

use super::validate::validate;
use super::{ChanceArc, ChanceVariable, DecisionTree, EventArc, NodeId, NodeKind, TableRow};

#[derive(Debug, Error)]
pub enum DtreeLoadError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed decision tree file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad identifier `{0}`: identifiers match [A-Za-z][A-Za-z0-9_]*")]
    Identifier(String),
    #[error("invalid decision tree:\n{}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<super::Violation>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DtreeFile {
    nodes: BTreeMap<String, NodeKind>,
    #[serde(default)]
    event_arcs: Vec<(String, String, String)>,
    #[serde(default)]
    chance_arcs: Vec<ChanceArcFile>,
    #[serde(default)]
    payoffs: BTreeMap<String, f64>,
    root: String,
    #[serde(default)]
    variables: Vec<VariableFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChanceArcFile {
    from: String,
    to: String,
    state: String,
    prob_label: String,
    prob: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VariableFile {
    name: String,
    states: Vec<String>,
    table: Vec<RowFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowFile {
    #[serde(default)]
    given: BTreeMap<String, String>,
    probs: BTreeMap<String, f64>,
}

/// Parses and validates a decision tree from JSON text.
pub fn dtree_from_str(text: &str) -> Result<DecisionTree, DtreeLoadError> {
    let file: DtreeFile = serde_json::from_str(text)?;

    for id in file.nodes.keys() {
        if !is_identifier(id) {
            return Err(DtreeLoadError::Identifier(id.clone()));
        }
    }
    for var in &file.variables {
        if !is_identifier(&var.name) {
            return Err(DtreeLoadError::Identifier(var.name.clone()));
        }
        for state in &var.states {
            if !is_identifier(state) {
                return Err(DtreeLoadError::Identifier(state.clone()));
            }
        }
    }
    for (_, _, event) in &file.event_arcs {
        if !is_identifier(event) {
            return Err(DtreeLoadError::Identifier(event.clone()));
        }
    }

    let dt = DecisionTree {
        nodes: file
            .nodes
            .iter()
            .map(|(id, kind)| (NodeId::new(id), *kind))
            .collect(),
        event_arcs: file
            .event_arcs
            .iter()
            .map(|(from, to, event)| EventArc {
                from: NodeId::new(from),
                to: NodeId::new(to),
                event: event.clone(),
            })
            .collect(),
        chance_arcs: file
            .chance_arcs
            .iter()
            .map(|arc| ChanceArc {
                from: NodeId::new(&arc.from),
                to: NodeId::new(&arc.to),
                state: arc.state.clone(),
                prob_label: arc.prob_label.clone(),
                prob: arc.prob,
            })
            .collect(),
        payoffs: file
            .payoffs
            .iter()
            .map(|(id, payoff)| (NodeId::new(id), *payoff))
            .collect(),
        root: NodeId::new(&file.root),
        variables: file
            .variables
            .iter()
            .map(|var| ChanceVariable {
                name: var.name.clone(),
                states: var.states.clone(),
                table: var
                    .table
                    .iter()
                    .map(|row| TableRow {
                        given: row.given.clone(),
                        probs: row.probs.clone(),
                    })
                    .collect(),
            })
            .collect(),
    };

    let violations = validate(&dt);
    if !violations.is_empty() {
        return Err(DtreeLoadError::Invalid(violations));
    }
    Ok(dt)
}

/// Serializes a decision tree to pretty-printed JSON. `load(store(dt))`
/// is `dt` for valid trees.
pub fn dtree_to_string(dt: &DecisionTree) -> String {
    let file = DtreeFile {
        nodes: dt
            .nodes
            .iter()
            .map(|(id, kind)| (id.0.clone(), *kind))
            .collect(),
        event_arcs: dt
            .event_arcs
            .iter()
            .map(|a| (a.from.0.clone(), a.to.0.clone(), a.event.clone()))
            .collect(),
        chance_arcs: dt
            .chance_arcs
            .iter()
            .map(|a| ChanceArcFile {
                from: a.from.0.clone(),
                to: a.to.0.clone(),
                state: a.state.clone(),
                prob_label: a.prob_label.clone(),
                prob: a.prob,
            })
            .collect(),
        payoffs: dt
            .payoffs
            .iter()
            .map(|(id, payoff)| (id.0.clone(), *payoff))
            .collect(),
        root: dt.root.0.clone(),
        variables: dt
            .variables
            .iter()
            .map(|var| VariableFile {
                name: var.name.clone(),
                states: var.states.clone(),
                table: var
                    .table
                    .iter()
                    .map(|row| RowFile {
                        given: row.given.clone(),
                        probs: row.probs.clone(),
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("dtree serialization");
    text.push('\n');
    text
}

/// Reads, parses, and validates a `.dtree` file.
pub fn load_dtree(path: impl AsRef<Path>) -> Result<DecisionTree, DtreeLoadError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| DtreeLoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    dtree_from_str(&text)
}

/// Writes the `.dtree` file.
pub fn store_dtree(dt: &DecisionTree, path: impl AsRef<Path>) -> Result<(), DtreeLoadError> {
    let path = path.as_ref();
    std::fs::write(path, dtree_to_string(dt)).map_err(|source| DtreeLoadError::Io {
        path: path.display().to_string(),
        source,
    })
}
