//! Model file format: a JSON document with `worlds`, `accessibility`,
//! `prob`, and `designated` sections. Unknown fields are rejected. See
//! `docs/formats.md` for the exact schema.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::Procedure;

use super::model::{
    AccessMap, Interpretation, PointId, Situation, TimeTreeWorld, WorldArc, WorldId,
};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad situation key `{0}`: expected `world@point`")]
    SituationKey(String),
    #[error("bad identifier `{0}`: identifiers match [A-Za-z][A-Za-z0-9_]*")]
    Identifier(String),
    #[error("unknown procedure tag `{0}` in intention_tagged")]
    ProcedureTag(String),
    #[error("invalid model:\n{}", .0.join("\n"))]
    Invalid(Vec<String>),
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    worlds: BTreeMap<String, WorldFile>,
    accessibility: AccessibilityFile,
    #[serde(default)]
    prob: BTreeMap<String, BTreeMap<String, f64>>,
    designated: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorldFile {
    points: Vec<String>,
    arcs: Vec<(String, String, String)>,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    leaf_payoffs: BTreeMap<String, f64>,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct AccessibilityFile {
    #[serde(default)]
    belief: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    goal: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    intention: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    intention_tagged: BTreeMap<String, BTreeMap<String, Vec<String>>>,
}

fn situation_from_key(key: &str) -> Result<Situation, LoadError> {
    let (world, point) = key
        .split_once('@')
        .ok_or_else(|| LoadError::SituationKey(key.to_string()))?;
    if world.is_empty() || point.is_empty() {
        return Err(LoadError::SituationKey(key.to_string()));
    }
    Ok(Situation::new(world, point))
}

fn access_from_file(file: &BTreeMap<String, Vec<String>>) -> Result<AccessMap, LoadError> {
    let mut map = AccessMap::new();
    for (key, worlds) in file {
        let situation = situation_from_key(key)?;
        map.insert(
            situation,
            worlds.iter().map(WorldId::new).collect::<BTreeSet<_>>(),
        );
    }
    Ok(map)
}

fn access_to_file(map: &AccessMap) -> BTreeMap<String, Vec<String>> {
    map.iter()
        .map(|(s, worlds)| {
            (
                s.to_string(),
                worlds.iter().map(|w| w.0.clone()).collect(),
            )
        })
        .collect()
}

/// Parses a model from JSON text, validating structure and semantics.
pub fn interpretation_from_str(text: &str) -> Result<Interpretation, LoadError> {
    let file: ModelFile = serde_json::from_str(text)?;

    let mut worlds = BTreeMap::new();
    let mut events = BTreeSet::new();
    for (id, wf) in &file.worlds {
        if !is_identifier(id) {
            return Err(LoadError::Identifier(id.clone()));
        }
        let mut world = TimeTreeWorld::new(id.clone());
        for p in &wf.points {
            if !is_identifier(p) {
                return Err(LoadError::Identifier(p.clone()));
            }
            world.points.insert(PointId::new(p));
        }
        for (from, to, event) in &wf.arcs {
            if !is_identifier(event) {
                return Err(LoadError::Identifier(event.clone()));
            }
            events.insert(event.clone());
            world.arcs.push(WorldArc {
                from: PointId::new(from),
                to: PointId::new(to),
                event: event.clone(),
            });
        }
        for (point, props) in &wf.valuation {
            for prop in props {
                if !is_identifier(prop) {
                    return Err(LoadError::Identifier(prop.clone()));
                }
            }
            world.valuation.insert(
                PointId::new(point),
                props.iter().cloned().collect::<BTreeSet<_>>(),
            );
        }
        for (point, payoff) in &wf.leaf_payoffs {
            world.leaf_payoff.insert(PointId::new(point), *payoff);
        }
        worlds.insert(world.id.clone(), world);
    }

    let mut intention_tagged = BTreeMap::new();
    for (tag, map) in &file.accessibility.intention_tagged {
        let proc: Procedure = tag
            .parse()
            .map_err(|_| LoadError::ProcedureTag(tag.clone()))?;
        intention_tagged.insert(proc, access_from_file(map)?);
    }

    let mut prob = BTreeMap::new();
    for (key, weights) in &file.prob {
        let situation = situation_from_key(key)?;
        prob.insert(
            situation,
            weights
                .iter()
                .map(|(w, p)| (WorldId::new(w), *p))
                .collect::<BTreeMap<_, _>>(),
        );
    }

    let m = Interpretation {
        worlds,
        events,
        belief: access_from_file(&file.accessibility.belief)?,
        goal: access_from_file(&file.accessibility.goal)?,
        intention: access_from_file(&file.accessibility.intention)?,
        intention_tagged,
        prob,
        designated: situation_from_key(&file.designated)?,
    };

    let problems = m.validate();
    if !problems.is_empty() {
        return Err(LoadError::Invalid(problems));
    }
    Ok(m)
}

/// Serializes a model to pretty-printed JSON. `load(store(m))` is `m`.
pub fn interpretation_to_string(m: &Interpretation) -> String {
    let file = ModelFile {
        worlds: m
            .worlds
            .values()
            .map(|w| {
                (
                    w.id.0.clone(),
                    WorldFile {
                        points: w.points.iter().map(|p| p.0.clone()).collect(),
                        arcs: w
                            .arcs
                            .iter()
                            .map(|a| (a.from.0.clone(), a.to.0.clone(), a.event.clone()))
                            .collect(),
                        valuation: w
                            .valuation
                            .iter()
                            .filter(|(_, props)| !props.is_empty())
                            .map(|(p, props)| {
                                (p.0.clone(), props.iter().cloned().collect::<Vec<_>>())
                            })
                            .collect(),
                        leaf_payoffs: w
                            .leaf_payoff
                            .iter()
                            .map(|(p, v)| (p.0.clone(), *v))
                            .collect(),
                    },
                )
            })
            .collect(),
        accessibility: AccessibilityFile {
            belief: access_to_file(&m.belief),
            goal: access_to_file(&m.goal),
            intention: access_to_file(&m.intention),
            intention_tagged: m
                .intention_tagged
                .iter()
                .map(|(proc, map)| (proc.name().to_string(), access_to_file(map)))
                .collect(),
        },
        prob: m
            .prob
            .iter()
            .map(|(s, dist)| {
                (
                    s.to_string(),
                    dist.iter()
                        .map(|(w, p)| (w.0.clone(), *p))
                        .collect::<BTreeMap<_, _>>(),
                )
            })
            .collect(),
        designated: m.designated.to_string(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("model serialization");
    text.push('\n');
    text
}

/// Reads and validates a model file.
pub fn load_interpretation(path: impl AsRef<Path>) -> Result<Interpretation, LoadError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    interpretation_from_str(&text)
}

/// Writes the model file.
pub fn store_interpretation(
    m: &Interpretation,
    path: impl AsRef<Path>,
) -> Result<(), LoadError> {
    let path = path.as_ref();
    std::fs::write(path, interpretation_to_string(m)).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })
}
