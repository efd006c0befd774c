//! From decision trees to possible worlds: each joint assignment of the
//! chance variables yields one goal-accessible world, belief-accessible
//! worlds extend them with believed-but-not-desired branches, and the
//! assignment probabilities flow backwards onto the belief worlds.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dtree::{validate, DecisionTree, NodeId, NodeKind, Violation};
use crate::worlds::{
    Interpretation, PointId, Situation, TimeTreeWorld, WorldArc, WorldId, WorldViolation,
};

/// One state per chance variable, with its chain-rule probability.
#[derive(Debug, Clone, PartialEq)]
pub struct JointAssignment {
    /// `(variable, state)` pairs in declaration order.
    pub assignment: Vec<(String, String)>,
    pub prob: f64,
}

impl JointAssignment {
    pub fn state_of(&self, variable: &str) -> Option<&str> {
        self.assignment
            .iter()
            .find(|(name, _)| name == variable)
            .map(|(_, state)| state.as_str())
    }

    /// The `<state1>_<state2>...` suffix used in deterministic world ids.
    fn id_suffix(&self) -> String {
        self.assignment
            .iter()
            .map(|(_, state)| state.as_str())
            .collect::<Vec<_>>()
            .join("_")
    }

    pub fn goal_world_id(&self) -> WorldId {
        let suffix = self.id_suffix();
        WorldId::new(if suffix.is_empty() {
            "g".to_string()
        } else {
            format!("g_{suffix}")
        })
    }

    pub fn belief_world_id(&self) -> WorldId {
        let suffix = self.id_suffix();
        WorldId::new(if suffix.is_empty() {
            "b".to_string()
        } else {
            format!("b_{suffix}")
        })
    }
}

/// Event-labelled subtrees attached to belief worlds at named points:
/// options the agent believes possible but does not desire.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeliefExtras {
    pub extras: Vec<ExtraBranch>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtraBranch {
    pub attach_at: String,
    pub points: Vec<String>,
    pub arcs: Vec<(String, String, String)>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub leaf_payoffs: BTreeMap<String, f64>,
}

impl BeliefExtras {
    pub fn from_str_json(text: &str) -> Result<Self, TransformError> {
        serde_json::from_str(text).map_err(TransformError::ExtrasJson)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TransformError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| TransformError::ExtrasIo {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_str_json(&text)
    }
}

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("invalid decision tree:\n{}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n"))]
    InvalidTree(Vec<Violation>),
    #[error("assignment does not cover variable `{0}`")]
    MissingVariable(String),
    #[error("chance node `{node}` has no arc for state `{state}`")]
    NoStateArc { node: NodeId, state: String },
    #[error("cannot read extras file `{path}`: {source}")]
    ExtrasIo {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed extras file: {0}")]
    ExtrasJson(serde_json::Error),
    #[error("extras attach at unknown point `{0}`")]
    ExtrasUnknownAttachPoint(String),
    #[error("extras reuse event `{event}` already offered at point `{point}`")]
    ExtrasEventClash { point: String, event: String },
    #[error("extras reuse existing point id `{0}`")]
    ExtrasPointClash(String),
    #[error("extras produce an ill-formed world: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    ExtrasInvalid(Vec<WorldViolation>),
}

/// The result of [`transform`]: the interpretation anchored at its
/// designated situation, plus the assignment that generated each world.
#[derive(Debug, Clone)]
pub struct TransformResult {
    pub interpretation: Interpretation,
    pub world_index: BTreeMap<WorldId, JointAssignment>,
}

/// All joint assignments of the declared chance variables, in declaration
/// order then state order, weighted by the chain rule.
pub fn enumerate_assignments(dt: &DecisionTree) -> Vec<JointAssignment> {
    dt.joint_distribution()
        .into_iter()
        .map(|(assignment, prob)| JointAssignment { assignment, prob })
        .collect()
}

/// Builds the goal world for one assignment: chance nodes are removed,
/// their incident arc reattached to the successor the assignment selects,
/// whose point gains the state proposition for the rest of that path.
/// Decision nodes become time points; terminals become leaves carrying
/// their payoff.
pub fn resolve(
    dt: &DecisionTree,
    assignment: &JointAssignment,
) -> Result<TimeTreeWorld, TransformError> {
    let mut world = TimeTreeWorld::new(assignment.goal_world_id().0);
    build_point(dt, &dt.root, &BTreeSet::new(), assignment, &mut world)?;
    Ok(world)
}

fn build_point(
    dt: &DecisionTree,
    node: &NodeId,
    inherited: &BTreeSet<String>,
    assignment: &JointAssignment,
    world: &mut TimeTreeWorld,
) -> Result<PointId, TransformError> {
    match dt.kind(node) {
        Some(NodeKind::Decision) => {
            let point = PointId::new(node.0.clone());
            world.points.insert(point.clone());
            if !inherited.is_empty() {
                world.valuation.insert(point.clone(), inherited.clone());
            }
            for arc in dt.event_children(node) {
                let child = build_point(dt, &arc.to, inherited, assignment, world)?;
                world.arcs.push(WorldArc {
                    from: point.clone(),
                    to: child,
                    event: arc.event.clone(),
                });
            }
            Ok(point)
        }
        Some(NodeKind::Chance) => {
            let variable = dt
                .node_variable(node)
                .ok_or_else(|| TransformError::InvalidTree(validate(dt)))?;
            let state = assignment
                .state_of(&variable.name)
                .ok_or_else(|| TransformError::MissingVariable(variable.name.clone()))?
                .to_string();
            let arc = dt
                .chance_arcs
                .iter()
                .find(|a| &a.from == node && a.state == state)
                .ok_or_else(|| TransformError::NoStateArc {
                    node: node.clone(),
                    state: state.clone(),
                })?;
            let mut extended = inherited.clone();
            extended.insert(state);
            build_point(dt, &arc.to, &extended, assignment, world)
        }
        Some(NodeKind::Terminal) => {
            let point = PointId::new(node.0.clone());
            world.points.insert(point.clone());
            if !inherited.is_empty() {
                world.valuation.insert(point.clone(), inherited.clone());
            }
            if let Some(payoff) = dt.payoffs.get(node) {
                world.leaf_payoff.insert(point.clone(), *payoff);
            }
            Ok(point)
        }
        None => Err(TransformError::InvalidTree(validate(dt))),
    }
}

fn apply_extras(
    base: &TimeTreeWorld,
    id: WorldId,
    extras: &BeliefExtras,
) -> Result<TimeTreeWorld, TransformError> {
    let mut world = base.clone();
    world.id = id;
    for extra in &extras.extras {
        let attach = PointId::new(extra.attach_at.clone());
        if !world.contains(&attach) {
            return Err(TransformError::ExtrasUnknownAttachPoint(
                extra.attach_at.clone(),
            ));
        }
        for point in &extra.points {
            let point_id = PointId::new(point.clone());
            if !world.points.insert(point_id) {
                return Err(TransformError::ExtrasPointClash(point.clone()));
            }
        }
        for (from, to, event) in &extra.arcs {
            let from_id = PointId::new(from.clone());
            if world
                .arcs
                .iter()
                .any(|a| a.from == from_id && &a.event == event)
            {
                return Err(TransformError::ExtrasEventClash {
                    point: from.clone(),
                    event: event.clone(),
                });
            }
            world.arcs.push(WorldArc {
                from: from_id,
                to: PointId::new(to.clone()),
                event: event.clone(),
            });
        }
        for (point, props) in &extra.valuation {
            world
                .valuation
                .entry(PointId::new(point.clone()))
                .or_default()
                .extend(props.iter().cloned());
        }
        for (point, payoff) in &extra.leaf_payoffs {
            world
                .leaf_payoff
                .insert(PointId::new(point.clone()), *payoff);
        }
    }
    let violations = world.validate();
    if !violations.is_empty() {
        return Err(TransformError::ExtrasInvalid(violations));
    }
    Ok(world)
}

/// Transforms a valid decision tree into an interpretation: one goal
/// world per joint assignment, belief worlds extending them with the
/// given extras (identical when there are none), the probability
/// distribution on the belief worlds at the designated situation, and
/// belief/goal accessibility populated there. Intention accessibility is
/// left empty; deliberation fills it.
pub fn transform(
    dt: &DecisionTree,
    extras: Option<&BeliefExtras>,
) -> Result<TransformResult, TransformError> {
    let violations = validate(dt);
    if !violations.is_empty() {
        return Err(TransformError::InvalidTree(violations));
    }

    let no_extras = BeliefExtras::default();
    let extras = extras.unwrap_or(&no_extras);

    let assignments = enumerate_assignments(dt);
    let mut worlds = BTreeMap::new();
    let mut world_index = BTreeMap::new();
    let mut belief_ids = BTreeSet::new();
    let mut goal_ids = BTreeSet::new();
    let mut weights: BTreeMap<WorldId, f64> = BTreeMap::new();
    let mut best: Option<(f64, WorldId, PointId)> = None;

    for assignment in &assignments {
        let goal = resolve(dt, assignment)?;
        let belief = apply_extras(&goal, assignment.belief_world_id(), extras)?;
        let root = goal
            .root()
            .expect("resolved worlds are rooted trees")
            .clone();

        goal_ids.insert(goal.id.clone());
        belief_ids.insert(belief.id.clone());
        weights.insert(belief.id.clone(), assignment.prob);
        world_index.insert(goal.id.clone(), assignment.clone());
        world_index.insert(belief.id.clone(), assignment.clone());

        // Anchor at the most probable belief world; ties go to the
        // lexicographically first id.
        let candidate = (assignment.prob, belief.id.clone(), root);
        match &best {
            None => best = Some(candidate),
            Some((best_prob, best_id, _)) => {
                if assignment.prob > *best_prob
                    || (assignment.prob == *best_prob && candidate.1 < *best_id)
                {
                    best = Some(candidate);
                }
            }
        }

        worlds.insert(goal.id.clone(), goal);
        worlds.insert(belief.id.clone(), belief);
    }

    let (_, designated_world, designated_time) = best.expect("at least one assignment exists");
    let designated = Situation {
        world: designated_world,
        time: designated_time,
    };

    let events = worlds
        .values()
        .flat_map(|w| w.arcs.iter().map(|a| a.event.clone()))
        .collect::<BTreeSet<_>>();

    let mut belief = BTreeMap::new();
    belief.insert(designated.clone(), belief_ids);
    let mut goal = BTreeMap::new();
    goal.insert(designated.clone(), goal_ids);
    let mut prob = BTreeMap::new();
    prob.insert(designated.clone(), weights);

    Ok(TransformResult {
        interpretation: Interpretation {
            worlds,
            events,
            belief,
            goal,
            intention: BTreeMap::new(),
            intention_tagged: BTreeMap::new(),
            prob,
            designated,
        },
        world_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtree::load_dtree;
    use crate::logic::{desugar, parse_state_formula};
    use crate::worlds::{check_conditions, holds_state, TOLERANCE};

    const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/phil.dtree");
    const EXTRAS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/phil.extras.json");

    fn fixture() -> DecisionTree {
        load_dtree(FIXTURE).expect("fixture must load")
    }

    fn fixture_extras() -> BeliefExtras {
        BeliefExtras::load(EXTRAS).expect("extras must load")
    }

    #[test]
    fn assignments_follow_declaration_and_state_order() {
        let assignments = enumerate_assignments(&fixture());
        let summary: Vec<(String, f64)> = assignments
            .iter()
            .map(|a| (a.goal_world_id().0.clone(), a.prob))
            .collect();
        let expected = [
            ("g_yes_win", 0.336),
            ("g_yes_loss", 0.084),
            ("g_no_win", 0.116),
            ("g_no_loss", 0.464),
        ];
        assert_eq!(summary.len(), expected.len());
        for ((id, prob), (exp_id, exp_prob)) in summary.iter().zip(&expected) {
            assert_eq!(id, exp_id);
            assert!((prob - exp_prob).abs() < TOLERANCE);
        }
    }

    #[test]
    fn resolve_yes_win_matches_hand_construction() {
        let dt = fixture();
        let assignments = enumerate_assignments(&dt);
        let world = resolve(&dt, &assignments[0]).expect("resolve failure");
        assert!(world.validate().is_empty());

        let point_ids: Vec<&str> = world.points.iter().map(|p| p.0.as_str()).collect();
        assert_eq!(
            point_ids,
            vec![
                "d_nopoll",
                "d_yes",
                "t0",
                "t_nopoll_rep",
                "t_nopoll_win",
                "t_yes_rep",
                "t_yes_win"
            ]
        );

        let arcs: BTreeSet<(&str, &str, &str)> = world
            .arcs
            .iter()
            .map(|a| (a.from.0.as_str(), a.to.0.as_str(), a.event.as_str()))
            .collect();
        assert_eq!(
            arcs,
            BTreeSet::from([
                ("t0", "d_nopoll", "NoPoll"),
                ("t0", "d_yes", "Poll"),
                ("d_nopoll", "t_nopoll_rep", "Rep"),
                ("d_nopoll", "t_nopoll_win", "Sen"),
                ("d_yes", "t_yes_rep", "Rep"),
                ("d_yes", "t_yes_win", "Sen"),
            ])
        );

        let props =
            |p: &str| -> Vec<&str> { world.props(&PointId::new(p)).iter().map(String::as_str).collect() };
        assert_eq!(props("t0"), Vec::<&str>::new());
        assert_eq!(props("d_yes"), vec!["yes"]);
        assert_eq!(props("t_yes_rep"), vec!["yes"]);
        assert_eq!(props("t_yes_win"), vec!["win", "yes"]);
        assert_eq!(props("t_nopoll_win"), vec!["win"]);

        let payoffs: BTreeMap<&str, f64> = world
            .leaf_payoff
            .iter()
            .map(|(p, v)| (p.0.as_str(), *v))
            .collect();
        assert_eq!(
            payoffs,
            BTreeMap::from([
                ("t_nopoll_rep", 200.0),
                ("t_nopoll_win", 300.0),
                ("t_yes_rep", 200.0),
                ("t_yes_win", 300.0),
            ])
        );
    }

    #[test]
    fn resolve_yes_loss_puts_100_on_senate_leaves() {
        let dt = fixture();
        let assignments = enumerate_assignments(&dt);
        let world = resolve(&dt, &assignments[1]).expect("resolve failure");
        assert_eq!(world.id, WorldId::new("g_yes_loss"));
        let payoffs: BTreeMap<&str, f64> = world
            .leaf_payoff
            .iter()
            .map(|(p, v)| (p.0.as_str(), *v))
            .collect();
        assert_eq!(payoffs["t_nopoll_loss"], 100.0);
        assert_eq!(payoffs["t_yes_loss"], 100.0);
    }

    #[test]
    fn chance_free_tree_resolves_isomorphically() {
        let dt = crate::dtree::dtree_from_str(
            r#"{
                "nodes": {"r": "decision", "t": "terminal", "u": "terminal"},
                "event_arcs": [["r", "t", "a"], ["r", "u", "b"]],
                "payoffs": {"t": 1.0, "u": 2.0},
                "root": "r"
            }"#,
        )
        .expect("tree must load");
        let assignments = enumerate_assignments(&dt);
        assert_eq!(assignments.len(), 1);
        assert!(assignments[0].assignment.is_empty());
        assert!((assignments[0].prob - 1.0).abs() < TOLERANCE);

        let world = resolve(&dt, &assignments[0]).expect("resolve failure");
        assert_eq!(world.points.len(), dt.nodes.len());
        assert_eq!(world.arcs.len(), dt.event_arcs.len());
        assert!(world.valuation.is_empty());

        let result = transform(&dt, None).expect("transform failure");
        assert_eq!(result.interpretation.worlds.len(), 2);
        let designated = &result.interpretation.designated;
        assert_eq!(designated.world, WorldId::new("b"));
        let report = check_conditions(&result.interpretation, designated).unwrap();
        assert!(report.pass_through_c3(), "{report:?}");
    }

    #[test]
    fn uniform_coin_splits_in_two() {
        let dt = crate::dtree::dtree_from_str(
            r#"{
                "nodes": {"r": "decision", "c": "chance", "t": "terminal", "u": "terminal"},
                "event_arcs": [["r", "c", "flip"]],
                "chance_arcs": [
                    {"from": "c", "to": "t", "state": "p", "prob_label": "P(p)", "prob": 0.5},
                    {"from": "c", "to": "u", "state": "q", "prob_label": "P(q)", "prob": 0.5}
                ],
                "payoffs": {"t": 1.0, "u": 2.0},
                "root": "r",
                "variables": [
                    {"name": "v", "states": ["p", "q"], "table": [{"given": {}, "probs": {"p": 0.5, "q": 0.5}}]}
                ]
            }"#,
        )
        .expect("tree must load");
        let assignments = enumerate_assignments(&dt);
        assert_eq!(assignments.len(), 2);
        for a in &assignments {
            assert!((a.prob - 0.5).abs() < TOLERANCE);
        }
    }

    #[test]
    fn fixture_transform_produces_eight_worlds_with_flowed_weights() {
        let dt = fixture();
        let result = transform(&dt, Some(&fixture_extras())).expect("transform failure");
        let m = &result.interpretation;

        assert_eq!(m.worlds.len(), 8);
        let designated = &m.designated;
        assert_eq!(designated.world, WorldId::new("b_no_loss"));
        assert_eq!(designated.time, PointId::new("t0"));

        let weights = &m.prob[designated];
        let expected = [
            ("b_yes_win", 0.336),
            ("b_yes_loss", 0.084),
            ("b_no_win", 0.116),
            ("b_no_loss", 0.464),
        ];
        assert_eq!(weights.len(), expected.len());
        let mut total = 0.0;
        for (id, weight) in &expected {
            let got = weights[&WorldId::new(*id)];
            assert!((got - weight).abs() < TOLERANCE, "{id}: {got}");
            total += got;
        }
        assert!((total - 1.0).abs() < TOLERANCE);

        // Belief worlds carry the Ret branch; goal worlds do not.
        let check = |text: &str| {
            let f = desugar(&parse_state_formula(text).unwrap());
            holds_state(m, designated, &f).unwrap()
        };
        assert!(check("BEL(OPTIONAL(<> done(Ret)))"));
        assert!(!check("GOAL(OPTIONAL(<> done(Ret)))"));

        let report = check_conditions(m, designated).unwrap();
        assert!(report.pass_through_c3(), "{report:?}");

        // Every goal world is a sub-world of its paired belief world.
        for (goal_id, assignment) in &result.world_index {
            if !goal_id.0.starts_with("g") {
                continue;
            }
            assert!(m
                .is_subworld(goal_id, &assignment.belief_world_id(), &PointId::new("t0"))
                .unwrap());
        }
    }

    #[test]
    fn extras_error_on_unknown_points_and_event_clashes() {
        let dt = fixture();
        let unknown = BeliefExtras {
            extras: vec![ExtraBranch {
                attach_at: "nowhere".into(),
                points: vec!["x".into()],
                arcs: vec![("nowhere".into(), "x".into(), "Ret".into())],
                valuation: BTreeMap::new(),
                leaf_payoffs: BTreeMap::new(),
            }],
        };
        assert!(matches!(
            transform(&dt, Some(&unknown)),
            Err(TransformError::ExtrasUnknownAttachPoint(_))
        ));

        let clash = BeliefExtras {
            extras: vec![ExtraBranch {
                attach_at: "t0".into(),
                points: vec!["x".into()],
                arcs: vec![("t0".into(), "x".into(), "Poll".into())],
                valuation: BTreeMap::new(),
                leaf_payoffs: BTreeMap::new(),
            }],
        };
        assert!(matches!(
            transform(&dt, Some(&clash)),
            Err(TransformError::ExtrasEventClash { .. })
        ));
    }

    #[test]
    fn resolved_leaf_payoffs_match_replaying_the_tree() {
        // Independent replay: walk each fullpath's events through the
        // decision tree, resolving chance nodes by the assignment, and
        // compare the terminal payoff with the leaf payoff.
        let dt = fixture();
        for assignment in enumerate_assignments(&dt) {
            let world = resolve(&dt, &assignment).expect("resolve failure");
            let root = world.root().unwrap().clone();
            for path in world.fullpaths(&root).unwrap() {
                let mut node = dt.root.clone();
                for window in path.points.windows(2) {
                    let event = world
                        .arcs
                        .iter()
                        .find(|a| a.from == window[0] && a.to == window[1])
                        .map(|a| a.event.clone())
                        .expect("consecutive path points are arc-connected");
                    // Skip through chance nodes the same way resolve does.
                    while matches!(dt.kind(&node), Some(NodeKind::Chance)) {
                        let var = dt.node_variable(&node).unwrap();
                        let state = assignment.state_of(&var.name).unwrap();
                        node = dt
                            .chance_arcs
                            .iter()
                            .find(|a| a.from == node && a.state == state)
                            .unwrap()
                            .to
                            .clone();
                    }
                    node = dt
                        .event_arcs
                        .iter()
                        .find(|a| a.from == node && a.event == event)
                        .expect("event must exist in the tree")
                        .to
                        .clone();
                }
                while matches!(dt.kind(&node), Some(NodeKind::Chance)) {
                    let var = dt.node_variable(&node).unwrap();
                    let state = assignment.state_of(&var.name).unwrap();
                    node = dt
                        .chance_arcs
                        .iter()
                        .find(|a| a.from == node && a.state == state)
                        .unwrap()
                        .to
                        .clone();
                }
                let leaf = path.points.last().unwrap();
                assert_eq!(
                    world.leaf_payoff.get(leaf).copied(),
                    dt.payoffs.get(&node).copied(),
                    "leaf {leaf} in {}",
                    world.id
                );
            }
        }
    }
}
