//! Time-tree worlds and interpretations.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::Procedure;

/// Absolute tolerance for all real comparisons in constraint evaluation
/// and semantic condition checks.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WorldId(pub String);

impl WorldId {
    pub fn new(id: impl Into<String>) -> Self {
        WorldId(id.into())
    }
}

impl std::fmt::Display for WorldId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(pub String);

impl PointId {
    pub fn new(id: impl Into<String>) -> Self {
        PointId(id.into())
    }
}

impl std::fmt::Display for PointId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Event-labelled arc between two time points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WorldArc {
    pub from: PointId,
    pub to: PointId,
    pub event: String,
}

/// A single-past, branching-future tree of time points with event-labelled
/// arcs, per-point proposition valuations, and payoffs on some leaves.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeTreeWorld {
    pub id: WorldId,
    pub points: BTreeSet<PointId>,
    pub arcs: Vec<WorldArc>,
    pub valuation: BTreeMap<PointId, BTreeSet<String>>,
    /// Partial: a leaf without an entry has no defined payoff.
    pub leaf_payoff: BTreeMap<PointId, f64>,
}

/// Structural violation found by [`TimeTreeWorld::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WorldViolation {
    /// Zero roots, or more than one point without an incoming arc.
    NoSingleRoot { roots: Vec<PointId> },
    /// A point with more than one incoming arc.
    BackwardBranching { point: PointId },
    /// A point not reachable from the root (covers detached cycles).
    Unreachable { point: PointId },
    /// An arc endpoint that is not a point of the world.
    ArcEndpointMissing { point: PointId },
    /// A valuation entry for an unknown point.
    ValuationUnknownPoint { point: PointId },
    /// A payoff on a point that is not a leaf (or not a point at all).
    PayoffOnNonLeaf { point: PointId },
}

impl std::fmt::Display for WorldViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WorldViolation::NoSingleRoot { roots } => {
                let roots: Vec<_> = roots.iter().map(|p| p.0.as_str()).collect();
                write!(f, "NoSingleRoot: points without a past: [{}]", roots.join(", "))
            }
            WorldViolation::BackwardBranching { point } => {
                write!(f, "BackwardBranching: point {point} has more than one incoming arc")
            }
            WorldViolation::Unreachable { point } => {
                write!(f, "Unreachable: point {point} is not reachable from the root")
            }
            WorldViolation::ArcEndpointMissing { point } => {
                write!(f, "ArcEndpointMissing: arc endpoint {point} is not a point of the world")
            }
            WorldViolation::ValuationUnknownPoint { point } => {
                write!(f, "ValuationUnknownPoint: valuation names unknown point {point}")
            }
            WorldViolation::PayoffOnNonLeaf { point } => {
                write!(f, "PayoffOnNonLeaf: payoff attached to non-leaf point {point}")
            }
        }
    }
}

static EMPTY_PROPS: BTreeSet<String> = BTreeSet::new();

impl TimeTreeWorld {
    pub fn new(id: impl Into<String>) -> Self {
        TimeTreeWorld {
            id: WorldId::new(id),
            points: BTreeSet::new(),
            arcs: Vec::new(),
            valuation: BTreeMap::new(),
            leaf_payoff: BTreeMap::new(),
        }
    }

    pub fn contains(&self, point: &PointId) -> bool {
        self.points.contains(point)
    }

    /// The unique point without an incoming arc, when the world is a
    /// well-formed tree.
    pub fn root(&self) -> Option<&PointId> {
        let mut roots = self
            .points
            .iter()
            .filter(|p| !self.arcs.iter().any(|a| a.to == **p));
        match (roots.next(), roots.next()) {
            (Some(root), None) => Some(root),
            _ => None,
        }
    }

    /// The arc entering `point`, if any. Single-past worlds have at most
    /// one.
    pub fn parent_arc(&self, point: &PointId) -> Option<&WorldArc> {
        self.arcs.iter().find(|a| &a.to == point)
    }

    /// Outgoing arcs in deterministic order (event label, then target).
    pub fn children(&self, point: &PointId) -> Vec<&WorldArc> {
        let mut arcs: Vec<_> = self.arcs.iter().filter(|a| &a.from == point).collect();
        arcs.sort_by(|a, b| (&a.event, &a.to).cmp(&(&b.event, &b.to)));
        arcs
    }

    pub fn is_leaf(&self, point: &PointId) -> bool {
        !self.arcs.iter().any(|a| &a.from == point)
    }

    /// Propositions true at `point` (empty when the point has no entry).
    pub fn props(&self, point: &PointId) -> &BTreeSet<String> {
        self.valuation.get(point).unwrap_or(&EMPTY_PROPS)
    }

    /// Checks every structural invariant; the returned list is empty for
    /// a well-formed world.
    pub fn validate(&self) -> Vec<WorldViolation> {
        let mut violations = Vec::new();

        for arc in &self.arcs {
            for endpoint in [&arc.from, &arc.to] {
                if !self.contains(endpoint) {
                    violations.push(WorldViolation::ArcEndpointMissing {
                        point: endpoint.clone(),
                    });
                }
            }
        }
        for point in self.valuation.keys() {
            if !self.contains(point) {
                violations.push(WorldViolation::ValuationUnknownPoint {
                    point: point.clone(),
                });
            }
        }
        for point in self.leaf_payoff.keys() {
            if !self.contains(point) || !self.is_leaf(point) {
                violations.push(WorldViolation::PayoffOnNonLeaf {
                    point: point.clone(),
                });
            }
        }

        let mut incoming: BTreeMap<&PointId, usize> = BTreeMap::new();
        for arc in &self.arcs {
            if self.contains(&arc.to) {
                *incoming.entry(&arc.to).or_default() += 1;
            }
        }
        for (point, count) in &incoming {
            if *count > 1 {
                violations.push(WorldViolation::BackwardBranching {
                    point: (*point).clone(),
                });
            }
        }

        let roots: Vec<PointId> = self
            .points
            .iter()
            .filter(|p| !incoming.contains_key(p))
            .cloned()
            .collect();
        if roots.len() != 1 {
            violations.push(WorldViolation::NoSingleRoot { roots });
            return violations;
        }

        // Single root and single-past established; anything not reachable
        // from the root (including detached cycles) is flagged.
        let mut reachable = BTreeSet::new();
        let mut stack = vec![roots[0].clone()];
        while let Some(point) = stack.pop() {
            if !reachable.insert(point.clone()) {
                continue;
            }
            for arc in &self.arcs {
                if arc.from == point && self.contains(&arc.to) {
                    stack.push(arc.to.clone());
                }
            }
        }
        for point in &self.points {
            if !reachable.contains(point) {
                violations.push(WorldViolation::Unreachable {
                    point: point.clone(),
                });
            }
        }

        violations
    }

    /// All maximal arc-following sequences starting at `from`, ordered
    /// lexicographically by event labels and point ids.
    pub fn fullpaths(&self, from: &PointId) -> Result<Vec<Fullpath>, ModelError> {
        if !self.contains(from) {
            return Err(ModelError::PointNotInWorld {
                world: self.id.clone(),
                point: from.clone(),
            });
        }
        let mut paths = Vec::new();
        let mut prefix = vec![from.clone()];
        self.walk_paths(&mut prefix, &mut paths);
        Ok(paths)
    }

    fn walk_paths(&self, prefix: &mut Vec<PointId>, out: &mut Vec<Fullpath>) {
        let last = prefix.last().expect("prefix is never empty").clone();
        let children = self.children(&last);
        if children.is_empty() {
            out.push(Fullpath {
                world: self.id.clone(),
                points: prefix.clone(),
            });
            return;
        }
        for arc in children {
            prefix.push(arc.to.clone());
            self.walk_paths(prefix, out);
            prefix.pop();
        }
    }
}

/// A maximal path through a world, starting at a given point and ending
/// at a leaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fullpath {
    pub world: WorldId,
    pub points: Vec<PointId>,
}

/// A world at a particular time point; the anchor for evaluating state
/// formulas.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Situation {
    pub world: WorldId,
    pub time: PointId,
}

impl Situation {
    pub fn new(world: impl Into<String>, time: impl Into<String>) -> Self {
        Situation {
            world: WorldId::new(world),
            time: PointId::new(time),
        }
    }
}

impl std::fmt::Display for Situation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}@{}", self.world, self.time)
    }
}

pub type AccessMap = BTreeMap<Situation, BTreeSet<WorldId>>;

/// A set of worlds with belief/goal/intention accessibility, a probability
/// assignment, and a designated situation.
///
/// Interpretations are immutable after construction; operations that
/// "change" one (such as deliberation) return a new value.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpretation {
    pub worlds: BTreeMap<WorldId, TimeTreeWorld>,
    /// Primitive event types; derived from arcs when loading.
    pub events: BTreeSet<String>,
    pub belief: AccessMap,
    pub goal: AccessMap,
    /// The current intention relation, consulted by untagged `INTEND`.
    pub intention: AccessMap,
    /// Intention relations produced by a specific deliberation procedure,
    /// consulted by `INTEND[proc]`.
    pub intention_tagged: BTreeMap<Procedure, AccessMap>,
    /// Discrete distribution over worlds, per situation.
    pub prob: BTreeMap<Situation, BTreeMap<WorldId, f64>>,
    pub designated: Situation,
}

/// Errors raised by model queries and formula evaluation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModelError {
    #[error("unknown world `{0}`")]
    UnknownWorld(WorldId),
    #[error("time point `{point}` does not exist in world `{world}`")]
    PointNotInWorld { world: WorldId, point: PointId },
    #[error("formula is not desugared: {0} must be eliminated before evaluation")]
    NotDesugared(&'static str),
    #[error("conditional probability term must be rewritten before evaluation")]
    ConditionalTerm,
    #[error("no probability distribution stored for situation {0}")]
    NoDistribution(Situation),
}

static EMPTY_WORLDS: BTreeSet<WorldId> = BTreeSet::new();

impl Interpretation {
    pub fn world(&self, id: &WorldId) -> Result<&TimeTreeWorld, ModelError> {
        self.worlds
            .get(id)
            .ok_or_else(|| ModelError::UnknownWorld(id.clone()))
    }

    /// Checks that the situation's world exists and contains its time
    /// point.
    pub fn check_situation(&self, s: &Situation) -> Result<(), ModelError> {
        let world = self.world(&s.world)?;
        if !world.contains(&s.time) {
            return Err(ModelError::PointNotInWorld {
                world: s.world.clone(),
                point: s.time.clone(),
            });
        }
        Ok(())
    }

    pub fn belief_at(&self, s: &Situation) -> &BTreeSet<WorldId> {
        self.belief.get(s).unwrap_or(&EMPTY_WORLDS)
    }

    pub fn goal_at(&self, s: &Situation) -> &BTreeSet<WorldId> {
        self.goal.get(s).unwrap_or(&EMPTY_WORLDS)
    }

    pub fn intention_at(&self, s: &Situation) -> &BTreeSet<WorldId> {
        self.intention.get(s).unwrap_or(&EMPTY_WORLDS)
    }

    pub fn intention_tagged_at(&self, proc: Procedure, s: &Situation) -> &BTreeSet<WorldId> {
        self.intention_tagged
            .get(&proc)
            .and_then(|map| map.get(s))
            .unwrap_or(&EMPTY_WORLDS)
    }

    /// Tests the sub-world relation `sub ⊑ sup` at a shared point: `sub`'s
    /// points are a subset of `sup`'s, everything retained is identical,
    /// and both worlds share the same past of `at`.
    pub fn is_subworld(
        &self,
        sub: &WorldId,
        sup: &WorldId,
        at: &PointId,
    ) -> Result<bool, ModelError> {
        let sub = self.world(sub)?;
        let sup = self.world(sup)?;
        for world in [sub, sup] {
            if !world.contains(at) {
                return Err(ModelError::PointNotInWorld {
                    world: world.id.clone(),
                    point: at.clone(),
                });
            }
        }
        Ok(is_subworld_impl(sub, sup, at))
    }

    /// Semantic validity of the whole interpretation; empty for a
    /// well-formed model. Used by the loader.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for (id, world) in &self.worlds {
            if *id != world.id {
                problems.push(format!("world `{id}` is keyed under a different id"));
            }
            for violation in world.validate() {
                problems.push(format!("world `{id}`: {violation}"));
            }
        }
        for (name, map) in [
            ("belief", &self.belief),
            ("goal", &self.goal),
            ("intention", &self.intention),
        ] {
            self.validate_access(name, map, &mut problems);
        }
        for map in self.intention_tagged.values() {
            self.validate_access("intention", map, &mut problems);
        }
        for (situation, dist) in &self.prob {
            if self.check_situation(situation).is_err() {
                problems.push(format!("prob: invalid situation {situation}"));
                continue;
            }
            let accessible = self.belief_at(situation);
            for (world, weight) in dist {
                if !self.worlds.contains_key(world) {
                    problems.push(format!("prob at {situation}: unknown world `{world}`"));
                }
                if *weight < 0.0 {
                    problems.push(format!(
                        "prob at {situation}: negative weight {weight} on `{world}`"
                    ));
                }
                if *weight > 0.0 && !accessible.contains(world) {
                    problems.push(format!(
                        "prob at {situation}: weight on `{world}` outside the belief-accessible set"
                    ));
                }
            }
        }
        if self.check_situation(&self.designated).is_err() {
            problems.push(format!(
                "designated situation {} is invalid",
                self.designated
            ));
        }
        problems
    }

    fn validate_access(&self, name: &str, map: &AccessMap, problems: &mut Vec<String>) {
        for (situation, set) in map {
            if self.check_situation(situation).is_err() {
                problems.push(format!("{name}: invalid situation {situation}"));
            }
            for world in set {
                if !self.worlds.contains_key(world) {
                    problems.push(format!(
                        "{name} at {situation}: unknown accessible world `{world}`"
                    ));
                }
            }
        }
    }
}

fn is_subworld_impl(sub: &TimeTreeWorld, sup: &TimeTreeWorld, at: &PointId) -> bool {
    if !sub.points.is_subset(&sup.points) {
        return false;
    }

    let sub_arcs: BTreeSet<&WorldArc> = sub.arcs.iter().collect();
    let restricted: BTreeSet<&WorldArc> = sup
        .arcs
        .iter()
        .filter(|a| sub.points.contains(&a.from) && sub.points.contains(&a.to))
        .collect();
    if sub_arcs != restricted {
        return false;
    }

    for point in &sub.points {
        if sub.props(point) != sup.props(point) {
            return false;
        }
    }

    let restricted_payoffs: BTreeMap<&PointId, f64> = sup
        .leaf_payoff
        .iter()
        .filter(|(p, _)| sub.points.contains(*p))
        .map(|(p, v)| (p, *v))
        .collect();
    let sub_payoffs: BTreeMap<&PointId, f64> =
        sub.leaf_payoff.iter().map(|(p, v)| (p, *v)).collect();
    if sub_payoffs != restricted_payoffs {
        return false;
    }

    // Identical past: the ancestor chains of `at` agree point by point.
    let mut a = at;
    let mut b = at;
    loop {
        match (sub.parent_arc(a), sup.parent_arc(b)) {
            (None, None) => return true,
            (Some(x), Some(y)) => {
                if x.from != y.from || x.event != y.event {
                    return false;
                }
                a = &x.from;
                b = &y.from;
            }
            _ => return false,
        }
    }
}
