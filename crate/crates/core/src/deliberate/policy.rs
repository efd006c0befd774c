//! Possible-worlds deliberation: enumerate uniform policies over the
//! goal-accessible worlds, score them, and prune each goal world to the
//! arcs the best policies actually use, yielding the intention-accessible
//! worlds.

use std::collections::{BTreeMap, BTreeSet};

use crate::worlds::{
    Interpretation, ModelError, PointId, Situation, TimeTreeWorld, WorldArc, WorldId, TOLERANCE,
};

use super::{DeliberateError, Plan, Procedure, Step};

/// One entry of an observation history: an event taken or a chance state
/// observed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Obs {
    Event(String),
    State(String),
}

impl std::fmt::Display for Obs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Obs::Event(e) => f.write_str(e),
            Obs::State(s) => write!(f, "{s}?"),
        }
    }
}

fn history_label(history: &[Obs]) -> String {
    history
        .iter()
        .map(|o| o.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// A uniform choice of events keyed by observation history: the sequence
/// of events taken and chance states observed since the designated time
/// point. Two decision points with equal history, in whatever world,
/// receive the same event.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Policy {
    pub choice: BTreeMap<Vec<Obs>, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredPolicy {
    pub policy: Policy,
    pub score: f64,
}

const POLICY_CAP: usize = 250_000;

/// Per-world observation histories of every point reachable from `start`.
fn histories(world: &TimeTreeWorld, start: &PointId) -> BTreeMap<PointId, Vec<Obs>> {
    let mut map = BTreeMap::new();
    map.insert(start.clone(), Vec::new());
    let mut stack = vec![start.clone()];
    while let Some(point) = stack.pop() {
        let base = map[&point].clone();
        let base_props = world.props(&point).clone();
        for arc in world.children(&point) {
            let mut h = base.clone();
            h.push(Obs::Event(arc.event.clone()));
            for prop in world.props(&arc.to).difference(&base_props) {
                h.push(Obs::State(prop.clone()));
            }
            map.insert(arc.to.clone(), h);
            stack.push(arc.to.clone());
        }
    }
    map
}

struct PolicyContext<'a> {
    m: &'a Interpretation,
    designated: Situation,
    /// Goal world id -> weight (taken from the paired belief world).
    weights: BTreeMap<WorldId, f64>,
    /// Goal world id -> per-point observation histories.
    histories: BTreeMap<WorldId, BTreeMap<PointId, Vec<Obs>>>,
    /// History -> events available in every world reaching that history.
    options: BTreeMap<Vec<Obs>, BTreeSet<String>>,
}

impl<'a> PolicyContext<'a> {
    fn new(m: &'a Interpretation) -> Result<Self, DeliberateError> {
        let designated = m.designated.clone();
        m.check_situation(&designated)?;
        let goals = m.goal_at(&designated).clone();
        if goals.is_empty() {
            return Err(DeliberateError::NoGoalWorlds);
        }
        let dist = m
            .prob
            .get(&designated)
            .ok_or_else(|| ModelError::NoDistribution(designated.clone()))?;

        // A goal world's weight: its own entry when the distribution
        // names it directly. Belief-world weight flows to goal worlds
        // through the sub-world pairing as a partition: each belief
        // world funds exactly one goal sub-world, so assignments that
        // produce structurally identical goal worlds do not double
        // count.
        let mut weights: BTreeMap<WorldId, f64> =
            goals
                .iter()
                .map(|g| (g.clone(), dist.get(g).copied().unwrap_or(0.0)))
                .collect();
        for belief in m.belief_at(&designated) {
            if goals.contains(belief) {
                continue;
            }
            let Some(weight) = dist.get(belief).copied().filter(|w| *w > 0.0) else {
                continue;
            };
            let paired = goals
                .iter()
                .find(|g| m.is_subworld(g, belief, &designated.time).unwrap_or(false));
            if let Some(goal) = paired {
                *weights.get_mut(goal).expect("goal weights are prefilled") += weight;
            }
        }

        let mut all_histories = BTreeMap::new();
        let mut options: BTreeMap<Vec<Obs>, BTreeSet<String>> = BTreeMap::new();
        for goal in &goals {
            let world = m.world(goal)?;
            if !world.contains(&designated.time) {
                return Err(ModelError::PointNotInWorld {
                    world: goal.clone(),
                    point: designated.time.clone(),
                }
                .into());
            }
            let map = histories(world, &designated.time);
            // Available events per history within this world; a history
            // occurring at several points keeps only events available at
            // all of them.
            let mut local: BTreeMap<&Vec<Obs>, BTreeSet<String>> = BTreeMap::new();
            for (point, history) in &map {
                if world.is_leaf(point) {
                    continue;
                }
                let events: BTreeSet<String> = world
                    .children(point)
                    .iter()
                    .map(|a| a.event.clone())
                    .collect();
                local
                    .entry(history)
                    .and_modify(|set| *set = set.intersection(&events).cloned().collect())
                    .or_insert(events);
            }
            for (history, events) in local {
                options
                    .entry(history.clone())
                    .and_modify(|set| *set = set.intersection(&events).cloned().collect())
                    .or_insert(events);
            }
            all_histories.insert(goal.clone(), map);
        }
        for (history, events) in &options {
            if events.is_empty() {
                return Err(DeliberateError::NoCommonEvent(history_label(history)));
            }
        }

        Ok(PolicyContext {
            m,
            designated,
            weights,
            histories: all_histories,
            options,
        })
    }

    fn enumerate(&self) -> Result<Vec<Policy>, DeliberateError> {
        let mut count: usize = 1;
        for events in self.options.values() {
            count = count.saturating_mul(events.len());
            if count > POLICY_CAP {
                return Err(DeliberateError::PolicySpaceTooLarge(POLICY_CAP));
            }
        }
        let keys: Vec<&Vec<Obs>> = self.options.keys().collect();
        let mut policies = Vec::with_capacity(count);
        let mut current: Vec<(&Vec<Obs>, &String)> = Vec::with_capacity(keys.len());
        build_policies(&self.options, &keys, 0, &mut current, &mut policies);
        Ok(policies)
    }

    /// The maximal path a policy induces in a goal world from the
    /// designated time point.
    fn induced_path(
        &self,
        goal: &WorldId,
        policy: &Policy,
    ) -> Result<Vec<PointId>, DeliberateError> {
        let world = self.m.world(goal)?;
        let map = &self.histories[goal];
        let mut path = vec![self.designated.time.clone()];
        loop {
            let current = path.last().expect("path is never empty").clone();
            if world.is_leaf(&current) {
                return Ok(path);
            }
            let history = &map[&current];
            let event = policy
                .choice
                .get(history)
                .ok_or_else(|| DeliberateError::NoCommonEvent(history_label(history)))?;
            let next = world
                .children(&current)
                .into_iter()
                .find(|arc| &arc.event == event)
                .ok_or_else(|| DeliberateError::NoCommonEvent(history_label(history)))?
                .to
                .clone();
            path.push(next);
        }
    }

    fn induced_payoff(&self, goal: &WorldId, policy: &Policy) -> Result<f64, DeliberateError> {
        let world = self.m.world(goal)?;
        let path = self.induced_path(goal, policy)?;
        let leaf = path.last().expect("induced paths are nonempty");
        world
            .leaf_payoff
            .get(leaf)
            .copied()
            .ok_or_else(|| DeliberateError::UndefinedPayoff {
                world: goal.clone(),
                leaf: leaf.clone(),
            })
    }

    fn score(&self, policy: &Policy, proc: Procedure) -> Result<f64, DeliberateError> {
        match proc {
            Procedure::Maxexpval => {
                let mut total = 0.0;
                for (goal, weight) in &self.weights {
                    total += weight * self.induced_payoff(goal, policy)?;
                }
                Ok(total)
            }
            Procedure::Maximin => {
                let mut worst: Option<f64> = None;
                for (goal, weight) in &self.weights {
                    let payoff = self.induced_payoff(goal, policy)?;
                    if *weight > 0.0 {
                        worst = Some(worst.map_or(payoff, |w: f64| w.min(payoff)));
                    }
                }
                worst.ok_or(DeliberateError::NoPositiveWeight)
            }
        }
    }
}

fn build_policies<'a>(
    options: &'a BTreeMap<Vec<Obs>, BTreeSet<String>>,
    keys: &[&'a Vec<Obs>],
    idx: usize,
    current: &mut Vec<(&'a Vec<Obs>, &'a String)>,
    out: &mut Vec<Policy>,
) {
    if idx == keys.len() {
        out.push(Policy {
            choice: current
                .iter()
                .map(|(h, e)| ((*h).clone(), (*e).clone()))
                .collect(),
        });
        return;
    }
    for event in &options[keys[idx]] {
        current.push((keys[idx], event));
        build_policies(options, keys, idx + 1, current, out);
        current.pop();
    }
}

/// Exhaustively scores every policy over the goal worlds. This is the
/// possible-worlds counterpart of decision-tree deliberation and doubles
/// as its independent oracle.
pub fn policy_scores(
    m: &Interpretation,
    proc: Procedure,
) -> Result<Vec<ScoredPolicy>, DeliberateError> {
    let ctx = PolicyContext::new(m)?;
    let mut scored = Vec::new();
    for policy in ctx.enumerate()? {
        let score = ctx.score(&policy, proc)?;
        scored.push(ScoredPolicy { policy, score });
    }
    Ok(scored)
}

/// The `(history, chosen event)` pairs a policy realizes on its induced
/// paths across all goal worlds. Off-path choices are excluded.
pub fn policy_choice_pairs(
    m: &Interpretation,
    policy: &Policy,
) -> Result<BTreeSet<(Vec<Obs>, String)>, DeliberateError> {
    let ctx = PolicyContext::new(m)?;
    let mut pairs = BTreeSet::new();
    for goal in ctx.weights.keys() {
        let world = m.world(goal)?;
        let map = &ctx.histories[goal];
        let path = ctx.induced_path(goal, policy)?;
        for point in &path {
            if !world.is_leaf(point) {
                let history = map[point].clone();
                let event = policy.choice[&history].clone();
                pairs.insert((history, event));
            }
        }
    }
    Ok(pairs)
}

/// The `(history, event)` pairs a plan realizes when replayed through
/// each goal world whose observations match its tests.
pub fn plan_choice_pairs(
    m: &Interpretation,
    plan: &Plan,
) -> Result<BTreeSet<(Vec<Obs>, String)>, DeliberateError> {
    let ctx = PolicyContext::new(m)?;
    let mut pairs = BTreeSet::new();
    for goal in ctx.weights.keys() {
        let world = m.world(goal)?;
        let map = &ctx.histories[goal];
        let mut point = ctx.designated.time.clone();
        let mut steps = plan.steps.iter().peekable();
        'replay: loop {
            while let Some(Step::Test(state)) = steps.peek() {
                if world.props(&point).contains(state) {
                    steps.next();
                } else {
                    break 'replay;
                }
            }
            match steps.next() {
                None => break,
                Some(Step::Event(event)) => {
                    let Some(arc) = world
                        .children(&point)
                        .into_iter()
                        .find(|arc| &arc.event == event)
                    else {
                        break;
                    };
                    pairs.insert((map[&point].clone(), event.clone()));
                    point = arc.to.clone();
                }
                Some(Step::Test(_)) => unreachable!("tests are consumed above"),
            }
        }
    }
    Ok(pairs)
}

fn intention_world_id(proc: Procedure, goal: &WorldId) -> WorldId {
    let suffix = if goal.0 == "g" {
        String::new()
    } else if let Some(rest) = goal.0.strip_prefix("g_") {
        format!("_{rest}")
    } else {
        format!("_{}", goal.0)
    };
    WorldId::new(format!("i_{}{}", proc.name(), suffix))
}

/// Scores every policy, keeps all best ones, and prunes each goal world
/// to the arcs those policies actually traverse (preserving the past of
/// the designated time point). The pruned worlds become the
/// intention-accessible worlds of a new interpretation, both as the
/// current relation and tagged with the procedure.
pub fn pw_deliberate(
    m: &Interpretation,
    proc: Procedure,
) -> Result<Interpretation, DeliberateError> {
    let ctx = PolicyContext::new(m)?;
    let mut scored = Vec::new();
    for policy in ctx.enumerate()? {
        let score = ctx.score(&policy, proc)?;
        scored.push(ScoredPolicy { policy, score });
    }
    let best = scored
        .iter()
        .map(|sp| sp.score)
        .fold(f64::NEG_INFINITY, f64::max);
    let kept: Vec<&ScoredPolicy> = scored
        .iter()
        .filter(|sp| sp.score >= best - TOLERANCE)
        .collect();

    let mut result = m.clone();
    let mut intention_ids = BTreeSet::new();
    for goal in ctx.weights.keys() {
        let world = m.world(goal)?;
        let id = intention_world_id(proc, goal);
        let mut pruned = prune_world(world, id.clone(), &ctx, goal, &kept)?;
        pruned.id = id.clone();
        intention_ids.insert(id.clone());
        result.worlds.insert(id, pruned);
    }

    let mut relation = BTreeMap::new();
    relation.insert(ctx.designated.clone(), intention_ids);
    result.intention = relation.clone();
    result.intention_tagged.insert(proc, relation);
    result.events = result
        .worlds
        .values()
        .flat_map(|w| w.arcs.iter().map(|a| a.event.clone()))
        .collect();
    Ok(result)
}

fn prune_world(
    world: &TimeTreeWorld,
    id: WorldId,
    ctx: &PolicyContext,
    goal: &WorldId,
    kept: &[&ScoredPolicy],
) -> Result<TimeTreeWorld, DeliberateError> {
    let mut points: BTreeSet<PointId> = BTreeSet::new();
    let mut arcs: BTreeSet<(PointId, PointId, String)> = BTreeSet::new();

    // The past of the designated time point survives pruning.
    points.insert(ctx.designated.time.clone());
    let mut cursor = ctx.designated.time.clone();
    while let Some(arc) = world.parent_arc(&cursor) {
        points.insert(arc.from.clone());
        arcs.insert((arc.from.clone(), arc.to.clone(), arc.event.clone()));
        cursor = arc.from.clone();
    }

    for sp in kept {
        let path = ctx.induced_path(goal, &sp.policy)?;
        for window in path.windows(2) {
            let arc = world
                .children(&window[0])
                .into_iter()
                .find(|a| a.to == window[1])
                .expect("induced paths follow arcs");
            arcs.insert((arc.from.clone(), arc.to.clone(), arc.event.clone()));
        }
        points.extend(path);
    }

    let mut pruned = TimeTreeWorld::new(id.0);
    pruned.points = points;
    pruned.arcs = arcs
        .into_iter()
        .map(|(from, to, event)| WorldArc { from, to, event })
        .collect();
    for (point, props) in &world.valuation {
        if pruned.points.contains(point) && !props.is_empty() {
            pruned.valuation.insert(point.clone(), props.clone());
        }
    }
    for (point, payoff) in &world.leaf_payoff {
        if pruned.points.contains(point) {
            pruned.leaf_payoff.insert(point.clone(), *payoff);
        }
    }
    Ok(pruned)
}
