//! Shared test support: the canonical fixture, a seeded formula fuzzer,
//! random small models, a reference evaluator for desugaring soundness,
//! and a literal split-per-state implementation of the decision-tree
//! transformation used as an oracle.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bdikit::dtree::{load_dtree, DecisionTree, NodeId, NodeKind};
use bdikit::logic::{
    desugar, desugar_path, Comparator, EventExpr, Modality, PathFormula, PathQuantifier,
    PayoffConstraint, ProbConstraint, ProbTerm, Procedure, StateFormula,
};
use bdikit::transform::{transform, BeliefExtras};
use bdikit::worlds::{
    holds_path, holds_state, payoff_range, prob_measure, Fullpath, Interpretation, PointId,
    Situation, TimeTreeWorld, WorldArc, WorldId, TOLERANCE,
};

pub const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/phil.dtree");
pub const EXTRAS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/phil.extras.json");

pub fn fixture_tree() -> DecisionTree {
    load_dtree(FIXTURE).expect("fixture must load")
}

pub fn fixture_extras() -> BeliefExtras {
    BeliefExtras::load(EXTRAS).expect("extras must load")
}

pub fn fixture_model() -> Interpretation {
    transform(&fixture_tree(), Some(&fixture_extras()))
        .expect("transform must succeed")
        .interpretation
}

/// The fixture model with the designated situation's accessibility and
/// distribution replicated at every world's root situation, so formulas
/// with modal operators over constraint atoms stay evaluable after the
/// world shift. (All belief worlds share the same distribution anyway.)
pub fn enriched_fixture_model() -> Interpretation {
    let mut m = fixture_model();
    let designated = m.designated.clone();
    let belief = m.belief[&designated].clone();
    let goal = m.goal[&designated].clone();
    let dist = m.prob[&designated].clone();
    let ids: Vec<WorldId> = m.worlds.keys().cloned().collect();
    for world in ids {
        let situation = Situation {
            world,
            time: designated.time.clone(),
        };
        m.belief.insert(situation.clone(), belief.clone());
        m.goal.insert(situation.clone(), goal.clone());
        m.prob.insert(situation, dist.clone());
    }
    m
}

// ── Formula fuzzer ─────────────────────────────────────────────────────

const PROPS: &[&str] = &["p", "q", "r", "yes", "no", "win", "loss"];
const EVENTS: &[&str] = &["Poll", "Sen", "Rep", "Ret", "a", "b"];
const COEFFS: &[f64] = &[1.0, 2.0, -1.5, 0.25, -3.0, 0.5];
const BOUNDS: &[f64] = &[0.0, 0.42, 1.0, -2.5, 100.0, 0.5];
const COMPARATORS: &[Comparator] = &[
    Comparator::Ge,
    Comparator::Gt,
    Comparator::Le,
    Comparator::Lt,
    Comparator::Eq,
];

/// Structural formula fuzzer. Generated trees honor the parser's
/// normal forms (left-associated sequences, state-folded path
/// connectives), so `parse(render(f)) == f`.
pub struct AstGen {
    rng: ChaCha8Rng,
    pub conditions: bool,
}

impl AstGen {
    pub fn new(seed: u64) -> Self {
        AstGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            conditions: true,
        }
    }

    pub fn without_conditions(seed: u64) -> Self {
        AstGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            conditions: false,
        }
    }

    fn pick<'a, T>(&mut self, pool: &'a [T]) -> &'a T {
        &pool[self.rng.random_range(0..pool.len())]
    }

    pub fn state(&mut self, depth: usize) -> StateFormula {
        if depth == 0 {
            return match self.rng.random_range(0..4u32) {
                0 => StateFormula::True,
                1 => StateFormula::False,
                _ => StateFormula::prop(*self.pick(PROPS)),
            };
        }
        match self.rng.random_range(0..11u32) {
            0 => StateFormula::prop(*self.pick(PROPS)),
            1 => self.state(depth - 1).not(),
            2 => self.state(depth - 1).and(self.state(depth - 1)),
            3 => self.state(depth - 1).or(self.state(depth - 1)),
            4 => self.state(depth - 1).implies(self.state(depth - 1)),
            5 => self.state(depth - 1).bel(),
            6 => self.state(depth - 1).goal(),
            7 => {
                let proc = match self.rng.random_range(0..3u32) {
                    0 => None,
                    1 => Some(Procedure::Maximin),
                    _ => Some(Procedure::Maxexpval),
                };
                self.state(depth - 1).intend(proc)
            }
            8 => {
                let path = self.path(depth - 1);
                if self.rng.random_bool(0.5) {
                    StateFormula::optional(path)
                } else {
                    StateFormula::inevitable(path)
                }
            }
            9 => StateFormula::Prob(self.prob_constraint(depth - 1)),
            _ => StateFormula::Payoff(PayoffConstraint {
                formula: self.path(depth - 1),
                cmp: *self.pick(COMPARATORS),
                bound: *self.pick(BOUNDS),
            }),
        }
    }

    pub fn path(&mut self, depth: usize) -> PathFormula {
        if depth == 0 {
            return if self.rng.random_bool(0.5) {
                PathFormula::state(self.state(0))
            } else {
                PathFormula::done(EventExpr::primitive(*self.pick(EVENTS)))
            };
        }
        match self.rng.random_range(0..7u32) {
            0 => PathFormula::state(self.state(depth - 1)),
            1 => PathFormula::done(self.event(depth - 1)),
            2 => self.path(depth - 1).not(),
            3 => self.path(depth - 1).and(self.path(depth - 1)),
            4 => self.path(depth - 1).or(self.path(depth - 1)),
            5 => self.path(depth - 1).eventually(),
            _ => self.path(depth - 1).always(),
        }
    }

    pub fn event(&mut self, depth: usize) -> EventExpr {
        if depth == 0 {
            return EventExpr::primitive(*self.pick(EVENTS));
        }
        match self.rng.random_range(0..3u32) {
            0 => EventExpr::primitive(*self.pick(EVENTS)),
            1 => EventExpr::test(self.state(depth.min(2) - 1)),
            _ => {
                let len = self.rng.random_range(2..=3usize);
                let mut expr = self.event(0);
                for _ in 1..len {
                    let next = if self.rng.random_bool(0.3) {
                        self.event(depth - 1)
                    } else {
                        self.event(0)
                    };
                    expr = expr.then(next).normalize();
                }
                expr
            }
        }
    }

    /// A state formula whose modal and constraint operators never sit
    /// under a temporal operator, so every probability or accessibility
    /// lookup happens at the evaluation situation's own time point.
    /// Suitable for models that carry distributions only at their roots.
    pub fn situation_closed_state(&mut self, depth: usize) -> StateFormula {
        if depth == 0 {
            return self.state(0);
        }
        match self.rng.random_range(0..11u32) {
            0 => StateFormula::prop(*self.pick(PROPS)),
            1 => self.situation_closed_state(depth - 1).not(),
            2 => self
                .situation_closed_state(depth - 1)
                .and(self.situation_closed_state(depth - 1)),
            3 => self
                .situation_closed_state(depth - 1)
                .or(self.situation_closed_state(depth - 1)),
            4 => self
                .situation_closed_state(depth - 1)
                .implies(self.situation_closed_state(depth - 1)),
            5 => self.situation_closed_state(depth - 1).bel(),
            6 => self.situation_closed_state(depth - 1).goal(),
            7 => self.situation_closed_state(depth - 1).intend(None),
            8 => {
                let path = self.propositional_path(depth - 1);
                if self.rng.random_bool(0.5) {
                    StateFormula::optional(path)
                } else {
                    StateFormula::inevitable(path)
                }
            }
            9 => {
                let count = self.rng.random_range(1..=2usize);
                let terms = (0..count)
                    .map(|_| ProbTerm {
                        coeff: *self.pick(COEFFS),
                        formula: self.situation_closed_state(depth - 1),
                        condition: None,
                    })
                    .collect();
                StateFormula::Prob(ProbConstraint {
                    terms,
                    cmp: *self.pick(COMPARATORS),
                    bound: *self.pick(BOUNDS),
                })
            }
            _ => StateFormula::Payoff(PayoffConstraint {
                formula: self.propositional_path(depth - 1),
                cmp: *self.pick(COMPARATORS),
                bound: *self.pick(BOUNDS),
            }),
        }
    }

    /// Path formulas over propositional state atoms and primitive-event
    /// `done`, evaluable at any point of any world.
    pub fn propositional_path(&mut self, depth: usize) -> PathFormula {
        if depth == 0 {
            return if self.rng.random_bool(0.5) {
                PathFormula::state(self.state(0))
            } else {
                PathFormula::done(EventExpr::primitive(*self.pick(EVENTS)))
            };
        }
        match self.rng.random_range(0..7u32) {
            0 => PathFormula::state(self.propositional_state(depth - 1)),
            1 => {
                let mut expr = EventExpr::primitive(*self.pick(EVENTS));
                for _ in 0..self.rng.random_range(0..=2usize) {
                    let next = if self.rng.random_bool(0.4) {
                        EventExpr::test(self.propositional_state(1))
                    } else {
                        EventExpr::primitive(*self.pick(EVENTS))
                    };
                    expr = expr.then(next);
                }
                PathFormula::done(expr)
            }
            2 => self.propositional_path(depth - 1).not(),
            3 => self
                .propositional_path(depth - 1)
                .and(self.propositional_path(depth - 1)),
            4 => self
                .propositional_path(depth - 1)
                .or(self.propositional_path(depth - 1)),
            5 => self.propositional_path(depth - 1).eventually(),
            _ => self.propositional_path(depth - 1).always(),
        }
    }

    fn propositional_state(&mut self, depth: usize) -> StateFormula {
        if depth == 0 {
            return self.state(0);
        }
        match self.rng.random_range(0..5u32) {
            0 => StateFormula::prop(*self.pick(PROPS)),
            1 => self.propositional_state(depth - 1).not(),
            2 => self
                .propositional_state(depth - 1)
                .and(self.propositional_state(depth - 1)),
            3 => self
                .propositional_state(depth - 1)
                .or(self.propositional_state(depth - 1)),
            _ => self
                .propositional_state(depth - 1)
                .implies(self.propositional_state(depth - 1)),
        }
    }

    fn prob_constraint(&mut self, depth: usize) -> ProbConstraint {
        let conditional = self.conditions && self.rng.random_bool(0.3);
        if conditional {
            // Conditional terms only appear alone with coefficient one.
            return ProbConstraint {
                terms: vec![ProbTerm {
                    coeff: 1.0,
                    formula: self.state(depth),
                    condition: Some(self.state(depth)),
                }],
                cmp: *self.pick(COMPARATORS),
                bound: *self.pick(BOUNDS),
            };
        }
        let count = self.rng.random_range(1..=3usize);
        let terms = (0..count)
            .map(|_| ProbTerm {
                coeff: *self.pick(COEFFS),
                formula: self.state(depth),
                condition: None,
            })
            .collect();
        ProbConstraint {
            terms,
            cmp: *self.pick(COMPARATORS),
            bound: *self.pick(BOUNDS),
        }
    }
}

// ── Random small models ────────────────────────────────────────────────

/// A small interpretation whose worlds share one tree skeleton (so every
/// situation is evaluable in every world), with a common distribution at
/// every situation and fixed accessibility sets.
pub fn random_model(seed: u64) -> Interpretation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(17));

    // Shared skeleton.
    let mut points = vec!["s0".to_string()];
    let mut arcs: Vec<(String, String, String)> = Vec::new();
    let mut frontier = vec!["s0".to_string()];
    for level in 0..rng.random_range(1..=3usize) {
        let mut next = Vec::new();
        for point in &frontier {
            for branch in 0..rng.random_range(1..=2usize) {
                let child = format!("{point}_{level}{branch}");
                let event = EVENTS[rng.random_range(0..EVENTS.len())].to_string();
                // One event label per point.
                if arcs.iter().any(|(f, _, e)| f == point && *e == event) {
                    continue;
                }
                arcs.push((point.clone(), child.clone(), event));
                points.push(child.clone());
                next.push(child);
            }
        }
        frontier = next;
    }

    let world_count = rng.random_range(1..=3usize);
    let mut worlds = BTreeMap::new();
    for wi in 0..world_count {
        let mut world = TimeTreeWorld::new(format!("w{wi}"));
        for point in &points {
            world.points.insert(PointId::new(point.clone()));
            let mut props = BTreeSet::new();
            for prop in PROPS {
                if rng.random_bool(0.25) {
                    props.insert((*prop).to_string());
                }
            }
            if !props.is_empty() {
                world.valuation.insert(PointId::new(point.clone()), props);
            }
        }
        for (from, to, event) in &arcs {
            world.arcs.push(WorldArc {
                from: PointId::new(from.clone()),
                to: PointId::new(to.clone()),
                event: event.clone(),
            });
        }
        for point in &points {
            let id = PointId::new(point.clone());
            if world.is_leaf(&id) && rng.random_bool(0.7) {
                world
                    .leaf_payoff
                    .insert(id, rng.random_range(0..=10u32) as f64 * 50.0);
            }
        }
        assert_eq!(world.validate(), Vec::new());
        worlds.insert(world.id.clone(), world);
    }

    let ids: Vec<WorldId> = worlds.keys().cloned().collect();
    let all: BTreeSet<WorldId> = ids.iter().cloned().collect();
    let mut goal = BTreeSet::new();
    for id in &ids {
        if rng.random_bool(0.6) {
            goal.insert(id.clone());
        }
    }
    if goal.is_empty() {
        goal.insert(ids[0].clone());
    }
    let mut intention = BTreeSet::new();
    for id in &ids {
        if rng.random_bool(0.4) {
            intention.insert(id.clone());
        }
    }

    let raw: Vec<f64> = ids
        .iter()
        .map(|_| rng.random_range(1..=9u32) as f64)
        .collect();
    let total: f64 = raw.iter().sum();
    let dist: BTreeMap<WorldId, f64> = ids
        .iter()
        .zip(raw)
        .map(|(id, w)| (id.clone(), w / total))
        .collect();

    let mut belief = BTreeMap::new();
    let mut goal_map = BTreeMap::new();
    let mut intention_map = BTreeMap::new();
    let mut prob = BTreeMap::new();
    for world in ids.iter() {
        for point in &points {
            let situation = Situation {
                world: world.clone(),
                time: PointId::new(point.clone()),
            };
            belief.insert(situation.clone(), all.clone());
            goal_map.insert(situation.clone(), goal.clone());
            intention_map.insert(situation.clone(), intention.clone());
            prob.insert(situation, dist.clone());
        }
    }

    let events = arcs.iter().map(|(_, _, e)| e.clone()).collect();
    Interpretation {
        worlds,
        events,
        belief,
        goal: goal_map,
        intention: intention_map,
        intention_tagged: BTreeMap::new(),
        prob,
        designated: Situation::new("w0", "s0"),
    }
}

// ── Reference evaluation of sugared formulas ───────────────────────────

/// Evaluates a possibly sugared formula by combining core evaluations at
/// the boolean level: implication, `INEVITABLE`, `[]`, and the derived
/// comparators are computed from their defining equivalences rather than
/// rewritten first. Agreement with `holds_state(desugar(f))` is the
/// desugaring soundness check.
pub fn reference_holds(m: &Interpretation, s: &Situation, f: &StateFormula) -> bool {
    match f {
        StateFormula::True => true,
        StateFormula::False => false,
        StateFormula::Prop(_) => holds_state(m, s, f).expect("atom evaluation"),
        StateFormula::Not(inner) => !reference_holds(m, s, inner),
        StateFormula::And(a, b) => reference_holds(m, s, a) && reference_holds(m, s, b),
        StateFormula::Or(a, b) => reference_holds(m, s, a) || reference_holds(m, s, b),
        StateFormula::Implies(a, b) => !reference_holds(m, s, a) || reference_holds(m, s, b),
        StateFormula::Modal(modality, inner) => {
            let accessible = match modality {
                Modality::Bel => m.belief_at(s),
                Modality::Goal => m.goal_at(s),
                Modality::Intend(None) => m.intention_at(s),
                Modality::Intend(Some(proc)) => m.intention_tagged_at(*proc, s),
            };
            accessible.iter().all(|w| {
                let shifted = Situation {
                    world: w.clone(),
                    time: s.time.clone(),
                };
                reference_holds(m, &shifted, inner)
            })
        }
        StateFormula::Quant(q, path) => {
            let world = m.world(&s.world).expect("situation world");
            let paths = world.fullpaths(&s.time).expect("situation point");
            match q {
                PathQuantifier::Optional => paths
                    .iter()
                    .any(|p| reference_path(m, p, 0, path)),
                PathQuantifier::Inevitable => paths
                    .iter()
                    .all(|p| reference_path(m, p, 0, path)),
            }
        }
        StateFormula::Prob(c) => {
            let mut lhs = 0.0;
            for term in &c.terms {
                assert!(term.condition.is_none(), "fuzzer omits conditional terms");
                lhs += term.coeff
                    * prob_measure(m, s, &desugar(&term.formula)).expect("measure evaluation");
            }
            reference_compare(lhs, c.cmp, c.bound)
        }
        StateFormula::Payoff(c) => {
            let range = payoff_range(m, s, &desugar_path(&c.formula)).expect("payoff evaluation");
            match range {
                None => matches!(c.cmp, Comparator::Ge | Comparator::Gt),
                Some((lo, _)) => reference_compare(lo, c.cmp, c.bound),
            }
        }
    }
}

/// The derived comparators are defined through `>=`, `>`, and negation.
fn reference_compare(lhs: f64, cmp: Comparator, bound: f64) -> bool {
    let ge = lhs >= bound - TOLERANCE;
    let gt = lhs > bound + TOLERANCE;
    match cmp {
        Comparator::Ge => ge,
        Comparator::Gt => gt,
        Comparator::Le => !gt,
        Comparator::Lt => !ge,
        Comparator::Eq => ge && !gt,
    }
}

fn reference_path(m: &Interpretation, path: &Fullpath, idx: usize, f: &PathFormula) -> bool {
    match f {
        PathFormula::State(inner) => {
            let s = Situation {
                world: path.world.clone(),
                time: path.points[idx].clone(),
            };
            reference_holds(m, &s, inner)
        }
        PathFormula::Done(e) => {
            let suffix = Fullpath {
                world: path.world.clone(),
                points: path.points[idx..].to_vec(),
            };
            let core = desugar_path(&PathFormula::Done(e.clone()));
            holds_path(m, &suffix, &core).expect("done evaluation")
        }
        PathFormula::Not(inner) => !reference_path(m, path, idx, inner),
        PathFormula::And(a, b) => {
            reference_path(m, path, idx, a) && reference_path(m, path, idx, b)
        }
        PathFormula::Or(a, b) => reference_path(m, path, idx, a) || reference_path(m, path, idx, b),
        PathFormula::Eventually(inner) => {
            (idx..path.points.len()).any(|k| reference_path(m, path, k, inner))
        }
        PathFormula::Always(inner) => {
            (idx..path.points.len()).all(|k| reference_path(m, path, k, inner))
        }
    }
}

// ── Literal split-per-state transformation oracle ──────────────────────

/// A world produced by the literal transformation, compared structurally.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LiteralWorld {
    pub points: BTreeSet<String>,
    pub arcs: BTreeSet<(String, String, String)>,
    pub payoffs: Vec<(String, String)>,
}

/// Literal implementation of the create/remove recursion, for trees
/// whose chance variables each occur at exactly one chance node: starting
/// with probability one, repeatedly pick a reachable chance node, split
/// the tree per state, bypass the node, and multiply the branch
/// probability in. Chanceless trees become worlds by renaming.
pub fn literal_fig2(dt: &DecisionTree) -> Vec<(LiteralWorld, f64)> {
    #[derive(Clone)]
    struct WorkTree {
        nodes: BTreeMap<NodeId, NodeKind>,
        event_arcs: Vec<(NodeId, NodeId, String)>,
        chance_arcs: Vec<(NodeId, NodeId, String, f64)>,
        root: NodeId,
    }

    fn reachable_chance(t: &WorkTree) -> Option<NodeId> {
        let mut stack = vec![t.root.clone()];
        let mut seen = BTreeSet::new();
        while let Some(node) = stack.pop() {
            if !seen.insert(node.clone()) {
                continue;
            }
            if matches!(t.nodes.get(&node), Some(NodeKind::Chance)) {
                return Some(node);
            }
            for (from, to, _) in &t.event_arcs {
                if *from == node {
                    stack.push(to.clone());
                }
            }
            for (from, to, _, _) in &t.chance_arcs {
                if *from == node {
                    stack.push(to.clone());
                }
            }
        }
        None
    }

    fn split(t: &WorkTree, p: f64, out: &mut Vec<(WorkTree, f64)>) {
        let Some(chance) = reachable_chance(t) else {
            out.push((t.clone(), p));
            return;
        };
        let arcs: Vec<(NodeId, String, f64)> = t
            .chance_arcs
            .iter()
            .filter(|(from, _, _, _)| *from == chance)
            .map(|(_, to, state, prob)| (to.clone(), state.clone(), *prob))
            .collect();
        for (successor, _, prob) in arcs {
            let mut removed = t.clone();
            removed.nodes.remove(&chance);
            removed.chance_arcs.retain(|(from, _, _, _)| *from != chance);
            if removed.root == chance {
                // A chance root has no incident arc; its successor takes
                // over as the root.
                removed.root = successor.clone();
            } else {
                for arc in &mut removed.event_arcs {
                    if arc.1 == chance {
                        arc.1 = successor.clone();
                    }
                }
                for arc in &mut removed.chance_arcs {
                    if arc.1 == chance {
                        arc.1 = successor.clone();
                    }
                }
            }
            split(&removed, p * prob, out);
        }
    }

    let work = WorkTree {
        nodes: dt.nodes.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        event_arcs: dt
            .event_arcs
            .iter()
            .map(|a| (a.from.clone(), a.to.clone(), a.event.clone()))
            .collect(),
        chance_arcs: dt
            .chance_arcs
            .iter()
            .map(|a| (a.from.clone(), a.to.clone(), a.state.clone(), a.prob))
            .collect(),
        root: dt.root.clone(),
    };
    let mut splits = Vec::new();
    split(&work, 1.0, &mut splits);

    splits
        .iter()
        .map(|(t, p)| {
            // Rename the reachable decision/terminal part into a world.
            let mut points = BTreeSet::new();
            let mut arcs = BTreeSet::new();
            let mut payoffs = Vec::new();
            let mut stack = vec![t.root.clone()];
            while let Some(node) = stack.pop() {
                if !points.insert(node.0.clone()) {
                    continue;
                }
                if let Some(payoff) = dt.payoffs.get(&node) {
                    payoffs.push((node.0.clone(), format!("{payoff}")));
                }
                for (from, to, event) in &t.event_arcs {
                    if *from == node {
                        arcs.insert((from.0.clone(), to.0.clone(), event.clone()));
                        stack.push(to.clone());
                    }
                }
            }
            payoffs.sort();
            (
                LiteralWorld {
                    points,
                    arcs,
                    payoffs,
                },
                *p,
            )
        })
        .collect()
}

/// Canonical form for either construction: structurally identical worlds
/// merged, probabilities summed, sorted.
pub fn canonical_world_set(worlds: Vec<(LiteralWorld, f64)>) -> Vec<(LiteralWorld, f64)> {
    let mut merged: BTreeMap<LiteralWorld, f64> = BTreeMap::new();
    for (world, p) in worlds {
        *merged.entry(world).or_insert(0.0) += p;
    }
    merged.into_iter().collect()
}

/// Projects a resolved time-tree world onto the literal oracle's
/// structural view.
pub fn literal_view(world: &TimeTreeWorld) -> LiteralWorld {
    LiteralWorld {
        points: world.points.iter().map(|p| p.0.clone()).collect(),
        arcs: world
            .arcs
            .iter()
            .map(|a| (a.from.0.clone(), a.to.0.clone(), a.event.clone()))
            .collect(),
        payoffs: {
            let mut payoffs: Vec<(String, String)> = world
                .leaf_payoff
                .iter()
                .map(|(p, v)| (p.0.clone(), format!("{v}")))
                .collect();
            payoffs.sort();
            payoffs
        },
    }
}
