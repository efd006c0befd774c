//! Seeded random decision trees for the verification harness, kept small
//! enough that exhaustive policy enumeration stays fast: at most two
//! chance variables with up to three states, at most two decision points
//! per path, probabilities from a fixed grid normalized per row, and
//! integer payoffs in 0..=1000.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use std::collections::BTreeMap;

use crate::dtree::{
    ChanceArc, ChanceVariable, DecisionTree, EventArc, NodeId, NodeKind, TableRow,
};

/// Which restrictions the generated tree obeys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeClass {
    /// Variables may label several chance nodes (never twice on a path).
    Maxexpval,
    /// Every chance variable occurs at exactly one chance node.
    MaximinRestricted,
}

impl std::str::FromStr for TreeClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "maxexpval" => Ok(TreeClass::Maxexpval),
            "maximin-restricted" => Ok(TreeClass::MaximinRestricted),
            other => Err(format!("unknown tree class `{other}`")),
        }
    }
}

const MAX_DEPTH: usize = 4;
const MAX_DECISIONS_PER_PATH: usize = 2;

struct Generator {
    rng: ChaCha8Rng,
    class: TreeClass,
    tree: DecisionTree,
    next_node: usize,
    used_anywhere: Vec<bool>,
}

/// A random valid decision tree. The same seed and class always produce
/// the same tree, and every declared variable occurs on some path.
pub fn random_tree(seed: u64, class: TreeClass) -> DecisionTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let variables = random_variables(&mut rng);
    let mut generator = Generator {
        rng,
        class,
        tree: DecisionTree {
            nodes: BTreeMap::new(),
            event_arcs: Vec::new(),
            chance_arcs: Vec::new(),
            payoffs: BTreeMap::new(),
            root: NodeId::new("n0"),
            variables,
        },
        next_node: 0,
        used_anywhere: Vec::new(),
    };
    generator.used_anywhere = vec![false; generator.tree.variables.len()];

    let mut must_use: Vec<usize> = (0..generator.tree.variables.len()).collect();
    let root = generator.decision(0, &BTreeMap::new(), 1, &mut must_use, true);
    generator.tree.root = root;
    debug_assert_eq!(crate::dtree::validate(&generator.tree), Vec::new());
    generator.tree
}

fn random_variables(rng: &mut ChaCha8Rng) -> Vec<ChanceVariable> {
    let count = rng.random_range(1..=2usize);
    let mut variables = Vec::new();
    for vi in 0..count {
        let name = format!("v{}", vi + 1);
        let state_count = rng.random_range(2..=3usize);
        let states: Vec<String> = (0..state_count)
            .map(|si| format!("{name}s{}", si + 1))
            .collect();
        // The second variable is conditioned on the first half the time.
        let parents: Vec<usize> = if vi > 0 && rng.random_bool(0.5) {
            vec![vi - 1]
        } else {
            Vec::new()
        };
        let mut rows = Vec::new();
        let parent_rows: Vec<BTreeMap<String, String>> = if parents.is_empty() {
            vec![BTreeMap::new()]
        } else {
            let parent = &variables[parents[0]];
            let parent: &ChanceVariable = parent;
            parent
                .states
                .iter()
                .map(|s| BTreeMap::from([(parent.name.clone(), s.clone())]))
                .collect()
        };
        for given in parent_rows {
            rows.push(TableRow {
                given,
                probs: grid_row(rng, &states),
            });
        }
        variables.push(ChanceVariable {
            name,
            states,
            table: rows,
        });
    }
    variables
}

/// A distribution from the {0.1, ..., 0.9} grid, normalized.
fn grid_row(rng: &mut ChaCha8Rng, states: &[String]) -> BTreeMap<String, f64> {
    let raw: Vec<f64> = states
        .iter()
        .map(|_| rng.random_range(1..=9u32) as f64 / 10.0)
        .collect();
    let total: f64 = raw.iter().sum();
    states
        .iter()
        .zip(raw)
        .map(|(s, w)| (s.clone(), w / total))
        .collect()
}

impl Generator {
    fn fresh(&mut self, kind: NodeKind) -> NodeId {
        let id = NodeId::new(format!("n{}", self.next_node));
        self.next_node += 1;
        self.tree.nodes.insert(id.clone(), kind);
        id
    }

    fn terminal(&mut self) -> NodeId {
        let id = self.fresh(NodeKind::Terminal);
        let payoff = self.rng.random_range(0..=1000u32) as f64;
        self.tree.payoffs.insert(id.clone(), payoff);
        id
    }

    fn decision(
        &mut self,
        depth: usize,
        resolved: &BTreeMap<String, String>,
        decisions_on_path: usize,
        must_use: &mut Vec<usize>,
        force_two: bool,
    ) -> NodeId {
        let id = self.fresh(NodeKind::Decision);
        let arcs = if force_two {
            2
        } else {
            self.rng.random_range(1..=2usize)
        };
        for (slot, event) in ["a", "b"].iter().take(arcs).enumerate() {
            let force_var = if slot == 0 { must_use.pop() } else { None };
            let child = self.decision_child(
                depth + 1,
                resolved,
                decisions_on_path,
                must_use,
                force_var,
            );
            self.tree.event_arcs.push(EventArc {
                from: id.clone(),
                to: child,
                event: (*event).to_string(),
            });
        }
        id
    }

    fn usable_variable(&mut self, resolved: &BTreeMap<String, String>) -> Option<usize> {
        let candidates: Vec<usize> = (0..self.tree.variables.len())
            .filter(|vi| {
                let var = &self.tree.variables[*vi];
                let unresolved = !resolved.contains_key(&var.name);
                match self.class {
                    TreeClass::Maxexpval => unresolved,
                    TreeClass::MaximinRestricted => unresolved && !self.used_anywhere[*vi],
                }
            })
            .collect();
        if candidates.is_empty() {
            None
        } else {
            let idx = self.rng.random_range(0..candidates.len());
            Some(candidates[idx])
        }
    }

    fn decision_child(
        &mut self,
        depth: usize,
        resolved: &BTreeMap<String, String>,
        decisions_on_path: usize,
        must_use: &mut Vec<usize>,
        force_var: Option<usize>,
    ) -> NodeId {
        if depth >= MAX_DEPTH {
            return self.terminal();
        }
        let var = match force_var {
            Some(vi) => Some(vi),
            None => {
                if self.rng.random_bool(0.6) {
                    self.usable_variable(resolved)
                } else {
                    None
                }
            }
        };
        match var {
            Some(vi) => self.chance(vi, depth, resolved, decisions_on_path, must_use),
            None => {
                // Occasionally chain a second decision instead of ending.
                if decisions_on_path < MAX_DECISIONS_PER_PATH && self.rng.random_bool(0.15) {
                    self.decision(depth, resolved, decisions_on_path + 1, must_use, false)
                } else {
                    self.terminal()
                }
            }
        }
    }

    fn chance(
        &mut self,
        vi: usize,
        depth: usize,
        resolved: &BTreeMap<String, String>,
        decisions_on_path: usize,
        must_use: &mut Vec<usize>,
    ) -> NodeId {
        self.used_anywhere[vi] = true;
        let id = self.fresh(NodeKind::Chance);
        let (name, states) = {
            let var = &self.tree.variables[vi];
            (var.name.clone(), var.states.clone())
        };
        for state in &states {
            let prob = self
                .tree
                .conditional_given(resolved, &name, state)
                .expect("generated contexts have positive probability");
            let mut extended = resolved.clone();
            extended.insert(name.clone(), state.clone());
            let target = if depth < MAX_DEPTH && decisions_on_path < MAX_DECISIONS_PER_PATH {
                self.decision(depth + 1, &extended, decisions_on_path + 1, must_use, false)
            } else {
                self.terminal()
            };
            let label = if resolved.is_empty() {
                format!("P({state})")
            } else {
                let context: Vec<&str> = resolved.values().map(String::as_str).collect();
                format!("P({state}|{})", context.join(","))
            };
            self.tree.chance_arcs.push(ChanceArc {
                from: id.clone(),
                to: target,
                state: state.clone(),
                prob_label: label,
                prob,
            });
        }
        id
    }
}

/// The same tree shape with freshly drawn chance tables; arc
/// probabilities are recomputed so the result stays chain-consistent.
pub fn with_perturbed_probabilities(dt: &DecisionTree, seed: u64) -> DecisionTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perturbed = dt.clone();
    for var in &mut perturbed.variables {
        for row in &mut var.table {
            row.probs = grid_row(&mut rng, &var.states);
        }
    }
    let arcs = perturbed.chance_arcs.clone();
    perturbed.chance_arcs = arcs
        .into_iter()
        .map(|mut arc| {
            let resolved = perturbed.resolved_on_path(&arc.from);
            let var = perturbed
                .node_variable(&arc.from)
                .expect("chance nodes keep their variable")
                .name
                .clone();
            arc.prob = perturbed
                .conditional_given(&resolved, &var, &arc.state)
                .expect("perturbed contexts have positive probability");
            arc
        })
        .collect();
    perturbed
}

/// The same tree with every payoff mapped through `f`.
pub fn with_transformed_payoffs(dt: &DecisionTree, f: impl Fn(f64) -> f64) -> DecisionTree {
    let mut transformed = dt.clone();
    for payoff in transformed.payoffs.values_mut() {
        *payoff = f(*payoff);
    }
    transformed
}
