//! # bdikit
//!
//! A toolkit for decision-theoretic agents with beliefs, goals, and
//! intentions over branching time.
//!
//! The library covers the full pipeline from a decision problem to the
//! intentions an agent commits to:
//!
//! * [`logic`]: a branching-time formula language with parser, printer, and
//!   desugaring into the core the evaluator accepts.
//! * [`worlds`]: time-tree worlds, interpretations with belief/goal/
//!   intention accessibility, probability and payoff assignments, the
//!   sub-world relation, semantic condition checks, and the satisfaction
//!   engine for state and path formulas.
//! * [`dtree`]: decision trees with decision, chance, and terminal
//!   nodes, chance variables with chain-consistent conditional tables,
//!   validation, and file I/O.
//! * [`mod@transform`]: turns a decision tree into goal- and
//!   belief-accessible worlds with a probability distribution flowing
//!   back onto the belief worlds.
//! * [`deliberate`]: backward-induction deliberation (`maximin` and
//!   `maxexpval`), policy enumeration over worlds, intention-world
//!   generation, and the formulas an agent comes to intend.
//! * [`dot`]: Graphviz rendering of worlds.
//! * [`gen`]: a seeded random decision-tree generator used by the
//!   verification harness.
//! * [`verify`]: seeded end-to-end trials cross-checking tree
//!   deliberation against policy enumeration and the semantic
//!   conditions.

pub mod deliberate;
pub mod dot;
pub mod dtree;
pub mod gen;
pub mod logic;
pub mod transform;
pub mod verify;
pub mod worlds;

pub use deliberate::{
    check_theorem1, delta, intention_formulas, pw_deliberate, value, DeliberationOutcome, Plan,
    Policy, Procedure, Step,
};
pub use dtree::DecisionTree;
pub use logic::{
    desugar, parse_path_formula, parse_state_formula, rewrite_conditional, EventExpr, PathFormula,
    ProbConstraint, StateFormula,
};
pub use transform::{enumerate_assignments, resolve, transform, BeliefExtras, TransformResult};
pub use worlds::{
    check_conditions, ConditionReport, Fullpath, Interpretation, Situation, TimeTreeWorld,
};
