//! Possible-worlds side of the toolkit: time-tree worlds, interpretations
//! with accessibility relations and probability/payoff assignments, the
//! sub-world relation, semantic conditions, and the satisfaction engine.

mod conditions;
mod io;
mod model;
mod semantics;

pub use conditions::{
    check_conditions, check_conditions_with, ConditionOutcome, ConditionReport, SubworldDirection,
};
pub use io::{
    interpretation_from_str, interpretation_to_string, load_interpretation, store_interpretation,
    LoadError,
};
pub use model::{
    AccessMap, Fullpath, Interpretation, ModelError, PointId, Situation, TimeTreeWorld, WorldArc,
    WorldId, WorldViolation, TOLERANCE,
};
pub use semantics::{holds_path, holds_state, payoff_range, prob_measure};

pub(crate) use io::is_identifier;
