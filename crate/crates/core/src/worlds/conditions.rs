//! The four semantic conditions a well-formed agent model satisfies:
//! shared probability distributions across belief worlds (C1), total
//! probability one (C2), and strong realism between belief/goal worlds
//! (C3) and goal/intention worlds (C4).

use std::collections::BTreeMap;

use super::model::{Interpretation, ModelError, Situation, WorldId, TOLERANCE};

/// One condition's outcome; it passes exactly when no offender was found.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConditionOutcome {
    pub offenders: Vec<String>,
}

impl ConditionOutcome {
    pub fn pass(&self) -> bool {
        self.offenders.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub c1: ConditionOutcome,
    pub c2: ConditionOutcome,
    pub c3: ConditionOutcome,
    pub c4: ConditionOutcome,
}

impl ConditionReport {
    pub fn pass(&self) -> bool {
        self.c1.pass() && self.c2.pass() && self.c3.pass() && self.c4.pass()
    }

    /// C1 through C3 only, for models whose intention relation has not
    /// been populated yet.
    pub fn pass_through_c3(&self) -> bool {
        self.c1.pass() && self.c2.pass() && self.c3.pass()
    }
}

/// Direction of the second strong-realism conjunct.
///
/// `Nested` reads C3 as: every belief world has a goal-accessible
/// sub-world, and every goal world is a sub-world of some belief world,
/// so goal worlds sit inside belief worlds. `Mutual` keeps the first
/// conjunct and reverses the second: every goal world must itself have a
/// belief-accessible sub-world.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SubworldDirection {
    #[default]
    Nested,
    Mutual,
}

/// Checks C1 to C4 at a situation under the nested reading.
pub fn check_conditions(m: &Interpretation, s: &Situation) -> Result<ConditionReport, ModelError> {
    check_conditions_with(m, s, SubworldDirection::Nested)
}

pub fn check_conditions_with(
    m: &Interpretation,
    s: &Situation,
    direction: SubworldDirection,
) -> Result<ConditionReport, ModelError> {
    m.check_situation(s)?;
    Ok(ConditionReport {
        c1: check_c1(m, s),
        c2: check_c2(m, s),
        c3: realism(m, s, m.belief_at(s), m.goal_at(s), direction),
        c4: realism(m, s, m.goal_at(s), m.intention_at(s), direction),
    })
}

/// C1: every belief-accessible world's own distribution at this time,
/// where one is stored, is identical to the situation's.
fn check_c1(m: &Interpretation, s: &Situation) -> ConditionOutcome {
    let mut outcome = ConditionOutcome::default();
    let mut present: Vec<(Situation, &BTreeMap<WorldId, f64>)> = Vec::new();
    if let Some(dist) = m.prob.get(s) {
        present.push((s.clone(), dist));
    }
    for world in m.belief_at(s) {
        let shifted = Situation {
            world: world.clone(),
            time: s.time.clone(),
        };
        if shifted == *s {
            continue;
        }
        if let Some(dist) = m.prob.get(&shifted) {
            present.push((shifted, dist));
        }
    }
    if let Some((_, reference)) = present.first() {
        for (situation, dist) in &present[1..] {
            if !dist_eq(reference, dist) {
                outcome.offenders.push(format!(
                    "{situation}: distribution differs from the one at {s}"
                ));
            }
        }
    }
    outcome
}

fn dist_eq(a: &BTreeMap<WorldId, f64>, b: &BTreeMap<WorldId, f64>) -> bool {
    a.keys()
        .chain(b.keys())
        .all(|k| {
            let x = a.get(k).copied().unwrap_or(0.0);
            let y = b.get(k).copied().unwrap_or(0.0);
            (x - y).abs() <= TOLERANCE
        })
}

/// C2: the weights of the belief-accessible worlds add up to one.
fn check_c2(m: &Interpretation, s: &Situation) -> ConditionOutcome {
    let mut outcome = ConditionOutcome::default();
    match m.prob.get(s) {
        None => outcome
            .offenders
            .push(format!("{s}: no probability distribution stored")),
        Some(dist) => {
            let total: f64 = m
                .belief_at(s)
                .iter()
                .map(|w| dist.get(w).copied().unwrap_or(0.0))
                .sum();
            if (total - 1.0).abs() > TOLERANCE {
                outcome.offenders.push(format!(
                    "{s}: belief-accessible probability mass is {total}, not 1"
                ));
            }
        }
    }
    outcome
}

/// Strong realism between an upper relation (e.g. belief) and a lower one
/// (e.g. goal): every upper world has a lower-accessible sub-world, and,
/// in the nested direction, every lower world is a sub-world of some
/// upper world.
fn realism(
    m: &Interpretation,
    s: &Situation,
    upper: &std::collections::BTreeSet<WorldId>,
    lower: &std::collections::BTreeSet<WorldId>,
    direction: SubworldDirection,
) -> ConditionOutcome {
    let mut outcome = ConditionOutcome::default();
    let sub_of = |a: &WorldId, b: &WorldId| -> bool {
        m.is_subworld(a, b, &s.time).unwrap_or(false)
    };
    for up in upper {
        if !lower.iter().any(|low| sub_of(low, up)) {
            outcome
                .offenders
                .push(format!("{up}: no accessible sub-world"));
        }
    }
    for low in lower {
        let ok = match direction {
            SubworldDirection::Nested => upper.iter().any(|up| sub_of(low, up)),
            SubworldDirection::Mutual => upper.iter().any(|up| sub_of(up, low)),
        };
        if !ok {
            let related = match direction {
                SubworldDirection::Nested => "is a sub-world of no accessible world",
                SubworldDirection::Mutual => "has no accessible sub-world",
            };
            outcome.offenders.push(format!("{low}: {related}"));
        }
    }
    outcome
}
