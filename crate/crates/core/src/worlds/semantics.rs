//! Satisfaction of state and path formulas over an interpretation.
//!
//! The engine accepts only the desugared core (see
//! [`crate::logic::desugar`] and [`crate::logic::normalize`]): no
//! implication, no `INEVITABLE`, no `[]`, comparators `>=`/`>` only, no
//! conditional probability terms.

use crate::logic::{
    Comparator, EventExpr, Modality, PathFormula, PathQuantifier, PayoffConstraint,
    ProbConstraint, StateFormula,
};

use super::model::{
    Fullpath, Interpretation, ModelError, PointId, Situation, TimeTreeWorld, TOLERANCE,
};

/// Truth of a desugared state formula at a situation.
pub fn holds_state(
    m: &Interpretation,
    s: &Situation,
    f: &StateFormula,
) -> Result<bool, ModelError> {
    m.check_situation(s)?;
    match f {
        StateFormula::True => Ok(true),
        StateFormula::False => Ok(false),
        StateFormula::Prop(name) => Ok(m.world(&s.world)?.props(&s.time).contains(name)),
        StateFormula::Not(inner) => Ok(!holds_state(m, s, inner)?),
        StateFormula::And(a, b) => Ok(holds_state(m, s, a)? && holds_state(m, s, b)?),
        StateFormula::Or(a, b) => Ok(holds_state(m, s, a)? || holds_state(m, s, b)?),
        StateFormula::Implies(..) => Err(ModelError::NotDesugared("implication")),
        StateFormula::Quant(PathQuantifier::Inevitable, _) => {
            Err(ModelError::NotDesugared("INEVITABLE"))
        }
        StateFormula::Quant(PathQuantifier::Optional, path) => {
            let world = m.world(&s.world)?;
            for fullpath in world.fullpaths(&s.time)? {
                if holds_at(m, world, &fullpath.points, 0, path)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        StateFormula::Modal(modality, inner) => {
            let accessible = match modality {
                Modality::Bel => m.belief_at(s),
                Modality::Goal => m.goal_at(s),
                Modality::Intend(None) => m.intention_at(s),
                Modality::Intend(Some(proc)) => m.intention_tagged_at(*proc, s),
            };
            for world in accessible {
                let shifted = Situation {
                    world: world.clone(),
                    time: s.time.clone(),
                };
                if !holds_state(m, &shifted, inner)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        StateFormula::Prob(c) => eval_prob(m, s, c),
        StateFormula::Payoff(c) => eval_payoff(m, s, c),
    }
}

/// Truth of a desugared path formula along a fullpath, evaluated at its
/// first point.
pub fn holds_path(
    m: &Interpretation,
    path: &Fullpath,
    f: &PathFormula,
) -> Result<bool, ModelError> {
    let world = m.world(&path.world)?;
    for point in &path.points {
        if !world.contains(point) {
            return Err(ModelError::PointNotInWorld {
                world: world.id.clone(),
                point: point.clone(),
            });
        }
    }
    holds_at(m, world, &path.points, 0, f)
}

fn holds_at(
    m: &Interpretation,
    world: &TimeTreeWorld,
    points: &[PointId],
    idx: usize,
    f: &PathFormula,
) -> Result<bool, ModelError> {
    match f {
        PathFormula::State(inner) => {
            let s = Situation {
                world: world.id.clone(),
                time: points[idx].clone(),
            };
            holds_state(m, &s, inner)
        }
        PathFormula::Done(e) => Ok(done_at(m, world, &points[idx], e)?.is_some()),
        PathFormula::Not(inner) => Ok(!holds_at(m, world, points, idx, inner)?),
        PathFormula::And(a, b) => {
            Ok(holds_at(m, world, points, idx, a)? && holds_at(m, world, points, idx, b)?)
        }
        PathFormula::Or(a, b) => {
            Ok(holds_at(m, world, points, idx, a)? || holds_at(m, world, points, idx, b)?)
        }
        PathFormula::Eventually(inner) => {
            // Reflexive: the current suffix counts.
            for k in idx..points.len() {
                if holds_at(m, world, points, k, inner)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        PathFormula::Always(_) => Err(ModelError::NotDesugared("[]")),
    }
}

/// If the event expression just finished at `point`, returns the point at
/// which it began; tests consume no time.
fn done_at(
    m: &Interpretation,
    world: &TimeTreeWorld,
    point: &PointId,
    e: &EventExpr,
) -> Result<Option<PointId>, ModelError> {
    match e {
        EventExpr::Primitive(name) => Ok(world
            .parent_arc(point)
            .filter(|arc| &arc.event == name)
            .map(|arc| arc.from.clone())),
        EventExpr::Seq(first, second) => match done_at(m, world, point, second)? {
            Some(mid) => done_at(m, world, &mid, first),
            None => Ok(None),
        },
        EventExpr::Test(f) => {
            let s = Situation {
                world: world.id.clone(),
                time: point.clone(),
            };
            if holds_state(m, &s, f)? {
                Ok(Some(point.clone()))
            } else {
                Ok(None)
            }
        }
    }
}

/// The measure of a desugared state formula: the total weight of
/// belief-accessible worlds where it holds at the situation's time.
pub fn prob_measure(
    m: &Interpretation,
    s: &Situation,
    f: &StateFormula,
) -> Result<f64, ModelError> {
    m.check_situation(s)?;
    let dist = m
        .prob
        .get(s)
        .ok_or_else(|| ModelError::NoDistribution(s.clone()))?;
    let mut total = 0.0;
    for world in m.belief_at(s) {
        let shifted = Situation {
            world: world.clone(),
            time: s.time.clone(),
        };
        if holds_state(m, &shifted, f)? {
            total += dist.get(world).copied().unwrap_or(0.0);
        }
    }
    Ok(total)
}

fn eval_prob(m: &Interpretation, s: &Situation, c: &ProbConstraint) -> Result<bool, ModelError> {
    let mut lhs = 0.0;
    for term in &c.terms {
        if term.condition.is_some() {
            return Err(ModelError::ConditionalTerm);
        }
        lhs += term.coeff * prob_measure(m, s, &term.formula)?;
    }
    compare(lhs, c.cmp, c.bound)
}

/// The payoffs of qualifying paths: over every goal-accessible world and
/// every fullpath from the situation's time satisfying the formula and
/// carrying a defined payoff. `None` when no path qualifies, in which
/// case any payoff constraint on the formula is vacuously true.
pub fn payoff_range(
    m: &Interpretation,
    s: &Situation,
    f: &PathFormula,
) -> Result<Option<(f64, f64)>, ModelError> {
    m.check_situation(s)?;
    let mut range: Option<(f64, f64)> = None;
    for world_id in m.goal_at(s) {
        let world = m.world(world_id)?;
        if !world.contains(&s.time) {
            return Err(ModelError::PointNotInWorld {
                world: world_id.clone(),
                point: s.time.clone(),
            });
        }
        for path in world.fullpaths(&s.time)? {
            let leaf = path.points.last().expect("fullpaths are nonempty");
            let Some(payoff) = world.leaf_payoff.get(leaf).copied() else {
                continue;
            };
            if holds_at(m, world, &path.points, 0, f)? {
                range = Some(match range {
                    None => (payoff, payoff),
                    Some((lo, hi)) => (lo.min(payoff), hi.max(payoff)),
                });
            }
        }
    }
    Ok(range)
}

fn eval_payoff(
    m: &Interpretation,
    s: &Situation,
    c: &PayoffConstraint,
) -> Result<bool, ModelError> {
    match payoff_range(m, s, &c.formula)? {
        // All qualifying payoffs must satisfy the bound, so the minimum
        // decides; no qualifying path means vacuous truth.
        None => Ok(true),
        Some((lo, _)) => compare(lo, c.cmp, c.bound),
    }
}

fn compare(lhs: f64, cmp: Comparator, bound: f64) -> Result<bool, ModelError> {
    match cmp {
        Comparator::Ge => Ok(lhs >= bound - TOLERANCE),
        Comparator::Gt => Ok(lhs > bound + TOLERANCE),
        _ => Err(ModelError::NotDesugared("comparator")),
    }
}
