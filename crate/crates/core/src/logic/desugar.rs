//! Rewriting into the evaluator's core: no implication, no `INEVITABLE`,
//! no `[]`, no `=`/`<=`/`<` comparators, and (after
//! [`rewrite_conditional`]) no conditional probability terms.

use thiserror::Error;

use super::ast::{
    Comparator, EventExpr, PathFormula, PathQuantifier, PayoffConstraint, ProbConstraint,
    ProbTerm, StateFormula,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RewriteError {
    #[error("conditional probability cannot appear in a multi-term linear combination")]
    MixedConditional,
    #[error("conditional probability term must have coefficient 1")]
    ScaledConditional,
}

/// Eliminates a conditional probability term: `PROB(f | c) cmp a` becomes
/// `PROB(f & c) - a*PROB(c) cmp 0`.
///
/// A constraint without conditional terms is returned unchanged. A
/// conditional term mixed into a multi-term combination, or carrying a
/// coefficient other than 1, has no defined meaning and is rejected.
pub fn rewrite_conditional(c: &ProbConstraint) -> Result<ProbConstraint, RewriteError> {
    let conditionals = c.terms.iter().filter(|t| t.condition.is_some()).count();
    if conditionals == 0 {
        return Ok(c.clone());
    }
    if c.terms.len() > 1 {
        return Err(RewriteError::MixedConditional);
    }
    let term = &c.terms[0];
    if term.coeff != 1.0 {
        return Err(RewriteError::ScaledConditional);
    }
    let condition = term.condition.clone().expect("conditional term");
    Ok(ProbConstraint {
        terms: vec![
            ProbTerm {
                coeff: 1.0,
                formula: term.formula.clone().and(condition.clone()),
                condition: None,
            },
            ProbTerm {
                coeff: -c.bound,
                formula: condition,
                condition: None,
            },
        ],
        cmp: c.cmp,
        bound: 0.0,
    })
}

/// Rewrites a state formula into the desugared core: `INEVITABLE(p)`
/// becomes `~OPTIONAL(~p)`, `[] p` becomes `~<>~p`, `f -> g` becomes
/// `~f | g`, and `=`/`<=`/`<` constraints are expressed through `>=`,
/// `>`, and negation.
///
/// Conditional probability terms are left in place; eliminate them with
/// [`rewrite_conditional`] (or [`normalize`]) before evaluation.
pub fn desugar(f: &StateFormula) -> StateFormula {
    match f {
        StateFormula::True | StateFormula::False | StateFormula::Prop(_) => f.clone(),
        StateFormula::Not(inner) => desugar(inner).not(),
        StateFormula::And(a, b) => desugar(a).and(desugar(b)),
        StateFormula::Or(a, b) => desugar(a).or(desugar(b)),
        StateFormula::Implies(a, b) => desugar(a).not().or(desugar(b)),
        StateFormula::Modal(m, inner) => StateFormula::Modal(*m, Box::new(desugar(inner))),
        StateFormula::Quant(PathQuantifier::Optional, path) => {
            StateFormula::optional(desugar_path(path))
        }
        StateFormula::Quant(PathQuantifier::Inevitable, path) => {
            StateFormula::optional(desugar_path(path).not()).not()
        }
        StateFormula::Prob(c) => {
            let core = ProbConstraint {
                terms: c
                    .terms
                    .iter()
                    .map(|t| ProbTerm {
                        coeff: t.coeff,
                        formula: desugar(&t.formula),
                        condition: t.condition.as_ref().map(desugar),
                    })
                    .collect(),
                cmp: c.cmp,
                bound: c.bound,
            };
            desugar_comparator(core.cmp, core, StateFormula::Prob)
        }
        StateFormula::Payoff(c) => {
            let core = PayoffConstraint {
                formula: desugar_path(&c.formula),
                cmp: c.cmp,
                bound: c.bound,
            };
            desugar_comparator(core.cmp, core, StateFormula::Payoff)
        }
    }
}

/// Comparator elimination shared by both constraint kinds: `<=` is
/// `~(>)`, `<` is `~(>=)`, and `=` is `>= & ~(>)`.
fn desugar_comparator<C: Clone + WithComparator>(
    cmp: Comparator,
    core: C,
    wrap: impl Fn(C) -> StateFormula,
) -> StateFormula {
    match cmp {
        Comparator::Ge | Comparator::Gt => wrap(core),
        Comparator::Le => wrap(core.with_cmp(Comparator::Gt)).not(),
        Comparator::Lt => wrap(core.with_cmp(Comparator::Ge)).not(),
        Comparator::Eq => wrap(core.clone().with_cmp(Comparator::Ge))
            .and(wrap(core.with_cmp(Comparator::Gt)).not()),
    }
}

trait WithComparator {
    fn with_cmp(self, cmp: Comparator) -> Self;
}

impl WithComparator for ProbConstraint {
    fn with_cmp(mut self, cmp: Comparator) -> Self {
        self.cmp = cmp;
        self
    }
}

impl WithComparator for PayoffConstraint {
    fn with_cmp(mut self, cmp: Comparator) -> Self {
        self.cmp = cmp;
        self
    }
}

/// Path-formula desugaring: eliminates `[]` and recurses into embedded
/// state formulas and test events.
pub fn desugar_path(f: &PathFormula) -> PathFormula {
    match f {
        PathFormula::State(inner) => PathFormula::state(desugar(inner)),
        PathFormula::Done(e) => PathFormula::Done(desugar_event(e)),
        PathFormula::Not(inner) => desugar_path(inner).not(),
        PathFormula::And(a, b) => desugar_path(a).and(desugar_path(b)),
        PathFormula::Or(a, b) => desugar_path(a).or(desugar_path(b)),
        PathFormula::Eventually(inner) => desugar_path(inner).eventually(),
        PathFormula::Always(inner) => desugar_path(inner).not().eventually().not(),
    }
}

fn desugar_event(e: &EventExpr) -> EventExpr {
    match e {
        EventExpr::Primitive(_) => e.clone(),
        EventExpr::Seq(a, b) => desugar_event(a).then(desugar_event(b)),
        EventExpr::Test(f) => EventExpr::test(desugar(f)),
    }
}

/// Full evaluation pipeline: eliminates conditional probability terms
/// everywhere, then desugars. The result is accepted by the satisfaction
/// engine.
pub fn normalize(f: &StateFormula) -> Result<StateFormula, RewriteError> {
    Ok(desugar(&strip_conditionals(f)?))
}

fn strip_conditionals(f: &StateFormula) -> Result<StateFormula, RewriteError> {
    Ok(match f {
        StateFormula::True | StateFormula::False | StateFormula::Prop(_) => f.clone(),
        StateFormula::Not(inner) => StateFormula::Not(Box::new(strip_conditionals(inner)?)),
        StateFormula::And(a, b) => strip_conditionals(a)?.and(strip_conditionals(b)?),
        StateFormula::Or(a, b) => strip_conditionals(a)?.or(strip_conditionals(b)?),
        StateFormula::Implies(a, b) => strip_conditionals(a)?.implies(strip_conditionals(b)?),
        StateFormula::Modal(m, inner) => {
            StateFormula::Modal(*m, Box::new(strip_conditionals(inner)?))
        }
        StateFormula::Quant(q, path) => {
            StateFormula::Quant(*q, Box::new(strip_conditionals_path(path)?))
        }
        StateFormula::Prob(c) => {
            let recursed = ProbConstraint {
                terms: c
                    .terms
                    .iter()
                    .map(|t| {
                        Ok(ProbTerm {
                            coeff: t.coeff,
                            formula: strip_conditionals(&t.formula)?,
                            condition: t
                                .condition
                                .as_ref()
                                .map(strip_conditionals)
                                .transpose()?,
                        })
                    })
                    .collect::<Result<_, RewriteError>>()?,
                cmp: c.cmp,
                bound: c.bound,
            };
            StateFormula::Prob(rewrite_conditional(&recursed)?)
        }
        StateFormula::Payoff(c) => StateFormula::Payoff(PayoffConstraint {
            formula: strip_conditionals_path(&c.formula)?,
            cmp: c.cmp,
            bound: c.bound,
        }),
    })
}

fn strip_conditionals_path(f: &PathFormula) -> Result<PathFormula, RewriteError> {
    Ok(match f {
        PathFormula::State(inner) => PathFormula::State(Box::new(strip_conditionals(inner)?)),
        PathFormula::Done(e) => PathFormula::Done(strip_conditionals_event(e)?),
        PathFormula::Not(inner) => PathFormula::Not(Box::new(strip_conditionals_path(inner)?)),
        PathFormula::And(a, b) => PathFormula::And(
            Box::new(strip_conditionals_path(a)?),
            Box::new(strip_conditionals_path(b)?),
        ),
        PathFormula::Or(a, b) => PathFormula::Or(
            Box::new(strip_conditionals_path(a)?),
            Box::new(strip_conditionals_path(b)?),
        ),
        PathFormula::Eventually(inner) => {
            PathFormula::Eventually(Box::new(strip_conditionals_path(inner)?))
        }
        PathFormula::Always(inner) => {
            PathFormula::Always(Box::new(strip_conditionals_path(inner)?))
        }
    })
}

fn strip_conditionals_event(e: &EventExpr) -> Result<EventExpr, RewriteError> {
    Ok(match e {
        EventExpr::Primitive(_) => e.clone(),
        EventExpr::Seq(a, b) => EventExpr::Seq(
            Box::new(strip_conditionals_event(a)?),
            Box::new(strip_conditionals_event(b)?),
        ),
        EventExpr::Test(f) => EventExpr::test(strip_conditionals(f)?),
    })
}
