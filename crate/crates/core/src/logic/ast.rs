//! Abstract syntax for state formulas, path formulas, and event
//! expressions.

use serde::{Deserialize, Serialize};

/// Deliberation procedure an `INTEND` modality may be tagged with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Procedure {
    Maximin,
    Maxexpval,
}

impl Procedure {
    pub fn name(self) -> &'static str {
        match self {
            Procedure::Maximin => "maximin",
            Procedure::Maxexpval => "maxexpval",
        }
    }
}

impl std::fmt::Display for Procedure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Procedure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "maximin" => Ok(Procedure::Maximin),
            "maxexpval" => Ok(Procedure::Maxexpval),
            other => Err(format!("unknown procedure `{other}`")),
        }
    }
}

/// Modal operator over accessible worlds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modality {
    Bel,
    Goal,
    /// `INTEND`, optionally tagged with the procedure whose intention
    /// relation it consults. Untagged `INTEND` uses the current relation.
    Intend(Option<Procedure>),
}

/// Path quantifier turning a path formula into a state formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathQuantifier {
    Optional,
    Inevitable,
}

/// Comparison operator in probability and payoff constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
}

impl Comparator {
    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::Ge => ">=",
            Comparator::Gt => ">",
            Comparator::Le => "<=",
            Comparator::Lt => "<",
            Comparator::Eq => "=",
        }
    }
}

/// One `coeff * PROB(formula)` or `coeff * PROB(formula | condition)` term
/// of a linear probability constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbTerm {
    pub coeff: f64,
    pub formula: StateFormula,
    pub condition: Option<StateFormula>,
}

/// Linear probability constraint `t1 + ... + tk cmp bound`.
///
/// Terms with a condition represent conditional probability and must be
/// eliminated by [`rewrite_conditional`](super::rewrite_conditional)
/// before evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbConstraint {
    pub terms: Vec<ProbTerm>,
    pub cmp: Comparator,
    pub bound: f64,
}

/// Payoff constraint `PAYOFF(formula) cmp bound` over a single atom.
///
/// Linear combinations of `PAYOFF` atoms are rejected at parse time; only
/// the single-atom form has a defined meaning.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffConstraint {
    pub formula: PathFormula,
    pub cmp: Comparator,
    pub bound: f64,
}

/// A formula true or false at a world and time point.
#[derive(Debug, Clone, PartialEq)]
pub enum StateFormula {
    True,
    False,
    /// Primitive proposition; names match `[A-Za-z][A-Za-z0-9_]*`.
    Prop(String),
    Not(Box<StateFormula>),
    And(Box<StateFormula>, Box<StateFormula>),
    Or(Box<StateFormula>, Box<StateFormula>),
    Implies(Box<StateFormula>, Box<StateFormula>),
    Modal(Modality, Box<StateFormula>),
    Quant(PathQuantifier, Box<PathFormula>),
    Prob(ProbConstraint),
    Payoff(PayoffConstraint),
}

/// A formula true or false along a path.
#[derive(Debug, Clone, PartialEq)]
pub enum PathFormula {
    /// A state formula, evaluated at the first point of the path.
    State(Box<StateFormula>),
    /// The event expression just occurred at the first point of the path.
    Done(EventExpr),
    Not(Box<PathFormula>),
    And(Box<PathFormula>, Box<PathFormula>),
    Or(Box<PathFormula>, Box<PathFormula>),
    /// `<> p`: some suffix of the path satisfies `p`.
    Eventually(Box<PathFormula>),
    /// `[] p`: sugar for `~<>~p`; eliminated by desugaring before
    /// evaluation.
    Always(Box<PathFormula>),
}

/// Event expression: primitive events, sequencing, and tests.
#[derive(Debug, Clone, PartialEq)]
pub enum EventExpr {
    Primitive(String),
    /// `e1; e2`. The parser normalizes sequences to left association.
    Seq(Box<EventExpr>, Box<EventExpr>),
    /// `?f`: a test that consumes no time; done exactly where `f` holds.
    Test(Box<StateFormula>),
}

impl StateFormula {
    pub fn prop(name: impl Into<String>) -> Self {
        StateFormula::Prop(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        StateFormula::Not(Box::new(self))
    }

    pub fn and(self, other: Self) -> Self {
        StateFormula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Self) -> Self {
        StateFormula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Self) -> Self {
        StateFormula::Implies(Box::new(self), Box::new(other))
    }

    pub fn bel(self) -> Self {
        StateFormula::Modal(Modality::Bel, Box::new(self))
    }

    pub fn goal(self) -> Self {
        StateFormula::Modal(Modality::Goal, Box::new(self))
    }

    pub fn intend(self, proc: Option<Procedure>) -> Self {
        StateFormula::Modal(Modality::Intend(proc), Box::new(self))
    }

    pub fn optional(path: PathFormula) -> Self {
        StateFormula::Quant(PathQuantifier::Optional, Box::new(path))
    }

    pub fn inevitable(path: PathFormula) -> Self {
        StateFormula::Quant(PathQuantifier::Inevitable, Box::new(path))
    }
}

impl PathFormula {
    pub fn state(f: StateFormula) -> Self {
        PathFormula::State(Box::new(f))
    }

    pub fn done(e: EventExpr) -> Self {
        PathFormula::Done(e)
    }

    pub fn eventually(self) -> Self {
        PathFormula::Eventually(Box::new(self))
    }

    pub fn always(self) -> Self {
        PathFormula::Always(Box::new(self))
    }

    /// Negation that folds pure-state operands back into the state sort,
    /// keeping the state embedding canonical.
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        match self {
            PathFormula::State(f) => PathFormula::State(Box::new(StateFormula::Not(f))),
            other => PathFormula::Not(Box::new(other)),
        }
    }

    /// Conjunction with the same state-folding normalization as [`not`].
    ///
    /// [`not`]: PathFormula::not
    pub fn and(self, other: Self) -> Self {
        match (self, other) {
            (PathFormula::State(a), PathFormula::State(b)) => {
                PathFormula::State(Box::new(StateFormula::And(a, b)))
            }
            (a, b) => PathFormula::And(Box::new(a), Box::new(b)),
        }
    }

    /// Disjunction with the same state-folding normalization as [`not`].
    ///
    /// [`not`]: PathFormula::not
    pub fn or(self, other: Self) -> Self {
        match (self, other) {
            (PathFormula::State(a), PathFormula::State(b)) => {
                PathFormula::State(Box::new(StateFormula::Or(a, b)))
            }
            (a, b) => PathFormula::Or(Box::new(a), Box::new(b)),
        }
    }
}

impl EventExpr {
    pub fn primitive(name: impl Into<String>) -> Self {
        EventExpr::Primitive(name.into())
    }

    pub fn test(f: StateFormula) -> Self {
        EventExpr::Test(Box::new(f))
    }

    /// Left-associative sequencing: `a.then(b)` is `a; b`.
    pub fn then(self, next: EventExpr) -> Self {
        EventExpr::Seq(Box::new(self), Box::new(next))
    }

    /// Re-associates nested sequences into canonical left association.
    pub fn normalize(self) -> Self {
        fn flatten(e: EventExpr, out: &mut Vec<EventExpr>) {
            match e {
                EventExpr::Seq(a, b) => {
                    flatten(*a, out);
                    flatten(*b, out);
                }
                leaf => out.push(leaf),
            }
        }
        let mut parts = Vec::new();
        flatten(self, &mut parts);
        let mut iter = parts.into_iter();
        let first = iter.next().expect("event expression has at least one leaf");
        iter.fold(first, |acc, e| acc.then(e))
    }
}
