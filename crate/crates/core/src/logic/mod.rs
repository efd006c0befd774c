//! Formula language for beliefs, goals, intentions, probabilities, and
//! payoffs over branching time.
//!
//! Two sorts of formulas exist: *state formulas*, evaluated at a world and
//! time point, and *path formulas*, evaluated along a path through a world.
//! The ASCII surface syntax is:
//!
//! ```text
//! ~f          negation                 f & g       conjunction
//! f | g       disjunction              f -> g      implication
//! <> p        eventually (path)        [] p        always (path)
//! BEL(f)  GOAL(f)  INTEND(f)  INTEND[maximin](f)  INTEND[maxexpval](f)
//! OPTIONAL(p)  INEVITABLE(p)           done(e)     event just occurred
//! e1; e2      event sequencing         ?f          test event
//! PROB(f) >= 0.42                      PROB(f | g) = 0.5   (conditional)
//! 2*PROB(f) - 1*PROB(g) >= 0.5         PAYOFF(p) = 100
//! ```
//!
//! Precedence: unary (`~`, `<>`, `[]`) binds tightest, then `&`, then `|`,
//! then `->`. Directly inside `PROB(...)` a top-level `|` separates the
//! conditioned formula from the condition; wrap a disjunction in
//! parentheses there.
//!
//! ASTs are immutable; every operation here is a pure function.

mod ast;
mod desugar;
mod lexer;
mod parser;
mod printer;

pub use ast::{
    Comparator, EventExpr, Modality, PathFormula, PathQuantifier, PayoffConstraint,
    ProbConstraint, ProbTerm, Procedure, StateFormula,
};
pub use desugar::{desugar, desugar_path, normalize, rewrite_conditional, RewriteError};
pub use parser::{parse_path_formula, parse_state_formula, ParseError};
pub use printer::render_event;
