//! Canonical text rendering. Parsing the rendered text yields a
//! structurally equal AST.

use std::fmt::{self, Display, Formatter, Write};

use super::ast::{
    Comparator, EventExpr, Modality, PathFormula, PathQuantifier, PayoffConstraint,
    ProbConstraint, StateFormula,
};

// Shared precedence scale for both sorts: implication 1, disjunction 2,
// conjunction 3, unary 4, atoms 5.
const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;
const PREC_ATOM: u8 = 5;

fn state_prec(f: &StateFormula) -> u8 {
    match f {
        StateFormula::Implies(..) => PREC_IMPLIES,
        StateFormula::Or(..) => PREC_OR,
        StateFormula::And(..) => PREC_AND,
        StateFormula::Not(..) => PREC_UNARY,
        _ => PREC_ATOM,
    }
}

fn path_prec(f: &PathFormula) -> u8 {
    match f {
        PathFormula::Or(..) => PREC_OR,
        PathFormula::And(..) => PREC_AND,
        PathFormula::Not(..) | PathFormula::Eventually(..) | PathFormula::Always(..) => PREC_UNARY,
        PathFormula::State(inner) => state_prec(inner),
        PathFormula::Done(..) => PREC_ATOM,
    }
}

fn write_state(out: &mut String, f: &StateFormula, min_prec: u8) {
    let prec = state_prec(f);
    if prec < min_prec {
        out.push('(');
        write_state(out, f, PREC_IMPLIES);
        out.push(')');
        return;
    }
    match f {
        StateFormula::True => out.push_str("true"),
        StateFormula::False => out.push_str("false"),
        StateFormula::Prop(name) => out.push_str(name),
        StateFormula::Not(inner) => {
            out.push('~');
            write_state(out, inner, PREC_UNARY);
        }
        StateFormula::And(a, b) => {
            write_state(out, a, PREC_AND);
            out.push_str(" & ");
            write_state(out, b, PREC_AND + 1);
        }
        StateFormula::Or(a, b) => {
            write_state(out, a, PREC_OR);
            out.push_str(" | ");
            write_state(out, b, PREC_OR + 1);
        }
        StateFormula::Implies(a, b) => {
            write_state(out, a, PREC_IMPLIES + 1);
            out.push_str(" -> ");
            write_state(out, b, PREC_IMPLIES);
        }
        StateFormula::Modal(m, inner) => {
            match m {
                Modality::Bel => out.push_str("BEL"),
                Modality::Goal => out.push_str("GOAL"),
                Modality::Intend(None) => out.push_str("INTEND"),
                Modality::Intend(Some(proc)) => {
                    let _ = write!(out, "INTEND[{proc}]");
                }
            }
            out.push('(');
            write_state(out, inner, PREC_IMPLIES);
            out.push(')');
        }
        StateFormula::Quant(q, path) => {
            out.push_str(match q {
                PathQuantifier::Optional => "OPTIONAL",
                PathQuantifier::Inevitable => "INEVITABLE",
            });
            out.push('(');
            write_path(out, path, PREC_IMPLIES);
            out.push(')');
        }
        StateFormula::Prob(c) => write_prob(out, c),
        StateFormula::Payoff(c) => write_payoff(out, c),
    }
}

/// Renders a `PROB(...)` operand so it re-parses in the conditional
/// context, where a top-level `|` separates formula from condition: a
/// top-level disjunction gets parentheses, and the left side of a
/// top-level implication is held to conjunction level.
fn write_prob_operand(out: &mut String, f: &StateFormula) {
    match f {
        StateFormula::Or(..) => {
            out.push('(');
            write_state(out, f, PREC_IMPLIES);
            out.push(')');
        }
        StateFormula::Implies(a, b) => {
            write_state(out, a, PREC_AND);
            out.push_str(" -> ");
            write_prob_operand(out, b);
        }
        _ => write_state(out, f, PREC_IMPLIES),
    }
}

fn write_prob(out: &mut String, c: &ProbConstraint) {
    for (i, term) in c.terms.iter().enumerate() {
        if i == 0 {
            if term.coeff != 1.0 {
                let _ = write!(out, "{}*", term.coeff);
            }
        } else {
            out.push_str(if term.coeff < 0.0 { " - " } else { " + " });
            let _ = write!(out, "{}*", term.coeff.abs());
        }
        out.push_str("PROB(");
        write_prob_operand(out, &term.formula);
        if let Some(cond) = &term.condition {
            out.push_str(" | ");
            write_prob_operand(out, cond);
        }
        out.push(')');
    }
    let _ = write!(out, " {} {}", c.cmp.symbol(), c.bound);
}

fn write_payoff(out: &mut String, c: &PayoffConstraint) {
    out.push_str("PAYOFF(");
    write_path(out, &c.formula, PREC_IMPLIES);
    let _ = write!(out, ") {} {}", c.cmp.symbol(), c.bound);
}

fn write_path(out: &mut String, f: &PathFormula, min_prec: u8) {
    let prec = path_prec(f);
    if prec < min_prec {
        out.push('(');
        write_path(out, f, PREC_IMPLIES);
        out.push(')');
        return;
    }
    match f {
        PathFormula::State(inner) => write_state(out, inner, min_prec),
        PathFormula::Done(e) => {
            out.push_str("done(");
            write_event(out, e);
            out.push(')');
        }
        PathFormula::Not(inner) => {
            out.push('~');
            write_path(out, inner, PREC_UNARY);
        }
        PathFormula::And(a, b) => {
            write_path(out, a, PREC_AND);
            out.push_str(" & ");
            write_path(out, b, PREC_AND + 1);
        }
        PathFormula::Or(a, b) => {
            write_path(out, a, PREC_OR);
            out.push_str(" | ");
            write_path(out, b, PREC_OR + 1);
        }
        PathFormula::Eventually(inner) => {
            out.push_str("<> ");
            write_path(out, inner, PREC_UNARY);
        }
        PathFormula::Always(inner) => {
            out.push_str("[] ");
            write_path(out, inner, PREC_UNARY);
        }
    }
}

fn write_event(out: &mut String, e: &EventExpr) {
    match e {
        EventExpr::Primitive(name) => out.push_str(name),
        EventExpr::Seq(a, b) => {
            write_event(out, a);
            out.push_str("; ");
            write_event(out, b);
        }
        EventExpr::Test(f) => {
            out.push('?');
            write_state(out, f, PREC_UNARY);
        }
    }
}

/// Renders an event expression on its own, as it appears inside `done(...)`.
pub fn render_event(e: &EventExpr) -> String {
    let mut out = String::new();
    write_event(&mut out, e);
    out
}

impl Display for StateFormula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_state(&mut out, self, PREC_IMPLIES);
        f.write_str(&out)
    }
}

impl Display for PathFormula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_path(&mut out, self, PREC_IMPLIES);
        f.write_str(&out)
    }
}

impl Display for EventExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(&render_event(self))
    }
}

impl Display for ProbConstraint {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_prob(&mut out, self);
        f.write_str(&out)
    }
}

impl Display for PayoffConstraint {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_payoff(&mut out, self);
        f.write_str(&out)
    }
}

impl Display for Comparator {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
