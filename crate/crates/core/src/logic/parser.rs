//! Recursive descent parser for state formulas, path formulas, and event
//! expressions.

use thiserror::Error;

use super::ast::{
    Comparator, EventExpr, Modality, PathFormula, PathQuantifier, PayoffConstraint,
    ProbConstraint, ProbTerm, Procedure, StateFormula,
};
use super::lexer::{lex, Pos, Spanned, Tok};

/// Parse failure with the position of the offending token.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: unexpected character `{ch}`")]
    UnexpectedChar { line: u32, col: u32, ch: char },
    #[error("syntax error at {line}:{col}: invalid number literal `{literal}`")]
    InvalidNumber { line: u32, col: u32, literal: String },
    #[error("syntax error at {line}:{col}: expected {expected}, found {found}")]
    UnexpectedToken {
        line: u32,
        col: u32,
        expected: String,
        found: String,
    },
    #[error("syntax error at {line}:{col}: unexpected end of input, expected {expected}")]
    UnexpectedEnd {
        line: u32,
        col: u32,
        expected: String,
    },
    #[error("syntax error at {line}:{col}: path formula in state position ({construct} is only allowed under OPTIONAL, INEVITABLE, or PAYOFF)")]
    PathInStatePosition {
        line: u32,
        col: u32,
        construct: String,
    },
    #[error("syntax error at {line}:{col}: linear combinations of PAYOFF are not supported; use a single `PAYOFF(..) cmp bound` atom")]
    PayoffCombination { line: u32, col: u32 },
}

/// Parses the text as a state formula.
pub fn parse_state_formula(text: &str) -> Result<StateFormula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.state_implies(true)?;
    p.expect_end()?;
    Ok(f)
}

/// Parses the text as a path formula. State formulas embed transparently.
pub fn parse_path_formula(text: &str) -> Result<PathFormula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.path_implies()?;
    p.expect_end()?;
    Ok(f)
}

struct Parser {
    toks: Vec<Spanned>,
    idx: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            idx: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|s| &s.tok)
    }

    fn pos(&self) -> Pos {
        self.toks
            .get(self.idx)
            .or_else(|| self.toks.last())
            .map(|s| s.pos)
            .unwrap_or(Pos { line: 1, col: 1 })
    }

    fn bump(&mut self) -> Option<Tok> {
        let tok = self.toks.get(self.idx).map(|s| s.tok.clone());
        if tok.is_some() {
            self.idx += 1;
        }
        tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn unexpected<T>(&self, expected: &str) -> Result<T, ParseError> {
        let pos = self.pos();
        match self.peek() {
            Some(tok) => Err(ParseError::UnexpectedToken {
                line: pos.line,
                col: pos.col,
                expected: expected.into(),
                found: tok.describe(),
            }),
            None => Err(ParseError::UnexpectedEnd {
                line: pos.line,
                col: pos.col,
                expected: expected.into(),
            }),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.unexpected(expected)
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.idx == self.toks.len() {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }

    // ── State formulas ─────────────────────────────────────────────────

    /// `allow_bar` is false directly inside `PROB(...)`, where a top-level
    /// `|` separates the formula from its condition instead of acting as
    /// disjunction.
    fn state_implies(&mut self, allow_bar: bool) -> Result<StateFormula, ParseError> {
        let lhs = self.state_or(allow_bar)?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.state_implies(allow_bar)?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn state_or(&mut self, allow_bar: bool) -> Result<StateFormula, ParseError> {
        let mut lhs = self.state_and()?;
        if allow_bar {
            while self.eat(&Tok::Bar) {
                let rhs = self.state_and()?;
                lhs = lhs.or(rhs);
            }
        }
        Ok(lhs)
    }

    fn state_and(&mut self) -> Result<StateFormula, ParseError> {
        let mut lhs = self.state_unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.state_unary()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn state_unary(&mut self) -> Result<StateFormula, ParseError> {
        if self.eat(&Tok::Tilde) {
            Ok(self.state_unary()?.not())
        } else {
            self.state_atom()
        }
    }

    fn state_atom(&mut self) -> Result<StateFormula, ParseError> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Diamond) => Err(ParseError::PathInStatePosition {
                line: pos.line,
                col: pos.col,
                construct: "`<>`".into(),
            }),
            Some(Tok::Box) => Err(ParseError::PathInStatePosition {
                line: pos.line,
                col: pos.col,
                construct: "`[]`".into(),
            }),
            Some(Tok::LParen) => {
                self.bump();
                let f = self.state_implies(true)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Number(_)) | Some(Tok::Minus) => self.prob_constraint(),
            Some(Tok::Ident(name)) => match name.as_str() {
                "true" => {
                    self.bump();
                    Ok(StateFormula::True)
                }
                "false" => {
                    self.bump();
                    Ok(StateFormula::False)
                }
                "BEL" => self.modal(Modality::Bel),
                "GOAL" => self.modal(Modality::Goal),
                "INTEND" => {
                    self.bump();
                    let proc = self.intend_tag()?;
                    self.expect(Tok::LParen, "`(`")?;
                    let f = self.state_implies(true)?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(f.intend(proc))
                }
                "OPTIONAL" => self.quantified(PathQuantifier::Optional),
                "INEVITABLE" => self.quantified(PathQuantifier::Inevitable),
                "PROB" => self.prob_constraint(),
                "PAYOFF" => self.payoff_constraint(),
                "done" => Err(ParseError::PathInStatePosition {
                    line: pos.line,
                    col: pos.col,
                    construct: "`done`".into(),
                }),
                _ => {
                    let name = name.clone();
                    self.bump();
                    Ok(StateFormula::Prop(name))
                }
            },
            _ => self.unexpected("a state formula"),
        }
    }

    fn modal(&mut self, m: Modality) -> Result<StateFormula, ParseError> {
        self.bump();
        self.expect(Tok::LParen, "`(`")?;
        let f = self.state_implies(true)?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(StateFormula::Modal(m, Box::new(f)))
    }

    fn intend_tag(&mut self) -> Result<Option<Procedure>, ParseError> {
        if !self.eat(&Tok::LBracket) {
            return Ok(None);
        }
        let proc = match self.peek() {
            Some(Tok::Ident(name)) if name == "maximin" => Procedure::Maximin,
            Some(Tok::Ident(name)) if name == "maxexpval" => Procedure::Maxexpval,
            _ => return self.unexpected("`maximin` or `maxexpval`"),
        };
        self.bump();
        self.expect(Tok::RBracket, "`]`")?;
        Ok(Some(proc))
    }

    fn quantified(&mut self, q: PathQuantifier) -> Result<StateFormula, ParseError> {
        self.bump();
        self.expect(Tok::LParen, "`(`")?;
        let path = self.path_implies()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(StateFormula::Quant(q, Box::new(path)))
    }

    // ── Probability and payoff constraints ─────────────────────────────

    fn prob_constraint(&mut self) -> Result<StateFormula, ParseError> {
        let mut terms = vec![self.prob_term(false)?];
        loop {
            if self.eat(&Tok::Plus) {
                terms.push(self.prob_term(false)?);
            } else if self.eat(&Tok::Minus) {
                terms.push(self.prob_term(true)?);
            } else {
                break;
            }
        }
        let cmp = self.comparator()?;
        let bound = self.signed_number()?;
        Ok(StateFormula::Prob(ProbConstraint { terms, cmp, bound }))
    }

    /// One `[coeff *] PROB(f [| cond])` term. `negated` flips the sign of
    /// the coefficient (the `-` separator was already consumed).
    fn prob_term(&mut self, negated: bool) -> Result<ProbTerm, ParseError> {
        let mut coeff = 1.0;
        let mut explicit = false;
        if self.eat(&Tok::Minus) {
            coeff = -1.0;
            explicit = true;
        }
        if let Some(Tok::Number(n)) = self.peek() {
            coeff *= *n;
            explicit = true;
            self.bump();
            self.expect(Tok::Star, "`*` before PROB")?;
        } else if explicit {
            // A bare leading `-` must be followed by a coefficient.
            return self.unexpected("a coefficient");
        }
        if negated {
            coeff = -coeff;
        }
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Ident(name)) if name == "PROB" => {
                self.bump();
            }
            Some(Tok::Ident(name)) if name == "PAYOFF" && explicit => {
                return Err(ParseError::PayoffCombination {
                    line: pos.line,
                    col: pos.col,
                });
            }
            _ => return self.unexpected("`PROB`"),
        }
        self.expect(Tok::LParen, "`(`")?;
        let formula = self.state_implies(false)?;
        let condition = if self.eat(&Tok::Bar) {
            Some(self.state_implies(false)?)
        } else {
            None
        };
        self.expect(Tok::RParen, "`)`")?;
        Ok(ProbTerm {
            coeff,
            formula,
            condition,
        })
    }

    fn payoff_constraint(&mut self) -> Result<StateFormula, ParseError> {
        self.bump();
        self.expect(Tok::LParen, "`(`")?;
        let formula = self.path_implies()?;
        self.expect(Tok::RParen, "`)`")?;
        let pos = self.pos();
        if matches!(self.peek(), Some(Tok::Plus) | Some(Tok::Minus) | Some(Tok::Star)) {
            return Err(ParseError::PayoffCombination {
                line: pos.line,
                col: pos.col,
            });
        }
        let cmp = self.comparator()?;
        let bound = self.signed_number()?;
        Ok(StateFormula::Payoff(PayoffConstraint {
            formula,
            cmp,
            bound,
        }))
    }

    fn comparator(&mut self) -> Result<Comparator, ParseError> {
        let cmp = match self.peek() {
            Some(Tok::Ge) => Comparator::Ge,
            Some(Tok::Gt) => Comparator::Gt,
            Some(Tok::Le) => Comparator::Le,
            Some(Tok::Lt) => Comparator::Lt,
            Some(Tok::Eq) => Comparator::Eq,
            _ => return self.unexpected("a comparator (`>=`, `>`, `<=`, `<`, `=`)"),
        };
        self.bump();
        Ok(cmp)
    }

    fn signed_number(&mut self) -> Result<f64, ParseError> {
        let negative = self.eat(&Tok::Minus);
        match self.peek() {
            Some(Tok::Number(n)) => {
                let n = *n;
                self.bump();
                Ok(if negative { -n } else { n })
            }
            _ => self.unexpected("a number"),
        }
    }

    // ── Path formulas ──────────────────────────────────────────────────

    fn path_implies(&mut self) -> Result<PathFormula, ParseError> {
        let lhs = self.path_or()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.path_implies()?;
            // Pure-state implication stays in the state sort; a mixed one
            // has no path variant and is expanded classically.
            match (lhs, rhs) {
                (PathFormula::State(a), PathFormula::State(b)) => {
                    Ok(PathFormula::State(Box::new(a.implies(*b))))
                }
                (a, b) => Ok(a.not().or(b)),
            }
        } else {
            Ok(lhs)
        }
    }

    fn path_or(&mut self) -> Result<PathFormula, ParseError> {
        let mut lhs = self.path_and()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.path_and()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn path_and(&mut self) -> Result<PathFormula, ParseError> {
        let mut lhs = self.path_unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.path_unary()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn path_unary(&mut self) -> Result<PathFormula, ParseError> {
        if self.eat(&Tok::Tilde) {
            Ok(self.path_unary()?.not())
        } else if self.eat(&Tok::Diamond) {
            Ok(self.path_unary()?.eventually())
        } else if self.eat(&Tok::Box) {
            Ok(self.path_unary()?.always())
        } else {
            self.path_atom()
        }
    }

    fn path_atom(&mut self) -> Result<PathFormula, ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) if name == "done" => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let e = self.event_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(PathFormula::Done(e))
            }
            Some(Tok::LParen) => {
                self.bump();
                let f = self.path_implies()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => Ok(PathFormula::state(self.state_atom()?)),
        }
    }

    // ── Event expressions ──────────────────────────────────────────────

    fn event_expr(&mut self) -> Result<EventExpr, ParseError> {
        let mut lhs = self.event_elem()?;
        while self.eat(&Tok::Semi) {
            let rhs = self.event_elem()?;
            lhs = lhs.then(rhs);
        }
        Ok(lhs.normalize())
    }

    fn event_elem(&mut self) -> Result<EventExpr, ParseError> {
        match self.peek() {
            Some(Tok::Question) => {
                self.bump();
                let f = self.state_unary()?;
                Ok(EventExpr::test(f))
            }
            Some(Tok::LParen) => {
                self.bump();
                let e = self.event_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                self.bump();
                Ok(EventExpr::Primitive(name))
            }
            _ => self.unexpected("an event expression"),
        }
    }
}
