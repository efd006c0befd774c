//! Token stream for the formula grammar, with line/column positions.

use super::parser::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub(super) enum Tok {
    Ident(String),
    Number(f64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    /// `<>`
    Diamond,
    /// `[]`
    Box,
    Tilde,
    Amp,
    Bar,
    Arrow,
    Semi,
    Question,
    Star,
    Plus,
    Minus,
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(n) => format!("number `{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Diamond => "`<>`".into(),
            Tok::Box => "`[]`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Question => "`?`".into(),
            Tok::Star => "`*`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Ge => "`>=`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Eq => "`=`".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) struct Pos {
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone)]
pub(super) struct Spanned {
    pub tok: Tok,
    pub pos: Pos,
}

pub(super) fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1u32;
    let mut col = 1u32;

    macro_rules! push {
        ($tok:expr, $pos:expr) => {
            out.push(Spanned { tok: $tok, pos: $pos })
        };
    }

    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            c if c.is_ascii_alphabetic() => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                push!(Tok::Ident(ident), pos);
            }
            c if c.is_ascii_digit() => {
                let mut lit = String::new();
                let mut seen_dot = false;
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() || (c == '.' && !seen_dot) {
                        seen_dot |= c == '.';
                        lit.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let value = lit.parse::<f64>().map_err(|_| ParseError::InvalidNumber {
                    line: pos.line,
                    col: pos.col,
                    literal: lit.clone(),
                })?;
                push!(Tok::Number(value), pos);
            }
            '(' => {
                chars.next();
                col += 1;
                push!(Tok::LParen, pos);
            }
            ')' => {
                chars.next();
                col += 1;
                push!(Tok::RParen, pos);
            }
            '[' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&']') {
                    chars.next();
                    col += 1;
                    push!(Tok::Box, pos);
                } else {
                    push!(Tok::LBracket, pos);
                }
            }
            ']' => {
                chars.next();
                col += 1;
                push!(Tok::RBracket, pos);
            }
            '<' => {
                chars.next();
                col += 1;
                match chars.peek() {
                    Some('>') => {
                        chars.next();
                        col += 1;
                        push!(Tok::Diamond, pos);
                    }
                    Some('=') => {
                        chars.next();
                        col += 1;
                        push!(Tok::Le, pos);
                    }
                    _ => push!(Tok::Lt, pos),
                }
            }
            '>' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    push!(Tok::Ge, pos);
                } else {
                    push!(Tok::Gt, pos);
                }
            }
            '-' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'>') {
                    chars.next();
                    col += 1;
                    push!(Tok::Arrow, pos);
                } else {
                    push!(Tok::Minus, pos);
                }
            }
            '~' => {
                chars.next();
                col += 1;
                push!(Tok::Tilde, pos);
            }
            '&' => {
                chars.next();
                col += 1;
                push!(Tok::Amp, pos);
            }
            '|' => {
                chars.next();
                col += 1;
                push!(Tok::Bar, pos);
            }
            ';' => {
                chars.next();
                col += 1;
                push!(Tok::Semi, pos);
            }
            '?' => {
                chars.next();
                col += 1;
                push!(Tok::Question, pos);
            }
            '*' => {
                chars.next();
                col += 1;
                push!(Tok::Star, pos);
            }
            '+' => {
                chars.next();
                col += 1;
                push!(Tok::Plus, pos);
            }
            '=' => {
                chars.next();
                col += 1;
                push!(Tok::Eq, pos);
            }
            other => {
                return Err(ParseError::UnexpectedChar {
                    line: pos.line,
                    col: pos.col,
                    ch: other,
                })
            }
        }
    }

    Ok(out)
}
