//! Text syntax for formulas.
//!
//! ```text
//! formula  := iff
//! iff      := implies ("<->" implies)*          left-assoc
//! implies  := or ("->" implies)?                right-assoc
//! or       := and ("|" and)*
//! and      := unary ("&" unary)*
//! unary    := "~" unary | quant | primary
//! quant    := ("exists" | "forall") ident "." formula
//! primary  := ident | "true" | "false" | "(" formula ")"
//! ```
//!
//! A quantifier body extends as far to the right as possible. `#` starts a
//! comment running to the end of the line.

use thiserror::Error;

use crate::formula::Formula;

pub const RESERVED: [&str; 4] = ["true", "false", "exists", "forall"];

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Exists,
    Forall,
    LParen,
    RParen,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Dot,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, message: String| ParseError {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(1, &mut i, &mut col),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' | ')' | '~' | '&' | '|' | '.' => {
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '~' => Tok::Not,
                    '&' => Tok::And,
                    '|' => Tok::Or,
                    _ => Tok::Dot,
                };
                out.push(Token {
                    tok,
                    line: tl,
                    column: tc,
                });
                advance(1, &mut i, &mut col);
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    out.push(Token {
                        tok: Tok::Implies,
                        line: tl,
                        column: tc,
                    });
                    advance(2, &mut i, &mut col);
                } else {
                    return Err(err(tl, tc, "expected `->`".into()));
                }
            }
            '<' => {
                if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
                    out.push(Token {
                        tok: Tok::Iff,
                        line: tl,
                        column: tc,
                    });
                    advance(3, &mut i, &mut col);
                } else {
                    return Err(err(tl, tc, "expected `<->`".into()));
                }
            }
            c if c.is_ascii_lowercase() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                let tok = match word.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "exists" => Tok::Exists,
                    "forall" => Tok::Forall,
                    _ => Tok::Ident(word),
                };
                out.push(Token {
                    tok,
                    line: tl,
                    column: tc,
                });
            }
            other => return Err(err(tl, tc, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: String) -> ParseError {
        let t = self.peek();
        ParseError {
            line: t.line,
            column: t.column,
            message,
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().tok.describe()
            )))
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implies()?;
        while self.peek().tok == Tok::Iff {
            self.bump();
            let rhs = self.implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek().tok == Tok::Implies {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek().tok == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek().tok == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().tok.clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Exists | Tok::Forall => {
                let q = self.bump().tok;
                let name = match self.peek().tok.clone() {
                    Tok::Ident(n) => {
                        self.bump();
                        n
                    }
                    t @ (Tok::True | Tok::False | Tok::Exists | Tok::Forall) => {
                        return Err(self.error_here(format!(
                            "reserved word {} cannot be used as an atom",
                            t.describe()
                        )))
                    }
                    t => {
                        return Err(self.error_here(format!(
                            "expected an atom after the quantifier, found {}",
                            t.describe()
                        )))
                    }
                };
                self.expect(Tok::Dot)?;
                let body = self.iff()?;
                Ok(if q == Tok::Exists {
                    Formula::exists(name, body)
                } else {
                    Formula::forall(name, body)
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(n) => {
                self.bump();
                Ok(Formula::Atom(n))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::LParen => {
                self.bump();
                let f = self.iff()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            t => Err(self.error_here(format!("expected a formula, found {}", t.describe()))),
        }
    }
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.iff()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error_here(format!(
            "unexpected {} after formula",
            p.peek().tok.describe()
        )));
    }
    Ok(f)
}

/// Whitespace-separated list of atom names, e.g. `"p1 p2"`.
pub fn parse_atom_list(text: &str) -> Result<Vec<String>, ParseError> {
    let toks = lex(text)?;
    let mut out = Vec::new();
    for t in toks {
        match t.tok {
            Tok::Ident(n) => out.push(n),
            Tok::Eof => break,
            Tok::True | Tok::False | Tok::Exists | Tok::Forall => {
                return Err(ParseError {
                    line: t.line,
                    column: t.column,
                    message: format!(
                        "reserved word {} cannot be used as an atom",
                        t.tok.describe()
                    ),
                })
            }
            other => {
                return Err(ParseError {
                    line: t.line,
                    column: t.column,
                    message: format!("expected an atom name, found {}", other.describe()),
                })
            }
        }
    }
    Ok(out)
}

pub fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_lowercase())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !RESERVED.contains(&s)
}
