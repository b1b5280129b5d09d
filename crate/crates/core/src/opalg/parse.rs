//! Recursive-descent parser for the operator DSL.
//!
//! ```text
//! expr    := ["+"|"-"] term (("+"|"-") term)* ;
//! term    := [coeff "*"?] factor+ | coeff ;
//! coeff   := rational | rational "i" | "i"
//!          | "(" ["-"] rational ("+"|"-") [rational] "i" ")" ;
//! rational:= integer ["/" integer] ;
//! factor  := species ["#" integer] ["+"] "(" index ("," index)* ")"
//!          | "delta" "(" index ("," index)* ";" index ("," index)* ")" ;
//! species := "b" | "d" | "a" | "u" ;
//! index   := identifier | integer ;
//! ```
//!
//! `#k` selects Green component `k` of a parabose operator and `delta(..; ..)`
//! is a Kronecker delta between two mode labels. Both are printed back by
//! the `Display` impl of [`OperatorExpr`], so printing and re-parsing a
//! canonical expression is the identity.

use num_complex::Complex;
use num_rational::Rational64;
use num_traits::Zero;
use thiserror::Error;

use super::coeff::{Coefficient, ExactComplex};
use super::expr::{DeltaFactor, Index, Kind, LadderSymbol, ModeLabel, OperatorExpr, Species, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown species `{name}` at {line}:{col}")]
    UnknownSpecies { line: usize, col: usize, name: String },
    #[error("malformed index list at {line}:{col}: {msg}")]
    MalformedIndex { line: usize, col: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
    Semi,
    Hash,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '#' => Some(Tok::Hash),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, line: tl, col: tc });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse::<i64>().map_err(|_| ParseError::Syntax {
                line: tl,
                col: tc,
                msg: format!("integer `{s}` out of range"),
            })?;
            col += i - start;
            out.push(Token { tok: Tok::Int(n), line: tl, col: tc });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            col += i - start;
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: tl, col: tc });
            continue;
        }
        return Err(ParseError::Syntax { line: tl, col: tc, msg: format!("unexpected character `{c}`") });
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError::Syntax { line, col, msg: msg.into() })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn expr(&mut self) -> Result<OperatorExpr, ParseError> {
        let mut terms = Vec::new();
        let mut negative = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            let mut t = self.term()?;
            if negative {
                t.coeff = t.coeff.negated();
            }
            terms.push(t);
            match self.peek() {
                Tok::Plus => negative = false,
                Tok::Minus => negative = true,
                Tok::End => break,
                other => return self.syntax(format!("expected `+`, `-` or end of input, found {}", describe(other))),
            }
            self.bump();
        }
        Ok(OperatorExpr::from_terms(terms))
    }

    fn starts_coeff(&self) -> bool {
        match self.peek() {
            Tok::Int(_) | Tok::LParen => true,
            Tok::Ident(s) => s == "i",
            _ => false,
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut coeff = ExactComplex::one();
        let had_coeff = self.starts_coeff();
        if had_coeff {
            coeff = self.coeff()?;
            if *self.peek() == Tok::Star {
                self.bump();
                if !matches!(self.peek(), Tok::Ident(_)) {
                    return self.syntax("expected a factor after `*`");
                }
            }
        }
        let mut deltas = Vec::new();
        let mut factors = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            match self.factor()? {
                Factor::Ladder(l) => factors.push(l),
                Factor::Delta(d) => deltas.push(d),
            }
        }
        if !had_coeff && factors.is_empty() && deltas.is_empty() {
            return self.syntax(format!("expected a term, found {}", describe(self.peek())));
        }
        Ok(Term::new(coeff, deltas, factors))
    }

    fn rational(&mut self) -> Result<Rational64, ParseError> {
        let num = match self.bump() {
            Tok::Int(n) => n,
            other => {
                self.pos -= 1;
                return self.syntax(format!("expected a number, found {}", describe(&other)));
            }
        };
        if *self.peek() == Tok::Slash {
            self.bump();
            match self.bump() {
                Tok::Int(0) => {
                    self.pos -= 1;
                    self.syntax("zero denominator")
                }
                Tok::Int(den) => Ok(Rational64::new(num, den)),
                other => {
                    self.pos -= 1;
                    self.syntax(format!("expected a denominator, found {}", describe(&other)))
                }
            }
        } else {
            Ok(Rational64::from_integer(num))
        }
    }

    fn imaginary_unit(&mut self) -> bool {
        if matches!(self.peek(), Tok::Ident(s) if s == "i") {
            self.bump();
            true
        } else {
            false
        }
    }

    fn coeff(&mut self) -> Result<ExactComplex, ParseError> {
        let zero = Rational64::zero();
        let one = Rational64::from_integer(1);
        match self.peek() {
            Tok::Ident(_) => {
                self.bump();
                Ok(Complex::new(zero, one))
            }
            Tok::Int(_) => {
                let r = self.rational()?;
                if self.imaginary_unit() {
                    Ok(Complex::new(zero, r))
                } else {
                    Ok(Complex::new(r, zero))
                }
            }
            _ => {
                self.expect(Tok::LParen, "`(`")?;
                let re_negative = if *self.peek() == Tok::Minus {
                    self.bump();
                    true
                } else {
                    false
                };
                let mut re = self.rational()?;
                if re_negative {
                    re = -re;
                }
                let im_negative = match self.bump() {
                    Tok::Plus => false,
                    Tok::Minus => true,
                    other => {
                        self.pos -= 1;
                        return self.syntax(format!("expected `+` or `-` in complex coefficient, found {}", describe(&other)));
                    }
                };
                let mut im = if matches!(self.peek(), Tok::Int(_)) { self.rational()? } else { one };
                if !self.imaginary_unit() {
                    return self.syntax("expected `i` in complex coefficient");
                }
                if im_negative {
                    im = -im;
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(Complex::new(re, im))
            }
        }
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let (line, col) = self.here();
        let name = match self.bump() {
            Tok::Ident(s) => s,
            _ => unreachable!("factor starts with an identifier"),
        };
        if name == "delta" {
            self.expect(Tok::LParen, "`(` after `delta`")?;
            let x = self.index_list(&[Tok::Semi])?;
            self.bump();
            let y = self.index_list(&[Tok::RParen])?;
            self.bump();
            return Ok(Factor::Delta(DeltaFactor::new(x, y)));
        }
        let species = Species::from_symbol(&name).ok_or(ParseError::UnknownSpecies { line, col, name: name.clone() })?;
        let mut green = None;
        if *self.peek() == Tok::Hash {
            self.bump();
            match self.bump() {
                Tok::Int(k) if k >= 1 && k <= u32::MAX as i64 => green = Some(k as u32),
                other => {
                    self.pos -= 1;
                    return self.syntax(format!("expected a positive Green component, found {}", describe(&other)));
                }
            }
        }
        let kind = if *self.peek() == Tok::Plus && *self.peek_at(1) == Tok::LParen {
            self.bump();
            Kind::Create
        } else {
            Kind::Annihilate
        };
        if *self.peek() != Tok::LParen {
            return self.syntax(format!("expected `(` after species `{name}`, found {}", describe(self.peek())));
        }
        self.bump();
        let mode = self.index_list(&[Tok::RParen])?;
        self.bump();
        Ok(Factor::Ladder(LadderSymbol { kind, species, green, mode }))
    }

    /// Parses `index ("," index)*` and stops in front of one of `closers`.
    fn index_list(&mut self, closers: &[Tok]) -> Result<ModeLabel, ParseError> {
        let mut parts = Vec::new();
        loop {
            let (line, col) = self.here();
            match self.bump() {
                Tok::Int(n) => parts.push(Index::Int(n)),
                Tok::Ident(s) => parts.push(Index::Name(s)),
                other => {
                    self.pos -= 1;
                    return Err(ParseError::MalformedIndex {
                        line,
                        col,
                        msg: format!("expected an identifier or integer, found {}", describe(&other)),
                    });
                }
            }
            let (line, col) = self.here();
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                t if closers.contains(t) => return Ok(ModeLabel::new(parts)),
                other => {
                    return Err(ParseError::MalformedIndex {
                        line,
                        col,
                        msg: format!("expected `,` or closing delimiter, found {}", describe(other)),
                    })
                }
            }
        }
    }
}

enum Factor {
    Ladder(LadderSymbol),
    Delta(DeltaFactor),
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("`{n}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Semi => "`;`".into(),
        Tok::Hash => "`#`".into(),
        Tok::End => "end of input".into(),
    }
}

/// Parses DSL text into an expression. Term order is preserved and zero
/// terms are dropped; use [`OperatorExpr::canonical`] to merge like terms.
pub fn parse_expr(text: &str) -> Result<OperatorExpr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    p.expr()
}
