//! Text grammar for Laurent polynomial systems.
//!
//! ```text
//! # comment
//! vars: x, y
//! x*y - 1 = 0; x - y
//! 3/2 x^-2 y + 7
//! ```
//! Equations are separated by newlines or `;`. A term is a product of numbers (`5`,
//! `3/4`) and powers `x^k` (`k` may be negative); `*` is optional between factors. The
//! `= 0` suffix is optional. Without a `vars:` line the variables are taken in order of
//! first appearance.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::SparseSystem;
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::rational::{Int, Rat};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Int),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eq,
}

struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column: col,
        message: msg.into(),
    }
}

fn lex(stmt: &str, line: usize, col0: usize) -> Result<Vec<Lexed>> {
    let chars: Vec<char> = stmt.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' | '\u{b7}' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Lexed { tok, line, col });
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Lexed {
                tok: Tok::Num(s.parse().expect("digits")),
                line,
                col,
            });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Lexed {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line,
                col,
            });
        } else {
            return Err(err(line, col, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

/// A parsed term: coefficient and `(variable name, exponent)` factors.
type Term = (Rat, Vec<(String, i64)>, (usize, usize));

struct Parser<'a> {
    toks: &'a [Lexed],
    pos: usize,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |l| (l.line, l.col))
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (l, c) = self.here();
        Err(err(l, c, msg))
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|l| &l.tok);
        self.pos += 1;
        t
    }

    fn signed_int(&mut self) -> Result<i64> {
        let paren = self.peek() == Some(&Tok::LParen);
        if paren {
            self.pos += 1;
        }
        let neg = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let v = match self.bump() {
            Some(Tok::Num(k)) => i64::try_from(k.clone()).map_err(|_| ()),
            _ => Err(()),
        };
        let Ok(v) = v else {
            self.pos -= 1;
            return self.fail("expected an integer exponent");
        };
        if paren && self.bump() != Some(&Tok::RParen) {
            self.pos -= 1;
            return self.fail("expected ')' after exponent");
        }
        Ok(if neg { -v } else { v })
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)))
    }

    /// factor := number ['/' number] | ident ['^' int]
    fn factor(&mut self, coeff: &mut Rat, mono: &mut Vec<(String, i64)>) -> Result<()> {
        match self.peek().cloned() {
            Some(Tok::Num(p)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.bump().cloned() {
                        Some(Tok::Num(q)) if !q.is_zero() => *coeff *= Rat::new(p, q),
                        Some(Tok::Num(_)) => {
                            self.pos -= 1;
                            return self.fail("zero denominator");
                        }
                        _ => {
                            self.pos -= 1;
                            return self.fail("expected a denominator after '/'");
                        }
                    }
                } else {
                    *coeff *= Rat::from_integer(p);
                }
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let e = if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    self.signed_int()?
                } else {
                    1
                };
                mono.push((name, e));
            }
            _ => return self.fail("expected a number or a variable"),
        }
        Ok(())
    }

    fn term(&mut self, sign: Rat) -> Result<Term> {
        let at = self.here();
        let mut coeff = sign;
        let mut mono = Vec::new();
        self.factor(&mut coeff, &mut mono)?;
        loop {
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
                self.factor(&mut coeff, &mut mono)?;
            } else if self.starts_factor() {
                self.factor(&mut coeff, &mut mono)?;
            } else {
                break;
            }
        }
        Ok((coeff, mono, at))
    }

    fn expr(&mut self) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let mut sign = Rat::one();
            let mut saw_sign = false;
            while let Some(t @ (Tok::Plus | Tok::Minus)) = self.peek() {
                if *t == Tok::Minus {
                    sign = -sign;
                }
                saw_sign = true;
                self.pos += 1;
            }
            if !first && !saw_sign {
                break;
            }
            terms.push(self.term(sign)?);
            first = false;
        }
        Ok(terms)
    }

    fn equation(&mut self) -> Result<Vec<Term>> {
        let terms = self.expr()?;
        if self.peek() == Some(&Tok::Eq) {
            self.pos += 1;
            let rhs = self.expr()?;
            let zero = rhs.len() == 1 && rhs[0].0.is_zero();
            if !zero {
                let (l, c) = rhs.first().map_or(self.here(), |t| t.2);
                return Err(err(l, c, "right-hand side must be 0"));
            }
        }
        if self.pos < self.toks.len() {
            return self.fail("unexpected token");
        }
        Ok(terms)
    }
}

/// Parses a system and builds its matrices; returns the system and any warnings.
pub fn parse_system(text: &str) -> Result<SparseSystem> {
    let mut declared: Option<Vec<String>> = None;
    let mut equations: Vec<(Vec<Term>, usize)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if let Some(rest) = trimmed.strip_prefix("vars:") {
            if declared.is_some() || !equations.is_empty() {
                return Err(err(line, 1, "variables must be declared once, before the equations"));
            }
            let names: Vec<String> =
                rest.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).map(String::from).collect();
            for (k, name) in names.iter().enumerate() {
                let ok = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                    && name.chars().all(|c| c.is_alphanumeric() || c == '_');
                if !ok || names[..k].contains(name) {
                    return Err(err(line, 1, format!("bad or repeated variable name {name:?}")));
                }
            }
            declared = Some(names);
            continue;
        }
        let mut col = 1;
        for stmt in content.split(';') {
            if !stmt.trim().is_empty() {
                let toks = lex(stmt, line, col)?;
                let mut p = Parser {
                    toks: &toks,
                    pos: 0,
                    end: (line, col + stmt.chars().count()),
                };
                equations.push((p.equation()?, line));
            }
            col += stmt.chars().count() + 1;
        }
    }

    let mut vars: Vec<String> = declared.clone().unwrap_or_default();
    for (terms, _) in &equations {
        for (_, mono, (l, c)) in terms {
            for (name, _) in mono {
                if !vars.contains(name) {
                    if declared.is_some() {
                        return Err(err(*l, *c, format!("undeclared variable {name:?}")));
                    }
                    vars.push(name.clone());
                }
            }
        }
    }
    let n = vars.len();
    if equations.len() != n || n == 0 {
        return Err(Error::EquationCount {
            equations: equations.len(),
            variables: n,
        });
    }

    let mut order: Vec<Vec<i64>> = Vec::new();
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut rows: Vec<HashMap<usize, Rat>> = Vec::new();
    for (terms, _) in &equations {
        let mut row: HashMap<usize, Rat> = HashMap::new();
        for (coeff, mono, _) in terms {
            let mut e = vec![0i64; n];
            for (name, k) in mono {
                let v = vars.iter().position(|x| x == name).expect("collected above");
                e[v] += k;
            }
            let j = *index.entry(e.clone()).or_insert_with(|| {
                order.push(e);
                order.len() - 1
            });
            *row.entry(j).or_insert_with(Rat::zero) += coeff;
        }
        rows.push(row);
    }
    for (i, row) in rows.iter().enumerate() {
        if row.values().all(Zero::is_zero) {
            return Err(Error::ZeroRow(i + 1));
        }
    }
    let keep: Vec<usize> = (0..order.len()).filter(|&j| rows.iter().any(|r| r.get(&j).is_some_and(|c| !c.is_zero()))).collect();
    let mut warnings = Vec::new();
    for j in 0..order.len() {
        if !keep.contains(&j) {
            warnings.push(format!("exponent {:?} cancels in every equation and is dropped from the support", order[j]));
        }
    }
    let points: Vec<Vec<i64>> = keep.iter().map(|&j| order[j].clone()).collect();
    let c = RatMatrix::from_rows(
        rows.iter()
            .map(|r| keep.iter().map(|j| r.get(j).cloned().unwrap_or_else(Rat::zero)).collect())
            .collect(),
    )?;
    let mut sys = SparseSystem::new(vars, points, c)?;
    sys.warnings = warnings;
    Ok(sys)
}
