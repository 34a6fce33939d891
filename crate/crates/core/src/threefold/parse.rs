//! Text form of sheaf expressions:
//!
//! ```text
//! expr := term ("+" term)*
//! term := [INT "*"] atom
//! atom := "O(" INT "," INT ")" | "Om(" INT "," INT ")" | "S2Om(" INT "," INT ")"
//! ```
//!
//! Whitespace is ignored everywhere. Multiplicities must be positive.

use super::{Atom, SheafExpr};
use crate::error::{EngineError, Result};
use crate::p2::Kind;

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(ch) = self.src[self.pos..].chars().next() {
            if !ch.is_whitespace() {
                break;
            }
            self.pos += ch.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(EngineError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == ch => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => self.err(format!("expected '{ch}', found '{c}'")),
            None => self.err(format!("expected '{ch}', found end of input")),
        }
    }

    fn eat_keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(word) {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let mut negative = false;
        if let Some(sign @ ('-' | '+')) = self.src[self.pos..].chars().next() {
            negative = sign == '-';
            self.pos += 1;
            self.skip_ws();
        }
        let digits_start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return self.err("expected an integer");
        }
        let magnitude: i64 = match self.src[digits_start..self.pos].parse() {
            Ok(m) => m,
            Err(_) => {
                self.pos = start;
                return self.err("integer out of range");
            }
        };
        Ok(if negative { -magnitude } else { magnitude })
    }

    fn atom(&mut self) -> Result<Atom> {
        // longest keyword first: "O(" is a prefix of neither, but "Om" starts with "O"
        let kind = if self.eat_keyword("S2Om") {
            Kind::Sym2Omega
        } else if self.eat_keyword("Om") {
            Kind::Omega
        } else if self.eat_keyword("O") {
            Kind::O
        } else {
            return self.err("expected O(..), Om(..) or S2Om(..)");
        };
        self.expect('(')?;
        let a = self.int()?;
        self.expect(',')?;
        let b = self.int()?;
        self.expect(')')?;
        Ok(Atom::new(kind, a, b))
    }

    fn term(&mut self) -> Result<(Atom, u64)> {
        let mult = match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '-' || c == '+' => {
                let at = self.pos;
                let m = self.int()?;
                if m <= 0 {
                    self.pos = at;
                    return self.err("multiplicity must be positive");
                }
                self.expect('*')?;
                m as u64
            }
            _ => 1,
        };
        Ok((self.atom()?, mult))
    }
}

pub fn parse_expr(src: &str) -> Result<SheafExpr> {
    let mut cur = Cursor { src, pos: 0 };
    let mut terms = vec![cur.term()?];
    while cur.peek() == Some('+') {
        cur.pos += 1;
        terms.push(cur.term()?);
    }
    if let Some(c) = cur.peek() {
        return cur.err(format!("unexpected '{c}'"));
    }
    Ok(SheafExpr::from_terms(terms))
}
