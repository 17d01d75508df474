//! Recursive-descent parser for objective formulas.
//!
//! ```text
//! φ ::= at(k, s) | true | false | !φ | X φ | F φ | G φ
//!     | φ U φ | φ R φ | φ & φ | φ | φ | φ -> φ | (φ)
//! ```
//!
//! Binding strength, tightest first: unary, `U`/`R` (right associative),
//! `&`, `|`, `->` (right associative). State names may be bare identifiers or
//! double-quoted.

use super::Formula;
use crate::arena::Arena;
use crate::error::{Error, Result};

pub fn parse(src: &str, arena: &Arena, n: usize) -> Result<Formula> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, arena, n };
    let f = p.implication()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    arena: &'a Arena,
    n: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{tok}`")))
        }
    }

    /// Next word made of `[A-Za-z0-9_]`, without consuming it.
    fn peek_word(&mut self) -> &str {
        self.skip_ws();
        let end = self.src[self.pos..]
            .iter()
            .position(|c| !(c.is_ascii_alphanumeric() || *c == b'_'))
            .map_or(self.src.len(), |k| self.pos + k);
        std::str::from_utf8(&self.src[self.pos..end]).unwrap_or("")
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while self.eat("|") {
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.binary_temporal()?;
        while self.eat("&") {
            lhs = Formula::and(lhs, self.binary_temporal()?);
        }
        Ok(lhs)
    }

    fn binary_temporal(&mut self) -> Result<Formula> {
        let lhs = self.unary()?;
        match self.peek_word() {
            "U" => {
                self.pos += 1;
                Ok(Formula::until(lhs, self.binary_temporal()?))
            }
            "R" => {
                self.pos += 1;
                Ok(Formula::release(lhs, self.binary_temporal()?))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat("!") {
            return Ok(Formula::not(self.unary()?));
        }
        let ctor: Option<fn(Formula) -> Formula> = match self.peek_word() {
            "X" => Some(Formula::next),
            "F" => Some(Formula::eventually),
            "G" => Some(Formula::always),
            _ => None,
        };
        if let Some(ctor) = ctor {
            self.pos += 1;
            return Ok(ctor(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let f = self.implication()?;
            self.expect(")")?;
            return Ok(f);
        }
        let start = self.pos;
        let word = self.peek_word().to_string();
        match word.as_str() {
            "true" => {
                self.pos += 4;
                Ok(Formula::True)
            }
            "false" => {
                self.pos += 5;
                Ok(Formula::False)
            }
            "at" => {
                self.pos += 2;
                self.expect("(")?;
                let player = self.number()?;
                self.expect(",")?;
                let name = self.state_name()?;
                self.expect(")")?;
                if player >= self.n {
                    return Err(Error::PlayerIndexOutOfRange(player));
                }
                let state = self.arena.state(&name).ok_or(Error::UnknownState(name))?;
                Ok(Formula::atom(player, state))
            }
            "" if self.pos >= self.src.len() => Err(self.error("unexpected end of input")),
            _ => {
                self.pos = start;
                Err(self.error("expected a formula"))
            }
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Syntax { pos: start, msg: "expected a player index".into() })
    }

    fn state_name(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'"') {
            self.pos += 1;
            let close = self.src[self.pos..]
                .iter()
                .position(|&c| c == b'"')
                .ok_or_else(|| self.error("unterminated string"))?;
            let name = String::from_utf8_lossy(&self.src[self.pos..self.pos + close]).into_owned();
            self.pos += close + 1;
            return Ok(name);
        }
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || b"_@.-".contains(&self.src[self.pos]))
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a state name"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn single_operator() {
        let g = fixtures::toggle();
        let b = g.arena().state("b").unwrap();
        assert_eq!(parse("F at(0,b)", g.arena(), 2).unwrap(), Formula::eventually(Formula::atom(0, b)));
        assert_eq!(parse("F at(0,\"b\")", g.arena(), 2).unwrap(), Formula::eventually(Formula::atom(0, b)));
    }

    #[test]
    fn penny_objective() {
        let g = fixtures::penny();
        let ar = g.arena();
        let (h, t) = (ar.state("h").unwrap(), ar.state("t").unwrap());
        assert_eq!(
            parse("F (at(0,h) & at(1,t))", ar, 2).unwrap(),
            Formula::eventually(Formula::and(Formula::atom(0, h), Formula::atom(1, t)))
        );
    }

    #[test]
    fn errors() {
        let g = fixtures::toggle();
        let ar = g.arena();
        assert_eq!(parse("at(7,b)", ar, 2), Err(Error::PlayerIndexOutOfRange(7)));
        assert_eq!(parse("at(0,zz)", ar, 2), Err(Error::UnknownState("zz".into())));
        assert!(matches!(parse("F (at(0,a)", ar, 2), Err(Error::Syntax { pos: 10, .. })));
        assert!(matches!(parse("at(0,a) &", ar, 2), Err(Error::Syntax { .. })));
        assert!(matches!(parse("Fat(0,a)", ar, 2), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse("at(0,a) at(0,b)", ar, 2), Err(Error::Syntax { pos: 8, .. })));
    }

    #[test]
    fn precedence_and_associativity() {
        let g = fixtures::toggle();
        let ar = g.arena();
        let (a, b) = (Formula::atom(0, 0), Formula::atom(1, 1));
        let p = |s| parse(s, ar, 2).unwrap();
        // U binds tighter than &, & tighter than |, | tighter than ->
        assert_eq!(
            p("at(0,a) & at(0,a) U at(1,b)"),
            Formula::and(a.clone(), Formula::until(a.clone(), b.clone()))
        );
        assert_eq!(
            p("at(0,a) | at(0,a) & at(1,b)"),
            Formula::or(a.clone(), Formula::and(a.clone(), b.clone()))
        );
        assert_eq!(
            p("at(0,a) -> at(1,b) -> at(0,a)"),
            Formula::implies(a.clone(), Formula::implies(b.clone(), a.clone()))
        );
        assert_eq!(
            p("at(0,a) U at(1,b) R at(0,a)"),
            Formula::until(a.clone(), Formula::release(b.clone(), a.clone()))
        );
        assert_eq!(
            p("!F at(0,a) U at(1,b)"),
            Formula::until(Formula::not(Formula::eventually(a.clone())), b.clone())
        );
        assert_eq!(p("X X true"), Formula::next(Formula::next(Formula::True)));
    }
}
