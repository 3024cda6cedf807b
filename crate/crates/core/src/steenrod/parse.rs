//! Text form of elements: `term ('+' term)*`, `term := COEFF? OP ('.' OP)*`,
//! `OP := ('Sq' | 'P') INT`. A bare coefficient denotes a multiple of the
//! identity, and `-` may stand in for `+` with a negated term.

use std::fmt;

use thiserror::Error;

use super::{Monomial, Prime, SteenrodElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, message: message.into() })
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<Option<u64>, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse()
            .map(Some)
            .or_else(|_| err(start, format!("integer {text} is too large")))
    }
}

/// Parses an element over `Z_p`. `Sq` requires `p = 2`, `P` an odd prime.
pub fn parse_element(text: &str, p: Prime) -> Result<SteenrodElement, ParseError> {
    let mut cur = Cursor { src: text.as_bytes(), pos: 0 };
    let mut out = SteenrodElement::zero(p);
    let mut negate = false;
    if cur.peek().is_none() {
        return err(0, "empty expression");
    }
    if cur.eat("-") {
        negate = true;
    }
    loop {
        let (m, c) = parse_term(&mut cur, p)?;
        let c = if negate { p.neg(c) } else { c };
        out.add_term(m, c);
        match cur.peek() {
            None => return Ok(out),
            Some(b'+') => {
                cur.pos += 1;
                negate = false;
            }
            Some(b'-') => {
                cur.pos += 1;
                negate = true;
            }
            Some(other) => return err(cur.pos, format!("unexpected character {:?}", other as char)),
        }
    }
}

fn parse_term(cur: &mut Cursor<'_>, p: Prime) -> Result<(Monomial, u32), ParseError> {
    let coeff = cur.int()?;
    let mut ops = Vec::new();
    loop {
        cur.skip_ws();
        let at = cur.pos;
        let is_sq = cur.eat("Sq");
        if !is_sq && !cur.eat("P") {
            if ops.is_empty() && coeff.is_some() {
                break;
            }
            return err(at, "expected Sq<int> or P<int>");
        }
        if is_sq && !p.is_two() {
            return err(at, format!("Sq is only defined at p = 2, not p = {p}"));
        }
        if !is_sq && p.is_two() {
            return err(at, "P requires an odd prime; use Sq at p = 2");
        }
        match cur.int()? {
            Some(i) => ops.push(i),
            None => return err(cur.pos, "expected an exponent"),
        }
        if !cur.eat(".") {
            break;
        }
    }
    let c = (coeff.unwrap_or(1) % p.get() as u64) as u32;
    Ok((Monomial::new(ops), c))
}

impl fmt::Display for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let name = if self.prime().is_two() { "Sq" } else { "P" };
        for (n, (m, c)) in self.terms().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            if m.is_empty() {
                write!(f, "{c}")?;
                continue;
            }
            if c != 1 {
                write!(f, "{c} ")?;
            }
            for (k, e) in m.exponents().iter().enumerate() {
                if k > 0 {
                    write!(f, " . ")?;
                }
                write!(f, "{name}{e}")?;
            }
        }
        Ok(())
    }
}
