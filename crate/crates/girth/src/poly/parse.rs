//! Recursive-descent parser for matrix entries: rational functions in
//! t1..tk with integer literals.
//!
//! Grammar (whitespace insignificant):
//!   entry    := poly ( "/" poly )?
//!   poly     := "(" sum ")" | sum
//!   sum      := term ( ("+"|"-") term )*
//!   term     := integer ( "*" mono )? | mono
//!   mono     := var ( "^" uint )? ( "*" var ( "^" uint )? )*
//!   var      := "t" uint        (1-based index <= k)
//!   integer  := ("-")? uint
//!
//! As a convenience, a "-" directly in front of a mono ("-t1") is accepted
//! as -1 times the mono. In characteristic p, integer literals are reduced
//! mod p at parse time.

use crate::error::{Error, Result};
use crate::poly::{Coeff, CoeffRing, MultiPoly, RationalEntry};
use num_bigint::BigInt;
use num_traits::One;

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    k: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, k: usize) -> Parser<'a> {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
            k,
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::SyntaxError {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self
            .bytes
            .get(self.pos)
            .map_or(false, |b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        match self.peek() {
            Some(x) if x == b => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(&format!("expected '{}'", b as char)),
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .map_or(false, |b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(s.parse::<BigInt>().unwrap())
    }

    fn uint_u32(&mut self) -> Result<u32> {
        let v = self.uint()?;
        u32::try_from(&v).map_or_else(|_| self.err("exponent too large"), Ok)
    }

    /// var := "t" uint, returns 0-based index
    fn var(&mut self) -> Result<usize> {
        self.expect(b't')?;
        let idx_pos = self.pos;
        let idx = self.uint()?;
        let idx = usize::try_from(&idx).unwrap_or(usize::MAX);
        if idx == 0 || idx > self.k {
            self.pos = idx_pos;
            return Err(Error::VariableIndexOutOfRange(idx, self.k));
        }
        Ok(idx - 1)
    }

    /// mono := var ("^" uint)? ("*" var ("^" uint)?)*
    fn mono(&mut self) -> Result<Vec<u32>> {
        let mut exps = vec![0u32; self.k];
        loop {
            let i = self.var()?;
            let e = if self.peek() == Some(b'^') {
                self.pos += 1;
                self.uint_u32()?
            } else {
                1
            };
            exps[i] = exps[i].saturating_add(e);
            // a "*" continues the mono only if followed by a var
            let save = self.pos;
            if self.peek() == Some(b'*') {
                self.pos += 1;
                if self.peek() == Some(b't') {
                    continue;
                }
            }
            self.pos = save;
            return Ok(exps);
        }
    }

    /// term := integer ("*" mono)? | ("-")? mono
    fn term(&mut self) -> Result<MultiPoly> {
        let ring = CoeffRing::Int;
        match self.peek() {
            Some(b'-') | Some(b'0'..=b'9') => {
                let negative = if self.peek() == Some(b'-') {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                if self.peek() == Some(b't') {
                    // lenient unary minus before a mono
                    let exps = self.mono()?;
                    let c = if negative { -BigInt::one() } else { BigInt::one() };
                    return Ok(MultiPoly::from_terms(
                        self.k,
                        [(exps, Coeff::Int(c))],
                        &ring,
                    ));
                }
                let mut v = self.uint()?;
                if negative {
                    v = -v;
                }
                let save = self.pos;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    if self.peek() == Some(b't') {
                        let exps = self.mono()?;
                        return Ok(MultiPoly::from_terms(
                            self.k,
                            [(exps, Coeff::Int(v))],
                            &ring,
                        ));
                    }
                    self.pos = save;
                }
                Ok(MultiPoly::constant(self.k, Coeff::Int(v), &ring))
            }
            Some(b't') => {
                let exps = self.mono()?;
                Ok(MultiPoly::from_terms(
                    self.k,
                    [(exps, Coeff::Int(BigInt::one()))],
                    &ring,
                ))
            }
            _ => self.err("expected a term"),
        }
    }

    /// sum := term (("+"|"-") term)*
    fn sum(&mut self) -> Result<MultiPoly> {
        let ring = CoeffRing::Int;
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t, &ring);
                }
                Some(b'-') => {
                    // '-' is consumed by the next term as its sign
                    let t = self.term()?;
                    acc = acc.add(&t, &ring);
                }
                _ => return Ok(acc),
            }
        }
    }

    /// poly := "(" sum ")" | sum
    fn poly(&mut self) -> Result<MultiPoly> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let p = self.sum()?;
            self.expect(b')')?;
            Ok(p)
        } else {
            self.sum()
        }
    }

    fn entry(&mut self) -> Result<(MultiPoly, Option<MultiPoly>)> {
        let num = self.poly()?;
        let den = if self.peek() == Some(b'/') {
            self.pos += 1;
            Some(self.poly()?)
        } else {
            None
        };
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok((num, den))
    }
}

/// Parse one matrix entry. In characteristic p (`ring` is a field), integer
/// literals are reduced mod p.
pub fn parse_entry(text: &str, k: usize, ring: &CoeffRing) -> Result<RationalEntry> {
    let mut parser = Parser::new(text, k);
    let (num, den) = parser.entry()?;
    let den = den.unwrap_or_else(|| MultiPoly::one(k, &CoeffRing::Int));
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    match ring {
        CoeffRing::Int => Ok(RationalEntry { num, den }),
        CoeffRing::Fq(field) => {
            let num = num.int_to_field(field);
            let den = den.int_to_field(field);
            if den.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            Ok(RationalEntry { num, den })
        }
    }
}
