//! Text form of multivectors: `1.5 - 2*e12 + e[1,10]`.
//!
//! A blade label is `e` followed either by single-digit basis indices
//! (`e13` is `e1 e3`) or by a bracketed list (`e[2,11]`). Indices may appear
//! in any order; the label denotes the product in the written order. A
//! coefficient is joined to its blade with `*`.

use std::fmt;

use super::{blade_mul, BladeIndex, Multivector, Signature};
use crate::error::{GftError, Result};

pub(super) fn write(mv: &Multivector, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (blade, c) in mv.terms() {
        let (neg, abs) = if c < 0.0 { (true, -c) } else { (false, c) };
        match (first, neg) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        first = false;
        if blade == BladeIndex::SCALAR {
            write!(f, "{abs:?}")?;
        } else if abs == 1.0 {
            write_label(blade, f)?;
        } else {
            write!(f, "{abs:?}*")?;
            write_label(blade, f)?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

fn write_label(blade: BladeIndex, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let indices = blade.indices();
    if indices.iter().all(|&j| j <= 9) {
        f.write_str("e")?;
        for j in indices {
            write!(f, "{j}")?;
        }
        Ok(())
    } else {
        let list: Vec<String> = indices.iter().map(|j| j.to_string()).collect();
        write!(f, "e[{}]", list.join(","))
    }
}

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
    sig: Signature,
}

pub(super) fn parse(sig: Signature, input: &str) -> Result<Multivector> {
    let mut p = Parser { input, bytes: input.as_bytes(), pos: 0, sig };
    p.expression()
}

impl<'a> Parser<'a> {
    fn fail<T>(&self, reason: impl Into<String>) -> Result<T> {
        Err(GftError::Parse { input: self.input.to_string(), reason: reason.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expression(&mut self) -> Result<Multivector> {
        let mut out = Multivector::zero(self.sig);
        self.skip_ws();
        if self.peek().is_none() {
            return self.fail("empty expression");
        }
        let mut first = true;
        loop {
            self.skip_ws();
            let mut sign = 1.0;
            match self.peek() {
                Some(b'+') => self.pos += 1,
                Some(b'-') => {
                    sign = -1.0;
                    self.pos += 1;
                }
                Some(_) if first => {}
                Some(c) => {
                    return self.fail(format!("expected '+' or '-' at byte {}, found '{}'", self.pos, c as char))
                }
                None => break,
            }
            first = false;
            self.skip_ws();
            let (coef, blade) = self.term()?;
            let (s, idx) = blade;
            out.coeffs[idx.0 as usize] += sign * s * coef;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(f64, (f64, BladeIndex))> {
        match self.peek() {
            Some(b'e') => Ok((1.0, self.blade()?)),
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let value = self.number()?;
                self.skip_ws();
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.skip_ws();
                    if self.peek() != Some(b'e') {
                        return self.fail("expected a blade label after '*'");
                    }
                    Ok((value, self.blade()?))
                } else {
                    Ok((value, (1.0, BladeIndex::SCALAR)))
                }
            }
            Some(c) => self.fail(format!("unexpected '{}' at byte {}", c as char, self.pos)),
            None => self.fail("expression ends after a sign"),
        }
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'.') {
            self.pos += 1;
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let mut look = self.pos + 1;
            if matches!(self.bytes.get(look), Some(b'+' | b'-')) {
                look += 1;
            }
            if matches!(self.bytes.get(look), Some(c) if c.is_ascii_digit()) {
                self.pos = look;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
            }
        }
        let text = &self.input[start..self.pos];
        match text.parse::<f64>() {
            Ok(v) => Ok(v),
            Err(_) => self.fail(format!("bad number '{text}'")),
        }
    }

    fn blade(&mut self) -> Result<(f64, BladeIndex)> {
        debug_assert_eq!(self.peek(), Some(b'e'));
        self.pos += 1;
        let mut indices = Vec::new();
        if self.peek() == Some(b'[') {
            self.pos += 1;
            let close = match self.input[self.pos..].find(']') {
                Some(off) => self.pos + off,
                None => return self.fail("unterminated '['"),
            };
            for part in self.input[self.pos..close].split(',') {
                match part.trim().parse::<usize>() {
                    Ok(j) => indices.push(j),
                    Err(_) => return self.fail(format!("bad basis index '{}'", part.trim())),
                }
            }
            self.pos = close + 1;
        } else {
            while let Some(c) = self.peek().filter(u8::is_ascii_digit) {
                indices.push((c - b'0') as usize);
                self.pos += 1;
            }
            if indices.is_empty() {
                return self.fail("blade label 'e' without indices");
            }
        }
        let mut sign = 1.0;
        let mut acc = BladeIndex::SCALAR;
        for &j in &indices {
            if j == 0 || j > self.sig.n() {
                return self.fail(format!("basis vector e{j} does not exist in {}", self.sig));
            }
            let v = BladeIndex::vector(j);
            if acc.0 & v.0 != 0 {
                return self.fail(format!("basis index {j} repeated in blade label"));
            }
            let (s, next) = blade_mul(acc, v, self.sig);
            sign *= s;
            acc = next;
        }
        Ok((sign, acc))
    }
}
