//! Operator expressions.
//!
//! ```text
//! element := ['-'] term (('+' | '-') term)*
//! term    := scalar '*' product | scalar | product
//! product := atom+
//! atom    := 'L(' word ')' | 'L*(' word ')' | 'Ls(' word ')' | 'P(' id ')'
//! word    := id ('.' id)*
//! scalar  := INT ['/' INT] | '(' rat ',' rat ')'
//! rat     := ['-'] INT ['/' INT]
//! ```
//!
//! A bare scalar stands for that multiple of the identity. Juxtaposed atoms
//! are multiplied, so the rendered form `L(a)L*(b)` reads back in.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use semigroupoid::{Algebra, Element, Error, Letter, Result, Scalar};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Cursor<'a> {
        Cursor { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at column {}",
            self.text[..self.pos].chars().count() + 1
        ))
    }

    /// Everything up to the next `)`, trimmed.
    fn until_close(&mut self) -> Result<&'a str> {
        let rest = &self.text[self.pos..];
        let end = rest.find(')').ok_or_else(|| self.error("missing ')'"))?;
        self.pos += end;
        Ok(rest[..end].trim())
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len());
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some(&rest[..len])
    }
}

fn malformed(cur: &Cursor) -> Error {
    cur.error("malformed scalar")
}

fn rational(cur: &mut Cursor, signed: bool) -> Result<BigRational> {
    let negative = signed && cur.eat('-');
    let numer = cur.digits().ok_or_else(|| malformed(cur))?;
    let numer = BigInt::from_str(numer).map_err(|_| malformed(cur))?;
    let denom = if cur.eat('/') {
        let d = cur.digits().ok_or_else(|| malformed(cur))?;
        BigInt::from_str(d).map_err(|_| malformed(cur))?
    } else {
        BigInt::from(1)
    };
    if denom == BigInt::from(0) {
        return Err(cur.error("malformed scalar: zero denominator"));
    }
    let r = BigRational::new(numer, denom);
    Ok(if negative { -r } else { r })
}

fn scalar(cur: &mut Cursor) -> Result<Scalar> {
    if cur.eat('(') {
        let re = rational(cur, true)?;
        if !cur.eat(',') {
            return Err(malformed(cur));
        }
        let im = rational(cur, true)?;
        if !cur.eat(')') {
            return Err(malformed(cur));
        }
        Ok(Scalar::complex(re, im))
    } else {
        Ok(Scalar::real(rational(cur, false)?))
    }
}

fn letter(alg: &Algebra, cur: &mut Cursor) -> Result<Letter> {
    let g = alg.graph();
    match cur.peek() {
        Some('P') => {
            cur.pos += 1;
            cur.expect('(')?;
            let id = cur.until_close()?;
            cur.expect(')')?;
            let v = g
                .vertex(id)
                .ok_or_else(|| Error::Parse(format!("unknown vertex {id}")))?;
            Ok(Letter::create(g.trivial(v)))
        }
        Some('L') => {
            cur.pos += 1;
            let star = cur.eat('*') || cur.eat('s');
            cur.expect('(')?;
            let word = cur.until_close()?;
            cur.expect(')')?;
            if word.is_empty() {
                return Err(cur.error("empty word"));
            }
            Ok(Letter::new(g.parse_path(word)?, star))
        }
        _ => Err(cur.error("expected L(..), L*(..), Ls(..) or P(..)")),
    }
}

fn is_atom_start(c: Option<char>) -> bool {
    matches!(c, Some('L') | Some('P'))
}

fn product(alg: &Algebra, cur: &mut Cursor) -> Result<Element> {
    let mut letters = vec![letter(alg, cur)?];
    while is_atom_start(cur.peek()) {
        letters.push(letter(alg, cur)?);
    }
    alg.word(&letters)
}

fn term(alg: &Algebra, cur: &mut Cursor) -> Result<Element> {
    match cur.peek() {
        Some(c) if c.is_ascii_digit() || c == '(' => {
            let c = scalar(cur)?;
            if cur.eat('*') {
                Ok(product(alg, cur)?.scale(&c))
            } else {
                Ok(alg.scalar(c))
            }
        }
        _ => product(alg, cur),
    }
}

/// Parses a sum of terms into a reduced element.
pub fn parse_element(alg: &Algebra, text: &str) -> Result<Element> {
    let mut cur = Cursor::new(text);
    if cur.at_end() {
        return Err(Error::Parse("empty expression".into()));
    }
    let negative = cur.eat('-');
    let first = term(alg, &mut cur)?;
    let mut acc = if negative { first.neg() } else { first };
    loop {
        if cur.at_end() {
            return Ok(acc);
        }
        if cur.eat('+') {
            acc = acc.add(&term(alg, &mut cur)?)?;
        } else if cur.eat('-') {
            acc = acc.sub(&term(alg, &mut cur)?)?;
        } else {
            return Err(cur.error("expected '+' or '-'"));
        }
    }
}

/// Parses a product of atoms, without scalars or sums, as a letter word.
pub fn parse_word(alg: &Algebra, text: &str) -> Result<Vec<Letter>> {
    let mut cur = Cursor::new(text);
    let mut letters = Vec::new();
    while !cur.at_end() {
        letters.push(letter(alg, &mut cur)?);
    }
    if letters.is_empty() {
        return Err(Error::Parse("empty word".into()));
    }
    Ok(letters)
}
