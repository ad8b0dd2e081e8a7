//! Text grammar for integer polynomials.
//!
//! ```text
//! expr   := [+|-] term { (+|-) term }
//! term   := power { [*] power }          juxtaposition multiplies
//! power  := atom [ ^ integer | ^{integer} ]
//! atom   := integer | variable | ( expr )
//! ```
//!
//! Variables are single letters from [`VARIABLES`]; whitespace is ignored.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{BiPoly, IntPoly};

/// Accepted variable names, in exponent-vector order.
pub const VARIABLES: [char; 5] = ['t', 'x', 'v', 'y', 'u'];
const NVARS: usize = VARIABLES.len();
const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable '{name}' at offset {offset}")]
    UnknownVariable { name: char, offset: usize },
    #[error("exponent at offset {offset} exceeds {MAX_EXPONENT}")]
    ExponentTooLarge { offset: usize },
    #[error("expected at most one main variable (x or y) and one parameter (t or v), found {0:?}")]
    TooManyVariables(Vec<char>),
}

/// Sparse polynomial in the grammar's variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<[u32; NVARS], BigInt>,
}

fn var_index(name: char) -> Option<usize> {
    VARIABLES.iter().position(|&v| v == name)
}

impl MultiPoly {
    pub fn constant(c: BigInt) -> Self {
        let mut m = MultiPoly::default();
        m.add_term([0; NVARS], c);
        m
    }

    /// The variable `name`; panics on names outside [`VARIABLES`].
    pub fn var(name: char) -> Self {
        let mut e = [0; NVARS];
        e[var_index(name).expect("known variable")] = 1;
        let mut m = MultiPoly::default();
        m.add_term(e, BigInt::one());
        m
    }

    fn add_term(&mut self, e: [u32; NVARS], c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Variables occurring with positive degree.
    pub fn variables(&self) -> Vec<char> {
        (0..NVARS).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).map(|i| VARIABLES[i]).collect()
    }

    pub fn degree_in(&self, name: char) -> u32 {
        let i = var_index(name).expect("known variable");
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MultiPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = MultiPoly::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for (k, x) in e.iter_mut().enumerate() {
                    *x += eb[k];
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut acc = MultiPoly::constant(BigInt::one());
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Replaces `name` by the integer `value`.
    pub fn substitute(&self, name: char, value: &BigInt) -> Self {
        let i = var_index(name).expect("known variable");
        let mut out = MultiPoly::default();
        for (e, c) in &self.terms {
            let mut e2 = *e;
            e2[i] = 0;
            out.add_term(e2, c * num_traits::pow(value.clone(), e[i] as usize));
        }
        out
    }

    /// Views the polynomial as `f(param, main)`; other variables must be absent.
    pub fn to_bipoly(&self, main: char, param: char) -> Result<BiPoly, ParseError> {
        let (mi, pi) = (var_index(main).expect("known"), var_index(param).expect("known"));
        let stray: Vec<char> = self.variables().into_iter().filter(|&v| v != main && v != param).collect();
        if !stray.is_empty() {
            return Err(ParseError::TooManyVariables(self.variables()));
        }
        let dx = self.degree_in(main) as usize;
        let dt = self.degree_in(param) as usize;
        let mut rows = vec![vec![BigInt::zero(); dt + 1]; dx + 1];
        for (e, c) in &self.terms {
            rows[e[mi] as usize][e[pi] as usize] += c;
        }
        Ok(BiPoly::new(rows.into_iter().map(IntPoly::new).collect()))
    }
}

/// Parses any expression in the grammar.
pub fn parse_multivariate(text: &str) -> Result<MultiPoly, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("unexpected character"));
    }
    Ok(out)
}

/// Parses `f(t, x)`. The main variable is `x` (or `y`), the parameter `t`
/// (or `v`).
pub fn parse_poly(text: &str) -> Result<BiPoly, ParseError> {
    let m = parse_multivariate(text)?;
    let vars = m.variables();
    let pick = |a: char, b: char, default: char| match (vars.contains(&a), vars.contains(&b)) {
        (true, true) => Err(ParseError::TooManyVariables(vars.clone())),
        (false, true) => Ok(b),
        (true, false) => Ok(a),
        (false, false) => Ok(default),
    };
    let main = pick('x', 'y', 'x')?;
    let param = pick('t', 'v', 't')?;
    m.to_bipoly(main, param)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, message: &str) -> ParseError {
        ParseError::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == b'+' { acc.add(&t) } else { acc.add(&t.neg()) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' => acc = acc.mul(&self.power()?),
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let braced = self.peek() == Some(b'{');
        if braced {
            self.pos += 1;
        }
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.syntax("expected exponent"));
        }
        if braced {
            if self.peek() != Some(b'}') {
                return Err(self.syntax("expected '}'"));
            }
            self.pos += 1;
        }
        match digits.parse::<u32>() {
            Ok(e) if e <= MAX_EXPONENT => Ok(base.pow(e)),
            _ => Err(ParseError::ExponentTooLarge { offset: start }),
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<MultiPoly, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                Ok(MultiPoly::constant(d.parse().expect("ascii digits")))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let offset = self.pos;
                self.pos += 1;
                let name = c as char;
                if var_index(name).is_none() {
                    return Err(ParseError::UnknownVariable { name, offset });
                }
                Ok(MultiPoly::var(name))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => Err(self.syntax("expected a number, variable or '('")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}
