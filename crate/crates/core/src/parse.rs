//! Parsing of curve equations into exact bivariate Laurent polynomials.
//!
//! Grammar:
//!   equation := expr ('=' expr)?
//!   expr     := ('-')? term (('+'|'-') term)*
//!   term     := factor ('*'? factor)*
//!   factor   := base ('^' integer)?
//!   base     := 'x' | 'y' | rational | '(' expr ')'
//!   rational := integer ('/' positive-integer)?
//!
//! An equation "L = R" parses as L - R. Implicit multiplication ("8x^6") and
//! Laurent exponents ("x^-1*y") are accepted.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{rat_str, Rat};

/// Finite map from exponent pairs to nonzero rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BivariatePoly {
    support: BTreeMap<(i64, i64), Rat>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = ((i64, i64), Rat)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn monomial(i: i64, j: i64, c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_term((i, j), c);
        p
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn add_term(&mut self, e: (i64, i64), c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.support.entry(e).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.support.remove(&e);
        }
    }

    pub fn support(&self) -> &BTreeMap<(i64, i64), Rat> {
        &self.support
    }

    pub fn coeff(&self, e: (i64, i64)) -> Rat {
        self.support.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.support.len() == 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.support {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            support: self
                .support
                .iter()
                .map(|(e, c)| (*e, -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((i1, j1), c1) in &self.support {
            for ((i2, j2), c2) in &other.support {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }

    /// x * df/dx: coefficient at (i, j) becomes i * a_ij.
    pub fn x_dx(&self) -> Self {
        Self::from_terms(
            self.support
                .iter()
                .map(|(&(i, j), c)| ((i, j), c * Rat::from_integer(BigInt::from(i)))),
        )
    }

    /// y * df/dy: coefficient at (i, j) becomes j * a_ij.
    pub fn y_dy(&self) -> Self {
        Self::from_terms(
            self.support
                .iter()
                .map(|(&(i, j), c)| ((i, j), c * Rat::from_integer(BigInt::from(j)))),
        )
    }

    fn pow(&self, n: i64, offset: usize) -> Result<Self> {
        if n >= 0 {
            let mut acc = Self::constant(Rat::one());
            let mut base = self.clone();
            let mut e = n as u64;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc.mul(&base);
                }
                e >>= 1;
                if e > 0 {
                    base = base.mul(&base);
                }
            }
            Ok(acc)
        } else {
            // Laurent inversion only makes sense for monomials
            let (&(i, j), c) = self.support.iter().next().ok_or(Error::ParseError {
                offset,
                message: "negative power of zero".into(),
            })?;
            if self.support.len() != 1 {
                return Err(Error::ParseError {
                    offset,
                    message: "negative power of a non-monomial".into(),
                });
            }
            let inv = Self::monomial(-i, -j, c.recip());
            inv.pow(-n, offset)
        }
    }

    /// Canonical text rendering; re-parsing yields the identical support map.
    pub fn render(&self) -> String {
        if self.support.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (&(i, j), c) in &self.support {
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push_str("-");
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut parts = Vec::new();
            if !mag.is_one() || (i == 0 && j == 0) {
                parts.push(rat_str(&mag));
            }
            if i != 0 {
                parts.push(if i == 1 {
                    "x".to_string()
                } else {
                    format!("x^{}", i)
                });
            }
            if j != 0 {
                parts.push(if j == 1 {
                    "y".to_string()
                } else {
                    format!("y^{}", j)
                });
            }
            out.push_str(&parts.join("*"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(char),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Eq,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

fn lex(src: &str) -> Result<Lexer> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits parse");
                toks.push((Tok::Num(n), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let name = &src[start..i];
                if name.len() == 1 && (name == "x" || name == "y") {
                    toks.push((Tok::Var(name.chars().next().unwrap()), start));
                } else {
                    return Err(Error::UnknownVariable(name.to_string()));
                }
            }
            b'+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            b'/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            b'=' => {
                toks.push((Tok::Eq, i));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            _ => {
                return Err(Error::ParseError {
                    offset: i,
                    message: format!("unexpected character '{}'", src[i..].chars().next().unwrap()),
                })
            }
        }
    }
    Ok(Lexer {
        toks,
        pos: 0,
        end: src.len(),
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        let off = self.offset();
        match self.next() {
            Some(t) if t == tok => Ok(()),
            _ => Err(Error::ParseError {
                offset: off,
                message: format!("expected {}", what),
            }),
        }
    }

    fn err<T>(&self, message: &str) -> Result<T> {
        Err(Error::ParseError {
            offset: self.offset(),
            message: message.to_string(),
        })
    }
}

fn parse_expr(lx: &mut Lexer) -> Result<BivariatePoly> {
    let mut acc = BivariatePoly::zero();
    let mut sign_neg = false;
    if let Some(Tok::Minus) = lx.peek() {
        lx.next();
        sign_neg = true;
    } else if let Some(Tok::Plus) = lx.peek() {
        lx.next();
    }
    let term = parse_term(lx)?;
    acc = acc.add(&if sign_neg { term.neg() } else { term });
    loop {
        match lx.peek() {
            Some(Tok::Plus) => {
                lx.next();
                let t = parse_term(lx)?;
                acc = acc.add(&t);
            }
            Some(Tok::Minus) => {
                lx.next();
                let t = parse_term(lx)?;
                acc = acc.sub(&t);
            }
            _ => break,
        }
    }
    Ok(acc)
}

fn starts_base(tok: Option<&Tok>) -> bool {
    matches!(
        tok,
        Some(Tok::Var(_)) | Some(Tok::Num(_)) | Some(Tok::LParen)
    )
}

fn parse_term(lx: &mut Lexer) -> Result<BivariatePoly> {
    let mut acc = parse_factor(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Star) => {
                lx.next();
                let f = parse_factor(lx)?;
                acc = acc.mul(&f);
            }
            t if starts_base(t) => {
                let f = parse_factor(lx)?;
                acc = acc.mul(&f);
            }
            _ => break,
        }
    }
    Ok(acc)
}

fn parse_factor(lx: &mut Lexer) -> Result<BivariatePoly> {
    let base = parse_base(lx)?;
    if let Some(Tok::Caret) = lx.peek() {
        lx.next();
        let off = lx.offset();
        let mut neg = false;
        if let Some(Tok::Minus) = lx.peek() {
            lx.next();
            neg = true;
        }
        match lx.next() {
            Some(Tok::Num(n)) => {
                let e: i64 = n.to_string().parse().map_err(|_| Error::ParseError {
                    offset: off,
                    message: "exponent too large".into(),
                })?;
                base.pow(if neg { -e } else { e }, off)
            }
            _ => Err(Error::ParseError {
                offset: off,
                message: "expected integer exponent after '^'".into(),
            }),
        }
    } else {
        Ok(base)
    }
}

fn parse_base(lx: &mut Lexer) -> Result<BivariatePoly> {
    let off = lx.offset();
    match lx.next() {
        Some(Tok::Var('x')) => Ok(BivariatePoly::monomial(1, 0, Rat::one())),
        Some(Tok::Var('y')) => Ok(BivariatePoly::monomial(0, 1, Rat::one())),
        Some(Tok::Num(n)) => {
            if let Some(Tok::Slash) = lx.peek() {
                lx.next();
                let doff = lx.offset();
                match lx.next() {
                    Some(Tok::Num(d)) if !d.is_zero() => {
                        Ok(BivariatePoly::constant(Rat::new(n, d)))
                    }
                    _ => Err(Error::ParseError {
                        offset: doff,
                        message: "expected positive integer denominator".into(),
                    }),
                }
            } else {
                Ok(BivariatePoly::constant(Rat::from_integer(n)))
            }
        }
        Some(Tok::LParen) => {
            let inner = parse_expr(lx)?;
            lx.expect(Tok::RParen, "')'")?;
            Ok(inner)
        }
        _ => Err(Error::ParseError {
            offset: off,
            message: "expected 'x', 'y', a number or '('".into(),
        }),
    }
}

/// Parses a curve equation or expression into a BivariatePoly.
pub fn parse_poly(source: &str) -> Result<BivariatePoly> {
    let mut lx = lex(source)?;
    let lhs = parse_expr(&mut lx)?;
    let poly = if let Some(Tok::Eq) = lx.peek() {
        lx.next();
        let rhs = parse_expr(&mut lx)?;
        if lx.peek().is_some() {
            return lx.err("unexpected trailing input");
        }
        lhs.sub(&rhs)
    } else {
        if lx.peek().is_some() {
            return lx.err("unexpected trailing input");
        }
        lhs
    };
    if poly.is_zero() {
        return Err(Error::EmptyPolynomial);
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use proptest::prelude::*;

    #[test]
    fn parses_golden_equation() {
        let p = parse_poly("y^2 = 8*x^6 + x^3 + 2").unwrap();
        let expect = BivariatePoly::from_terms([
            ((0, 2), rat_int(1)),
            ((6, 0), rat_int(-8)),
            ((3, 0), rat_int(-1)),
            ((0, 0), rat_int(-2)),
        ]);
        assert_eq!(p, expect);
        // implicit multiplication spells the same curve
        assert_eq!(parse_poly("y^2 = 8x^6 + x^3 + 2").unwrap(), expect);
    }

    #[test]
    fn full_cancellation() {
        assert_eq!(parse_poly("x*y - x*y"), Err(Error::EmptyPolynomial));
    }

    #[test]
    fn rational_literals() {
        let p = parse_poly("y^2 - x^3 - 1/4").unwrap();
        let expect = BivariatePoly::from_terms([
            ((0, 2), rat_int(1)),
            ((3, 0), rat_int(-1)),
            ((0, 0), rat(-1, 4)),
        ]);
        assert_eq!(p, expect);
    }

    #[test]
    fn laurent_exponents() {
        let p = parse_poly("x^-1*y + 3").unwrap();
        let expect =
            BivariatePoly::from_terms([((-1, 1), rat_int(1)), ((0, 0), rat_int(3))]);
        assert_eq!(p, expect);
    }

    #[test]
    fn unknown_variable() {
        assert_eq!(
            parse_poly("x + z"),
            Err(Error::UnknownVariable("z".to_string()))
        );
    }

    #[test]
    fn syntax_error_carries_offset() {
        match parse_poly("x + + ") {
            Err(Error::ParseError { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected parse error, got {:?}", other),
        }
    }

    #[test]
    fn parenthesized_powers() {
        let p = parse_poly("(x+y)^2").unwrap();
        let expect = BivariatePoly::from_terms([
            ((2, 0), rat_int(1)),
            ((1, 1), rat_int(2)),
            ((0, 2), rat_int(1)),
        ]);
        assert_eq!(p, expect);
    }

    fn arb_expr() -> impl Strategy<Value = String> {
        let leaf = prop_oneof![
            Just("x".to_string()),
            Just("y".to_string()),
            (1i64..20).prop_map(|n| n.to_string()),
            (1i64..9, 1i64..9).prop_map(|(n, d)| format!("{}/{}", n, d)),
            (0i64..5, 0i64..4).prop_map(|(i, j)| format!("x^{}*y^{}", i, j)),
        ];
        prop::collection::vec((leaf, prop_oneof![Just(" + "), Just(" - ")]), 1..5).prop_map(
            |parts| {
                let mut s = String::new();
                for (i, (leaf, op)) in parts.iter().enumerate() {
                    if i > 0 {
                        s.push_str(op);
                    }
                    s.push_str(leaf);
                }
                s
            },
        )
    }

    proptest! {
        #[test]
        fn equation_is_difference(a in arb_expr(), b in arb_expr()) {
            let eqn = parse_poly(&format!("{} = {}", a, b));
            let diff = parse_poly(&format!("({}) - ({})", a, b));
            prop_assert_eq!(eqn, diff);
        }

        #[test]
        fn render_roundtrip(a in arb_expr()) {
            if let Ok(p) = parse_poly(&a) {
                let back = parse_poly(&p.render()).unwrap();
                prop_assert_eq!(back, p);
            }
        }
    }
}
