//! Text grammar for ring declarations and superpolynomials.
//!
//! ```text
//! ring   := (decl)*            decl := ('even' | 'odd') ident ['inv'] ';'
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ['^' ['-'] int]
//! atom   := int ['/' int] | ident | '(' expr ')'
//! ```
//!
//! `#` starts a comment that runs to the end of the line. A leading minus
//! binds looser than `^`, so `-x^2` is `-(x^2)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;
use crate::grassmann::{Parity, Rational, SuperPoly, Var};

/// Largest exponent magnitude accepted in `^`.
pub const MAX_EXPONENT: i64 = 256;
const MAX_DEPTH: usize = 256;

/// An ordered list of declared variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RingDecl {
    vars: Vec<Var>,
    index: BTreeMap<String, usize>,
}

impl RingDecl {
    pub fn new(vars: impl IntoIterator<Item = Var>) -> Result<RingDecl, ParseError> {
        let mut ring = RingDecl::default();
        for v in vars {
            ring.push(v)?;
        }
        Ok(ring)
    }

    pub fn push(&mut self, v: Var) -> Result<(), ParseError> {
        if self.index.contains_key(v.name()) {
            return Err(ParseError::DuplicateVariable(v.name().to_string()));
        }
        self.index.insert(v.name().to_string(), self.vars.len());
        self.vars.push(v);
        Ok(())
    }

    /// Adds the variables of `other` not already declared here.
    pub fn extend(&mut self, other: &RingDecl) -> Result<(), ParseError> {
        for v in &other.vars {
            match self.get(v.name()) {
                Some(w) if w == v => {}
                Some(_) => return Err(ParseError::DuplicateVariable(v.name().to_string())),
                None => self.push(v.clone())?,
            }
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Var> {
        self.index.get(name).map(|&i| &self.vars[i])
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    /// Declaration text that parses back to this ring.
    pub fn to_text(&self) -> String {
        self.vars
            .iter()
            .map(|v| {
                let kind = if v.is_odd() { "odd" } else { "even" };
                let inv = if v.is_invertible() { " inv" } else { "" };
                format!("{kind} {}{inv};", v.name())
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Parsed expression with source positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprAst {
    Rational(Rational),
    Var { name: String, pos: Pos },
    Neg(Box<ExprAst>),
    Sum(Vec<(bool, ExprAst)>),
    Product(Vec<ExprAst>),
    Power { base: Box<ExprAst>, exp: i64, pos: Pos },
    Paren(Box<ExprAst>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

struct Lexer<'a> {
    src: &'a [u8],
    at: usize,
    line: usize,
    column: usize,
    depth: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a [u8]) -> Lexer<'a> {
        Lexer {
            src,
            at: 0,
            line: 1,
            column: 1,
            depth: 0,
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> u8 {
        let c = self.src[self.at];
        self.at += 1;
        if c == b'\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.src.get(self.at) {
            match c {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    self.bump();
                }
                b'#' => {
                    while self.src.get(self.at).is_some_and(|&c| c != b'\n') {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.at).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn check_byte(&self) -> Result<(), ParseError> {
        match self.src.get(self.at) {
            Some(c) if !c.is_ascii() => Err(self.error("non-ASCII input")),
            _ => Ok(()),
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.at;
        match self.src.get(self.at) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => {}
            _ => return None,
        }
        while self
            .src
            .get(self.at)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_' || *c == b'\'')
        {
            self.bump();
        }
        Some(String::from_utf8_lossy(&self.src[start..self.at]).into_owned())
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.at;
        while self.src.get(self.at).is_some_and(u8::is_ascii_digit) {
            self.bump();
        }
        if start == self.at {
            return None;
        }
        let s = std::str::from_utf8(&self.src[start..self.at]).expect("ascii digits");
        Some(s.parse().expect("ascii digits"))
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => {
                self.check_byte()?;
                Err(self.error("unexpected trailing input"))
            }
        }
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("expression nested too deeply"));
        }
        let mut terms = vec![(false, self.term()?)];
        loop {
            if self.eat(b'+') {
                terms.push((false, self.term()?));
            } else if self.eat(b'-') {
                terms.push((true, self.term()?));
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(if terms.len() == 1 && !terms[0].0 {
            terms.pop().unwrap().1
        } else {
            ExprAst::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.eat(b'*') {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            ExprAst::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<ExprAst, ParseError> {
        if self.eat(b'-') {
            self.depth += 1;
            if self.depth > MAX_DEPTH {
                return Err(self.error("expression nested too deeply"));
            }
            let inner = self.factor()?;
            self.depth -= 1;
            return Ok(ExprAst::Neg(Box::new(inner)));
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let pos = self.pos();
            let negative = self.eat(b'-');
            let Some(n) = self.digits() else {
                self.check_byte()?;
                return Err(self.error("expected integer exponent"));
            };
            let n = if negative { -n } else { n };
            let exp = i64::try_from(&n)
                .ok()
                .filter(|e| e.abs() <= MAX_EXPONENT)
                .ok_or_else(|| self.error(format!("exponent magnitude exceeds {MAX_EXPONENT}")))?;
            return Ok(ExprAst::Power {
                base: Box::new(base),
                exp,
                pos,
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExprAst, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let inner = self.expr()?;
                if !self.eat(b')') {
                    self.check_byte()?;
                    return Err(self.error("expected `)`"));
                }
                Ok(ExprAst::Paren(Box::new(inner)))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits().expect("digit present");
                if self.peek() == Some(b'/') {
                    self.bump();
                    let Some(d) = self.digits() else {
                        self.check_byte()?;
                        return Err(self.error("expected denominator"));
                    };
                    if d.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    Ok(ExprAst::Rational(Rational::new(n, d)))
                } else {
                    Ok(ExprAst::Rational(Rational::from_integer(n)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let pos = self.pos();
                let name = self.ident().expect("identifier start");
                Ok(ExprAst::Var { name, pos })
            }
            None => Err(self.error("unexpected end of input")),
            Some(_) => {
                self.check_byte()?;
                Err(self.error("expected a number, variable or `(`"))
            }
        }
    }
}

/// Parses a ring declaration such as `even x inv; odd theta;`.
pub fn parse_ring(text: impl AsRef<[u8]>) -> Result<RingDecl, ParseError> {
    let mut lx = Lexer::new(text.as_ref());
    let mut ring = RingDecl::default();
    while lx.peek().is_some() {
        lx.check_byte()?;
        let kind_pos = lx.pos();
        let parity = match lx.ident().as_deref() {
            Some("even") => Parity::Even,
            Some("odd") => Parity::Odd,
            _ => {
                return Err(ParseError::Syntax {
                    line: kind_pos.line,
                    column: kind_pos.column,
                    message: "expected `even` or `odd`".into(),
                })
            }
        };
        lx.skip_ws();
        lx.check_byte()?;
        let Some(name) = lx.ident() else {
            return Err(lx.error("expected variable name"));
        };
        if matches!(name.as_str(), "even" | "odd" | "inv") {
            return Err(lx.error(format!("`{name}` is reserved")));
        }
        let mut invertible = false;
        if lx.peek() != Some(b';') {
            lx.check_byte()?;
            match lx.ident().as_deref() {
                Some("inv") => invertible = true,
                _ => return Err(lx.error("expected `inv` or `;`")),
            }
        }
        if !lx.eat(b';') {
            lx.check_byte()?;
            return Err(lx.error("expected `;`"));
        }
        if invertible && parity == Parity::Odd {
            return Err(ParseError::InvertibleOddVariable(name));
        }
        let var = Var::new(&name, parity, invertible).expect("parity checked above");
        ring.push(var)?;
    }
    Ok(ring)
}

/// Parses an expression into its syntax tree.
pub fn parse_ast(text: impl AsRef<[u8]>) -> Result<ExprAst, ParseError> {
    let mut lx = Lexer::new(text.as_ref());
    let ast = lx.expr()?;
    lx.expect_end()?;
    Ok(ast)
}

/// Parses and evaluates an expression over `ring`.
pub fn parse_poly(text: impl AsRef<[u8]>, ring: &RingDecl) -> Result<SuperPoly, ParseError> {
    evaluate(&parse_ast(text)?, ring)
}

/// Evaluates a syntax tree in `ring`.
pub fn evaluate(ast: &ExprAst, ring: &RingDecl) -> Result<SuperPoly, ParseError> {
    Ok(match ast {
        ExprAst::Rational(r) => SuperPoly::constant(r.clone()),
        ExprAst::Var { name, pos } => {
            let v = ring.get(name).ok_or_else(|| ParseError::UnknownVariable {
                name: name.clone(),
                line: pos.line,
                column: pos.column,
            })?;
            SuperPoly::var(v)
        }
        ExprAst::Neg(inner) => -evaluate(inner, ring)?,
        ExprAst::Sum(terms) => {
            let mut acc = SuperPoly::zero();
            for (neg, t) in terms {
                let v = evaluate(t, ring)?;
                if *neg {
                    acc -= &v;
                } else {
                    acc += &v;
                }
            }
            acc
        }
        ExprAst::Product(factors) => {
            let mut acc = SuperPoly::one();
            for f in factors {
                acc = &acc * &evaluate(f, ring)?;
            }
            acc
        }
        ExprAst::Paren(inner) => evaluate(inner, ring)?,
        ExprAst::Power { base, exp, pos } => {
            if *exp < 0 {
                if let ExprAst::Var { name, .. } = base.as_ref() {
                    if let Some(v) = ring.get(name) {
                        if !v.is_invertible() {
                            return Err(ParseError::NegativePowerOfNonInvertible {
                                name: name.clone(),
                                line: pos.line,
                                column: pos.column,
                            });
                        }
                    }
                }
            }
            let b = evaluate(base, ring)?;
            b.pow(*exp).map_err(|e| ParseError::Evaluation {
                line: pos.line,
                column: pos.column,
                message: e.to_string(),
            })?
        }
    })
}

fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn format_monomial(m: &crate::grassmann::Monomial) -> String {
    m.factors()
        .iter()
        .map(|(v, e)| {
            if *e == 1 {
                v.name().to_string()
            } else {
                format!("{}^{}", v.name(), e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Deterministic rendering in the grammar above. Terms are listed by
/// decreasing total degree, ties broken by decreasing monomial order.
pub fn pretty(p: &SuperPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by(|(a, _), (b, _)| b.total_degree().cmp(&a.total_degree()).then_with(|| b.cmp(a)));
    let mut out = String::new();
    for (i, (m, c)) in terms.into_iter().enumerate() {
        let negative = c.is_negative();
        match (i, negative) {
            (0, false) => {}
            (0, true) => out.push_str("- "),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        let mag = c.abs();
        if m.is_one() {
            out.push_str(&format_rational(&mag));
        } else if mag.is_one() {
            out.push_str(&format_monomial(m));
        } else {
            out.push_str(&format_rational(&mag));
            out.push('*');
            out.push_str(&format_monomial(m));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> RingDecl {
        parse_ring("even x inv; odd theta; even a; odd alpha; even a0; even c1; even c2 inv; odd gamma1;").unwrap()
    }

    #[test]
    fn ring_declarations() {
        let r = parse_ring("even x inv; odd theta;").unwrap();
        assert!(r.get("x").unwrap().is_invertible());
        assert!(r.get("theta").unwrap().is_odd());
        assert_eq!(parse_ring("odd theta inv;"), Err(ParseError::InvertibleOddVariable("theta".into())));
        assert_eq!(
            parse_ring("even a; odd a;"),
            Err(ParseError::DuplicateVariable("a".into()))
        );
        let r = parse_ring("even a0; even a1; odd alpha0; odd alpha1;").unwrap();
        assert_eq!(r.vars().len(), 4);
        assert_eq!(parse_ring(r.to_text()).unwrap(), r);
    }

    #[test]
    fn expressions() {
        let r = ring();
        let p = parse_poly("x + a + alpha*theta", &r).unwrap();
        assert_eq!(p.len(), 3);
        assert!(parse_poly("theta^2", &r).unwrap().is_zero());
        let q = parse_poly("(x+c1+gamma1*theta)*(x + c2^-1)", &r).unwrap();
        let x = parse_poly("x", &r).unwrap();
        let c1 = parse_poly("c1", &r).unwrap();
        let gt = parse_poly("gamma1*theta", &r).unwrap();
        let c2i = parse_poly("c2^-1", &r).unwrap();
        let expected = &(&(&x + &c1) + &gt) * &(&x + &c2i);
        assert_eq!(q, expected);
    }

    #[test]
    fn precedence_of_minus() {
        let r = ring();
        assert_eq!(parse_poly("-x^2", &r).unwrap(), -parse_poly("x^2", &r).unwrap());
        assert_eq!(parse_poly("- x^2 + 1", &r).unwrap(), parse_poly("1 - x*x", &r).unwrap());
        assert_eq!(parse_poly("3/6*a", &r).unwrap(), parse_poly("1/2*a", &r).unwrap());
    }

    #[test]
    fn printing() {
        let r = ring();
        assert_eq!(pretty(&SuperPoly::zero()), "0");
        assert_eq!(pretty(&parse_poly("a0*x + x^2", &r).unwrap()), "x^2 + a0*x");
        assert_eq!(pretty(&parse_poly("-alpha*theta", &r).unwrap()), "- alpha*theta");
        assert_eq!(pretty(&parse_poly("3/2*x - 1", &r).unwrap()), "3/2*x - 1");
        assert_eq!(pretty(&parse_poly("c2^-1", &r).unwrap()), "c2^-1");
    }

    #[test]
    fn positioned_errors() {
        let r = ring();
        assert!(matches!(
            parse_poly("x +\n  * a", &r),
            Err(ParseError::Syntax { line: 2, column: 3, .. })
        ));
        assert!(matches!(
            parse_poly("x + y", &r),
            Err(ParseError::UnknownVariable { column: 5, .. })
        ));
        assert!(matches!(
            parse_poly("a^-1", &r),
            Err(ParseError::NegativePowerOfNonInvertible { .. })
        ));
        assert!(matches!(parse_poly("(x + 1)^-1", &r), Err(ParseError::Evaluation { .. })));
        assert!(matches!(parse_poly(b"x\xff".as_slice(), &r), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_poly("1/0", &r), Err(ParseError::Syntax { .. })));
        assert!(parse_poly("(".repeat(10_000), &r).is_err());
        assert!(parse_poly("-".repeat(10_000), &r).is_err());
    }
}
