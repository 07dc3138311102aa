//! Fractions with bosonic polynomial denominators.
//!
//! Chart overlaps that remove a diagonal make functions like `1/(a2 - a1)`
//! regular. A [`Frac`] is a superpolynomial numerator over a product of
//! normalized bosonic factors. Denominator factors are never zero divisors,
//! so equality is decided by cross-multiplication.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::AlgebraError;
use crate::grassmann::{rat, Monomial, Rational, SuperPoly, Var};

#[derive(Clone, Debug)]
pub struct Frac {
    num: SuperPoly,
    den: BTreeMap<SuperPoly, u32>,
}

impl Frac {
    pub fn zero() -> Frac {
        Frac::from(SuperPoly::zero())
    }

    pub fn one() -> Frac {
        Frac::from(SuperPoly::one())
    }

    /// `num / den`, where `den` must be a unit after localizing at its
    /// bosonic part.
    pub fn new(num: SuperPoly, den: SuperPoly) -> Result<Frac, AlgebraError> {
        Ok(&Frac::from(num) * &Frac::from(den).invert()?)
    }

    pub fn numerator(&self) -> &SuperPoly {
        &self.num
    }

    pub fn denominator_factors(&self) -> impl Iterator<Item = (&SuperPoly, u32)> {
        self.den.iter().map(|(d, e)| (d, *e))
    }

    /// Product of the denominator factors.
    pub fn denominator(&self) -> SuperPoly {
        let mut out = SuperPoly::one();
        for (d, e) in &self.den {
            out = &out * &d.pow(*e as i64).expect("non-negative power");
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_empty()
    }

    /// The polynomial value, if the denominator divides the numerator.
    pub fn as_poly(&self) -> Option<SuperPoly> {
        if self.den.is_empty() {
            return Some(self.num.clone());
        }
        exact_div(&self.num, &self.denominator())
    }

    /// Multiplies by `d^{-e}` with `d` bosonic and nonzero.
    fn push_den(&mut self, d: &SuperPoly, e: u32) {
        if e == 0 {
            return;
        }
        let (c, unit, key) = normalize_factor(d);
        let unit_inv = unit.inverse().expect("normalize keeps only invertible content");
        let scale = c.recip();
        for _ in 0..e {
            self.num = self.num.mul_monomial(&scale, &unit_inv);
        }
        if !key.is_one() {
            *self.den.entry(key).or_insert(0) += e;
        }
    }

    /// Cancels denominator factors that divide the numerator.
    pub fn reduce(mut self) -> Frac {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let keys: Vec<SuperPoly> = self.den.keys().cloned().collect();
        for d in keys {
            let mut e = self.den[&d];
            while e > 0 {
                match exact_div(&self.num, &d) {
                    Some(q) => {
                        self.num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e == 0 {
                self.den.remove(&d);
            } else {
                self.den.insert(d, e);
            }
        }
        self
    }

    fn raw_mul(&self, other: &Frac) -> Frac {
        let mut den = self.den.clone();
        for (d, e) in &other.den {
            *den.entry(d.clone()).or_insert(0) += e;
        }
        Frac { num: &self.num * &other.num, den }
    }

    fn raw_add(&self, other: &Frac) -> Frac {
        let mut den = self.den.clone();
        for (d, e) in &other.den {
            let slot = den.entry(d.clone()).or_insert(0);
            *slot = (*slot).max(*e);
        }
        let lift = |f: &Frac| {
            let mut n = f.num.clone();
            for (d, e) in &den {
                let have = f.den.get(d).copied().unwrap_or(0);
                if *e > have {
                    n = &n * &d.pow((*e - have) as i64).expect("non-negative power");
                }
            }
            n
        };
        Frac {
            num: &lift(self) + &lift(other),
            den,
        }
    }

    pub fn scale(&self, c: &Rational) -> Frac {
        Frac {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// `1/self`. The numerator's bosonic part becomes a denominator factor
    /// unless it is already a unit; the nilpotent remainder is handled by a
    /// finite geometric series.
    pub fn invert(&self) -> Result<Frac, AlgebraError> {
        let body = self.num.bosonic_part();
        if body.is_zero() {
            return Err(AlgebraError::NotAUnit(format!("{:?}", self.num)));
        }
        let nil = self.num.nilpotent_part();
        let minus_nil = -&nil;
        let mut powers = vec![SuperPoly::one()];
        loop {
            let next = powers.last().unwrap() * &minus_nil;
            if next.is_zero() {
                break;
            }
            powers.push(next);
        }
        let top = powers.len() - 1;
        let mut num = SuperPoly::zero();
        for (j, pw) in powers.iter().enumerate() {
            num += &(pw * &body.pow((top - j) as i64).expect("non-negative power"));
        }
        let mut out = Frac {
            num,
            den: BTreeMap::new(),
        };
        out.push_den(&body, (top + 1) as u32);
        // multiply by the old denominator
        for (d, e) in &self.den {
            out.num = &out.num * &d.pow(*e as i64).expect("non-negative power");
        }
        Ok(out.reduce())
    }

    pub fn pow(&self, e: i64) -> Result<Frac, AlgebraError> {
        if e < 0 {
            return self.invert()?.pow(-e);
        }
        let mut acc = Frac::one();
        for _ in 0..e {
            acc = acc.raw_mul(self);
        }
        Ok(acc.reduce())
    }

    pub fn bosonic_part(&self) -> Frac {
        Frac {
            num: self.num.bosonic_part(),
            den: self.den.clone(),
        }
        .reduce()
    }

    /// Parts of the numerator grouped by odd monomial, over the common
    /// denominator: `self = Σ coeff_o · o`.
    pub fn decompose_odd(&self) -> BTreeMap<Monomial, Frac> {
        self.num
            .decompose(Var::is_odd)
            .into_iter()
            .map(|(m, c)| {
                (
                    m,
                    Frac {
                        num: c,
                        den: self.den.clone(),
                    }
                    .reduce(),
                )
            })
            .collect()
    }

    pub fn odd_degree(&self) -> usize {
        self.num.odd_degree()
    }

    /// Substitutes fractions for variables and evaluates.
    pub fn substitute(&self, assignment: &BTreeMap<Var, Frac>) -> Result<Frac, AlgebraError> {
        let mut out = eval_at(&self.num, assignment)?;
        for (d, e) in &self.den {
            let dv = eval_at(d, assignment)?;
            out = &out * &dv.pow(-(*e as i64))?;
        }
        Ok(out)
    }

    /// Partial derivative along an even variable.
    pub fn derivative(&self, v: &Var) -> Frac {
        let mut out = Frac::from(self.num.derivative(v));
        for (d, e) in &self.den {
            out.push_den(d, *e);
        }
        for (d, e) in &self.den {
            let dd = d.derivative(v);
            if dd.is_zero() {
                continue;
            }
            let mut term = Frac {
                num: (&self.num * &dd).scale(&-rat(*e as i64)),
                den: self.den.clone(),
            };
            *term.den.get_mut(d).unwrap() += 1;
            out = out.raw_add(&term);
        }
        out.reduce()
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut vs = self.num.vars();
        for d in self.den.keys() {
            vs.extend(d.vars());
        }
        vs
    }
}

/// Evaluates a polynomial with variables replaced by fractions.
pub fn eval_at(p: &SuperPoly, assignment: &BTreeMap<Var, Frac>) -> Result<Frac, AlgebraError> {
    for (v, image) in assignment {
        if !image.is_zero() && !image.num.parity_of().admits(v.parity()) {
            return Err(AlgebraError::ParityMismatch {
                var: v.name().to_string(),
                expected: v.parity().to_string(),
            });
        }
    }
    let mut cache: BTreeMap<(Var, i32), Frac> = BTreeMap::new();
    let mut acc = Frac::zero();
    for (m, c) in p.terms() {
        let mut prod = Frac::from(SuperPoly::constant(c.clone()));
        for (v, e) in m.factors() {
            let factor = match assignment.get(v) {
                None => Frac::from(SuperPoly::var_pow(v, *e)?),
                Some(image) => match cache.get(&(v.clone(), *e)) {
                    Some(f) => f.clone(),
                    None => {
                        let f = image.pow(*e as i64)?;
                        cache.insert((v.clone(), *e), f.clone());
                        f
                    }
                },
            };
            prod = prod.raw_mul(&factor);
            if prod.num.is_zero() {
                break;
            }
        }
        acc = acc.raw_add(&prod);
    }
    Ok(acc.reduce())
}

/// Splits a nonzero bosonic polynomial as `c · u · key`, where `u` is a
/// Laurent monomial in invertible variables and `key` has no such content
/// and leading coefficient one.
fn normalize_factor(d: &SuperPoly) -> (Rational, Monomial, SuperPoly) {
    assert!(!d.is_zero(), "zero denominator");
    assert!(d.is_bosonic(), "denominator factors must be bosonic");
    let mut content: Vec<(Var, i32)> = Vec::new();
    for v in d.vars() {
        if v.is_invertible() {
            let lo = d.min_degree_in(&v);
            if lo != 0 {
                content.push((v, lo));
            }
        }
    }
    let (_, unit) = Monomial::from_factors(content.iter().map(|(v, e)| (v, *e))).expect("even factors");
    let stripped = d.mul_monomial(&Rational::one(), &unit.inverse().expect("invertible content"));
    let (_, lead) = leading_term(&stripped);
    let c = lead.clone();
    (c.clone(), unit, stripped.scale(&c.recip()))
}

fn lex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    let (fa, fb) = (a.factors(), b.factors());
    let (mut i, mut j) = (0, 0);
    loop {
        match (fa.get(i), fb.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some((_, e)), None) => return e.cmp(&0),
            (None, Some((_, e))) => return 0.cmp(e),
            (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                Ordering::Less => return ea.cmp(&0),
                Ordering::Greater => return 0.cmp(eb),
                Ordering::Equal => {
                    if ea != eb {
                        return ea.cmp(eb);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

fn leading_term(p: &SuperPoly) -> (&Monomial, &Rational) {
    p.terms()
        .max_by(|(a, _), (b, _)| lex_cmp(a, b))
        .expect("nonzero polynomial")
}

/// Exact quotient `p / d` for bosonic `d`, if it exists in the Laurent
/// polynomial ring of the invertible variables.
pub fn exact_div(p: &SuperPoly, d: &SuperPoly) -> Option<SuperPoly> {
    assert!(d.is_bosonic(), "divisor must be bosonic");
    if d.is_zero() {
        return None;
    }
    if p.is_zero() {
        return Some(SuperPoly::zero());
    }
    if d.is_one() {
        return Some(p.clone());
    }
    let mut out = SuperPoly::zero();
    for (odd, coeff) in p.decompose(Var::is_odd) {
        let q = exact_div_bosonic(&coeff, d)?;
        out += &(&q * &SuperPoly::term(Rational::one(), odd));
    }
    Some(out)
}

fn exact_div_bosonic(p: &SuperPoly, d: &SuperPoly) -> Option<SuperPoly> {
    let vars: Vec<Var> = {
        let mut vs = p.vars();
        vs.extend(d.vars());
        vs.into_iter().collect()
    };
    // the quotient's Newton polytope is bounded coordinatewise
    let bounds: Vec<(i32, i32)> = vars
        .iter()
        .map(|v| {
            (
                p.min_degree_in(v) - d.min_degree_in(v),
                p.degree_in(v) - d.degree_in(v),
            )
        })
        .collect();
    let (dm, dc) = leading_term(d);
    let (dm, dc) = (dm.clone(), dc.clone());
    let mut r = p.clone();
    let mut q = SuperPoly::zero();
    while !r.is_zero() {
        let (rm, rc) = leading_term(&r);
        let m = rm.div_bosonic(&dm);
        for (v, (lo, hi)) in vars.iter().zip(&bounds) {
            let e = m.exponent(v);
            if e < *lo || e > *hi || (e < 0 && !v.is_invertible()) {
                return None;
            }
        }
        let c = rc / &dc;
        let t = SuperPoly::term(c, m);
        r -= &(&t * d);
        q += &t;
    }
    Some(q)
}

impl From<SuperPoly> for Frac {
    fn from(num: SuperPoly) -> Frac {
        Frac {
            num,
            den: BTreeMap::new(),
        }
    }
}

impl From<&SuperPoly> for Frac {
    fn from(num: &SuperPoly) -> Frac {
        Frac::from(num.clone())
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Frac) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.denominator() == &other.num * &self.denominator()
    }
}

impl Eq for Frac {}

impl std::ops::Add<&Frac> for &Frac {
    type Output = Frac;
    fn add(self, rhs: &Frac) -> Frac {
        self.raw_add(rhs).reduce()
    }
}

impl std::ops::Sub<&Frac> for &Frac {
    type Output = Frac;
    fn sub(self, rhs: &Frac) -> Frac {
        self.raw_add(&-rhs).reduce()
    }
}

impl std::ops::Mul<&Frac> for &Frac {
    type Output = Frac;
    fn mul(self, rhs: &Frac) -> Frac {
        self.raw_mul(rhs).reduce()
    }
}

impl std::ops::Neg for &Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for Frac {
    /// Debug-style rendering; the parser module provides the interchange form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.num)?;
        if !self.den.is_empty() {
            write!(f, " / {:?}", self.denominator())?;
        }
        Ok(())
    }
}

impl Zero for Frac {
    fn zero() -> Frac {
        Frac::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl std::ops::Add for Frac {
    type Output = Frac;
    fn add(self, rhs: Frac) -> Frac {
        &self + &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn even(n: &str) -> SuperPoly {
        SuperPoly::var(&Var::even(n))
    }

    #[test]
    fn diagonal_denominator_cancels() {
        let a1 = even("a1");
        let a2 = even("a2");
        let diff = &a2 - &a1;
        let f = Frac::new(&diff * &diff, diff.clone()).unwrap();
        assert_eq!(f.as_poly(), Some(diff.clone()));
        assert!(f.is_poly());
        let g = Frac::new(a1.clone(), diff.clone()).unwrap();
        assert_eq!(g.as_poly(), None);
        let h = &(&g * &Frac::from(&diff)) - &Frac::from(&a1);
        assert!(h.is_zero());
    }

    #[test]
    fn nilpotent_denominator_expands() {
        let a = Var::odd("alpha");
        let b = Var::odd("beta");
        let x = even("x");
        let nil = &SuperPoly::var(&a) * &SuperPoly::var(&b);
        let d = &(&x + &SuperPoly::one()) + &nil;
        let inv = Frac::from(&d).invert().unwrap();
        assert!((&inv * &Frac::from(&d)).as_poly().unwrap().is_one());
    }

    #[test]
    fn laurent_content_is_a_unit() {
        let x = Var::unit("x");
        let xp = SuperPoly::var(&x);
        let d = &(&xp * &xp) + &xp;
        let f = Frac::new(SuperPoly::one(), d).unwrap();
        let factors: Vec<_> = f.denominator_factors().collect();
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0, &(&xp + &SuperPoly::one()));
    }

    #[test]
    fn exact_division_with_laurent_quotient() {
        let x = Var::unit("x");
        let c = Var::even("c");
        let xp = SuperPoly::var(&x);
        let q = &xp.pow(-2).unwrap() + &SuperPoly::var(&c);
        let d = &xp + &SuperPoly::var(&c);
        assert_eq!(exact_div(&(&q * &d), &d), Some(q));
        assert_eq!(exact_div(&SuperPoly::one(), &d), None);
    }

    #[test]
    fn derivative_quotient_rule() {
        let a = Var::even("a");
        let ap = SuperPoly::var(&a);
        let d = &ap + &SuperPoly::one();
        let f = Frac::new(SuperPoly::one(), d.clone()).unwrap();
        let expected = Frac::new(SuperPoly::int(-1), &d * &d).unwrap();
        assert_eq!(f.derivative(&a), expected);
    }
}
