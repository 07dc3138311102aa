use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Monomial, Parity, ParityOf, Var};
use crate::error::AlgebraError;

/// Exact rational coefficient.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// An element of a supercommutative polynomial ring over the rationals,
/// localized at the invertible even variables.
///
/// Terms are kept in a sorted map with no zero coefficients, so structural
/// equality is ring equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SuperPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl SuperPoly {
    pub fn zero() -> SuperPoly {
        SuperPoly::default()
    }

    pub fn one() -> SuperPoly {
        SuperPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> SuperPoly {
        SuperPoly::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> SuperPoly {
        SuperPoly::constant(rat(n))
    }

    pub fn var(v: &Var) -> SuperPoly {
        SuperPoly::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> SuperPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SuperPoly { terms }
    }

    /// `v^e`, where negative `e` requires `v` to be invertible.
    pub fn var_pow(v: &Var, e: i32) -> Result<SuperPoly, AlgebraError> {
        SuperPoly::var(v).pow(e as i64)
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Rational)>) -> SuperPoly {
        let mut p = SuperPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient_of(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// The single term of a monomial polynomial.
    pub fn as_monomial(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> SuperPoly {
        if c.is_zero() {
            return SuperPoly::zero();
        }
        SuperPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Rational, m: &Monomial) -> SuperPoly {
        let mut out = SuperPoly::zero();
        for (n, k) in &self.terms {
            if let Some((neg, p)) = m.mul(n) {
                let v = k * c;
                out.add_term(p, if neg { -v } else { v });
            }
        }
        out
    }

    pub fn parity_of(&self) -> ParityOf {
        let mut even = false;
        let mut odd = false;
        for m in self.terms.keys() {
            match m.parity() {
                Parity::Even => even = true,
                Parity::Odd => odd = true,
            }
        }
        match (even, odd) {
            (_, false) => ParityOf::Even,
            (false, true) => ParityOf::Odd,
            (true, true) => ParityOf::Mixed,
        }
    }

    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> SuperPoly {
        SuperPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn even_part(&self) -> SuperPoly {
        self.filter_terms(|m| m.parity() == Parity::Even)
    }

    pub fn odd_part(&self) -> SuperPoly {
        self.filter_terms(|m| m.parity() == Parity::Odd)
    }

    /// Terms free of odd variables (the reduction modulo the odd ideal).
    pub fn bosonic_part(&self) -> SuperPoly {
        self.filter_terms(Monomial::is_bosonic)
    }

    pub fn nilpotent_part(&self) -> SuperPoly {
        self.filter_terms(|m| !m.is_bosonic())
    }

    pub fn is_bosonic(&self) -> bool {
        self.terms.keys().all(Monomial::is_bosonic)
    }

    /// Largest number of odd factors in any term.
    pub fn odd_degree(&self) -> usize {
        self.terms.keys().map(Monomial::odd_count).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.vars().cloned())
            .collect()
    }

    pub fn odd_vars(&self) -> BTreeSet<Var> {
        self.vars().into_iter().filter(Var::is_odd).collect()
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) != 0)
    }

    /// Maximal exponent of `v` among the terms (0 for the zero polynomial).
    pub fn degree_in(&self, v: &Var) -> i32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, v: &Var) -> i32 {
        self.terms.keys().map(|m| m.exponent(v)).min().unwrap_or(0)
    }

    /// Non-negative integer powers by repeated squaring; negative powers go
    /// through [`SuperPoly::invert`].
    pub fn pow(&self, e: i64) -> Result<SuperPoly, AlgebraError> {
        if e < 0 {
            return self.invert()?.pow(-e);
        }
        let mut base = self.clone();
        let mut acc = SuperPoly::one();
        let mut n = e as u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Splits off a unit monomial: `self = u·(1 + n)` with `u` a rational times
    /// a Laurent monomial in invertible even variables and `n` nilpotent.
    pub fn unit_decomposition(&self) -> Result<(Rational, Monomial, SuperPoly), AlgebraError> {
        let body = self.bosonic_part();
        let (m, c) = body
            .as_monomial()
            .ok_or_else(|| AlgebraError::NotAUnit(format!("{self:?}")))?;
        let inv = m
            .inverse()
            .ok_or_else(|| AlgebraError::NotAUnit(format!("{self:?}")))?;
        let c_inv = c.recip();
        let n = self.nilpotent_part().mul_monomial(&c_inv, &inv);
        Ok((c.clone(), m.clone(), n))
    }

    /// Multiplicative inverse via `u^{-1} Σ (-n)^j`, a finite sum.
    pub fn invert(&self) -> Result<SuperPoly, AlgebraError> {
        let (c, m, n) = self.unit_decomposition()?;
        let u_inv = SuperPoly::term(c.recip(), m.inverse().expect("checked invertible"));
        let minus_n = -n;
        let mut sum = SuperPoly::one();
        let mut power = SuperPoly::one();
        loop {
            power = &power * &minus_n;
            if power.is_zero() {
                break;
            }
            sum += &power;
        }
        Ok(&u_inv * &sum)
    }

    /// Ring homomorphism sending each assigned variable to its image; other
    /// variables are fixed.
    pub fn substitute(&self, assignment: &BTreeMap<Var, SuperPoly>) -> Result<SuperPoly, AlgebraError> {
        for (v, image) in assignment {
            if !image.parity_of().admits(v.parity()) && !image.is_zero() {
                return Err(AlgebraError::ParityMismatch {
                    var: v.name().to_string(),
                    expected: v.parity().to_string(),
                });
            }
        }
        let mut cache: BTreeMap<(Var, i32), SuperPoly> = BTreeMap::new();
        let mut out = SuperPoly::zero();
        for (m, c) in &self.terms {
            let mut prod = SuperPoly::constant(c.clone());
            for (v, e) in m.factors() {
                let factor = match assignment.get(v) {
                    None => SuperPoly::term(Rational::one(), Monomial::from_factors([(v, *e)]).unwrap().1),
                    Some(image) => {
                        if let Some(p) = cache.get(&(v.clone(), *e)) {
                            p.clone()
                        } else {
                            let p = image.pow(*e as i64)?;
                            cache.insert((v.clone(), *e), p.clone());
                            p
                        }
                    }
                };
                prod = &prod * &factor;
                if prod.is_zero() {
                    break;
                }
            }
            out += &prod;
        }
        Ok(out)
    }

    /// Groups terms by their monomial in the selected variables:
    /// `self = Σ coeff_m · m` with each coefficient free of the selection.
    pub fn decompose(&self, pick: impl Fn(&Var) -> bool) -> BTreeMap<Monomial, SuperPoly> {
        let mut out: BTreeMap<Monomial, SuperPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (neg, rest, sub) = m.split(&pick);
            let c = if neg { -c.clone() } else { c.clone() };
            out.entry(sub).or_default().add_term(rest, c);
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Coefficient of `m` when `self` is read as a polynomial in `subset`
    /// (coefficient written on the left).
    pub fn coeff(&self, m: &Monomial, subset: &[Var]) -> SuperPoly {
        self.decompose(|v| subset.contains(v))
            .remove(m)
            .unwrap_or_default()
    }

    /// Partial derivative with respect to an even variable.
    pub fn derivative(&self, v: &Var) -> SuperPoly {
        assert!(!v.is_odd(), "derivative is only defined here for even variables");
        let mut out = SuperPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let lowered = m.mul(&Monomial::from_factors([(v, -1)]).unwrap().1);
            // lowering an exponent never creates a sign
            let (_, lowered) = lowered.expect("even factor");
            out.add_term(lowered, c * rat(e as i64));
        }
        out
    }

    /// Leading coefficient sign of the first term; used for normalization.
    pub fn leading_is_negative(&self) -> bool {
        self.terms.values().next_back().is_some_and(|c| c.is_negative())
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }
}

impl From<&Var> for SuperPoly {
    fn from(v: &Var) -> SuperPoly {
        SuperPoly::var(v)
    }
}

impl From<i64> for SuperPoly {
    fn from(n: i64) -> SuperPoly {
        SuperPoly::int(n)
    }
}

impl From<Rational> for SuperPoly {
    fn from(c: Rational) -> SuperPoly {
        SuperPoly::constant(c)
    }
}

impl AddAssign<&SuperPoly> for SuperPoly {
    fn add_assign(&mut self, rhs: &SuperPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&SuperPoly> for SuperPoly {
    fn sub_assign(&mut self, rhs: &SuperPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add<&SuperPoly> for &SuperPoly {
    type Output = SuperPoly;
    fn add(self, rhs: &SuperPoly) -> SuperPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&SuperPoly> for &SuperPoly {
    type Output = SuperPoly;
    fn sub(self, rhs: &SuperPoly) -> SuperPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&SuperPoly> for &SuperPoly {
    type Output = SuperPoly;
    fn mul(self, rhs: &SuperPoly) -> SuperPoly {
        let mut out = SuperPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                if let Some((neg, m)) = m1.mul(m2) {
                    let c = c1 * c2;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }
}

impl Neg for &SuperPoly {
    type Output = SuperPoly;
    fn neg(self) -> SuperPoly {
        SuperPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<SuperPoly> for SuperPoly {
            type Output = SuperPoly;
            fn $method(self, rhs: SuperPoly) -> SuperPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&SuperPoly> for SuperPoly {
            type Output = SuperPoly;
            fn $method(self, rhs: &SuperPoly) -> SuperPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<SuperPoly> for &SuperPoly {
            type Output = SuperPoly;
            fn $method(self, rhs: SuperPoly) -> SuperPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for SuperPoly {
    type Output = SuperPoly;
    fn neg(self) -> SuperPoly {
        -&self
    }
}

impl AddAssign<SuperPoly> for SuperPoly {
    fn add_assign(&mut self, rhs: SuperPoly) {
        *self += &rhs;
    }
}

impl SubAssign<SuperPoly> for SuperPoly {
    fn sub_assign(&mut self, rhs: SuperPoly) {
        *self -= &rhs;
    }
}

impl std::iter::Sum for SuperPoly {
    fn sum<I: Iterator<Item = SuperPoly>>(iter: I) -> SuperPoly {
        let mut acc = SuperPoly::zero();
        for p in iter {
            acc += &p;
        }
        acc
    }
}
