use std::cmp::Ordering;

use super::{Parity, Var};

/// A product of variables in canonical (name) order.
///
/// Odd variables carry exponent 1; negative exponents only appear on
/// invertible variables. The sign produced by reordering odd factors is kept
/// by the owning coefficient, never here.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Var, i32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: &Var) -> Monomial {
        Monomial(vec![(v.clone(), 1)])
    }

    /// Builds a monomial from factors given in canonical order. Returns the
    /// sign of the reordering and `None` if an odd variable repeats.
    pub fn from_factors<'a>(factors: impl IntoIterator<Item = (&'a Var, i32)>) -> Option<(bool, Monomial)> {
        let mut acc = (false, Monomial::one());
        for (v, e) in factors {
            if e == 0 {
                continue;
            }
            if v.is_odd() && e != 1 {
                return None;
            }
            let (neg, m) = acc.1.mul(&Monomial(vec![(v.clone(), e)]))?;
            acc = (acc.0 ^ neg, m);
        }
        Some(acc)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Var, i32)] {
        &self.0
    }

    pub fn exponent(&self, v: &Var) -> i32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn parity(&self) -> Parity {
        Parity::from_odd(self.odd_count() % 2 == 1)
    }

    pub fn odd_count(&self) -> usize {
        self.0.iter().filter(|(v, _)| v.is_odd()).count()
    }

    pub fn is_bosonic(&self) -> bool {
        self.odd_count() == 0
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|(_, e)| *e as i64).sum()
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.0.iter().any(|(_, e)| *e < 0)
    }

    /// Supercommutative product. Returns `(negated, product)` or `None` when
    /// an odd variable would appear twice.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let mut inversions = 0usize;
        // odd factors of `self` not yet emitted; each odd factor taken from
        // `other` has to move past all of them
        let mut pending_odd = self.odd_count();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let take = match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => unreachable!(),
            };
            match take {
                Ordering::Less => {
                    let f = self.0[i].clone();
                    if f.0.is_odd() {
                        pending_odd -= 1;
                    }
                    out.push(f);
                    i += 1;
                }
                Ordering::Greater => {
                    let f = other.0[j].clone();
                    if f.0.is_odd() {
                        inversions += pending_odd;
                    }
                    out.push(f);
                    j += 1;
                }
                Ordering::Equal => {
                    let (v, a) = &self.0[i];
                    let b = other.0[j].1;
                    if v.is_odd() {
                        return None;
                    }
                    if a + b != 0 {
                        out.push((v.clone(), a + b));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Some((inversions % 2 == 1, Monomial(out)))
    }

    /// Splits `self = ± rest · sub` where `sub` collects the variables
    /// selected by `pick`. Returns `(negated, rest, sub)`.
    pub fn split(&self, pick: impl Fn(&Var) -> bool) -> (bool, Monomial, Monomial) {
        let mut rest = Vec::new();
        let mut sub = Vec::new();
        let mut inversions = 0usize;
        let mut picked_odd = 0usize;
        for (v, e) in &self.0 {
            if pick(v) {
                if v.is_odd() {
                    picked_odd += 1;
                }
                sub.push((v.clone(), *e));
            } else {
                if v.is_odd() {
                    // every picked odd factor before this one moves past it
                    inversions += picked_odd;
                }
                rest.push((v.clone(), *e));
            }
        }
        (inversions % 2 == 1, Monomial(rest), Monomial(sub))
    }

    /// Inverse of a monomial in invertible even variables.
    pub fn inverse(&self) -> Option<Monomial> {
        if self.0.iter().all(|(v, _)| v.is_invertible()) {
            Some(Monomial(self.0.iter().map(|(v, e)| (v.clone(), -e)).collect()))
        } else {
            None
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.iter().map(|(v, _)| v)
    }

    /// Exponent-wise division for bosonic monomials (may produce negative exponents).
    pub(crate) fn div_bosonic(&self, other: &Monomial) -> Monomial {
        let mut inv = Monomial(other.0.iter().map(|(v, e)| (v.clone(), -e)).collect());
        inv = self.mul(&inv).expect("bosonic monomials always multiply").1;
        inv
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_factors_anticommute() {
        let a = Var::odd("alpha");
        let b = Var::odd("beta");
        let (neg_ab, ab) = Monomial::var(&a).mul(&Monomial::var(&b)).unwrap();
        let (neg_ba, ba) = Monomial::var(&b).mul(&Monomial::var(&a)).unwrap();
        assert_eq!(ab, ba);
        assert!(!neg_ab);
        assert!(neg_ba);
        assert!(Monomial::var(&a).mul(&Monomial::var(&a)).is_none());
    }

    #[test]
    fn laurent_exponents_cancel() {
        let x = Var::unit("x");
        let m = Monomial::var(&x);
        let (_, p) = m.mul(&m.inverse().unwrap()).unwrap();
        assert!(p.is_one());
    }

    #[test]
    fn split_tracks_sign() {
        let a = Var::odd("a");
        let t = Var::odd("t");
        let z = Var::odd("z");
        let (_, m) = Monomial::from_factors([(&a, 1), (&t, 1), (&z, 1)]).unwrap();
        // a t z = - a z t
        let (neg, rest, sub) = m.split(|v| v.name() == "t");
        assert!(neg);
        assert_eq!(rest.odd_count(), 2);
        assert_eq!(sub, Monomial::var(&t));
    }
}
