#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superhilb::grassmann::ratio;
use superhilb::parser::RingDecl;
use superhilb::superlinalg::{rational_inverse, SuperMatrix};
use superhilb::{Monomial, Parity, Rational, SuperPoly, Var};

pub struct Gen {
    pub rng: ChaCha8Rng,
    pub even: Vec<Var>,
    pub units: Vec<Var>,
    pub odd: Vec<Var>,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            even: vec![Var::even("x"), Var::even("y")],
            units: vec![Var::unit("u"), Var::unit("v")],
            odd: (1..=4).map(|i| Var::odd(format!("t{i}"))).collect(),
        }
    }

    pub fn ring(&self) -> RingDecl {
        RingDecl::new(self.even.iter().chain(&self.units).chain(&self.odd).cloned()).unwrap()
    }

    pub fn coeff(&mut self) -> Rational {
        let n = self.rng.gen_range(-9..=9);
        let d = self.rng.gen_range(1..=4);
        ratio(if n == 0 { 1 } else { n }, d)
    }

    /// Random monomial with the requested number of odd factors.
    pub fn monomial_with(&mut self, odd: usize) -> (bool, Monomial) {
        let mut factors: Vec<(Var, i32)> = Vec::new();
        for v in self.even.clone() {
            factors.push((v, self.rng.gen_range(0..=2)));
        }
        for v in self.units.clone() {
            factors.push((v, self.rng.gen_range(-2..=2)));
        }
        let mut odd_vars = self.odd.clone();
        odd_vars.shuffle(&mut self.rng);
        for v in odd_vars.into_iter().take(odd) {
            factors.push((v, 1));
        }
        Monomial::from_factors(factors.iter().map(|(v, e)| (v, *e))).expect("distinct odd factors")
    }

    pub fn monomial(&mut self) -> (bool, Monomial) {
        let odd = self.rng.gen_range(0..=3);
        self.monomial_with(odd)
    }

    fn push(&mut self, out: &mut SuperPoly, (neg, m): (bool, Monomial)) {
        let c = self.coeff();
        out.add_term(m, if neg { -c } else { c });
    }

    pub fn poly(&mut self) -> SuperPoly {
        let n = self.rng.gen_range(0..=4);
        let mut out = SuperPoly::zero();
        for _ in 0..n {
            let m = self.monomial();
            self.push(&mut out, m);
        }
        out
    }

    pub fn homogeneous(&mut self, parity: Parity) -> SuperPoly {
        let n = self.rng.gen_range(1..=3);
        let mut out = SuperPoly::zero();
        for _ in 0..n {
            let odd = match parity {
                Parity::Even => 2 * self.rng.gen_range(0..=1),
                Parity::Odd => 2 * self.rng.gen_range(0..=1) + 1,
            };
            let m = self.monomial_with(odd);
            self.push(&mut out, m);
        }
        out
    }

    /// `c·m + n` with `m` a monomial in the unit variables and `n` nilpotent.
    pub fn unit(&mut self) -> SuperPoly {
        let exps: Vec<i32> = (0..self.units.len()).map(|_| self.rng.gen_range(-3..=3)).collect();
        let (_, m) = Monomial::from_factors(self.units.iter().zip(exps)).unwrap();
        let mut out = SuperPoly::term(self.coeff(), m);
        for _ in 0..self.rng.gen_range(1..=3) {
            let odd = self.rng.gen_range(1..=4);
            let m = self.monomial_with(odd);
            self.push(&mut out, m);
        }
        out
    }

    fn nilpotent(&mut self, parity: Parity) -> SuperPoly {
        let mut out = SuperPoly::zero();
        for _ in 0..self.rng.gen_range(0..=2) {
            let odd = match parity {
                Parity::Even => 2,
                Parity::Odd => 2 * self.rng.gen_range(0..=1) + 1,
            };
            let m = self.monomial_with(odd);
            self.push(&mut out, m);
        }
        out
    }

    fn numeric_invertible(&mut self, n: usize) -> Vec<Vec<Rational>> {
        loop {
            let m: Vec<Vec<Rational>> = (0..n)
                .map(|_| (0..n).map(|_| ratio(self.rng.gen_range(-4..=4), self.rng.gen_range(1..=3))).collect())
                .collect();
            if rational_inverse(&m).is_some() {
                return m;
            }
        }
    }

    /// Even `(p|q)` supermatrix whose reduction is invertible.
    pub fn supermatrix(&mut self, p: usize, q: usize) -> SuperMatrix {
        let a = self.numeric_invertible(p);
        let d = self.numeric_invertible(q);
        let n = p + q;
        let mut rows = vec![vec![SuperPoly::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let diag_block = (i < p) == (j < p);
                *e = if diag_block {
                    let c = if i < p { a[i][j].clone() } else { d[i - p][j - p].clone() };
                    &SuperPoly::constant(c) + &self.nilpotent(Parity::Even)
                } else {
                    self.nilpotent(Parity::Odd)
                };
            }
        }
        SuperMatrix::from_rows(p, q, rows).unwrap()
    }
}
