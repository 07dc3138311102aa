//! Laurent polynomials in the global coordinates `(z, w)` and linear
//! systems over them.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::ObstructionError;
use crate::grassmann::{Monomial, Rational, SuperPoly, Var};
use crate::parser::pretty;

pub fn z() -> Var {
    Var::unit("z")
}

pub fn w() -> Var {
    Var::unit("w")
}

/// Allowed signs of the `(z, w)` exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cone {
    /// `z ≥ 0, w ≥ 0`
    PosPos,
    /// `z ≤ 0, w ≥ 0`
    NegPos,
    /// `z ≥ 0, w ≤ 0`
    PosNeg,
}

impl Cone {
    /// `+1` for a nonnegative exponent, `-1` for a nonpositive one.
    pub fn signs(self) -> [i32; 2] {
        match self {
            Cone::PosPos => [1, 1],
            Cone::NegPos => [-1, 1],
            Cone::PosNeg => [1, -1],
        }
    }

    pub fn contains(self, (i, j): (i32, i32)) -> bool {
        let [s, t] = self.signs();
        i * s >= 0 && j * t >= 0
    }

    /// Monomials of the cone with `|i| + |j| ≤ bound`.
    pub fn monomials(self, bound: usize) -> Vec<(i32, i32)> {
        let [s, t] = self.signs();
        let b = bound as i32;
        let mut out = Vec::new();
        for d in 0..=b {
            for i in 0..=d {
                out.push((s * i, t * (d - i)));
            }
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentBivar {
    pub cone: Option<Cone>,
    terms: BTreeMap<(i32, i32), Rational>,
}

impl LaurentBivar {
    pub fn zero() -> LaurentBivar {
        LaurentBivar::default()
    }

    pub fn monomial(c: Rational, e: (i32, i32)) -> LaurentBivar {
        let mut out = LaurentBivar::zero();
        out.add(e, c);
        out
    }

    pub fn constant(c: Rational) -> LaurentBivar {
        LaurentBivar::monomial(c, (0, 0))
    }

    /// Restricts the support; fails if a term already lies outside.
    pub fn with_cone(mut self, cone: Cone) -> Result<LaurentBivar, ObstructionError> {
        if let Some(e) = self.terms.keys().find(|e| !cone.contains(**e)) {
            return Err(ObstructionError::Shape(format!("z^{} w^{} outside {cone:?}", e.0, e.1)));
        }
        self.cone = Some(cone);
        Ok(self)
    }

    pub fn add(&mut self, e: (i32, i32), c: Rational) {
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coefficient(&self, e: (i32, i32)) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_monomial(&self) -> Option<((i32, i32), &Rational)> {
        match self.terms.iter().next() {
            Some((e, c)) if self.terms.len() == 1 => Some((*e, c)),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> LaurentBivar {
        let mut out = LaurentBivar::zero();
        for (e, d) in &self.terms {
            out.add(*e, d * c);
        }
        out
    }

    pub fn shift(&self, by: (i32, i32)) -> LaurentBivar {
        LaurentBivar {
            cone: None,
            terms: self.terms.iter().map(|(e, c)| ((e.0 + by.0, e.1 + by.1), c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentBivar) -> LaurentBivar {
        let mut out = LaurentBivar::zero();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                out.add((a.0 + b.0, a.1 + b.1), c * d);
            }
        }
        out
    }

    pub fn sum(&self, other: &LaurentBivar) -> LaurentBivar {
        let mut out = LaurentBivar { cone: None, terms: self.terms.clone() };
        for (e, c) in &other.terms {
            out.add(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentBivar {
        self.scale(&-Rational::one())
    }

    /// Restriction to the diagonal `w = z`, as exponent of `z` → coefficient.
    pub fn on_diagonal(&self) -> BTreeMap<i32, Rational> {
        let mut out: BTreeMap<i32, Rational> = BTreeMap::new();
        for (e, c) in &self.terms {
            *out.entry(e.0 + e.1).or_insert_with(Rational::zero) += c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Exact quotient by `z - w`, if it exists.
    pub fn div_z_minus_w(&self) -> Option<LaurentBivar> {
        // In each total degree d, c_i = q_{i-1} - q_i for the coefficient of
        // z^i w^(d-i), so q_i is minus the partial sum of the c_j, j <= i.
        let mut by_degree: BTreeMap<i32, BTreeMap<i32, Rational>> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            by_degree.entry(i + j).or_default().insert(i, c.clone());
        }
        let mut q = LaurentBivar::zero();
        for (d, row) in by_degree {
            let lo = *row.keys().next().unwrap();
            let hi = *row.keys().next_back().unwrap();
            let mut partial = Rational::zero();
            for i in lo..=hi {
                partial += row.get(&i).cloned().unwrap_or_else(Rational::zero);
                if i < hi {
                    q.add((i, d - 1 - i), -partial.clone());
                }
            }
            if !partial.is_zero() {
                return None;
            }
        }
        Some(q)
    }

    pub fn from_poly(p: &SuperPoly) -> Result<LaurentBivar, ObstructionError> {
        let (z, w) = (z(), w());
        let mut out = LaurentBivar::zero();
        for (m, c) in p.terms() {
            if m.vars().any(|v| v != &z && v != &w) {
                return Err(ObstructionError::Shape(format!("{} is not a Laurent polynomial in z, w", pretty(p))));
            }
            out.add((m.exponent(&z), m.exponent(&w)), c.clone());
        }
        Ok(out)
    }

    pub fn to_poly(&self) -> SuperPoly {
        let (z, w) = (z(), w());
        SuperPoly::from_terms(self.terms.iter().map(|(&(i, j), c)| {
            let (_, m) = Monomial::from_factors([(&z, i), (&w, j)]).expect("even factors");
            (m, c.clone())
        }))
    }
}

impl fmt::Display for LaurentBivar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(&self.to_poly()))
    }
}

/// Unknown coboundary component on `V1`, `V2`, `V3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Block {
    F,
    G,
    H,
}

impl Block {
    pub fn name(self) -> &'static str {
        match self {
            Block::F => "f",
            Block::G => "g",
            Block::H => "h",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentTerm {
    pub block: Block,
    pub factor: LaurentBivar,
}

/// `Σ factor · block = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentEquation {
    pub overlap: (String, String),
    pub terms: Vec<LaurentTerm>,
    pub rhs: LaurentBivar,
}

impl LaurentEquation {
    pub fn factor(&self, b: Block) -> Option<&LaurentBivar> {
        self.terms.iter().find(|t| t.block == b).map(|t| &t.factor)
    }

    pub fn blocks(&self) -> Vec<Block> {
        self.terms.iter().map(|t| t.block).collect()
    }

    pub fn residual(&self, solution: &Solution) -> LaurentBivar {
        let mut lhs = LaurentBivar::zero();
        for t in &self.terms {
            if let Some(x) = solution.get(&t.block) {
                lhs = lhs.sum(&t.factor.mul(x));
            }
        }
        lhs.sum(&self.rhs.neg())
    }

    /// The equation in expression syntax, e.g. `-1*(z - w)*f + g = -1`.
    pub fn to_text(&self) -> String {
        let lhs: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("({})*{}", t.factor, t.block.name()))
            .collect();
        format!("{} = {}", lhs.join(" + "), self.rhs)
    }
}

pub type Solution = BTreeMap<Block, LaurentBivar>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSystem {
    pub k: i32,
    pub degree_bound: usize,
    pub cones: BTreeMap<Block, Cone>,
    pub equations: Vec<LaurentEquation>,
}

impl LaurentSystem {
    pub fn is_solution(&self, s: &Solution) -> bool {
        s.iter().all(|(b, x)| x.terms().all(|(e, _)| self.cones[b].contains(*e)))
            && self.equations.iter().all(|eq| eq.residual(s).is_zero())
    }

    /// Looks for a solution with every block supported in its cone and of
    /// total degree at most `degree_bound`, by exact Gaussian elimination.
    pub fn solve_bounded(&self) -> Option<Solution> {
        let mut unknowns: Vec<(Block, (i32, i32))> = Vec::new();
        for (&b, &cone) in &self.cones {
            for m in cone.monomials(self.degree_bound) {
                unknowns.push((b, m));
            }
        }
        let mut rows: Vec<(BTreeMap<usize, Rational>, Rational)> = Vec::new();
        for eq in &self.equations {
            let mut by_mono: BTreeMap<(i32, i32), BTreeMap<usize, Rational>> = BTreeMap::new();
            for (u, (b, m)) in unknowns.iter().enumerate() {
                if let Some(f) = eq.factor(*b) {
                    for (e, c) in f.terms() {
                        let slot = by_mono.entry((e.0 + m.0, e.1 + m.1)).or_default();
                        *slot.entry(u).or_insert_with(Rational::zero) += c;
                    }
                }
            }
            for (e, _) in eq.rhs.terms() {
                by_mono.entry(*e).or_default();
            }
            for (e, mut row) in by_mono {
                row.retain(|_, c| !c.is_zero());
                rows.push((row, eq.rhs.coefficient(e)));
            }
        }
        let values = solve_sparse(rows, unknowns.len())?;
        let mut out: Solution = self.cones.keys().map(|&b| (b, LaurentBivar::zero())).collect();
        for (u, v) in values.into_iter().enumerate() {
            if !v.is_zero() {
                let (b, m) = unknowns[u];
                out.get_mut(&b).unwrap().add(m, v);
            }
        }
        for (b, x) in out.iter_mut() {
            x.cone = Some(self.cones[b]);
        }
        Some(out)
    }
}

/// Solves sparse rational rows `Σ a_u x_u = b`; free unknowns are set to
/// zero. `None` when inconsistent.
pub(crate) fn solve_sparse(rows: Vec<(BTreeMap<usize, Rational>, Rational)>, n: usize) -> Option<Vec<Rational>> {
    let mut pivots: BTreeMap<usize, (BTreeMap<usize, Rational>, Rational)> = BTreeMap::new();
    for (mut row, mut rhs) in rows {
        // reduce against existing pivots until the leading unknown is new
        loop {
            let lead = row.iter().find(|(_, c)| !c.is_zero()).map(|(u, c)| (*u, c.clone()));
            let Some((u, c)) = lead else {
                if !rhs.is_zero() {
                    return None;
                }
                break;
            };
            match pivots.get(&u) {
                Some((prow, prhs)) => {
                    for (v, d) in prow {
                        let slot = row.entry(*v).or_insert_with(Rational::zero);
                        *slot -= &c * d;
                    }
                    row.retain(|_, x| !x.is_zero());
                    rhs -= &c * prhs;
                }
                None => {
                    let inv = Rational::one() / &c;
                    for x in row.values_mut() {
                        *x *= &inv;
                    }
                    rhs *= &inv;
                    pivots.insert(u, (row, rhs));
                    break;
                }
            }
        }
    }
    let mut x = vec![Rational::zero(); n];
    for (u, (row, rhs)) in pivots.iter().rev() {
        let mut v = rhs.clone();
        for (w, c) in row {
            if w != u {
                v -= c * &x[*w];
            }
        }
        x[*u] = v;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::rat;

    fn lb(terms: &[((i32, i32), i64)]) -> LaurentBivar {
        let mut p = LaurentBivar::zero();
        for (e, c) in terms {
            p.add(*e, rat(*c));
        }
        p
    }

    #[test]
    fn cone_monomials_count() {
        assert_eq!(Cone::NegPos.monomials(3).len(), 10);
        assert!(Cone::NegPos.monomials(3).iter().all(|e| Cone::NegPos.contains(*e)));
    }

    #[test]
    fn divide_by_diagonal() {
        let p = lb(&[((2, 0), 1), ((0, 2), -1)]);
        let q = p.div_z_minus_w().unwrap();
        assert_eq!(q, lb(&[((1, 0), 1), ((0, 1), 1)]));
        assert!(lb(&[((0, 0), 1)]).div_z_minus_w().is_none());
        assert!(lb(&[((1, 0), 1), ((0, 1), 1)]).div_z_minus_w().is_none());
        let laurent = lb(&[((-1, 3), 1), ((-2, 4), -1)]);
        assert_eq!(laurent.div_z_minus_w().unwrap(), lb(&[((-2, 3), 1)]));
    }

    #[test]
    fn sparse_solver() {
        let rows = vec![
            (BTreeMap::from([(0, rat(1)), (1, rat(1))]), rat(3)),
            (BTreeMap::from([(0, rat(1)), (1, rat(-1))]), rat(1)),
        ];
        assert_eq!(solve_sparse(rows, 2).unwrap(), vec![rat(2), rat(1)]);
        let bad = vec![
            (BTreeMap::from([(0, rat(1))]), rat(1)),
            (BTreeMap::from([(0, rat(2))]), rat(1)),
        ];
        assert!(solve_sparse(bad, 1).is_none());
    }
}
