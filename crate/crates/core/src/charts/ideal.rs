//! Ideals on the two fiber patches and their canonical forms.

use std::collections::BTreeMap;

use crate::error::ChartError;
use crate::grassmann::{ParityOf, SuperPoly, Var};
use crate::quotient::{raw_to_canonical, reduce_to_basis, CanonicalIdeal, Fiber, Presentation};
use crate::superlinalg::{mat_mul, Matrix, SuperMatrix};

/// One of the two affine patches of `ΠO(k)`: `U0` with `(x|θ)`, `U1` with
/// `(y|ψ)`, glued by `y = 1/x`, `ψ = θ/x^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Patch {
    U0,
    U1,
}

impl Patch {
    pub fn fiber(self) -> Fiber {
        match self {
            Patch::U0 => Fiber::default(),
            Patch::U1 => Fiber {
                x: Var::even("y"),
                theta: Var::odd("psi"),
            },
        }
    }

    pub fn other(self) -> Patch {
        match self {
            Patch::U0 => Patch::U1,
            Patch::U1 => Patch::U0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Patch::U0 => "U0",
            Patch::U1 => "U1",
        }
    }
}

/// Generators in the fiber coordinates of one patch, with coefficients in
/// chart coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealOnChart {
    pub patch: Patch,
    pub generators: Vec<SuperPoly>,
}

impl IdealOnChart {
    /// Fails if a generator has mixed parity.
    pub fn new(patch: Patch, generators: Vec<SuperPoly>) -> Result<IdealOnChart, ChartError> {
        for g in &generators {
            if g.parity_of() == ParityOf::Mixed {
                return Err(ChartError::NotCanonicalizable(format!("generator {g:?} has no definite parity")));
            }
        }
        Ok(IdealOnChart { patch, generators })
    }

    pub fn unit(patch: Patch) -> IdealOnChart {
        IdealOnChart {
            patch,
            generators: vec![SuperPoly::one()],
        }
    }

    /// Both generators of a canonical ideal.
    pub fn from_canonical(patch: Patch, ideal: &CanonicalIdeal) -> IdealOnChart {
        IdealOnChart {
            patch,
            generators: vec![ideal.f().clone(), ideal.g().clone()],
        }
    }
}

/// All pairwise products `i·j`, zero products dropped.
pub fn product_ideal(i: &IdealOnChart, j: &IdealOnChart) -> Result<IdealOnChart, ChartError> {
    if i.patch != j.patch {
        return Err(ChartError::ChartMismatch(i.patch.name().into(), j.patch.name().into()));
    }
    let mut generators = Vec::new();
    for a in &i.generators {
        for b in &j.generators {
            let prod = a * b;
            if !prod.is_zero() && !generators.contains(&prod) {
                generators.push(prod);
            }
        }
    }
    Ok(IdealOnChart {
        patch: i.patch,
        generators,
    })
}

fn lead_inverse(c: &SuperPoly, what: &str) -> Result<SuperPoly, ChartError> {
    c.invert()
        .map_err(|_| ChartError::NotCanonicalizable(format!("leading coefficient of the {what} generator is not a unit")))
}

/// The canonical parameters of the ideal, verified by membership in both
/// directions.
///
/// One even generator of degree `p` and one odd generator with θ-degree
/// `q` are picked, normalized and cross-reduced into raw form, then the
/// raw-to-canonical change is applied; nonzero residuals mean the family
/// is not flat of length `(p|q)` here.
pub fn canonicalize(ideal: &IdealOnChart, p: usize, q: usize) -> Result<CanonicalIdeal, ChartError> {
    let fiber = ideal.patch.fiber();
    let (pi, qi) = (p as i32, q as i32);
    let mut even = None;
    let mut odd = None;
    for g in &ideal.generators {
        let parts = fiber.split(g)?;
        match g.parity_of() {
            ParityOf::Even if even.is_none() && parts.even_degree() == Some(pi) => {
                even = Some(&lead_inverse(&parts.even_coeff(pi), "even")? * g);
            }
            ParityOf::Odd if odd.is_none() && parts.odd_degree() == Some(qi) => {
                odd = Some(&lead_inverse(&parts.odd_coeff(qi), "odd")? * g);
            }
            _ => {}
        }
    }
    let (mut f, mut g) = match (even, odd) {
        (Some(f), Some(g)) => (f, g),
        _ => return Err(ChartError::NotCanonicalizable(format!("no generator pair of shape ({p}|{q})"))),
    };
    let mut settled = false;
    for _ in 0..64 {
        let fp = fiber.split(&f)?;
        if let Some(d) = fp.odd_degree().filter(|&d| d >= qi) {
            let t = &fp.odd_coeff(d) * &fiber.x_pow(d - qi);
            f -= &(&t * &g);
            continue;
        }
        let gp = fiber.split(&g)?;
        if let Some(d) = gp.even_degree().filter(|&d| d >= pi) {
            let t = &gp.even_coeff(d) * &fiber.x_pow(d - pi);
            g -= &(&t * &f);
            continue;
        }
        settled = true;
        break;
    }
    if !settled {
        return Err(ChartError::NotCanonicalizable("cross-reduction did not settle".into()));
    }
    let pres = Presentation::new(p, q, fiber, f, g).map_err(|e| ChartError::NotCanonicalizable(e.to_string()))?;
    let canonical = canonical_from_raw(&pres)?;
    let target = canonical.presentation();
    for gen in &ideal.generators {
        if !reduce_to_basis(gen, &target)?.vector.is_zero() {
            return Err(ChartError::NotCanonicalizable("a generator is not in the canonical ideal".into()));
        }
    }
    Ok(canonical)
}

/// Applies the raw-to-canonical change to a presentation in raw form.
pub(crate) fn canonical_from_raw(pres: &Presentation) -> Result<CanonicalIdeal, ChartError> {
    let (p, q) = (pres.p, pres.q);
    let change = raw_to_canonical(p, q)?;
    let fp = pres.fiber.split(&pres.f)?;
    let gp = pres.fiber.split(&pres.g)?;
    let mut values: BTreeMap<Var, SuperPoly> = BTreeMap::new();
    let var_of = |s: &SuperPoly| s.vars().into_iter().next().expect("symbolic parameter");
    for (i, s) in change.raw.a.iter().enumerate() {
        values.insert(var_of(s), fp.even_coeff(i as i32));
    }
    for (i, s) in change.raw.alpha.iter().enumerate() {
        values.insert(var_of(s), fp.odd_coeff(i as i32));
    }
    for (i, s) in change.raw.b.iter().enumerate() {
        values.insert(var_of(s), gp.odd_coeff(i as i32));
    }
    for (i, s) in change.raw.beta.iter().enumerate() {
        values.insert(var_of(s), gp.even_coeff(i as i32));
    }
    let eval = |syms: &[SuperPoly]| -> Result<Vec<SuperPoly>, ChartError> {
        syms.iter()
            .map(|s| Ok(change.from_raw[&var_of(s)].substitute(&values)?))
            .collect()
    };
    for r in eval(&change.c)?.iter().chain(&eval(&change.gamma)?) {
        if !r.is_zero() {
            return Err(ChartError::NotCanonicalizable(format!("nonzero flatness residual {r:?}")));
        }
    }
    let canon = &change.canonical;
    let ideal = CanonicalIdeal::new(
        p,
        q,
        pres.fiber.clone(),
        eval(canon.a())?,
        eval(canon.b())?,
        eval(canon.alpha())?,
        eval(canon.beta())?,
    )?;
    if ideal.f() != &pres.f || ideal.g() != &pres.g {
        return Err(ChartError::NotCanonicalizable("canonical generators differ from the raw ones".into()));
    }
    Ok(ideal)
}

/// Right-coefficient coordinates of `poly` in the quotient basis
/// `1, …, u^{p-1}, ν, …, u^{q-1}ν`, as a column.
fn column(poly: &SuperPoly, pres: &Presentation) -> Result<Matrix, ChartError> {
    let v = reduce_to_basis(poly, pres)?.vector;
    let mut col: Matrix = v.even.iter().map(|c| vec![c.clone()]).collect();
    // c·u^jν = u^jν·c' with c' = c_even - c_odd
    col.extend(v.odd.iter().map(|c| vec![&c.even_part() - &c.odd_part()]));
    Ok(col)
}

fn power(m: &SuperMatrix, inv: &SuperMatrix, e: i32) -> Result<SuperMatrix, ChartError> {
    let (p, q) = m.shape();
    let base = if e >= 0 { m } else { inv };
    let mut acc = SuperMatrix::identity(p, q);
    for _ in 0..e.unsigned_abs() {
        acc = acc.matmul(base)?;
    }
    Ok(acc)
}

/// Re-expresses a canonical ideal on `from` in the other patch. The odd
/// coordinate changes as `ψ = θ y^k`, `θ = ψ x^k`.
///
/// Works in the quotient algebra: multiplication by `u` is inverted with
/// the block formula, the new basis `u'^i`, `u'^j ν'` is written in the old
/// one, and `u'^p`, `u'^q ν'` are expanded in the new basis to give the raw
/// ideal. Coefficient entries that must be inverted have to be units in
/// the coefficient ring (chart coordinates declared invertible).
pub fn change_patch(ideal: &CanonicalIdeal, from: Patch, k: i32) -> Result<CanonicalIdeal, ChartError> {
    if ideal.fiber() != &from.fiber() {
        return Err(ChartError::ChartMismatch(from.name().into(), format!("{:?}", ideal.fiber().x)));
    }
    let (p, q) = (ideal.p(), ideal.q());
    let pres = ideal.presentation();
    let fiber = &pres.fiber;
    let n = p + q;
    let basis: Vec<SuperPoly> = (0..p as i32)
        .map(|i| fiber.x_pow(i))
        .chain((0..q as i32).map(|j| fiber.x_pow_theta(j)))
        .collect();
    let mut mult: Matrix = vec![Vec::with_capacity(n); n];
    for b in &basis {
        let col = column(&(&fiber.x_pow(1) * b), &pres)?;
        for (row, c) in mult.iter_mut().zip(col) {
            row.push(c[0].clone());
        }
    }
    let m_u = SuperMatrix::from_rows(p, q, mult)?;
    let m_y = m_u.left_inverse()?;
    let apply = |m: &SuperMatrix, col: &Matrix| mat_mul(m.rows(), col, 1);

    let one = column(&SuperPoly::one(), &pres)?;
    let nu = apply(&power(&m_y, &m_u, k)?, &column(&fiber.theta(), &pres)?);
    let mut new_basis: Vec<Matrix> = Vec::with_capacity(n);
    for i in 0..p as i32 {
        new_basis.push(apply(&power(&m_y, &m_u, i)?, &one));
    }
    for j in 0..q as i32 {
        new_basis.push(apply(&power(&m_y, &m_u, j)?, &nu));
    }
    let rows: Matrix = (0..n).map(|r| new_basis.iter().map(|c| c[r][0].clone()).collect()).collect();
    let change = SuperMatrix::from_rows(p, q, rows)?.left_inverse()?;

    let target = from.other().fiber();
    let express = |col: &Matrix, lead: SuperPoly| -> SuperPoly {
        let coords = apply(&change, col);
        let mut out = lead;
        for (i, c) in coords.iter().enumerate() {
            let b = if i < p {
                target.x_pow(i as i32)
            } else {
                target.x_pow_theta((i - p) as i32)
            };
            out -= &(&b * &c[0]);
        }
        out
    };
    let f = express(&apply(&power(&m_y, &m_u, p as i32)?, &one), target.x_pow(p as i32));
    let g = express(&apply(&power(&m_y, &m_u, q as i32)?, &nu), target.x_pow_theta(q as i32));
    let raw = Presentation::new(p, q, target, f, g).map_err(|e| ChartError::NotCanonicalizable(e.to_string()))?;
    canonical_from_raw(&raw)
}
