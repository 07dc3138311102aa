//! Length-`(p|q)` quotients of the `(x|θ)` plane.
//!
//! The canonical ideal with parameters `(a, b | α, β)` is generated by
//!
//! ```text
//! f = (x^q + b)(x^{p-q} + a) + β(θ + α)
//! g = (x^q + b)(θ + α)
//! ```
//!
//! where `a = Σ a_i x^i` (`i < p-q`), `b = Σ b_i x^i` (`i < q`) and likewise
//! for `α`, `β`. Its quotient is free on `1, x, …, x^{p-1}, θ, θx, …, θx^{q-1}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::QuotientError;
use crate::grassmann::{Monomial, ParityOf, Rational, SuperPoly, Var};
use crate::parser::pretty;

/// The even and odd coordinate of the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub x: Var,
    pub theta: Var,
}

impl Default for Fiber {
    fn default() -> Fiber {
        Fiber {
            x: Var::even("x"),
            theta: Var::odd("theta"),
        }
    }
}

/// Coefficients of `Σ even[i] x^i + Σ odd[j] x^j θ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiberParts {
    pub even: BTreeMap<i32, SuperPoly>,
    pub odd: BTreeMap<i32, SuperPoly>,
}

impl FiberParts {
    pub fn even_degree(&self) -> Option<i32> {
        self.even.keys().next_back().copied()
    }

    pub fn odd_degree(&self) -> Option<i32> {
        self.odd.keys().next_back().copied()
    }

    pub fn even_coeff(&self, i: i32) -> SuperPoly {
        self.even.get(&i).cloned().unwrap_or_default()
    }

    pub fn odd_coeff(&self, i: i32) -> SuperPoly {
        self.odd.get(&i).cloned().unwrap_or_default()
    }
}

impl Fiber {
    pub fn new(x: Var, theta: Var) -> Result<Fiber, QuotientError> {
        if x.is_odd() || !theta.is_odd() {
            return Err(QuotientError::Shape("fiber needs an even and an odd coordinate".into()));
        }
        Ok(Fiber { x, theta })
    }

    pub fn is_fiber_var(&self, v: &Var) -> bool {
        v == &self.x || v == &self.theta
    }

    pub fn x_pow(&self, i: i32) -> SuperPoly {
        SuperPoly::term(Rational::from_integer(1.into()), Monomial::from_factors([(&self.x, i)]).unwrap().1)
    }

    pub fn theta(&self) -> SuperPoly {
        SuperPoly::var(&self.theta)
    }

    /// `x^i θ`.
    pub fn x_pow_theta(&self, i: i32) -> SuperPoly {
        &self.x_pow(i) * &self.theta()
    }

    /// Splits a polynomial in `x, θ` with parameter coefficients.
    pub fn split(&self, poly: &SuperPoly) -> Result<FiberParts, QuotientError> {
        let mut parts = FiberParts::default();
        for (m, c) in poly.decompose(|v| self.is_fiber_var(v)) {
            let i = m.exponent(&self.x);
            if i < 0 {
                return Err(QuotientError::NotInFiberRing(pretty(poly)));
            }
            if m.exponent(&self.theta) == 1 {
                parts.odd.insert(i, c);
            } else {
                parts.even.insert(i, c);
            }
        }
        Ok(parts)
    }

    pub fn assemble(&self, parts: &FiberParts) -> SuperPoly {
        let mut out = SuperPoly::zero();
        for (i, c) in &parts.even {
            out += &(c * &self.x_pow(*i));
        }
        for (i, c) in &parts.odd {
            out += &(c * &self.x_pow_theta(*i));
        }
        out
    }

    /// `Σ coeffs[i] x^i`.
    pub fn univariate(&self, coeffs: &[SuperPoly]) -> SuperPoly {
        coeffs.iter().enumerate().map(|(i, c)| c * &self.x_pow(i as i32)).sum()
    }

    /// `x^n + Σ coeffs[i] x^i`.
    pub fn monic(&self, n: usize, coeffs: &[SuperPoly]) -> SuperPoly {
        &self.x_pow(n as i32) + &self.univariate(coeffs)
    }
}

/// Coordinates on the basis `1, …, x^{p-1} | θ, …, θx^{q-1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BasisVector {
    pub even: Vec<SuperPoly>,
    pub odd: Vec<SuperPoly>,
}

impl BasisVector {
    pub fn zero(p: usize, q: usize) -> BasisVector {
        BasisVector {
            even: vec![SuperPoly::zero(); p],
            odd: vec![SuperPoly::zero(); q],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.even.iter().chain(&self.odd).all(SuperPoly::is_zero)
    }

    pub fn to_poly(&self, fiber: &Fiber) -> SuperPoly {
        let mut out = fiber.univariate(&self.even);
        for (j, c) in self.odd.iter().enumerate() {
            out += &(c * &fiber.x_pow_theta(j as i32));
        }
        out
    }

    pub fn map(&self, f: impl Fn(&SuperPoly) -> SuperPoly) -> BasisVector {
        BasisVector {
            even: self.even.iter().map(&f).collect(),
            odd: self.odd.iter().map(&f).collect(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &SuperPoly> {
        self.even.iter().chain(&self.odd)
    }
}

impl fmt::Display for BasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[SuperPoly]| v.iter().map(pretty).collect::<Vec<_>>().join(", ");
        write!(f, "({} | {})", show(&self.even), show(&self.odd))
    }
}

/// An even generator `f` with unit `x^p` term and θ-part of degree `< q`,
/// and an odd generator `g` whose θ-coefficient is monic of degree `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub p: usize,
    pub q: usize,
    pub fiber: Fiber,
    pub f: SuperPoly,
    pub g: SuperPoly,
}

impl Presentation {
    pub fn new(p: usize, q: usize, fiber: Fiber, f: SuperPoly, g: SuperPoly) -> Result<Presentation, QuotientError> {
        let fp = fiber.split(&f)?;
        let gp = fiber.split(&g)?;
        let (p_i, q_i) = (p as i32, q as i32);
        let monic_f = fp.even_degree() == Some(p_i) && fp.even_coeff(p_i).is_one() && fp.odd_degree().is_none_or(|d| d < q_i);
        let monic_g = gp.odd_degree() == Some(q_i) && gp.odd_coeff(q_i).is_one() && gp.even_degree().is_none_or(|d| d < p_i);
        if !monic_f || !monic_g {
            return Err(QuotientError::NonMonicDivisor);
        }
        Ok(Presentation { p, q, fiber, f, g })
    }
}

/// Result of [`reduce_to_basis`]: `poly = cofactor_f·f + cofactor_g·g + vector`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub vector: BasisVector,
    pub cofactor_f: SuperPoly,
    pub cofactor_g: SuperPoly,
}

impl Reduction {
    /// Re-expands the certificate and compares with `poly`.
    pub fn verify(&self, poly: &SuperPoly, pres: &Presentation) -> bool {
        let rebuilt = &(&(&self.cofactor_f * &pres.f) + &(&self.cofactor_g * &pres.g)) + &self.vector.to_poly(&pres.fiber);
        &rebuilt == poly
    }
}

/// Normal form of `poly` on the monomial basis, with cofactors.
///
/// θ-terms of degree `≥ q` are removed with `g`, even terms of degree
/// `≥ p` with `f`; each round lowers the even degree by two.
pub fn reduce_to_basis(poly: &SuperPoly, pres: &Presentation) -> Result<Reduction, QuotientError> {
    let fiber = &pres.fiber;
    let (p, q) = (pres.p as i32, pres.q as i32);
    let mut rem = poly.clone();
    let mut cf = SuperPoly::zero();
    let mut cg = SuperPoly::zero();
    loop {
        let parts = fiber.split(&rem)?;
        if let Some(j) = parts.odd_degree().filter(|&j| j >= q) {
            let t = &parts.odd[&j] * &fiber.x_pow(j - q);
            rem -= &(&t * &pres.g);
            cg += &t;
            continue;
        }
        if let Some(i) = parts.even_degree().filter(|&i| i >= p) {
            let t = &parts.even[&i] * &fiber.x_pow(i - p);
            rem -= &(&t * &pres.f);
            cf += &t;
            continue;
        }
        let vector = BasisVector {
            even: (0..p).map(|i| parts.even_coeff(i)).collect(),
            odd: (0..q).map(|j| parts.odd_coeff(j)).collect(),
        };
        return Ok(Reduction {
            vector,
            cofactor_f: cf,
            cofactor_g: cg,
        });
    }
}

pub fn membership(poly: &SuperPoly, pres: &Presentation) -> Result<bool, QuotientError> {
    Ok(reduce_to_basis(poly, pres)?.vector.is_zero())
}

/// Long division of univariate coefficient lists by a monic divisor.
fn divide_coeffs(dividend: &[SuperPoly], divisor: &[SuperPoly]) -> (Vec<SuperPoly>, Vec<SuperPoly>) {
    let n = divisor.len() - 1;
    let mut rem: Vec<SuperPoly> = dividend.to_vec();
    if rem.len() <= n {
        rem.resize(n, SuperPoly::zero());
        return (Vec::new(), rem);
    }
    let mut quot = vec![SuperPoly::zero(); rem.len() - n];
    for d in (n..rem.len()).rev() {
        let t = rem[d].clone();
        if t.is_zero() {
            continue;
        }
        for (k, dc) in divisor.iter().enumerate() {
            let idx = d - n + k;
            rem[idx] = &rem[idx] - &(&t * dc);
        }
        quot[d - n] = t;
    }
    rem.truncate(n);
    (quot, rem)
}

fn coeff_list(parts: &BTreeMap<i32, SuperPoly>) -> Vec<SuperPoly> {
    let len = parts.keys().next_back().map_or(0, |d| *d as usize + 1);
    (0..len as i32).map(|i| parts.get(&i).cloned().unwrap_or_default()).collect()
}

/// Divides by a monic even divisor in `x` with `x, θ`-free coefficients;
/// the θ-free and θ-linear parts are divided separately.
pub fn super_divmod(dividend: &SuperPoly, divisor: &SuperPoly, fiber: &Fiber) -> Result<(SuperPoly, SuperPoly), QuotientError> {
    let dp = fiber.split(divisor)?;
    if !dp.odd.is_empty() || divisor.parity_of() != ParityOf::Even {
        return Err(QuotientError::NonMonicDivisor);
    }
    let deg = dp.even_degree().ok_or(QuotientError::NonMonicDivisor)?;
    if !dp.even_coeff(deg).is_one() {
        return Err(QuotientError::NonMonicDivisor);
    }
    let dcoeffs = coeff_list(&dp.even);
    let parts = fiber.split(dividend)?;
    let (q0, r0) = divide_coeffs(&coeff_list(&parts.even), &dcoeffs);
    let (q1, r1) = divide_coeffs(&coeff_list(&parts.odd), &dcoeffs);
    let theta = fiber.theta();
    let quotient = &fiber.univariate(&q0) + &(&fiber.univariate(&q1) * &theta);
    let remainder = &fiber.univariate(&r0) + &(&fiber.univariate(&r1) * &theta);
    Ok((quotient, remainder))
}

fn check_ranks(p: usize, q: usize) -> Result<(), QuotientError> {
    if q > p {
        return Err(QuotientError::RankOrderViolation { p, q });
    }
    Ok(())
}

fn symbols(prefix: &str, name: &str, n: usize, odd: bool) -> Vec<SuperPoly> {
    (0..n)
        .map(|i| {
            let label = format!("{prefix}{name}{i}");
            SuperPoly::var(&if odd { Var::odd(&label) } else { Var::even(&label) })
        })
        .collect()
}

/// The canonical ideal and its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalIdeal {
    p: usize,
    q: usize,
    fiber: Fiber,
    a: Vec<SuperPoly>,
    b: Vec<SuperPoly>,
    alpha: Vec<SuperPoly>,
    beta: Vec<SuperPoly>,
    f: SuperPoly,
    g: SuperPoly,
}

impl CanonicalIdeal {
    /// `a`, `α` have length `p-q`; `b`, `β` have length `q`.
    pub fn new(
        p: usize,
        q: usize,
        fiber: Fiber,
        a: Vec<SuperPoly>,
        b: Vec<SuperPoly>,
        alpha: Vec<SuperPoly>,
        beta: Vec<SuperPoly>,
    ) -> Result<CanonicalIdeal, QuotientError> {
        check_ranks(p, q)?;
        let lens = [(a.len(), p - q, "a"), (b.len(), q, "b"), (alpha.len(), p - q, "alpha"), (beta.len(), q, "beta")];
        for (have, want, name) in lens {
            if have != want {
                return Err(QuotientError::Shape(format!("{name} needs {want} entries, got {have}")));
            }
        }
        let even_ok = a.iter().chain(&b).all(|c| c.parity_of() == ParityOf::Even);
        let odd_ok = alpha.iter().chain(&beta).all(|c| c.is_zero() || c.parity_of() == ParityOf::Odd);
        if !even_ok || !odd_ok {
            return Err(QuotientError::Shape("parameter parities do not match".into()));
        }
        for c in a.iter().chain(&b).chain(&alpha).chain(&beta) {
            if c.vars().iter().any(|v| fiber.is_fiber_var(v)) {
                return Err(QuotientError::Shape("parameters must not involve the fiber coordinates".into()));
            }
        }
        let bx = fiber.monic(q, &b);
        let ax = fiber.monic(p - q, &a);
        let tail = &fiber.theta() + &fiber.univariate(&alpha);
        let f = &(&bx * &ax) + &(&fiber.univariate(&beta) * &tail);
        let g = &bx * &tail;
        Ok(CanonicalIdeal {
            p,
            q,
            fiber,
            a,
            b,
            alpha,
            beta,
            f,
            g,
        })
    }

    /// Parameters as fresh variables `{prefix}a0, …, {prefix}beta{q-1}`.
    pub fn symbolic(p: usize, q: usize, prefix: &str) -> Result<CanonicalIdeal, QuotientError> {
        check_ranks(p, q)?;
        CanonicalIdeal::new(
            p,
            q,
            Fiber::default(),
            symbols(prefix, "a", p - q, false),
            symbols(prefix, "b", q, false),
            symbols(prefix, "alpha", p - q, true),
            symbols(prefix, "beta", q, true),
        )
    }

    /// The monomial ideal `(x^p, x^q θ)`.
    pub fn base_point(p: usize, q: usize) -> Result<CanonicalIdeal, QuotientError> {
        check_ranks(p, q)?;
        let z = |n| vec![SuperPoly::zero(); n];
        CanonicalIdeal::new(p, q, Fiber::default(), z(p - q), z(q), z(p - q), z(q))
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn fiber(&self) -> &Fiber {
        &self.fiber
    }

    pub fn f(&self) -> &SuperPoly {
        &self.f
    }

    pub fn g(&self) -> &SuperPoly {
        &self.g
    }

    pub fn a(&self) -> &[SuperPoly] {
        &self.a
    }

    pub fn b(&self) -> &[SuperPoly] {
        &self.b
    }

    pub fn alpha(&self) -> &[SuperPoly] {
        &self.alpha
    }

    pub fn beta(&self) -> &[SuperPoly] {
        &self.beta
    }

    /// Parameter values in the order `a, b | α, β`.
    pub fn params(&self) -> Vec<SuperPoly> {
        self.a.iter().chain(&self.b).chain(&self.alpha).chain(&self.beta).cloned().collect()
    }

    /// Number of even and odd parameters; always `(p, p)`.
    pub fn dimension(&self) -> (usize, usize) {
        (self.a.len() + self.b.len(), self.alpha.len() + self.beta.len())
    }

    pub fn presentation(&self) -> Presentation {
        Presentation::new(self.p, self.q, self.fiber.clone(), self.f.clone(), self.g.clone()).expect("canonical generators are monic")
    }

    /// The generators in `f=` / `g=` line form.
    pub fn to_text(&self) -> String {
        format!("f={}\ng={}\n", pretty(&self.f), pretty(&self.g))
    }
}

/// Reads the two generator lines written by [`CanonicalIdeal::to_text`].
pub fn parse_generators(text: &str, ring: &crate::parser::RingDecl) -> Result<(SuperPoly, SuperPoly), crate::error::ParseError> {
    let mut f = None;
    let mut g = None;
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let slot = if let Some(rest) = line.strip_prefix("f=") {
            (&mut f, rest)
        } else if let Some(rest) = line.strip_prefix("g=") {
            (&mut g, rest)
        } else {
            return Err(crate::error::ParseError::Syntax {
                line: n + 1,
                column: 1,
                message: "expected `f=` or `g=`".into(),
            });
        };
        let value = crate::parser::parse_poly(slot.1, ring).map_err(|e| match e {
            crate::error::ParseError::Syntax { column, message, .. } => crate::error::ParseError::Syntax {
                line: n + 1,
                column: column + 2,
                message,
            },
            other => other,
        })?;
        *slot.0 = Some(value);
    }
    match (f, g) {
        (Some(f), Some(g)) => Ok((f, g)),
        _ => Err(crate::error::ParseError::Syntax {
            line: text.lines().count().max(1),
            column: 1,
            message: "both `f=` and `g=` lines are required".into(),
        }),
    }
}

/// The ideal `(x^p + Σ a_i x^i + Σ α_i x^i θ, x^q θ + Σ b_i x^i θ + Σ β_i x^i)`
/// with all `p+q | p+q` coefficients free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawIdeal {
    pub p: usize,
    pub q: usize,
    pub fiber: Fiber,
    pub a: Vec<SuperPoly>,
    pub b: Vec<SuperPoly>,
    pub alpha: Vec<SuperPoly>,
    pub beta: Vec<SuperPoly>,
    pub f: SuperPoly,
    pub g: SuperPoly,
}

impl RawIdeal {
    pub fn symbolic(p: usize, q: usize, prefix: &str) -> Result<RawIdeal, QuotientError> {
        check_ranks(p, q)?;
        let fiber = Fiber::default();
        let a = symbols(prefix, "ra", p, false);
        let b = symbols(prefix, "rb", q, false);
        let alpha = symbols(prefix, "ralpha", q, true);
        let beta = symbols(prefix, "rbeta", p, true);
        let f = &fiber.monic(p, &a) + &(&fiber.univariate(&alpha) * &fiber.theta());
        let g = &(&fiber.monic(q, &b) * &fiber.theta()) + &fiber.univariate(&beta);
        Ok(RawIdeal {
            p,
            q,
            fiber,
            a,
            b,
            alpha,
            beta,
            f,
            g,
        })
    }

    pub fn presentation(&self) -> Presentation {
        Presentation::new(self.p, self.q, self.fiber.clone(), self.f.clone(), self.g.clone()).expect("raw generators are monic")
    }

    pub fn params(&self) -> Vec<SuperPoly> {
        self.a.iter().chain(&self.b).chain(&self.alpha).chain(&self.beta).cloned().collect()
    }
}

/// The change of parameters taking the raw ideal to canonical form plus
/// residuals: raw `f` becomes canonical `f + Σ c_i x^i` and raw `g` becomes
/// canonical `g + Σ γ_i x^i`.
#[derive(Clone, Debug)]
pub struct CoordinateChange {
    pub raw: RawIdeal,
    pub canonical: CanonicalIdeal,
    pub c: Vec<SuperPoly>,
    pub gamma: Vec<SuperPoly>,
    /// Raw parameter ↦ expression in canonical and residual parameters.
    pub to_raw: BTreeMap<Var, SuperPoly>,
    /// Canonical or residual parameter ↦ expression in raw parameters.
    pub from_raw: BTreeMap<Var, SuperPoly>,
}

fn as_var(p: &SuperPoly) -> Var {
    p.vars().into_iter().next().expect("symbolic parameter")
}

impl CoordinateChange {
    /// Canonical generators with the residuals added.
    pub fn residual_presentation(&self) -> Presentation {
        let fiber = &self.canonical.fiber;
        let f = self.canonical.f() + &fiber.univariate(&self.c);
        let g = self.canonical.g() + &fiber.univariate(&self.gamma);
        Presentation::new(self.canonical.p, self.canonical.q, fiber.clone(), f, g).expect("residuals have low degree")
    }
}

/// Builds the coordinate change by long division, then checks both
/// directions symbolically.
pub fn raw_to_canonical(p: usize, q: usize) -> Result<CoordinateChange, QuotientError> {
    check_ranks(p, q)?;
    let raw = RawIdeal::symbolic(p, q, "")?;
    let canonical = CanonicalIdeal::symbolic(p, q, "")?;
    let fiber = raw.fiber.clone();
    let c = symbols("", "c", q, false);
    let gamma = symbols("", "gamma", q, true);

    // raw side: divide by B = x^q + Σ rb_i x^i
    let bx = fiber.monic(q, &raw.b);
    let f_even = fiber.monic(p, &raw.a);
    let (quot, d_prime) = super_divmod(&f_even, &bx, &fiber)?;
    let (delta, eps) = super_divmod(&fiber.univariate(&raw.beta), &bx, &fiber)?;
    let alpha_x = fiber.univariate(&raw.alpha);
    let (s, r) = super_divmod(&(&alpha_x * &delta), &bx, &fiber)?;
    let a_poly = &quot - &s;
    let c_poly = &d_prime - &r;

    let coeffs = |poly: &SuperPoly, n: usize| -> Result<Vec<SuperPoly>, QuotientError> {
        let parts = fiber.split(poly)?;
        Ok((0..n as i32).map(|i| parts.even_coeff(i)).collect())
    };
    let mut from_raw = BTreeMap::new();
    let assign = |map: &mut BTreeMap<Var, SuperPoly>, names: &[SuperPoly], values: Vec<SuperPoly>| {
        for (n, v) in names.iter().zip(values) {
            map.insert(as_var(n), v);
        }
    };
    assign(&mut from_raw, &canonical.a, coeffs(&a_poly, p - q)?);
    assign(&mut from_raw, &canonical.b, raw.b.clone());
    assign(&mut from_raw, &canonical.alpha, coeffs(&delta, p - q)?);
    assign(&mut from_raw, &canonical.beta, raw.alpha.clone());
    assign(&mut from_raw, &c, coeffs(&c_poly, q)?);
    assign(&mut from_raw, &gamma, coeffs(&eps, q)?);

    // canonical side: raw f = b(x^{p-q} + a) + βα + c, raw g = bθ + bα + γ
    let cb = fiber.monic(q, &canonical.b);
    let f_even_canon = &(&(&cb * &fiber.monic(p - q, &canonical.a)) + &(&fiber.univariate(&canonical.beta) * &fiber.univariate(&canonical.alpha))) + &fiber.univariate(&c);
    let g_even_canon = &(&cb * &fiber.univariate(&canonical.alpha)) + &fiber.univariate(&gamma);
    let mut to_raw = BTreeMap::new();
    assign(&mut to_raw, &raw.a, coeffs(&f_even_canon, p)?);
    assign(&mut to_raw, &raw.b, canonical.b.clone());
    assign(&mut to_raw, &raw.alpha, canonical.beta.clone());
    assign(&mut to_raw, &raw.beta, coeffs(&g_even_canon, p)?);

    let change = CoordinateChange {
        raw,
        canonical,
        c,
        gamma,
        to_raw,
        from_raw,
    };
    verify_change(&change)?;
    Ok(change)
}

fn verify_change(change: &CoordinateChange) -> Result<(), QuotientError> {
    let res = change.residual_presentation();
    let f = change.raw.f.substitute(&change.to_raw)?;
    let g = change.raw.g.substitute(&change.to_raw)?;
    if f != res.f || g != res.g {
        return Err(QuotientError::VerificationFailed("raw generators do not match canonical plus residual".into()));
    }
    for (v, expr) in &change.from_raw {
        if expr.substitute(&change.to_raw)? != SuperPoly::var(v) {
            return Err(QuotientError::VerificationFailed(format!("coordinate {v} does not round-trip")));
        }
    }
    Ok(())
}

/// A relation `vector = cofactor_f·f + cofactor_g·g` among the basis
/// elements in the residual presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub vector: BasisVector,
    pub cofactor_f: SuperPoly,
    pub cofactor_g: SuperPoly,
}

/// The two kernel elements `f(θ+α) - g(x^{p-q}+a) = c(θ+α) - γ(x^{p-q}+a)`
/// and `g(θ+α) = γ(θ+α)`, checked by expansion.
pub fn kernel_witnesses(p: usize, q: usize) -> Result<(Relation, Relation), QuotientError> {
    let change = raw_to_canonical(p, q)?;
    kernel_witnesses_for(&change)
}

fn kernel_witnesses_for(change: &CoordinateChange) -> Result<(Relation, Relation), QuotientError> {
    let can = &change.canonical;
    let fiber = &can.fiber;
    let (p, q) = (can.p, can.q);
    let pres = change.residual_presentation();
    let tail = &fiber.theta() + &fiber.univariate(&can.alpha);
    let ax = fiber.monic(p - q, &can.a);
    let c = fiber.univariate(&change.c);
    let gamma = fiber.univariate(&change.gamma);

    let h_poly = &(&c * &tail) - &(&gamma * &ax);
    let k_poly = &gamma * &tail;
    let relation = |poly: SuperPoly, cf: SuperPoly, cg: SuperPoly| -> Result<Relation, QuotientError> {
        let expanded = &(&cf * &pres.f) + &(&cg * &pres.g);
        if expanded != poly {
            return Err(QuotientError::VerificationFailed("kernel witness expansion".into()));
        }
        let parts = fiber.split(&poly)?;
        if parts.even_degree().is_some_and(|d| d >= p as i32) || parts.odd_degree().is_some_and(|d| d >= q as i32) {
            return Err(QuotientError::VerificationFailed("kernel witness leaves the basis span".into()));
        }
        Ok(Relation {
            vector: BasisVector {
                even: (0..p as i32).map(|i| parts.even_coeff(i)).collect(),
                odd: (0..q as i32).map(|j| parts.odd_coeff(j)).collect(),
            },
            cofactor_f: cf,
            cofactor_g: cg,
        })
    };
    // f·(θ+α) - g·(x^{p-q}+a); the cofactors multiply on the right, and
    // (θ+α) is odd, so it moves to the left of f unchanged and past g with a sign
    let h = relation(h_poly, tail.clone(), -ax.clone())?;
    let k = relation(k_poly, SuperPoly::zero(), -tail.clone())?;
    Ok((h, k))
}

/// The locus where the quotient is free of rank `(p|q)`.
#[derive(Clone, Debug)]
pub struct Stratification {
    /// `(c_0, …, c_{q-1}, γ_0, …, γ_{q-1})`.
    pub generators: Vec<SuperPoly>,
    pub witnesses: (Relation, Relation),
    /// Free parameters left on the stratum, `(even, odd)`.
    pub dimension: (usize, usize),
    pub change: CoordinateChange,
}

/// Computes and verifies the flattening generators.
pub fn stratification_generators(p: usize, q: usize) -> Result<Stratification, QuotientError> {
    let change = raw_to_canonical(p, q)?;
    let witnesses = kernel_witnesses_for(&change)?;
    let generators: Vec<SuperPoly> = change.c.iter().chain(&change.gamma).cloned().collect();

    let kill: BTreeMap<Var, SuperPoly> = generators.iter().map(|g| (as_var(g), SuperPoly::zero())).collect();
    for w in [&witnesses.0, &witnesses.1] {
        for e in w.vector.entries() {
            if !e.substitute(&kill)?.is_zero() {
                return Err(QuotientError::VerificationFailed("witness survives on the stratum".into()));
            }
        }
    }

    // on the stratum the basis is free: no basis element reduces to anything else
    let can = &change.canonical;
    let pres = can.presentation();
    let fiber = &can.fiber;
    let fp = fiber.split(&pres.f)?;
    let gp = fiber.split(&pres.g)?;
    if !fp.even_coeff(p as i32).is_one() || !gp.odd_coeff(q as i32).is_one() {
        return Err(QuotientError::VerificationFailed("leading coefficients".into()));
    }
    for i in 0..p {
        let red = reduce_to_basis(&fiber.x_pow(i as i32), &pres)?;
        let mut e = BasisVector::zero(p, q);
        e.even[i] = SuperPoly::one();
        if red.vector != e {
            return Err(QuotientError::VerificationFailed(format!("x^{i} is not a basis element")));
        }
    }
    for j in 0..q {
        let red = reduce_to_basis(&fiber.x_pow_theta(j as i32), &pres)?;
        let mut e = BasisVector::zero(p, q);
        e.odd[j] = SuperPoly::one();
        if red.vector != e {
            return Err(QuotientError::VerificationFailed(format!("x^{j}θ is not a basis element")));
        }
    }
    let dimension = can.dimension();
    Ok(Stratification {
        generators,
        witnesses,
        dimension,
        change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::rat;

    #[test]
    fn divmod_examples() {
        let fiber = Fiber::default();
        let x = fiber.x_pow(1);
        let one = SuperPoly::one();
        let (q, r) = super_divmod(&x.pow(3).unwrap(), &(&x + &one), &fiber).unwrap();
        assert_eq!(q, &(&x.pow(2).unwrap() - &x) + &one);
        assert_eq!(r, SuperPoly::int(-1));

        let can = CanonicalIdeal::symbolic(2, 0, "").unwrap();
        let (q, r) = super_divmod(can.f(), can.f(), &fiber).unwrap();
        assert!(q.is_one());
        assert!(r.is_zero());

        assert_eq!(super_divmod(&x, &(&x * &SuperPoly::int(2)), &fiber), Err(QuotientError::NonMonicDivisor));
    }

    #[test]
    fn raw_division_shape() {
        let raw = RawIdeal::symbolic(2, 1, "").unwrap();
        let fiber = &raw.fiber;
        let divisor = fiber.monic(1, &raw.b);
        let (q, r) = super_divmod(&raw.f, &divisor, fiber).unwrap();
        let qp = fiber.split(&q).unwrap();
        let rp = fiber.split(&r).unwrap();
        assert_eq!(qp.even_degree(), Some(1));
        assert!(qp.even_coeff(1).is_one());
        assert_eq!(rp.even_degree(), Some(0));
        assert_eq!(rp.odd_degree(), Some(0));
        assert_eq!(rp.odd_coeff(0), raw.alpha[0]);
        assert_eq!(&(&divisor * &q) + &r, raw.f);
    }

    #[test]
    fn base_point_reduction() {
        let can = CanonicalIdeal::base_point(2, 1).unwrap();
        let pres = can.presentation();
        let fiber = can.fiber();
        assert!(reduce_to_basis(&fiber.x_pow(3), &pres).unwrap().vector.is_zero());
        let red = reduce_to_basis(&fiber.theta(), &pres).unwrap();
        assert!(red.vector.odd[0].is_one());
        assert!(reduce_to_basis(&SuperPoly::one(), &pres).unwrap().vector.even[0].is_one());
    }

    #[test]
    fn symbolic_reduction_certificates() {
        let can = CanonicalIdeal::symbolic(2, 1, "").unwrap();
        let pres = can.presentation();
        let fiber = can.fiber();
        let poly = &fiber.x_pow(1) * can.g();
        let red = reduce_to_basis(&poly, &pres).unwrap();
        assert!(red.verify(&poly, &pres));
        assert!(red.vector.is_zero());
        let poly = &(&fiber.x_pow(4) + &fiber.x_pow_theta(3)) + &SuperPoly::constant(rat(7));
        let red = reduce_to_basis(&poly, &pres).unwrap();
        assert!(red.verify(&poly, &pres));
        assert!(membership(can.f(), &pres).unwrap());
        assert!(!membership(&SuperPoly::one(), &pres).unwrap());
        let tail = &fiber.theta() + &fiber.univariate(can.alpha());
        assert!(membership(&(can.g() * &tail), &pres).unwrap());
    }

    #[test]
    fn small_coordinate_changes() {
        let ch = raw_to_canonical(1, 0).unwrap();
        assert!(ch.c.is_empty() && ch.gamma.is_empty());
        let ch = raw_to_canonical(1, 1).unwrap();
        let res = ch.residual_presentation();
        let fiber = &ch.canonical.fiber;
        let expected_f = &(&(&fiber.x_pow(1) + &ch.canonical.b()[0]) + &ch.c[0]) + &(&ch.canonical.beta()[0] * &fiber.theta());
        assert_eq!(res.f, expected_f);
        let expected_g = &(&(&fiber.x_pow(1) + &ch.canonical.b()[0]) * &fiber.theta()) + &ch.gamma[0];
        assert_eq!(res.g, expected_g);
        assert_eq!(raw_to_canonical(1, 2).unwrap_err(), QuotientError::RankOrderViolation { p: 1, q: 2 });
    }

    #[test]
    fn witnesses_two_one() {
        let (h, k) = kernel_witnesses(2, 1).unwrap();
        let v = |n: &str| SuperPoly::var(&if matches!(n, "a0" | "c0") { Var::even(n) } else { Var::odd(n) });
        assert_eq!(h.vector.even[0], &(&v("c0") * &v("alpha0")) - &(&v("a0") * &v("gamma0")));
        assert_eq!(h.vector.even[1], -v("gamma0"));
        assert_eq!(h.vector.odd[0], v("c0"));
        assert_eq!(k.vector.even[0], &v("gamma0") * &v("alpha0"));
        assert_eq!(k.vector.odd[0], v("gamma0"));
    }

    #[test]
    fn generator_counts() {
        for (p, q) in [(1, 0), (1, 1), (2, 1), (3, 2)] {
            let s = stratification_generators(p, q).unwrap();
            assert_eq!(s.generators.len(), 2 * q);
            assert_eq!(s.dimension, (p, p));
        }
    }

    #[test]
    fn text_round_trip() {
        let can = CanonicalIdeal::symbolic(2, 1, "").unwrap();
        let ring = crate::parser::parse_ring("even x; odd theta; even a0; even b0; odd alpha0; odd beta0;").unwrap();
        let (f, g) = parse_generators(&can.to_text(), &ring).unwrap();
        assert_eq!((&f, &g), (can.f(), can.g()));
    }
}
