//! The coboundary equations `Ψ_{ij} = σ_j - σ_i` for `Hilb^{2|1}`.
//!
//! A 0-cochain is `σ_c = F_c · frame_c · ∂/∂u_c`, with `u_c` the first even
//! coordinate of chart `c` and `frame_c` the product of its odd coordinates.
//! Every chart is an open set of the torus in `(z, w)`, and `F_c` ranges over
//! Laurent polynomials supported in the cone of monomials regular on `c`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::cochain::{bosonic_rules, det2, extract_obstruction, odd_block, CechCochain1};
use super::laurent::{w, z, Block, Cone, LaurentBivar, LaurentEquation, LaurentSystem, LaurentTerm, Solution};
use crate::charts::{hilb21_atlas, Atlas, SuperChart};
use crate::error::ObstructionError;
use crate::fraction::Frac;
use crate::grassmann::{Rational, SuperPoly};

/// Chart, unknown block, cone, and the exponents `(e1, e2)` with
/// `u1 = -z^e1`, `u2 = -w^e2` on the bosonic torus.
pub(crate) const EMBEDDING: [(&str, Block, Cone, [i32; 2]); 3] = [
    ("V1", Block::F, Cone::PosPos, [1, 1]),
    ("V2", Block::G, Cone::NegPos, [-1, 1]),
    ("V3", Block::H, Cone::PosNeg, [1, -1]),
];

/// Overlaps `(i, j)` that carry an equation, read off `j → i`.
const OVERLAPS: [(&str, &str); 3] = [("V1", "V2"), ("V1", "V3"), ("V2", "V3")];

fn embedding(name: &str) -> Result<(Block, Cone, [i32; 2]), ObstructionError> {
    EMBEDDING
        .iter()
        .find(|e| e.0 == name)
        .map(|e| (e.1, e.2, e.3))
        .ok_or_else(|| ObstructionError::Shape(format!("no torus embedding for chart {name}")))
}

/// Substitution taking chart coordinates to the torus.
pub(crate) fn torus_rules(chart: &SuperChart) -> Result<BTreeMap<crate::grassmann::Var, Frac>, ObstructionError> {
    let (_, _, [e1, e2]) = embedding(&chart.name)?;
    let minus = |v, e| -> Result<Frac, ObstructionError> { Ok(-&Frac::from(SuperPoly::var_pow(&v, e)?)) };
    Ok(BTreeMap::from([
        (chart.even[0].clone(), minus(z(), e1)?),
        (chart.even[1].clone(), minus(w(), e2)?),
    ]))
}

fn lcm_denominator(fs: &[&Frac]) -> SuperPoly {
    let mut factors: BTreeMap<SuperPoly, u32> = BTreeMap::new();
    for f in fs {
        for (d, e) in f.denominator_factors() {
            let slot = factors.entry(d.clone()).or_insert(0);
            *slot = (*slot).max(e);
        }
    }
    let mut out = SuperPoly::one();
    for (d, e) in factors {
        out = &out * &d.pow(e as i64).expect("nonnegative power");
    }
    out
}

fn laurent(f: &Frac) -> Result<LaurentBivar, ObstructionError> {
    let p = f
        .as_poly()
        .ok_or_else(|| ObstructionError::Shape(format!("{f} did not clear to a Laurent polynomial")))?;
    LaurentBivar::from_poly(&p)
}

/// Builds the system from a `Hilb^{2|1}` atlas and its cochain.
pub fn coboundary_system(atlas: &Atlas, cochain: &CechCochain1, degree_bound: usize) -> Result<LaurentSystem, ObstructionError> {
    let mut equations = Vec::new();
    for (i, j) in OVERLAPS {
        let ci = atlas.chart(i)?;
        let cj = atlas.chart(j)?;
        let (bi, _, _) = embedding(i)?;
        let (bj, _, _) = embedding(j)?;
        let t = atlas.transition(j, i)?;
        let reverse = atlas.transition(i, j)?;
        if cochain.component(i, j, ci.even[1].name()).is_some() {
            return Err(ObstructionError::Shape(format!("Ψ({i},{j}) has a {} component", ci.even[1].name())));
        }
        let coef = cochain
            .component(i, j, ci.even[0].name())
            .map(|e| e.coefficient.clone())
            .unwrap_or_else(Frac::zero);
        let u1 = t.rules[&ci.even[0]].bosonic_part();
        let u2 = t.rules[&ci.even[1]].bosonic_part();
        if !u1.derivative(&cj.even[1]).is_zero() || !u2.derivative(&cj.even[0]).is_zero() {
            return Err(ObstructionError::Shape(format!("{j} -> {i} is not diagonal on the bosonic torus")));
        }
        let jac = u1.derivative(&cj.even[0]);
        let det = det2(&odd_block(t, cj, ci));
        let ratio = (&jac * &det.invert()?).substitute(&bosonic_rules(reverse))?;
        let to_torus = torus_rules(ci)?;
        let coef = coef.substitute(&to_torus)?;
        let ratio = ratio.substitute(&to_torus)?;
        let d = Frac::from(lcm_denominator(&[&coef, &ratio]));
        equations.push(LaurentEquation {
            overlap: (i.to_string(), j.to_string()),
            terms: vec![
                LaurentTerm {
                    block: bi,
                    factor: laurent(&d)?.neg(),
                },
                LaurentTerm {
                    block: bj,
                    factor: laurent(&(&ratio * &d))?,
                },
            ],
            rhs: laurent(&(&coef * &d))?,
        });
    }
    Ok(LaurentSystem {
        k: cochain.k,
        degree_bound,
        cones: EMBEDDING.iter().map(|e| (e.1, e.2)).collect(),
        equations,
    })
}

/// `coboundary_system` for `hilb21_atlas(k)`.
pub fn build_coboundary_system(k: i32, degree_bound: usize) -> Result<LaurentSystem, ObstructionError> {
    let atlas = hilb21_atlas(k)?;
    let cochain = extract_obstruction(&atlas)?;
    coboundary_system(&atlas, &cochain, degree_bound)
}

/// Which sign of `k` the analysis ran under.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    /// `k > 0`
    I,
    /// `k < 0`
    II,
    /// `k = 0`
    III,
}

impl Case {
    pub fn of(k: i32) -> Case {
        match k.signum() {
            1 => Case::I,
            -1 => Case::II,
            _ => Case::III,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Case::I => "I",
            Case::II => "II",
            Case::III => "III",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseOutcome {
    pub case: Case,
    pub solution: Option<Solution>,
    pub trace: Vec<String>,
}

/// Exponent range allowed by one sign constraint on `e` and one on `e + shift`.
fn interval(sign_a: i32, sign_b: i32, shift: i32) -> Option<(Option<i32>, Option<i32>)> {
    // e * sign_a >= 0 and (e + shift) * sign_b >= 0
    let mut lo: Option<i32> = None;
    let mut hi: Option<i32> = None;
    let mut bound = |is_lower: bool, v: i32| {
        if is_lower {
            lo = Some(lo.map_or(v, |l| l.max(v)));
        } else {
            hi = Some(hi.map_or(v, |h| h.min(v)));
        }
    };
    bound(sign_a > 0, 0);
    bound(sign_b > 0, -shift);
    match (lo, hi) {
        (Some(l), Some(h)) if l > h => None,
        _ => Some((lo, hi)),
    }
}

/// Decides the system by support arguments, without a degree bound.
///
/// The equation without `f` ties `g` to a monomial multiple of `h`; the
/// two cones cut the support of `h` down to a box. The remaining equations
/// have `f` multiplied by a monomial times `z - w`, so they can only hold if
/// the right side vanishes on the diagonal, which fixes the constants left
/// in the box. Any step outside this shape is reported as undecided.
pub fn support_case_analysis(sys: &LaurentSystem) -> Result<CaseOutcome, ObstructionError> {
    let case = Case::of(sys.k);
    let mut trace = Vec::new();
    let undecided = |m: &str| Err(ObstructionError::Undecided(m.to_string()));

    let Some(gh) = sys
        .equations
        .iter()
        .find(|e| e.factor(Block::F).is_none() && e.rhs.is_zero())
    else {
        return undecided("no homogeneous equation between g and h");
    };
    let (Some(fg), Some(fh)) = (gh.factor(Block::G), gh.factor(Block::H)) else {
        return undecided("homogeneous equation does not involve both g and h");
    };
    let (Some((eg, cg)), Some((eh, ch))) = (fg.as_monomial(), fh.as_monomial()) else {
        return undecided("g and h are not related by a monomial");
    };
    // g = ratio * z^s * h
    let s = (eh.0 - eg.0, eh.1 - eg.1);
    let ratio = -(ch / cg);
    let g_of_h = LaurentBivar::monomial(ratio.clone(), s);
    trace.push(format!("g = ({g_of_h})*h"));

    let (cone_g, cone_h) = (sys.cones[&Block::G], sys.cones[&Block::H]);
    let (sh, sg) = (cone_h.signs(), cone_g.signs());
    let box_z = interval(sh[0], sg[0], s.0);
    let box_w = interval(sh[1], sg[1], s.1);
    let support: Vec<(i32, i32)> = match (box_z, box_w) {
        (None, _) | (_, None) => Vec::new(),
        (Some((Some(a), Some(b))), Some((Some(c), Some(d)))) => {
            (a..=b).flat_map(|i| (c..=d).map(move |j| (i, j))).collect()
        }
        _ => return undecided("support of h is unbounded"),
    };
    if support.is_empty() {
        trace.push(format!(
            "h has no monomial z^i*w^j with z^i*w^j and z^({}+i)*w^({}+j) both allowed: g = 0 and h = 0",
            s.0, s.1
        ));
    } else if support == [(0, 0)] {
        trace.push(format!("only constants survive both cones: h = c and g = ({g_of_h})*c"));
    } else {
        trace.push(format!("h is supported on {} monomials", support.len()));
    }

    // parameters c_m for h = Σ c_m z^m; each f-equation, restricted to the
    // diagonal, is linear in them
    let with_f: Vec<&LaurentEquation> = sys.equations.iter().filter(|e| e.factor(Block::F).is_some()).collect();
    let param = |eq: &LaurentEquation, m: (i32, i32)| -> LaurentBivar {
        let h = LaurentBivar::monomial(Rational::one(), m);
        let g = g_of_h.mul(&h);
        let mut out = LaurentBivar::zero();
        if let Some(f) = eq.factor(Block::G) {
            out = out.sum(&f.mul(&g));
        }
        if let Some(f) = eq.factor(Block::H) {
            out = out.sum(&f.mul(&h));
        }
        out
    };
    let mut rows = Vec::new();
    for eq in &with_f {
        let af = eq.factor(Block::F).unwrap();
        let diag_af = af.on_diagonal();
        if !diag_af.is_empty() {
            return undecided("coefficient of f does not vanish on the diagonal");
        }
        // rhs - Σ c_m param_m must vanish on the diagonal
        let rhs = eq.rhs.on_diagonal();
        let cols: Vec<BTreeMap<i32, Rational>> = support.iter().map(|m| param(eq, *m).on_diagonal()).collect();
        let mut exps: Vec<i32> = rhs.keys().copied().collect();
        for c in &cols {
            exps.extend(c.keys());
        }
        exps.sort_unstable();
        exps.dedup();
        for e in exps {
            let row: BTreeMap<usize, Rational> = cols
                .iter()
                .enumerate()
                .filter_map(|(u, c)| c.get(&e).map(|v| (u, v.clone())))
                .collect();
            rows.push((row, rhs.get(&e).cloned().unwrap_or_else(Rational::zero), eq));
        }
    }
    let plain: Vec<_> = rows.iter().map(|(r, b, _)| (r.clone(), b.clone())).collect();
    let Some(values) = super::laurent::solve_sparse(plain.clone(), support.len()) else {
        // report the first f-equation with its known data, restricted to w = z
        let eq = with_f[0];
        let shown = LaurentEquation {
            overlap: eq.overlap.clone(),
            terms: eq.terms.iter().filter(|t| t.block == Block::F || !support.is_empty()).cloned().collect(),
            rhs: eq.rhs.clone(),
        };
        trace.push(format!("{}: {}", pair(&eq.overlap), shown.to_text()));
        let lhs = if support.is_empty() { "0".to_string() } else { "a combination of h".to_string() };
        let rhs = eq.rhs.on_diagonal();
        let rhs_text = LaurentBivar::from_poly(&diag_poly(&rhs))?.to_string();
        trace.push(format!("at w = z the left side is {lhs} but the right side is {rhs_text}"));
        return Ok(CaseOutcome { case, solution: None, trace });
    };
    // the constants must be pinned down for f to be determined
    let rank = rank_of(&plain, support.len());
    if rank < support.len() {
        return undecided("diagonal conditions leave h underdetermined");
    }
    let mut h = LaurentBivar::zero();
    for (m, v) in support.iter().zip(values) {
        h.add(*m, v);
    }
    let g = g_of_h.mul(&h);
    if !support.is_empty() {
        trace.push(format!("the diagonal fixes h = {h}"));
    }
    let eq = with_f[0];
    let mut rest = eq.rhs.clone();
    if let Some(fg) = eq.factor(Block::G) {
        rest = rest.sum(&fg.mul(&g).neg());
    }
    if let Some(fh) = eq.factor(Block::H) {
        rest = rest.sum(&fh.mul(&h).neg());
    }
    let af = eq.factor(Block::F).unwrap();
    let Some((mono, c)) = af.div_z_minus_w().and_then(|q| q.as_monomial().map(|(e, c)| (e, c.clone()))) else {
        return undecided("coefficient of f is not a monomial times z - w");
    };
    let Some(q) = rest.div_z_minus_w() else {
        return undecided("right side vanishes on the diagonal but is not divisible by z - w");
    };
    let f = q.shift((-mono.0, -mono.1)).scale(&(Rational::one() / c));
    if f.terms().any(|(e, _)| !sys.cones[&Block::F].contains(*e)) {
        trace.push(format!("{}: forces f = {f}, which is not regular on V1", pair(&eq.overlap)));
        return Ok(CaseOutcome { case, solution: None, trace });
    }
    trace.push(format!("{}: forces f = {f}", pair(&eq.overlap)));
    let solution: Solution = BTreeMap::from([(Block::F, f.clone()), (Block::G, g.clone()), (Block::H, h.clone())]);
    for eq in &sys.equations {
        let r = eq.residual(&solution);
        if !r.is_zero() {
            trace.push(format!("{}: residual {r} remains", pair(&eq.overlap)));
            return Ok(CaseOutcome { case, solution: None, trace });
        }
    }
    let constant = h.coefficient((0, 0));
    if f.is_zero() && h.len() <= 1 {
        trace.push(format!("f=0 and c={constant} solve every equation, so the cochain is a coboundary"));
    } else {
        trace.push(format!("f = {f}, g = {g}, h = {h} solve every equation"));
    }
    Ok(CaseOutcome {
        case,
        solution: Some(solution),
        trace,
    })
}

fn pair(o: &(String, String)) -> String {
    format!("({},{})", o.0, o.1)
}

fn diag_poly(m: &BTreeMap<i32, Rational>) -> SuperPoly {
    let mut out = LaurentBivar::zero();
    for (e, c) in m {
        out.add((*e, 0), c.clone());
    }
    out.to_poly()
}

fn rank_of(rows: &[(BTreeMap<usize, Rational>, Rational)], n: usize) -> usize {
    // rank = number of pivots of the homogeneous rows
    let mut pivots: BTreeMap<usize, BTreeMap<usize, Rational>> = BTreeMap::new();
    for (row, _) in rows {
        let mut row = row.clone();
        loop {
            row.retain(|_, c| !c.is_zero());
            let Some((&u, c)) = row.iter().next() else { break };
            let c = c.clone();
            match pivots.get(&u) {
                Some(p) => {
                    for (v, d) in p {
                        *row.entry(*v).or_insert_with(Rational::zero) -= &c * d;
                    }
                }
                None => {
                    let inv = Rational::one() / &c;
                    row.values_mut().for_each(|x| *x *= &inv);
                    pivots.insert(u, row);
                    break;
                }
            }
        }
    }
    pivots.len().min(n)
}
