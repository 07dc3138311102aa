//! Chart models and the computation of every transition.

use std::collections::BTreeMap;

use super::ideal::{canonicalize, change_patch, product_ideal, IdealOnChart, Patch};
use super::{Atlas, SuperChart, TransitionMap};
use crate::error::ChartError;
use crate::fraction::Frac;
use crate::grassmann::{rat, Monomial, SuperPoly, Var};
use crate::quotient::CanonicalIdeal;

#[derive(Clone, Copy, Debug)]
enum Slot {
    A,
    B,
    Alpha,
    Beta,
}

/// A point or cluster of the family: a canonical ideal on one patch whose
/// constant-term parameters are (signed) chart coordinates.
#[derive(Clone, Debug)]
struct Component {
    patch: Patch,
    p: usize,
    q: usize,
    slots: Vec<(Slot, Var, bool)>,
}

impl Component {
    fn ideal(&self) -> Result<CanonicalIdeal, ChartError> {
        let (p, q) = (self.p, self.q);
        let mut a = vec![SuperPoly::zero(); p - q];
        let mut b = vec![SuperPoly::zero(); q];
        let mut alpha = vec![SuperPoly::zero(); p - q];
        let mut beta = vec![SuperPoly::zero(); q];
        for (slot, v, negate) in &self.slots {
            let val = if *negate { -SuperPoly::var(v) } else { SuperPoly::var(v) };
            match slot {
                Slot::A => a[0] = val,
                Slot::B => b[0] = val,
                Slot::Alpha => alpha[0] = val,
                Slot::Beta => beta[0] = val,
            }
        }
        Ok(CanonicalIdeal::new(p, q, self.patch.fiber(), a, b, alpha, beta)?)
    }

    fn read(&self, ideal: &CanonicalIdeal) -> BTreeMap<Var, Frac> {
        self.slots
            .iter()
            .map(|(slot, v, negate)| {
                let val = match slot {
                    Slot::A => &ideal.a()[0],
                    Slot::B => &ideal.b()[0],
                    Slot::Alpha => &ideal.alpha()[0],
                    Slot::Beta => &ideal.beta()[0],
                };
                let val = if *negate { -val } else { val.clone() };
                (v.clone(), Frac::from(val))
            })
            .collect()
    }

    /// The same component, moved to `patch` if needed.
    fn on(&self, patch: Patch, k: i32) -> Result<CanonicalIdeal, ChartError> {
        let ideal = self.ideal()?;
        if self.patch == patch {
            Ok(ideal)
        } else {
            change_patch(&ideal, self.patch, k)
        }
    }
}

/// Position of a point on `P^1` in the `U0` affine coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Global {
    Z,
    W,
}

/// `coordinate = sign · global^exp` on the reduced space.
#[derive(Clone, Debug)]
struct Bosonic {
    var: Var,
    global: Global,
    sign: i64,
    exp: i32,
}

#[derive(Clone, Debug)]
struct ChartModel {
    chart: SuperChart,
    components: Vec<Component>,
    bosonic: Vec<Bosonic>,
}

impl ChartModel {
    /// Bosonic value of `global` in this chart's coordinates.
    fn global(&self, g: Global) -> SuperPoly {
        let b = self.bosonic.iter().find(|b| b.global == g).expect("chart covers both points");
        // global = (coord / sign)^(1/exp) with exp, sign = ±1
        SuperPoly::var_pow(&b.var, b.exp).expect("chart coordinates are invertible").scale(&rat(b.sign))
    }
}

fn even(name: &str) -> Var {
    Var::unit(name)
}

fn odd(name: &str) -> Var {
    Var::odd(name)
}

fn cluster(patch: Patch, e: [&str; 2], o: [&str; 2]) -> Component {
    Component {
        patch,
        p: 2,
        q: 1,
        slots: vec![
            (Slot::B, even(e[0]), false),
            (Slot::A, even(e[1]), false),
            (Slot::Beta, odd(o[0]), false),
            (Slot::Alpha, odd(o[1]), false),
        ],
    }
}

fn super_point(patch: Patch, e: &str, o: &str) -> Component {
    Component {
        patch,
        p: 1,
        q: 1,
        slots: vec![(Slot::B, even(e), false), (Slot::Beta, odd(o), false)],
    }
}

fn even_point(patch: Patch, e: &str, o: &str) -> Component {
    Component {
        patch,
        p: 1,
        q: 0,
        slots: vec![(Slot::A, even(e), false), (Slot::Alpha, odd(o), false)],
    }
}

fn bos(name: &str, global: Global, sign: i64, exp: i32) -> Bosonic {
    Bosonic {
        var: even(name),
        global,
        sign,
        exp,
    }
}

fn model(name: &str, e: [&str; 2], o: [&str; 2], loci: Vec<SuperPoly>, components: Vec<Component>, bosonic: Vec<Bosonic>) -> Result<ChartModel, ChartError> {
    Ok(ChartModel {
        chart: SuperChart::new(name, e.iter().map(|n| even(n)).collect(), o.iter().map(|n| odd(n)).collect(), loci)?,
        components,
        bosonic,
    })
}

fn hilb21_models() -> Result<Vec<ChartModel>, ChartError> {
    use Global::{W, Z};
    let diag = |x: &str, y: &str| &(&SuperPoly::var(&even(x)) * &SuperPoly::var(&even(y))) - &SuperPoly::one();
    Ok(vec![
        model(
            "V1",
            ["a1", "a2"],
            ["alpha1", "alpha2"],
            vec![],
            vec![cluster(Patch::U0, ["a1", "a2"], ["alpha1", "alpha2"])],
            vec![bos("a1", Z, -1, 1), bos("a2", W, -1, 1)],
        )?,
        model(
            "V2",
            ["b1", "b2"],
            ["beta1", "beta2"],
            vec![diag("b1", "b2")],
            vec![super_point(Patch::U1, "b1", "beta1"), even_point(Patch::U0, "b2", "beta2")],
            vec![bos("b1", Z, -1, -1), bos("b2", W, -1, 1)],
        )?,
        model(
            "V3",
            ["c1", "c2"],
            ["gamma1", "gamma2"],
            vec![diag("c1", "c2")],
            vec![super_point(Patch::U0, "c1", "gamma1"), even_point(Patch::U1, "c2", "gamma2")],
            vec![bos("c1", Z, -1, 1), bos("c2", W, -1, -1)],
        )?,
        model(
            "V4",
            ["d1", "d2"],
            ["delta1", "delta2"],
            vec![],
            vec![cluster(Patch::U1, ["d1", "d2"], ["delta1", "delta2"])],
            vec![bos("d1", Z, -1, -1), bos("d2", W, -1, -1)],
        )?,
    ])
}

/// Transition from `source` into a single-component `target`.
fn into_cluster(source: &ChartModel, target: &ChartModel, k: i32) -> Result<BTreeMap<Var, Frac>, ChartError> {
    let t = &target.components[0];
    let moved = source
        .components
        .iter()
        .map(|c| c.on(t.patch, k))
        .collect::<Result<Vec<_>, _>>()?;
    let ideal = if moved.len() == 1 {
        moved.into_iter().next().unwrap()
    } else {
        let mut prod = IdealOnChart::unit(t.patch);
        for m in &moved {
            prod = product_ideal(&prod, &IdealOnChart::from_canonical(t.patch, m))?;
        }
        canonicalize(&prod, t.p, t.q)?
    };
    Ok(t.read(&ideal))
}

/// Transition between two product charts, point by point.
fn pointwise(source: &ChartModel, target: &ChartModel, k: i32) -> Result<BTreeMap<Var, Frac>, ChartError> {
    let mut rules = BTreeMap::new();
    for t in &target.components {
        let s = source
            .components
            .iter()
            .find(|s| (s.p, s.q) == (t.p, t.q))
            .ok_or_else(|| ChartError::NotCanonicalizable("components do not match".into()))?;
        rules.extend(t.read(&s.on(t.patch, k)?));
    }
    Ok(rules)
}

fn frac_inverse(mut m: Vec<Vec<Frac>>) -> Result<Vec<Vec<Frac>>, ChartError> {
    let n = m.len();
    let mut inv: Vec<Vec<Frac>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Frac::one() } else { Frac::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| ChartError::NotCanonicalizable("singular Jacobian".into()))?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = m[col][col].invert()?;
        for j in 0..n {
            m[col][j] = &m[col][j] * &scale;
            inv[col][j] = &inv[col][j] * &scale;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for j in 0..n {
                m[r][j] = &m[r][j] - &(&factor * &m[col][j]);
                inv[r][j] = &inv[r][j] - &(&factor * &inv[col][j]);
            }
        }
    }
    Ok(inv)
}

/// Inverts `forward` (coordinates of `to` in terms of `from`), returning
/// `from`'s coordinates in terms of `to`'s.
///
/// Starts from the bosonic inverse read off the point positions and runs a
/// chord iteration with the Jacobian modulo nilpotents; each round gains
/// one order in the odd coordinates, so it stops after finitely many steps.
fn invert(forward: &BTreeMap<Var, Frac>, from: &ChartModel, to: &ChartModel) -> Result<BTreeMap<Var, Frac>, ChartError> {
    let mut guess: BTreeMap<Var, Frac> = BTreeMap::new();
    for b in &from.bosonic {
        let g = to.global(b.global);
        let val = g.pow(b.exp as i64)?.scale(&rat(b.sign));
        guess.insert(b.var.clone(), Frac::from(val));
    }
    for v in &from.chart.odd {
        guess.insert(v.clone(), Frac::zero());
    }
    let bosonic_guess = guess.clone();
    let jac = |outputs: &[Var], inputs: &[Var], odd_block: bool| -> Result<Vec<Vec<Frac>>, ChartError> {
        outputs
            .iter()
            .map(|o| {
                let rule = &forward[o];
                inputs
                    .iter()
                    .map(|i| {
                        let entry = if odd_block {
                            rule.decompose_odd().remove(&Monomial::var(i)).unwrap_or_else(Frac::zero)
                        } else {
                            rule.derivative(i)
                        };
                        Ok(entry.bosonic_part().substitute(&bosonic_guess)?)
                    })
                    .collect()
            })
            .collect()
    };
    let blocks = [
        (&to.chart.even, &from.chart.even, frac_inverse(jac(&to.chart.even, &from.chart.even, false)?)?),
        (&to.chart.odd, &from.chart.odd, frac_inverse(jac(&to.chart.odd, &from.chart.odd, true)?)?),
    ];
    for _ in 0..16 {
        let mut done = true;
        let mut next = guess.clone();
        for (outs, ins, jinv) in &blocks {
            let residual: Vec<Frac> = outs
                .iter()
                .map(|o| Ok(&forward[o].substitute(&guess)? - &Frac::from(SuperPoly::var(o))))
                .collect::<Result<_, ChartError>>()?;
            if residual.iter().all(Frac::is_zero) {
                continue;
            }
            done = false;
            for (j, v) in ins.iter().enumerate() {
                let mut step = Frac::zero();
                for (i, r) in residual.iter().enumerate() {
                    step = &step + &(&jinv[j][i] * r);
                }
                let updated = &next[v] - &step;
                next.insert(v.clone(), updated);
            }
        }
        if done {
            return Ok(guess);
        }
        guess = next;
    }
    Err(ChartError::NotCanonicalizable(format!("inverse of {} -> {} did not converge", from.chart.name, to.chart.name)))
}

fn assemble(name: &str, k: i32, models: &[ChartModel], rules: BTreeMap<(usize, usize), BTreeMap<Var, Frac>>) -> Atlas {
    let mut atlas = Atlas {
        name: name.into(),
        k,
        charts: models.iter().map(|m| m.chart.clone()).collect(),
        transitions: BTreeMap::new(),
    };
    for ((s, t), r) in rules {
        atlas.insert(TransitionMap {
            source: models[s].chart.name.clone(),
            target: models[t].chart.name.clone(),
            rules: r,
        });
    }
    atlas
}

/// Computes all ordered transitions between the models.
fn all_transitions(models: &[ChartModel], k: i32) -> Result<BTreeMap<(usize, usize), BTreeMap<Var, Frac>>, ChartError> {
    let mut out = BTreeMap::new();
    let n = models.len();
    for s in 0..n {
        for t in 0..n {
            if s == t {
                continue;
            }
            let (src, tgt) = (&models[s], &models[t]);
            if tgt.components.len() == 1 {
                out.insert((s, t), into_cluster(src, tgt, k)?);
            } else if src.components.len() > 1 {
                out.insert((s, t), pointwise(src, tgt, k)?);
            }
        }
    }
    for s in 0..n {
        for t in 0..n {
            if s != t && !out.contains_key(&(s, t)) {
                let forward = out
                    .get(&(t, s))
                    .ok_or_else(|| ChartError::MissingTransition(models[t].chart.name.clone(), models[s].chart.name.clone()))?;
                let inverse = invert(forward, &models[t], &models[s])?;
                out.insert((s, t), inverse);
            }
        }
    }
    Ok(out)
}

/// `Hilb^{1|1}(ΠO(k)) = ΠO(k)` with points `x = a + alpha θ` on `U0` and
/// `y = b + beta ψ` on `U1`.
pub fn hilb11_atlas(k: i32) -> Result<Atlas, ChartError> {
    let point = |patch, e: &str, o: &str| Component {
        patch,
        p: 1,
        q: 1,
        slots: vec![(Slot::B, even(e), true), (Slot::Beta, odd(o), true)],
    };
    let models = vec![
        ChartModel {
            chart: SuperChart::new("H0", vec![even("a")], vec![odd("alpha")], vec![])?,
            components: vec![point(Patch::U0, "a", "alpha")],
            bosonic: vec![bos("a", Global::Z, 1, 1)],
        },
        ChartModel {
            chart: SuperChart::new("H1", vec![even("b")], vec![odd("beta")], vec![])?,
            components: vec![point(Patch::U1, "b", "beta")],
            bosonic: vec![bos("b", Global::Z, 1, -1)],
        },
    ];
    let rules = all_transitions(&models, k)?;
    Ok(assemble("hilb11", k, &models, rules))
}

/// The four-chart atlas of `Hilb^{2|1}(ΠO(k))`.
pub fn hilb21_atlas(k: i32) -> Result<Atlas, ChartError> {
    let models = hilb21_models()?;
    let rules = all_transitions(&models, k)?;
    Ok(assemble("hilb21", k, &models, rules))
}

/// The curve `ΠO(k)` itself: `y = 1/x`, `ψ = x^{-k} θ` and back.
pub fn pi_v_atlas(k: i32) -> Result<Atlas, ChartError> {
    let (f0, f1) = (Patch::U0.fiber(), Patch::U1.fiber());
    let recip = |v: &Var| Frac::new(SuperPoly::one(), SuperPoly::var(v));
    let twisted = |v: &Var, nu: &Var, e: i32| -> Result<Frac, ChartError> {
        let base = Frac::from(SuperPoly::var(v));
        Ok(&base.pow(e as i64)? * &Frac::from(SuperPoly::var(nu)))
    };
    let charts = vec![
        SuperChart::new("U0", vec![f0.x.clone()], vec![f0.theta.clone()], vec![])?,
        SuperChart::new("U1", vec![f1.x.clone()], vec![f1.theta.clone()], vec![])?,
    ];
    let mut atlas = Atlas {
        name: "pi_v".into(),
        k,
        charts,
        transitions: BTreeMap::new(),
    };
    atlas.insert(TransitionMap {
        source: "U0".into(),
        target: "U1".into(),
        rules: BTreeMap::from([(f1.x.clone(), recip(&f0.x)?), (f1.theta.clone(), twisted(&f0.x, &f0.theta, -k)?)]),
    });
    atlas.insert(TransitionMap {
        source: "U1".into(),
        target: "U0".into(),
        rules: BTreeMap::from([(f0.x.clone(), recip(&f1.x)?), (f0.theta.clone(), twisted(&f1.x, &f1.theta, -k)?)]),
    });
    Ok(atlas)
}
