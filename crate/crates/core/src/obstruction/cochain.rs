//! The quadratic part of the even transition rules as a Čech 1-cochain.

use std::collections::BTreeMap;

use crate::charts::{hilb21_atlas, Atlas, SuperChart, TransitionMap};
use crate::error::ObstructionError;
use crate::fraction::Frac;
use crate::grassmann::{Monomial, SuperPoly, Var};

/// `coefficient · τ1τ2 ∂/∂coordinate` on the target chart, where `τ` are
/// the target's odd coordinates. `extracted` is the raw term
/// `Q·σ1σ2` read off the rule, in source coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainEntry {
    pub coordinate: Var,
    pub extracted: Frac,
    pub coefficient: Frac,
}

/// `Ψ_{ij}` for every ordered overlap, keyed `(i, j)` and read off the
/// transition `j → i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechCochain1 {
    pub k: i32,
    pub entries: BTreeMap<(String, String), Vec<CochainEntry>>,
}

impl CechCochain1 {
    pub fn get(&self, i: &str, j: &str) -> &[CochainEntry] {
        self.entries
            .get(&(i.to_string(), j.to_string()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// The entry on `∂/∂coordinate`, if nonzero.
    pub fn component(&self, i: &str, j: &str, coordinate: &str) -> Option<&CochainEntry> {
        self.get(i, j).iter().find(|e| e.coordinate.name() == coordinate)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(Vec::is_empty)
    }
}

/// Rules with every odd coordinate set to zero.
pub(crate) fn bosonic_rules(t: &TransitionMap) -> BTreeMap<Var, Frac> {
    t.rules
        .iter()
        .filter(|(v, _)| !v.is_odd())
        .map(|(v, r)| (v.clone(), r.bosonic_part()))
        .collect()
}

/// Bosonic matrix `L` with `τ_r = Σ L_rc σ_c + …` for the odd rules.
pub(crate) fn odd_block(t: &TransitionMap, source: &SuperChart, target: &SuperChart) -> Vec<Vec<Frac>> {
    target
        .odd
        .iter()
        .map(|tv| {
            let parts = t.rules[tv].decompose_odd();
            source
                .odd
                .iter()
                .map(|sv| {
                    parts
                        .get(&Monomial::var(sv))
                        .map(Frac::bosonic_part)
                        .unwrap_or_else(Frac::zero)
                })
                .collect()
        })
        .collect()
}

pub(crate) fn det2(m: &[Vec<Frac>]) -> Frac {
    &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
}

fn frame(chart: &SuperChart) -> Result<Frac, ObstructionError> {
    if chart.odd.len() != 2 {
        return Err(ObstructionError::Shape(format!("chart {} needs two odd coordinates", chart.name)));
    }
    Ok(Frac::from(&SuperPoly::var(&chart.odd[0]) * &SuperPoly::var(&chart.odd[1])))
}

/// Rewrites a bosonic function of `t.source` coordinates in `t.target`
/// coordinates, using the reverse map.
fn to_target(f: &Frac, reverse: &TransitionMap) -> Result<Frac, ObstructionError> {
    Ok(f.substitute(&bosonic_rules(reverse))?)
}

/// Extracts `Ψ` from all transitions. Charts with fewer than two odd
/// coordinates have no `∧²` part and give empty entries.
pub fn extract_obstruction(atlas: &Atlas) -> Result<CechCochain1, ObstructionError> {
    let mut entries = BTreeMap::new();
    for t in atlas.transitions.values() {
        let source = atlas.chart(&t.source)?;
        let target = atlas.chart(&t.target)?;
        let mut list = Vec::new();
        for v in &target.even {
            let rule = &t.rules[v];
            let mut quad = Frac::zero();
            for (m, c) in rule.decompose_odd() {
                match m.odd_count() {
                    0 => {}
                    2 => {
                        if source.odd.len() != 2 {
                            return Err(ObstructionError::Shape(format!("{} -> {}: unexpected odd pair", t.source, t.target)));
                        }
                        let sf = frame(source)?;
                        // c·m with m = ±σ1σ2
                        let mono = Frac::from(SuperPoly::term(num_traits::One::one(), m.clone()));
                        let sign = if mono == sf { Frac::one() } else { -&Frac::one() };
                        quad = &quad + &(&c * &sign);
                    }
                    _ => return Err(ObstructionError::HigherOrderTerms(v.name().to_string())),
                }
            }
            if quad.is_zero() {
                continue;
            }
            let det = det2(&odd_block(t, source, target));
            let reverse = atlas.transition(&t.target, &t.source)?;
            let scalar = &quad.bosonic_part() * &det.invert()?;
            list.push(CochainEntry {
                coordinate: v.clone(),
                extracted: &quad * &frame(source)?,
                coefficient: to_target(&scalar, reverse)?,
            });
        }
        entries.insert((t.target.clone(), t.source.clone()), list);
    }
    Ok(CechCochain1 { k: atlas.k, entries })
}

/// Checks `Ψ_{ji} = -Ψ_{ij}` after moving `Ψ_{ij}` into chart `j`
/// (Jacobian on the vector part, `det L` on the frame). Returns the first
/// offending overlap.
pub fn antisymmetry_failure(atlas: &Atlas, cochain: &CechCochain1) -> Result<Option<(String, String)>, ObstructionError> {
    for ((i, j), list) in &cochain.entries {
        let ci = atlas.chart(i)?;
        let cj = atlas.chart(j)?;
        if ci.odd.len() != 2 {
            continue;
        }
        let j_to_i = atlas.transition(j, i)?;
        let i_to_j = atlas.transition(i, j)?;
        let back = bosonic_rules(j_to_i);
        let det = det2(&odd_block(j_to_i, cj, ci));
        for m in &cj.even {
            let s_rule = i_to_j.rules[m].bosonic_part();
            let mut moved = Frac::zero();
            for e in list {
                let jac = s_rule.derivative(&e.coordinate);
                moved = &moved + &(&jac * &e.coefficient);
            }
            let moved = &moved.substitute(&back)? * &det;
            let theirs = cochain
                .component(j, i, m.name())
                .map(|e| e.coefficient.clone())
                .unwrap_or_else(Frac::zero);
            if &moved + &theirs != Frac::zero() {
                return Ok(Some((i.clone(), j.clone())));
            }
        }
    }
    Ok(None)
}

/// Laurent degrees `(a, b)` of `∧²W^∨ = O(a, b)`: the determinant of the
/// odd transition `V2 → V1` on `b2 = 0` and of `V2 → V4` on `b1 = 0`, each
/// required to be a monomial unit in the remaining coordinate.
pub fn wedge2_degrees(k: i32) -> Result<(i32, i32), ObstructionError> {
    let atlas = hilb21_atlas(k)?;
    let degree = |target: &str, frozen: &str, free: &str| -> Result<i32, ObstructionError> {
        let t = atlas.transition("V2", target)?;
        let src = atlas.chart("V2")?;
        let tgt = atlas.chart(target)?;
        let at = BTreeMap::from([(Var::unit(frozen), Frac::zero())]);
        let restricted = t.restrict(&at)?;
        let det = det2(&odd_block(&restricted, src, tgt));
        let poly = det
            .as_poly()
            .ok_or_else(|| ObstructionError::Shape(format!("det on {frozen} = 0 is not a Laurent polynomial")))?;
        let (m, _) = poly
            .as_monomial()
            .ok_or_else(|| ObstructionError::Shape(format!("det on {frozen} = 0 is not a monomial: {poly:?}")))?;
        let v = Var::unit(free);
        if m.factors().iter().any(|(w, _)| w != &v) {
            return Err(ObstructionError::Shape(format!("det on {frozen} = 0 involves more than {free}")));
        }
        Ok(m.exponent(&v))
    };
    Ok((degree("V1", "b2", "b1")?, degree("V4", "b1", "b2")?))
}
