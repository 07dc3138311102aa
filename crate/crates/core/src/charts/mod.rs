//! Atlases of Hilbert schemes of points on `ΠO(k)` over `P^1`.
//!
//! Charts of `Hilb^{1|1}` are the two patches of the curve itself; charts
//! of `Hilb^{2|1}` are
//!
//! * `V1`: both points in `U0`, coordinates `(a1, a2 | alpha1, alpha2)` of
//!   `<(x+a1)(x+a2) + alpha1(θ+alpha2), (x+a1)(θ+alpha2)>`;
//! * `V2`: the `(1|1)` point `<y + b1 + beta1 ψ>` in `U1` and the `(1|0)`
//!   point `<x + b2, θ + beta2>` in `U0`;
//! * `V3`: `<x + c1 + gamma1 θ>` in `U0` and `<y + c2, ψ + gamma2>` in `U1`;
//! * `V4`: both points in `U1`, same shape as `V1` with `d`, `delta`.
//!
//! Transitions are computed from these descriptions, never transcribed.

mod build;
mod ideal;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::ChartError;
use crate::fraction::Frac;
use crate::grassmann::{SuperPoly, Var};
use crate::parser::RingDecl;

pub use build::{hilb11_atlas, hilb21_atlas, pi_v_atlas};
pub use ideal::{canonicalize, change_patch, product_ideal, IdealOnChart, Patch};
pub use text::{frac_text, parse_atlas, parse_frac};

/// Named graded coordinates and the loci declared invertible on the chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperChart {
    pub name: String,
    pub even: Vec<Var>,
    pub odd: Vec<Var>,
    pub loci: Vec<SuperPoly>,
}

impl SuperChart {
    pub fn new(name: impl Into<String>, even: Vec<Var>, odd: Vec<Var>, loci: Vec<SuperPoly>) -> Result<SuperChart, ChartError> {
        let chart = SuperChart {
            name: name.into(),
            even,
            odd,
            loci,
        };
        if chart.even.iter().any(Var::is_odd) || chart.odd.iter().any(|v| !v.is_odd()) {
            return Err(ChartError::NotCanonicalizable(format!("chart {} has misplaced parities", chart.name)));
        }
        chart.ring()?;
        Ok(chart)
    }

    pub fn coords(&self) -> impl Iterator<Item = &Var> {
        self.even.iter().chain(&self.odd)
    }

    /// Ring declaration of the coordinates; rejects duplicate names.
    pub fn ring(&self) -> Result<RingDecl, ChartError> {
        Ok(RingDecl::new(self.coords().cloned())?)
    }
}

/// Target coordinates as functions of source coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMap {
    pub source: String,
    pub target: String,
    pub rules: BTreeMap<Var, Frac>,
}

impl TransitionMap {
    pub fn rule(&self, v: &Var) -> Option<&Frac> {
        self.rules.get(v)
    }

    /// Rewrites a function of target coordinates in source coordinates.
    pub fn pull_back(&self, f: &Frac) -> Result<Frac, ChartError> {
        Ok(f.substitute(&self.rules)?)
    }

    /// `next ∘ self`, where `next` starts at this map's target.
    pub fn then(&self, next: &TransitionMap) -> Result<TransitionMap, ChartError> {
        if next.source != self.target {
            return Err(ChartError::MissingTransition(self.target.clone(), next.source.clone()));
        }
        let rules = next
            .rules
            .iter()
            .map(|(v, r)| Ok((v.clone(), self.pull_back(r)?)))
            .collect::<Result<_, ChartError>>()?;
        Ok(TransitionMap {
            source: self.source.clone(),
            target: next.target.clone(),
            rules,
        })
    }

    /// Restricts every rule by fixing some source coordinates.
    pub fn restrict(&self, values: &BTreeMap<Var, Frac>) -> Result<TransitionMap, ChartError> {
        let rules = self
            .rules
            .iter()
            .map(|(v, r)| Ok((v.clone(), r.substitute(values)?)))
            .collect::<Result<_, ChartError>>()?;
        Ok(TransitionMap {
            source: self.source.clone(),
            target: self.target.clone(),
            rules,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atlas {
    pub name: String,
    pub k: i32,
    pub charts: Vec<SuperChart>,
    pub transitions: BTreeMap<(String, String), TransitionMap>,
}

impl Atlas {
    pub fn chart(&self, name: &str) -> Result<&SuperChart, ChartError> {
        self.charts
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| ChartError::UnknownChart(name.into()))
    }

    pub fn transition(&self, source: &str, target: &str) -> Result<&TransitionMap, ChartError> {
        self.transitions
            .get(&(source.to_string(), target.to_string()))
            .ok_or_else(|| ChartError::MissingTransition(source.into(), target.into()))
    }

    pub fn insert(&mut self, t: TransitionMap) {
        self.transitions.insert((t.source.clone(), t.target.clone()), t);
    }
}

/// First coordinate where a composite disagrees with the stored map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleFailure {
    pub path: [String; 3],
    pub coordinate: String,
    pub stored: Frac,
    pub composed: Frac,
}

impl fmt::Display for CocycleFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} -> {}: {} is {} directly but {} through {}",
            self.path[0],
            self.path[1],
            self.path[2],
            self.coordinate,
            frac_text(&self.stored),
            frac_text(&self.composed),
            self.path[1]
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReport {
    pub checked: usize,
    pub failure: Option<CocycleFailure>,
}

impl CocycleReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks `t(j,l) ∘ t(i,j) = t(i,l)` for every stored chain, including
/// `l = i` where the right side is the identity.
pub fn verify_cocycle(atlas: &Atlas) -> Result<CocycleReport, ChartError> {
    let mut checked = 0;
    for first in atlas.transitions.values() {
        for second in atlas.transitions.values() {
            if second.source != first.target || second.target == first.target {
                continue;
            }
            let (i, l) = (&first.source, &second.target);
            let direct = if i == l {
                None
            } else {
                match atlas.transitions.get(&(i.clone(), l.clone())) {
                    Some(t) => Some(t),
                    None => continue,
                }
            };
            for (v, rule) in &second.rules {
                let composed = first.pull_back(rule)?;
                let stored = match direct {
                    Some(t) => t
                        .rule(v)
                        .cloned()
                        .ok_or_else(|| ChartError::MissingTransition(i.clone(), l.clone()))?,
                    None => Frac::from(SuperPoly::var(v)),
                };
                checked += 1;
                if composed != stored {
                    return Ok(CocycleReport {
                        checked,
                        failure: Some(CocycleFailure {
                            path: [i.clone(), first.target.clone(), l.clone()],
                            coordinate: v.name().to_string(),
                            stored,
                            composed,
                        }),
                    });
                }
            }
        }
    }
    Ok(CocycleReport { checked, failure: None })
}

#[cfg(test)]
mod tests;
