//! The second splitting obstruction of `Hilb^{2|1}(ΠO(k))` and whether it
//! is a coboundary.
//!
//! The quadratic odd terms of the even transition rules form a Čech
//! 1-cochain with values in `T ⊗ ∧²W`. Its class decides splitting in odd
//! dimension two. [`is_coboundary`] runs a support argument on the cochain
//! equations and checks it against a bounded exact solve.

mod cochain;
mod laurent;
mod system;

use crate::charts::{hilb11_atlas, Atlas};
use crate::error::ObstructionError;
use num_traits::Zero;

use crate::grassmann::{Monomial, Var};

pub use cochain::{antisymmetry_failure, extract_obstruction, wedge2_degrees, CechCochain1, CochainEntry};
pub use laurent::{Block, Cone, LaurentBivar, LaurentEquation, LaurentSystem, LaurentTerm, Solution};
pub use system::{build_coboundary_system, coboundary_system, support_case_analysis, Case, CaseOutcome};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Twist of the line bundle that splits a `(1|1)` supermanifold.
    Twist(i32),
    /// The obstruction class vanishes; `solution` is a primitive.
    Coboundary {
        case: Case,
        trace: Vec<String>,
        solution: Solution,
    },
    /// The obstruction class is nonzero.
    Obstructed { case: Case, trace: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitVerdict {
    pub target: String,
    pub k: i32,
    pub split: bool,
    /// `(a, b)` with `∧²W^∨ = O(a, b)`, for `Hilb^{2|1}`.
    pub degrees: Option<(i32, i32)>,
    pub witness: Witness,
}

impl SplitVerdict {
    pub fn case(&self) -> Option<Case> {
        match &self.witness {
            Witness::Twist(_) => None,
            Witness::Coboundary { case, .. } | Witness::Obstructed { case, .. } => Some(*case),
        }
    }

    pub fn trace(&self) -> &[String] {
        match &self.witness {
            Witness::Twist(_) => &[],
            Witness::Coboundary { trace, .. } | Witness::Obstructed { trace, .. } => trace,
        }
    }
}

/// Default degree bound for the cross-check solve.
pub fn default_degree_bound(k: i32) -> usize {
    k.unsigned_abs() as usize + 4
}

/// Decides whether the cochain of `hilb21_atlas(k)` is a coboundary. The
/// support argument and a bounded solve must agree.
pub fn is_coboundary(k: i32) -> Result<SplitVerdict, ObstructionError> {
    is_coboundary_bounded(k, default_degree_bound(k))
}

pub fn is_coboundary_bounded(k: i32, degree_bound: usize) -> Result<SplitVerdict, ObstructionError> {
    let sys = build_coboundary_system(k, degree_bound)?;
    let outcome = support_case_analysis(&sys)?;
    let bounded = sys.solve_bounded();
    if let Some(s) = &outcome.solution {
        if !sys.is_solution(s) {
            return Err(ObstructionError::Undecided("support argument produced a non-solution".into()));
        }
        let within = s
            .values()
            .all(|x| x.terms().all(|(e, _)| (e.0.unsigned_abs() + e.1.unsigned_abs()) as usize <= degree_bound));
        if within && bounded.is_none() {
            return Err(ObstructionError::Undecided("bounded solve missed a solution in range".into()));
        }
    } else if bounded.is_some() {
        return Err(ObstructionError::Undecided("bounded solve found a solution the support argument excluded".into()));
    }
    let witness = match outcome.solution {
        Some(solution) => Witness::Coboundary {
            case: outcome.case,
            trace: outcome.trace,
            solution,
        },
        None => Witness::Obstructed {
            case: outcome.case,
            trace: outcome.trace,
        },
    };
    Ok(SplitVerdict {
        target: "hilb21".into(),
        k,
        split: matches!(witness, Witness::Coboundary { .. }),
        degrees: Some(wedge2_degrees(k)?),
        witness,
    })
}

/// `Hilb^{1|1}(ΠO(k))` is `ΠO(m)` again; reads `m` off the odd transition.
pub fn split_check_11(k: i32) -> Result<SplitVerdict, ObstructionError> {
    let atlas = hilb11_atlas(k)?;
    Ok(SplitVerdict {
        target: "hilb11".into(),
        k,
        split: true,
        degrees: None,
        witness: Witness::Twist(odd_twist(&atlas)?),
    })
}

fn odd_twist(atlas: &Atlas) -> Result<i32, ObstructionError> {
    if !extract_obstruction(atlas)?.is_zero() {
        return Err(ObstructionError::Shape("a (1|1) atlas has a quadratic term".into()));
    }
    let t = atlas.transition("H0", "H1")?;
    let (source, target) = (atlas.chart("H0")?, atlas.chart("H1")?);
    let rule = &t.rules[&target.odd[0]];
    let parts = rule.decompose_odd();
    if parts.len() != 1 {
        return Err(ObstructionError::Shape("odd transition is not linear".into()));
    }
    let coeff = parts
        .get(&Monomial::var(&source.odd[0]))
        .and_then(|c| c.as_poly())
        .ok_or_else(|| ObstructionError::Shape("odd transition is not linear in the odd coordinate".into()))?;
    let (m, c) = coeff
        .as_monomial()
        .ok_or_else(|| ObstructionError::Shape("odd transition coefficient is not a unit".into()))?;
    let a: &Var = &source.even[0];
    if m.vars().any(|v| v != a) || c.is_zero() {
        return Err(ObstructionError::Shape("odd transition coefficient is not a unit".into()));
    }
    // β = c·a^e·α glues O(-e) with a = z on H0
    Ok(-m.exponent(a))
}
