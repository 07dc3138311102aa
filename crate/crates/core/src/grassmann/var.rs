use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Mul;
use std::sync::Arc;

use crate::error::AlgebraError;

/// The Z/2 grading of a homogeneous element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn from_odd(odd: bool) -> Parity {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

impl Mul for Parity {
    type Output = Parity;

    fn mul(self, rhs: Parity) -> Parity {
        Parity::from_odd(self.is_odd() ^ rhs.is_odd())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

/// Parity of an arbitrary (possibly inhomogeneous) element. Zero reports `Even`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityOf {
    Even,
    Odd,
    Mixed,
}

impl ParityOf {
    /// `true` when the element is homogeneous of parity `p` (zero counts for both).
    pub fn admits(self, p: Parity) -> bool {
        matches!(
            (self, p),
            (ParityOf::Even, Parity::Even) | (ParityOf::Odd, Parity::Odd)
        )
    }
}

struct VarData {
    name: String,
    parity: Parity,
    invertible: bool,
}

/// A named generator of a supercommutative ring.
///
/// Variables are ordered by name first; that order is the canonical factor order
/// inside every [`Monomial`](super::Monomial). Only even variables may be
/// invertible.
#[derive(Clone)]
pub struct Var(Arc<VarData>);

impl Var {
    pub fn new(name: impl Into<String>, parity: Parity, invertible: bool) -> Result<Var, AlgebraError> {
        let name = name.into();
        if invertible && parity == Parity::Odd {
            return Err(AlgebraError::InvertibleOddVariable(name));
        }
        Ok(Var(Arc::new(VarData {
            name,
            parity,
            invertible,
        })))
    }

    pub fn even(name: impl Into<String>) -> Var {
        Var::new(name, Parity::Even, false).expect("even variables are always valid")
    }

    /// An even variable localized away from zero (Laurent exponents allowed).
    pub fn unit(name: impl Into<String>) -> Var {
        Var::new(name, Parity::Even, true).expect("even variables are always valid")
    }

    pub fn odd(name: impl Into<String>) -> Var {
        Var::new(name, Parity::Odd, false).expect("odd non-invertible variables are always valid")
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn parity(&self) -> Parity {
        self.0.parity
    }

    pub fn is_odd(&self) -> bool {
        self.0.parity == Parity::Odd
    }

    pub fn is_invertible(&self) -> bool {
        self.0.invertible
    }

    fn key(&self) -> (&str, Parity, bool) {
        (&self.0.name, self.0.parity, self.0.invertible)
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Var) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.key() == other.key()
    }
}

impl Eq for Var {}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Var) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Var) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.key().cmp(&other.key())
    }
}

impl Hash for Var {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
