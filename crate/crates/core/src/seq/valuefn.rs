//! Atom values as closed-form functions of the index.
//!
//! Values are either constants (possibly indexed by the family parameter
//! `j`), monomials `c n^k`, exponentials `c b^n`, or decaying reciprocals
//! `c / n^k`. Every term is eventually monotone and its limit in the
//! extended reals is structurally computable, which is what the limiting
//! profile analysis relies on.

use crate::rational::{rat_pow, Rational};
use num::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValueFnError {
    #[error("monomial and reciprocal degrees must be at least 1")]
    BadDegree,
    #[error("exponential base must exceed 1")]
    BadBase,
    #[error("family-indexed value used outside a family piece")]
    MissingFamilyIndex,
}

/// `c`, `c n^k`, `c b^n`, `c / n^k`, or `c / (j + s)` for the family
/// parameter `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueFn {
    Const(Rational),
    Monomial { coeff: Rational, degree: u32 },
    Exponential { coeff: Rational, base: Rational },
    ReciprocalShift { coeff: Rational, degree: u32 },
    IndexedConst { coeff: Rational, shift: u64 },
}

/// Limit of a value function in the extended reals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueLimit {
    Finite(Rational),
    PlusInfinity,
    MinusInfinity,
}

impl ValueFn {
    pub fn constant(q: Rational) -> Self {
        ValueFn::Const(q)
    }

    pub fn monomial(coeff: Rational, degree: u32) -> Result<Self, ValueFnError> {
        if degree == 0 {
            return Err(ValueFnError::BadDegree);
        }
        if coeff.is_zero() {
            return Ok(ValueFn::Const(Rational::zero()));
        }
        Ok(ValueFn::Monomial { coeff, degree })
    }

    pub fn exponential(coeff: Rational, base: Rational) -> Result<Self, ValueFnError> {
        if base <= Rational::one() {
            return Err(ValueFnError::BadBase);
        }
        if coeff.is_zero() {
            return Ok(ValueFn::Const(Rational::zero()));
        }
        Ok(ValueFn::Exponential { coeff, base })
    }

    pub fn reciprocal_shift(coeff: Rational, degree: u32) -> Result<Self, ValueFnError> {
        if degree == 0 {
            return Err(ValueFnError::BadDegree);
        }
        if coeff.is_zero() {
            return Ok(ValueFn::Const(Rational::zero()));
        }
        Ok(ValueFn::ReciprocalShift { coeff, degree })
    }

    /// `coeff / (j + shift)` evaluated at the family parameter.
    pub fn indexed_const(coeff: Rational, shift: u64) -> Self {
        ValueFn::IndexedConst { coeff, shift }
    }

    pub fn uses_family_index(&self) -> bool {
        matches!(self, ValueFn::IndexedConst { .. })
    }

    /// Exact value at sequence index `n`, with the family parameter `j`
    /// resolved for indexed constants.
    pub fn eval(&self, n: u64, j: Option<u64>) -> Result<Rational, ValueFnError> {
        debug_assert!(n >= 1);
        let nq = Rational::from_integer(n.into());
        Ok(match self {
            ValueFn::Const(q) => q.clone(),
            ValueFn::Monomial { coeff, degree } => coeff * rat_pow(&nq, u64::from(*degree)),
            ValueFn::Exponential { coeff, base } => coeff * rat_pow(base, n),
            ValueFn::ReciprocalShift { coeff, degree } => {
                coeff / rat_pow(&nq, u64::from(*degree))
            }
            ValueFn::IndexedConst { coeff, shift } => {
                let j = j.ok_or(ValueFnError::MissingFamilyIndex)?;
                coeff / Rational::from_integer((j + shift).into())
            }
        })
    }

    /// Limit as `n` grows, with `j` fixed.
    pub fn limit(&self, j: Option<u64>) -> Result<ValueLimit, ValueFnError> {
        Ok(match self {
            ValueFn::Const(q) => ValueLimit::Finite(q.clone()),
            ValueFn::ReciprocalShift { .. } => ValueLimit::Finite(Rational::zero()),
            ValueFn::IndexedConst { coeff, shift } => {
                let j = j.ok_or(ValueFnError::MissingFamilyIndex)?;
                ValueLimit::Finite(coeff / Rational::from_integer((j + shift).into()))
            }
            ValueFn::Monomial { coeff, .. } | ValueFn::Exponential { coeff, .. } => {
                if *coeff > Rational::zero() {
                    ValueLimit::PlusInfinity
                } else {
                    ValueLimit::MinusInfinity
                }
            }
        })
    }
}
