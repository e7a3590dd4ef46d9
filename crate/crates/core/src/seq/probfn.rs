//! Probability mass as a closed-form function of the index.
//!
//! A [`ProbFn`] wraps a [`Decay`] together with a certified validity index
//! `n_min`: for every `n >= n_min` the value provably lies in `[0, 1]`.
//! The grammar (constants, `c/n^k`, `p^n`, `1 - f`, rational-coefficient
//! sums) is closed under the operations used by the analysis, and symbolic
//! equality is structural equality of the canonical linear form.

use super::decay::{Decay, Sign};
use crate::rational::Rational;
use num::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProbFnError {
    #[error("probability function is eventually negative")]
    EventuallyNegative,
    #[error("probability function eventually exceeds one")]
    EventuallyAboveOne,
    #[error("geometric base must lie strictly between 0 and 1")]
    BadGeometricBase,
    #[error("reciprocal exponent must be at least 1")]
    BadExponent,
    #[error("constant probability outside [0, 1]")]
    ConstOutOfRange,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbFn {
    decay: Decay,
    n_min: u64,
}

impl ProbFn {
    pub fn constant(q: Rational) -> Result<Self, ProbFnError> {
        if q < Rational::zero() || q > Rational::one() {
            return Err(ProbFnError::ConstOutOfRange);
        }
        Ok(ProbFn {
            decay: Decay::constant(q),
            n_min: 1,
        })
    }

    /// `coeff / n^k`
    pub fn recip(coeff: Rational, k: u32) -> Result<Self, ProbFnError> {
        let d = Decay::recip(coeff, k).map_err(|_| ProbFnError::BadExponent)?;
        ProbFn::from_decay(d)
    }

    /// `p^n` with `0 < p < 1`
    pub fn geom_pow(p: Rational) -> Result<Self, ProbFnError> {
        let d = Decay::geom(Rational::one(), p).map_err(|_| ProbFnError::BadGeometricBase)?;
        ProbFn::from_decay(d)
    }

    pub fn one_minus(&self) -> Result<Self, ProbFnError> {
        ProbFn::from_decay(Decay::constant(Rational::one()).sub(&self.decay))
    }

    pub fn add(&self, other: &ProbFn) -> Result<Self, ProbFnError> {
        ProbFn::from_decay(self.decay.add(&other.decay))
    }

    pub fn sub(&self, other: &ProbFn) -> Result<Self, ProbFnError> {
        ProbFn::from_decay(self.decay.sub(&other.decay))
    }

    pub fn scale(&self, by: &Rational) -> Result<Self, ProbFnError> {
        ProbFn::from_decay(self.decay.scale(by))
    }

    /// Validates that the function eventually stays in `[0, 1]` and computes
    /// a certified validity index.
    pub fn from_decay(decay: Decay) -> Result<Self, ProbFnError> {
        let (low_sign, low_from) = decay.eventual_sign();
        if low_sign == Sign::Negative {
            return Err(ProbFnError::EventuallyNegative);
        }
        let above = Decay::constant(Rational::one()).sub(&decay);
        let (up_sign, up_from) = above.eventual_sign();
        if up_sign == Sign::Negative {
            return Err(ProbFnError::EventuallyAboveOne);
        }
        let proof = low_from.max(up_from);
        // Extend the certified region downward pointwise; the walk is capped
        // so a deliberately conservative proof index cannot force a long
        // exact scan.
        let mut n_min = proof;
        let floor = proof.saturating_sub(512).max(1);
        while n_min > floor {
            let v = decay.eval(n_min - 1);
            if v < Rational::zero() || v > Rational::one() {
                break;
            }
            n_min -= 1;
        }
        Ok(ProbFn { decay, n_min })
    }

    /// Raw value at `n`; guaranteed to lie in `[0, 1]` when `n >= n_min`.
    pub fn eval(&self, n: u64) -> Rational {
        self.decay.eval(n)
    }

    pub fn limit(&self) -> &Rational {
        self.decay.limit()
    }

    pub fn n_min(&self) -> u64 {
        self.n_min
    }

    pub fn decay(&self) -> &Decay {
        &self.decay
    }

    pub fn is_const_one(&self) -> bool {
        self.decay == Decay::constant(Rational::one())
    }
}
