//! Eventual behavior of the closed function grammar.
//!
//! A [`Decay`] is a function of a natural index of the form
//!
//! ```text
//! f(n) = constant + sum_i a_i / n^{k_i} + sum_j b_j * p_j^n
//! ```
//!
//! with rational coefficients, integer exponents `k_i >= 1`, and geometric
//! bases `p_j` in `(0, 1)`. The grammar is closed under addition and rational
//! scaling, every value `f(n)` is an exact rational, and — the point of the
//! representation — the limit, the eventual sign, and eventual comparisons
//! against constants are all decidable with explicit crossing indices: a
//! returned index `N` comes with the guarantee that the stated relation holds
//! for every `n >= N`, proven through monotone envelope bounds rather than
//! sampling.

use crate::rational::{rat_int, rat_pow, Rational};
use num::{One, Signed, Zero};

/// Canonical linear combination of decaying terms plus a constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decay {
    constant: Rational,
    /// `(coeff, k)` meaning `coeff / n^k`; distinct `k`, ascending, no zeros.
    recips: Vec<(Rational, u32)>,
    /// `(coeff, p)` meaning `coeff * p^n`; distinct `p` in `(0,1)`,
    /// descending, no zeros.
    geoms: Vec<(Rational, Rational)>,
}

/// Sign of an eventually fixed-sign function, with `Zero` meaning the
/// function is eventually exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// Eventual monotonicity direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Decreasing,
    Constant,
    Increasing,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecayError {
    #[error("geometric base must lie strictly between 0 and 1")]
    BadGeometricBase,
    #[error("reciprocal exponent must be at least 1")]
    BadExponent,
    #[error("index must be at least 1")]
    BadIndex,
}

impl Decay {
    pub fn constant(q: Rational) -> Self {
        Decay {
            constant: q,
            recips: Vec::new(),
            geoms: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Decay::constant(Rational::zero())
    }

    /// `coeff / n^k`, `k >= 1`.
    pub fn recip(coeff: Rational, k: u32) -> Result<Self, DecayError> {
        if k == 0 {
            return Err(DecayError::BadExponent);
        }
        let mut d = Decay::zero();
        if !coeff.is_zero() {
            d.recips.push((coeff, k));
        }
        Ok(d)
    }

    /// `coeff * p^n`, `0 < p < 1`.
    pub fn geom(coeff: Rational, p: Rational) -> Result<Self, DecayError> {
        if p <= Rational::zero() || p >= Rational::one() {
            return Err(DecayError::BadGeometricBase);
        }
        let mut d = Decay::zero();
        if !coeff.is_zero() {
            d.geoms.push((coeff, p));
        }
        Ok(d)
    }

    pub fn add(&self, other: &Decay) -> Decay {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (c, k) in &other.recips {
            out.add_recip(c.clone(), *k);
        }
        for (c, p) in &other.geoms {
            out.add_geom(c.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &Decay) -> Decay {
        self.add(&other.scale(&rat_int(-1)))
    }

    pub fn scale(&self, by: &Rational) -> Decay {
        if by.is_zero() {
            return Decay::zero();
        }
        Decay {
            constant: &self.constant * by,
            recips: self
                .recips
                .iter()
                .map(|(c, k)| (c * by, *k))
                .collect(),
            geoms: self
                .geoms
                .iter()
                .map(|(c, p)| (c * by, p.clone()))
                .collect(),
        }
    }

    pub fn add_const(&self, q: &Rational) -> Decay {
        let mut out = self.clone();
        out.constant += q;
        out
    }

    fn add_recip(&mut self, coeff: Rational, k: u32) {
        if coeff.is_zero() {
            return;
        }
        match self.recips.iter_mut().find(|(_, kk)| *kk == k) {
            Some((c, _)) => {
                *c += coeff;
            }
            None => self.recips.push((coeff, k)),
        }
        self.recips.retain(|(c, _)| !c.is_zero());
        self.recips.sort_by_key(|(_, k)| *k);
    }

    fn add_geom(&mut self, coeff: Rational, p: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.geoms.iter_mut().find(|(_, pp)| *pp == p) {
            Some((c, _)) => {
                *c += coeff;
            }
            None => self.geoms.push((coeff, p)),
        }
        self.geoms.retain(|(c, _)| !c.is_zero());
        self.geoms.sort_by(|(_, a), (_, b)| b.cmp(a));
    }

    /// Exact value at index `n >= 1`.
    pub fn eval(&self, n: u64) -> Rational {
        assert!(n >= 1, "decay functions are defined for n >= 1");
        let nq = Rational::from_integer(n.into());
        let mut v = self.constant.clone();
        for (c, k) in &self.recips {
            v += c / rat_pow(&nq, u64::from(*k));
        }
        for (c, p) in &self.geoms {
            v += c * rat_pow(p, n);
        }
        v
    }

    /// The limit as the index grows: the constant term.
    pub fn limit(&self) -> &Rational {
        &self.constant
    }

    pub fn is_const(&self) -> bool {
        self.recips.is_empty() && self.geoms.is_empty()
    }

    /// Reciprocal terms `(coeff, k)` in canonical order.
    pub fn recip_terms(&self) -> &[(Rational, u32)] {
        &self.recips
    }

    /// Geometric terms `(coeff, base)` in canonical order.
    pub fn geom_terms(&self) -> &[(Rational, Rational)] {
        &self.geoms
    }

    /// Envelope bound: `|f(n) - constant| <= env_poly / n^env_k + env_geom * env_p^n`
    /// for all `n >= 1`, with both parts nonincreasing in `n`.
    fn tail_envelope(&self) -> (Rational, u32, Rational, Rational) {
        let env_k = self.recips.iter().map(|(_, k)| *k).min().unwrap_or(1);
        let env_poly: Rational = self.recips.iter().map(|(c, _)| c.abs()).sum();
        let env_p = self
            .geoms
            .iter()
            .map(|(_, p)| p.clone())
            .max()
            .unwrap_or_else(|| Rational::new(1.into(), 2.into()));
        let env_geom: Rational = self.geoms.iter().map(|(c, _)| c.abs()).sum();
        (env_poly, env_k, env_geom, env_p)
    }

    /// Smallest power of two `N` such that the envelope of the non-constant
    /// part stays strictly below `bound` for all `n >= N`.
    fn envelope_below(&self, bound: &Rational) -> u64 {
        debug_assert!(*bound > Rational::zero());
        let (a, k, b, p) = self.tail_envelope();
        let mut n: u64 = 1;
        loop {
            let nq = Rational::from_integer(n.into());
            let env = &a / rat_pow(&nq, u64::from(k)) + &b * rat_pow(&p, n);
            if env < *bound {
                return n;
            }
            n = n.checked_mul(2).expect("envelope search overflow");
        }
    }

    /// The sign of `f(n)` for all `n >= N`, together with such an `N`.
    ///
    /// `Zero` is returned only when the function is identically its constant
    /// term and the constant is zero.
    pub fn eventual_sign(&self) -> (Sign, u64) {
        if !self.constant.is_zero() {
            let sign = if self.constant > Rational::zero() {
                Sign::Positive
            } else {
                Sign::Negative
            };
            if self.recips.is_empty() && self.geoms.is_empty() {
                return (sign, 1);
            }
            let n = self.envelope_below(&self.constant.abs());
            return (sign, n);
        }
        // Constant is zero: the dominant surviving term decides.
        if self.recips.is_empty() && self.geoms.is_empty() {
            return (Sign::Zero, 1);
        }
        if let Some((a, k)) = self.recips.first().cloned() {
            // Slowest reciprocal dominates every other term.
            let sign = if a > Rational::zero() {
                Sign::Positive
            } else {
                Sign::Negative
            };
            let n = self.dominance_index_recip(&a, k);
            return (sign, n);
        }
        let (b, p) = self.geoms.first().cloned().expect("nonempty geoms");
        let sign = if b > Rational::zero() {
            Sign::Positive
        } else {
            Sign::Negative
        };
        let n = self.dominance_index_geom(&b, &p);
        (sign, n)
    }

    /// Index from which `|a| / n^k` strictly dominates the sum of all other
    /// terms. Requires `(a, k)` to be the minimal-exponent reciprocal.
    fn dominance_index_recip(&self, a: &Rational, k: u32) -> u64 {
        let half = a.abs() / rat_int(2);
        // Other reciprocals all have exponent >= k+1, so their envelope is
        // rest_poly / n^{k+1}; beat it with half the dominant term:
        //   rest_poly / n^{k+1} < |a| / (2 n^k)   <=>   n > 2 rest_poly / |a|.
        let rest_poly: Rational = self
            .recips
            .iter()
            .skip(1)
            .map(|(c, _)| c.abs())
            .sum();
        let mut n1: u64 = 1;
        if !rest_poly.is_zero() {
            let threshold = &rest_poly * rat_int(2) / a.abs();
            while Rational::from_integer(n1.into()) <= threshold {
                n1 = n1.checked_mul(2).expect("dominance search overflow");
            }
        }
        // Geometric part: need rest_geom * p^n * n^k < |a| / 2. The left side
        // is eventually decreasing (once p (1 + 1/n)^k < 1), so a pointwise
        // check at a large enough n settles all larger n.
        let rest_geom: Rational = self.geoms.iter().map(|(c, _)| c.abs()).sum();
        let mut n2: u64 = 1;
        if !rest_geom.is_zero() {
            let p = self
                .geoms
                .iter()
                .map(|(_, p)| p.clone())
                .max()
                .expect("nonempty geoms");
            loop {
                let nq = Rational::from_integer(n2.into());
                let ratio_ok = {
                    let growth = rat_pow(&(Rational::one() + nq.recip()), u64::from(k));
                    &p * growth < Rational::one()
                };
                let value_ok =
                    &rest_geom * rat_pow(&p, n2) * rat_pow(&nq, u64::from(k)) < half;
                if ratio_ok && value_ok {
                    break;
                }
                n2 = n2.checked_mul(2).expect("dominance search overflow");
            }
        }
        n1.max(n2)
    }

    /// Index from which `|b| p^n` strictly dominates the other geometric
    /// terms (there are no reciprocals in this case).
    fn dominance_index_geom(&self, b: &Rational, p: &Rational) -> u64 {
        debug_assert!(self.recips.is_empty());
        let rest: Rational = self
            .geoms
            .iter()
            .skip(1)
            .map(|(c, _)| c.abs())
            .sum();
        if rest.is_zero() {
            return 1;
        }
        let q = self
            .geoms
            .iter()
            .skip(1)
            .map(|(_, pp)| pp.clone())
            .max()
            .expect("rest nonempty");
        // rest * q^n < |b| p^n  <=>  (q/p)^n < |b| / rest; the left side is
        // strictly decreasing since q < p.
        let ratio = &q / p;
        let target = b.abs() / rest;
        let mut n: u64 = 1;
        while rat_pow(&ratio, n) >= target {
            n = n.checked_mul(2).expect("dominance search overflow");
        }
        n
    }

    /// Eventual comparison of `f(n)` with a constant threshold: the relation
    /// of `f(n)` to `t` for all `n >= N`. `Sign::Zero` means `f(n) == t`
    /// eventually (in fact from `N` on).
    pub fn eventual_cmp(&self, t: &Rational) -> (Sign, u64) {
        self.add_const(&(-t.clone())).eventual_sign()
    }

    /// Eventual monotonicity with a certified index: the direction of
    /// `f(n+1) - f(n)` for all `n >= N`.
    ///
    /// The forward difference of `c / n^k` is sandwiched between
    /// `-ck / n^{k+1}` and `-ck / (2n)^{k+1}` for `n >= 1`, and the forward
    /// difference of `b p^n` is exactly `b (p - 1) p^n`, so the difference
    /// function has single-term envelopes of the same shape as the terms
    /// themselves and the usual dominance argument applies.
    pub fn eventually_monotone(&self) -> (Direction, u64) {
        if self.is_const() {
            return (Direction::Constant, 1);
        }
        // Dominant difference term.
        if let Some((a, k)) = self.recips.first().cloned() {
            // Difference of the dominant reciprocal has magnitude at least
            // |a| k / (2n)^{k+1}; the remaining reciprocals contribute at most
            // rest_poly (k+1)-ish / n^{k+2}... Use the crude but safe bounds:
            //   |delta(c/n^j)| <= |c| j / n^{j+1}
            //   |delta(c/n^j)| >= |c| j / 2^{j+1} / n^{j+1}
            let dom_low_coeff =
                a.abs() * rat_int(i64::from(k)) / rat_pow(&rat_int(2), u64::from(k) + 1);
            let rest_up: Rational = self
                .recips
                .iter()
                .skip(1)
                .map(|(c, j)| c.abs() * rat_int(i64::from(*j)))
                .sum();
            // rest reciprocal differences decay like n^{k+2} or faster;
            // geometric differences decay geometrically.
            let geom_up: Rational = self
                .geoms
                .iter()
                .map(|(c, p)| c.abs() * (Rational::one() - p))
                .sum();
            // Poly part: rest_up / n^{k+2} < dom / (2 n^{k+1})  <=>  n > 2 rest_up / dom.
            let mut n1: u64 = 1;
            if !rest_up.is_zero() {
                let threshold = &rest_up * rat_int(2) / &dom_low_coeff;
                while Rational::from_integer(n1.into()) <= threshold {
                    n1 = n1.checked_mul(2).expect("monotonicity search overflow");
                }
            }
            // Geometric part: geom_up * p^n * n^{k+1} < dom / 2, eventually a
            // decreasing product once the ratio test passes.
            let mut n2: u64 = 1;
            if !geom_up.is_zero() {
                let p_max = self
                    .geoms
                    .iter()
                    .map(|(_, p)| p.clone())
                    .max()
                    .expect("nonempty geoms");
                let half = &dom_low_coeff / rat_int(2);
                loop {
                    let nq = Rational::from_integer(n2.into());
                    let growth =
                        rat_pow(&(Rational::one() + nq.recip()), u64::from(k) + 1);
                    let ratio_ok = &p_max * growth < Rational::one();
                    let value_ok = &geom_up
                        * rat_pow(&p_max, n2)
                        * rat_pow(&nq, u64::from(k) + 1)
                        < half;
                    if ratio_ok && value_ok {
                        break;
                    }
                    n2 = n2.checked_mul(2).expect("monotonicity search overflow");
                }
            }
            let dir = if a > Rational::zero() {
                Direction::Decreasing
            } else {
                Direction::Increasing
            };
            return (dir, n1.max(n2));
        }
        // Geometric terms only: difference of b p^n is b (p-1) p^n, dominated
        // by the largest base exactly as in eventual_sign.
        let (b, p) = self.geoms.first().cloned().expect("nonempty");
        let diff = Decay {
            constant: Rational::zero(),
            recips: Vec::new(),
            geoms: self
                .geoms
                .iter()
                .map(|(c, pp)| (c * (pp - Rational::one()), pp.clone()))
                .collect(),
        };
        let lead = &b * (&p - Rational::one());
        let n = diff.dominance_index_geom(&lead, &p);
        let dir = if b > Rational::zero() {
            Direction::Decreasing
        } else {
            Direction::Increasing
        };
        (dir, n)
    }
}
