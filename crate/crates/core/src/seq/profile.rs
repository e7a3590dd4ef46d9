//! Limiting behavior of a piece against a target law.
//!
//! For each pair (sequence atom, target atom) under the declared coupling,
//! the distance `|v(n) - y|` is classified as either a decaying closed form
//! with a finite limit and a certified approach direction, or as divergent.
//! The mass profile aggregates the pairs into the two quantities the
//! convergence definitions quantify over: `c(eps)`, the limiting mass within
//! distance `r + eps`, and `c_plus`, the limiting mass within distance `r`.
//! Tie-breaking at exact boundaries is fixed once and for all: a limit
//! attained from above does not count as inside an open ball, a limit
//! attained from below does, and an exactly constant distance follows the
//! comparator literally.

use super::decay::{Decay, Sign};
use super::piece::SeqError;
use super::probfn::ProbFn;
use super::valuefn::{ValueFn, ValueLimit};
use crate::index::IndexSet;
use crate::rational::{rat_int, Rational};
use num::integer::Integer;
use num::{Signed, Zero};

/// Eventual closed form of a distance `|v(n) - y|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistanceForm {
    /// Agrees with `decay` for every `n >= from`.
    Decay { decay: Decay, from: u64 },
    /// Tends to infinity; `value`/`target` retained for crossing solves.
    Diverging { value: ValueFn, target: Rational },
}

/// Limit of a distance in the extended nonnegative reals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistanceLimit {
    Finite(Rational),
    Infinite,
}

/// How a finite-limit distance approaches its limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Approach {
    FromAbove,
    Exactly,
    FromBelow,
}

impl DistanceForm {
    /// Builds the eventual form of `|v(n) - y|` with the family parameter
    /// resolved.
    pub fn of(value: &ValueFn, target: &Rational, j: Option<u64>) -> Result<Self, SeqError> {
        match value.limit(j)? {
            ValueLimit::PlusInfinity | ValueLimit::MinusInfinity => Ok(DistanceForm::Diverging {
                value: value.clone(),
                target: target.clone(),
            }),
            ValueLimit::Finite(_) => {
                // v(n) - y is a decay; |v(n) - y| follows its eventual sign.
                let signed = match value {
                    ValueFn::Const(c) => Decay::constant(c - target),
                    ValueFn::IndexedConst { .. } => {
                        let v = value.eval(1, j)?;
                        Decay::constant(&v - target)
                    }
                    ValueFn::ReciprocalShift { coeff, degree } => {
                        Decay::recip(coeff.clone(), *degree)
                            .expect("validated degree")
                            .add_const(&(-target.clone()))
                    }
                    ValueFn::Monomial { .. } | ValueFn::Exponential { .. } => {
                        unreachable!("diverging forms handled above")
                    }
                };
                let (sign, from) = signed.eventual_sign();
                let decay = match sign {
                    Sign::Positive | Sign::Zero => signed,
                    Sign::Negative => signed.scale(&rat_int(-1)),
                };
                Ok(DistanceForm::Decay { decay, from })
            }
        }
    }

    pub fn limit(&self) -> DistanceLimit {
        match self {
            DistanceForm::Decay { decay, .. } => DistanceLimit::Finite(decay.limit().clone()),
            DistanceForm::Diverging { .. } => DistanceLimit::Infinite,
        }
    }

    /// Approach direction toward a finite limit.
    pub fn approach(&self) -> Option<Approach> {
        match self {
            DistanceForm::Diverging { .. } => None,
            DistanceForm::Decay { decay, .. } => {
                let centered = decay.add_const(&(-decay.limit().clone()));
                Some(match centered.eventual_sign().0 {
                    Sign::Positive => Approach::FromAbove,
                    Sign::Zero => Approach::Exactly,
                    Sign::Negative => Approach::FromBelow,
                })
            }
        }
    }

    /// Does `d(n) > threshold` (or `>=` when `strict` is false) hold
    /// eventually? Returns the certified index alongside.
    pub fn eventually_beyond(&self, threshold: &Rational, strict: bool) -> (bool, u64) {
        match self {
            DistanceForm::Diverging { value, target } => {
                (true, diverging_crossing(value, target, threshold))
            }
            DistanceForm::Decay { decay, from } => {
                let (sign, idx) = decay.eventual_cmp(threshold);
                let beyond = match (sign, strict) {
                    (Sign::Positive, _) => true,
                    (Sign::Zero, false) => true,
                    (Sign::Zero, true) => false,
                    (Sign::Negative, _) => false,
                };
                (beyond, (*from).max(idx))
            }
        }
    }

    /// Exact distance value at a concrete index.
    pub fn eval(&self, n: u64, value: &ValueFn, target: &Rational, j: Option<u64>) -> Rational {
        let _ = self;
        let v = value.eval(n, j).expect("family parameter resolved");
        (v - target).abs()
    }
}

/// Index from which `|v(n) - y| > threshold` stays true, for a divergent
/// value function: `|v|` is increasing, so it suffices to clear
/// `|y| + threshold` once.
fn diverging_crossing(value: &ValueFn, target: &Rational, threshold: &Rational) -> u64 {
    let bound = target.abs() + threshold;
    let mut n: u64 = 1;
    loop {
        let v = value.eval(n, None).expect("divergent forms are not indexed");
        if v.abs() > bound {
            return n;
        }
        n = n.checked_mul(2).expect("crossing search overflow");
    }
}

/// One (sequence atom, target atom) pair under the coupling: its joint mass
/// as a function of the index and its distance form.
#[derive(Debug, Clone)]
pub struct PairForm {
    pub mass: Decay,
    pub mass_limit: Rational,
    pub dist: DistanceForm,
    pub value: ValueFn,
    pub target_value: Rational,
}

/// Joint table entry for an explicit per-piece coupling: indices into the
/// piece's atom list and the target's atom list, with a symbolic mass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointTable {
    pub entries: Vec<(usize, usize, ProbFn)>,
}

/// Coupling of a piece to the target's atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PieceCoupling {
    Product,
    Joint(JointTable),
}

impl JointTable {
    /// Validates the table against the piece atoms and target masses: row
    /// sums must reproduce each atom's mass function symbolically and column
    /// sums each target mass.
    pub fn validate(
        &self,
        atoms: &[(ValueFn, ProbFn)],
        target_masses: &[Rational],
    ) -> Result<(), SeqError> {
        for i in 0..atoms.len() {
            let row = self
                .entries
                .iter()
                .filter(|(a, _, _)| *a == i)
                .fold(Decay::zero(), |acc, (_, _, m)| acc.add(m.decay()));
            if row != *atoms[i].1.decay() {
                return Err(SeqError::MassNotOneSymbolic {
                    piece: format!("joint row {i}"),
                });
            }
        }
        for (jdx, want) in target_masses.iter().enumerate() {
            let col = self
                .entries
                .iter()
                .filter(|(_, b, _)| *b == jdx)
                .fold(Decay::zero(), |acc, (_, _, m)| acc.add(m.decay()));
            if col != Decay::constant(want.clone()) {
                return Err(SeqError::MassNotOneSymbolic {
                    piece: format!("joint column {jdx}"),
                });
            }
        }
        Ok(())
    }
}

/// Builds the pair forms of a piece against target atoms, with the family
/// parameter resolved when analyzing a family member.
pub fn build_pairs(
    atoms: &[(ValueFn, ProbFn)],
    target_atoms: &[(Rational, Rational)],
    coupling: &PieceCoupling,
    j: Option<u64>,
) -> Result<Vec<PairForm>, SeqError> {
    let mut pairs = Vec::new();
    match coupling {
        PieceCoupling::Product => {
            for (value, prob) in atoms {
                for (y, ym) in target_atoms {
                    let mass = prob.decay().scale(ym);
                    pairs.push(PairForm {
                        mass_limit: mass.limit().clone(),
                        dist: DistanceForm::of(value, y, j)?,
                        mass,
                        value: value.clone(),
                        target_value: y.clone(),
                    });
                }
            }
        }
        PieceCoupling::Joint(table) => {
            let masses: Vec<Rational> = target_atoms.iter().map(|(_, m)| m.clone()).collect();
            table.validate(atoms, &masses)?;
            for (i, jdx, m) in &table.entries {
                let (value, _) = &atoms[*i];
                let (y, _) = &target_atoms[*jdx];
                let mass = m.decay().clone();
                pairs.push(PairForm {
                    mass_limit: mass.limit().clone(),
                    dist: DistanceForm::of(value, y, j)?,
                    mass,
                    value: value.clone(),
                    target_value: y.clone(),
                });
            }
        }
    }
    Ok(pairs)
}

/// The limiting mass profile of a piece at roughness `r`.
#[derive(Debug, Clone)]
pub struct MassProfile {
    r: Rational,
    entries: Vec<(DistanceLimit, Option<Approach>, Rational)>,
}

impl MassProfile {
    pub fn new(pairs: &[PairForm], r: Rational) -> Self {
        let entries = pairs
            .iter()
            .map(|p| (p.dist.limit(), p.dist.approach(), p.mass_limit.clone()))
            .collect();
        MassProfile { r, entries }
    }

    /// Limiting mass within the closed ball of radius `r`:
    /// `c_plus = sum { q : L <= r }`.
    pub fn c_plus(&self) -> Rational {
        self.entries
            .iter()
            .filter_map(|(limit, _, q)| match limit {
                DistanceLimit::Finite(l) if *l <= self.r => Some(q.clone()),
                _ => None,
            })
            .sum()
    }

    /// Limiting mass of the open ball of radius `r + eps`, with boundary
    /// pairs counted by their approach direction.
    pub fn c_at(&self, eps: &Rational) -> Rational {
        let t = &self.r + eps;
        self.entries
            .iter()
            .filter_map(|(limit, approach, q)| match limit {
                DistanceLimit::Finite(l) => {
                    let inside = if *l < t {
                        true
                    } else if *l == t {
                        matches!(approach, Some(Approach::FromBelow))
                    } else {
                        false
                    };
                    inside.then(|| q.clone())
                }
                DistanceLimit::Infinite => None,
            })
            .sum()
    }

    /// Epsilon values at which `c` can change.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut eps: Vec<Rational> = self
            .entries
            .iter()
            .filter_map(|(limit, _, _)| match limit {
                DistanceLimit::Finite(l) if *l > self.r => Some(l - &self.r),
                _ => None,
            })
            .collect();
        eps.sort();
        eps.dedup();
        eps
    }

    /// Limiting exceedance mass beyond `r + eps` (strict comparator), the
    /// complement of the qualifying mass against the total limiting mass.
    pub fn exceedance_limit_at(&self, eps: &Rational) -> Rational {
        let t = &self.r + eps;
        self.entries
            .iter()
            .filter_map(|(limit, approach, q)| {
                let beyond = match limit {
                    DistanceLimit::Infinite => true,
                    DistanceLimit::Finite(l) => {
                        *l > t || (*l == t && matches!(approach, Some(Approach::FromAbove)))
                    }
                };
                beyond.then(|| q.clone())
            })
            .sum()
    }
}

/// Limiting mass profile of a piece against target atoms under a declared
/// coupling, at roughness `r`. For family members pass the resolved
/// parameter `j`.
pub fn limiting_mass_profile(
    atoms: &[(ValueFn, ProbFn)],
    target_atoms: &[(Rational, Rational)],
    coupling: &PieceCoupling,
    j: Option<u64>,
    r: Rational,
) -> Result<MassProfile, SeqError> {
    let pairs = build_pairs(atoms, target_atoms, coupling, j)?;
    Ok(MassProfile::new(&pairs, r))
}

/// Symbolic exceedance function of a piece: `P(d(X_n, Y) > r + eps)` as a
/// closed form valid from `from` on.
#[derive(Debug, Clone)]
pub struct Exceedance {
    pub symbolic: Decay,
    pub from: u64,
}

impl Exceedance {
    pub fn eval(&self, n: u64) -> Rational {
        self.symbolic.eval(n)
    }
}

/// Builds the symbolic exceedance of the pair collection at threshold
/// `r + eps`: the sum of the mass functions of the pairs whose distance
/// eventually exceeds the threshold.
pub fn exceedance_fn(pairs: &[PairForm], r: &Rational, eps: &Rational) -> Exceedance {
    let threshold = r + eps;
    let mut total = Decay::zero();
    let mut from: u64 = 1;
    for pair in pairs {
        let (beyond, idx) = pair.dist.eventually_beyond(&threshold, true);
        from = from.max(idx);
        if beyond {
            total = total.add(&pair.mass);
        }
    }
    Exceedance {
        symbolic: total,
        from,
    }
}

/// Classifies `{n : p(n) cmp delta}` as a tail solution with exact
/// exceptions below the certified crossing.
pub fn threshold_solution(
    p: &ProbFn,
    strict: bool,
    delta: &Rational,
) -> IndexSet {
    let (sign, from) = p.decay().eventual_cmp(delta);
    let eventually_in = match (sign, strict) {
        (Sign::Positive, _) => true,
        (Sign::Zero, false) => true,
        (Sign::Zero, true) => false,
        (Sign::Negative, _) => false,
    };
    let mut below = Vec::new();
    for n in 1..from {
        let v = p.eval(n);
        let holds = if strict { v > *delta } else { v >= *delta };
        if holds {
            below.push(n);
        }
    }
    // Tighten the crossing to the start of the final run so the reported
    // index is the actual threshold crossing.
    let mut from = from;
    if eventually_in {
        while below.last() == Some(&(from - 1)) {
            below.pop();
            from -= 1;
        }
    }
    IndexSet::tail_solution(eventually_in, from, below)
}

/// Set of family parameters `j >= 1` satisfying a distance condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JSet {
    Empty,
    /// All `j` in `[lo, hi]`.
    Range(u64, u64),
    /// All `j >= lo`.
    From(u64),
    All,
}

impl JSet {
    pub fn contains(&self, j: u64) -> bool {
        match self {
            JSet::Empty => false,
            JSet::Range(lo, hi) => *lo <= j && j <= *hi,
            JSet::From(lo) => j >= *lo,
            JSet::All => true,
        }
    }

    pub fn covers_all(&self) -> bool {
        matches!(self, JSet::All) || matches!(self, JSet::From(1))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, JSet::Empty)
    }

    /// Finite boundary parameters where membership can change.
    pub fn boundary_candidates(&self) -> Vec<u64> {
        match self {
            JSet::Empty | JSet::All => vec![],
            JSet::Range(lo, hi) => vec![*lo, *hi],
            JSet::From(lo) => vec![*lo],
        }
    }
}

fn rat_ceil(q: &Rational) -> num::BigInt {
    q.ceil().to_integer()
}

fn rat_floor(q: &Rational) -> num::BigInt {
    q.floor().to_integer()
}

/// `{ j >= 1 : |coeff/(j+shift) - y| cmp bound }` where `cmp` is `<` when
/// `strict` and `<=` otherwise. The value `coeff/(j+shift)` is monotone in
/// `j`, so the solution set is a contiguous range of parameters.
pub fn indexed_within(
    coeff: &Rational,
    shift: u64,
    y: &Rational,
    bound: &Rational,
    strict: bool,
) -> JSet {
    if *bound < Rational::zero() {
        return JSet::Empty;
    }
    if coeff.is_zero() {
        let dist = y.abs();
        let inside = if strict { dist < *bound } else { dist <= *bound };
        return if inside { JSet::All } else { JSet::Empty };
    }
    // Solve lowv <= coeff/t <= highv over integer t = j + shift >= shift + 1.
    let lowv = y - bound;
    let highv = y + bound;
    // t bounds as half-lines; None = unbounded.
    let mut t_lo: num::BigInt = (shift + 1).into();
    let mut t_hi: Option<num::BigInt> = None;
    let positive = *coeff > Rational::zero();
    // coeff/t <= highv (or < when strict)
    if positive {
        if highv <= Rational::zero() {
            return JSet::Empty; // positive value can't be <= nonpositive
        }
        let cross = coeff / &highv; // t >= coeff/highv
        let lo = if strict {
            rat_floor(&cross) + 1
        } else {
            rat_ceil(&cross)
        };
        if lo > t_lo {
            t_lo = lo;
        }
    } else if highv < Rational::zero() {
        // negative/t <= negative bound: t <= coeff/highv
        let cross = coeff / &highv;
        let hi = if strict {
            rat_ceil(&cross) - 1
        } else {
            rat_floor(&cross)
        };
        t_hi = Some(hi);
    } else if highv.is_zero() && strict {
        // coeff/t < 0 always holds for negative coeff
    }
    // coeff/t >= lowv (or > when strict)
    if positive {
        if lowv > Rational::zero() {
            let cross = coeff / &lowv; // t <= coeff/lowv
            let hi = if strict {
                rat_ceil(&cross) - 1
            } else {
                rat_floor(&cross)
            };
            t_hi = Some(match t_hi {
                Some(old) => old.min(hi),
                None => hi,
            });
        } else if lowv.is_zero() && !strict {
            // coeff/t >= 0 always holds
        } else if lowv.is_zero() && strict {
            // coeff/t > 0 always holds for positive coeff
        }
    } else {
        // coeff negative: coeff/t in (lowv side)
        if lowv >= Rational::zero() {
            return JSet::Empty; // negative value can't be >= nonnegative
        }
        let cross = coeff / &lowv; // t >= coeff/lowv (division by negative)
        let lo = if strict {
            rat_floor(&cross) + 1
        } else {
            rat_ceil(&cross)
        };
        if lo > t_lo {
            t_lo = lo;
        }
    }
    // Translate t back to j = t - shift, j >= 1.
    let shift_big: num::BigInt = shift.into();
    let j_lo_big = &t_lo - &shift_big;
    let j_lo: u64 = if j_lo_big <= num::BigInt::from(1) {
        1
    } else {
        match j_lo_big.to_biguint().and_then(|b| b.try_into().ok()) {
            Some(v) => v,
            None => return JSet::Empty,
        }
    };
    match t_hi {
        None => JSet::From(j_lo).normalized(),
        Some(hi) => {
            let j_hi_big = hi - &shift_big;
            if j_hi_big < num::BigInt::from(j_lo) {
                return JSet::Empty;
            }
            let j_hi: u64 = j_hi_big
                .to_biguint()
                .and_then(|b| b.try_into().ok())
                .unwrap_or(u64::MAX);
            JSet::Range(j_lo, j_hi)
        }
    }
}

impl JSet {
    fn normalized(self) -> JSet {
        match self {
            JSet::From(1) => JSet::All,
            other => other,
        }
    }
}

/// Checks `n % 2^k` parity structure: v2(n) + 1, the family parameter of an
/// index under the dyadic partition.
pub fn family_parameter(n: u64) -> u64 {
    debug_assert!(n >= 1);
    u64::from(n.trailing_zeros()) + 1
}

/// Greatest common divisor helper re-exported for tests.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
