//! Natural density of index sets.
//!
//! The computation is rigorous by construction: an `Exact` answer means the
//! counting ratio `|A ∩ [1,N]| / N` provably converges to the stated value,
//! an `Interval` answer brackets the lower and upper densities, and anything
//! the rules cannot bound rigorously is `Unknown`. Ultimately periodic sets
//! get exact densities from their residue count; sparse primitives are exact
//! zeros; Boolean nodes combine the operand bounds through inclusion and
//! exclusion, collapsing to exact values whenever the bracket closes.

use super::set::IndexSet;
use super::upset;
use crate::rational::{rat_int, rat_pow, Rational};
use num::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DensityResult {
    Exact(Rational),
    Interval { lower: Rational, upper: Rational },
    Unknown,
}

impl DensityResult {
    pub fn exact_value(&self) -> Option<&Rational> {
        match self {
            DensityResult::Exact(q) => Some(q),
            _ => None,
        }
    }

    /// Rigorous bracket `[liminf bound, limsup bound]`.
    pub fn bounds(&self) -> (Rational, Rational) {
        match self {
            DensityResult::Exact(q) => (q.clone(), q.clone()),
            DensityResult::Interval { lower, upper } => (lower.clone(), upper.clone()),
            DensityResult::Unknown => (Rational::zero(), Rational::one()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DensityError {
    #[error("no exact density data for a family piece: {0}")]
    NoDensityData(String),
    #[error("family densities must be summable: {0}")]
    NotSummable(String),
}

/// Internal bracket with an exactness flag.
#[derive(Debug, Clone)]
struct Bounds {
    lower: Rational,
    upper: Rational,
    exact: bool,
}

impl Bounds {
    fn exact(q: Rational) -> Self {
        Bounds {
            lower: q.clone(),
            upper: q,
            exact: true,
        }
    }

    fn interval(lower: Rational, upper: Rational) -> Self {
        let exact = lower == upper;
        Bounds {
            lower,
            upper,
            exact,
        }
    }

    fn into_result(self) -> DensityResult {
        if self.exact || self.lower == self.upper {
            DensityResult::Exact(self.lower)
        } else if self.lower.is_zero() && self.upper.is_one() {
            DensityResult::Unknown
        } else {
            DensityResult::Interval {
                lower: self.lower,
                upper: self.upper,
            }
        }
    }
}

fn clamp01(q: Rational) -> Rational {
    if q < Rational::zero() {
        Rational::zero()
    } else if q > Rational::one() {
        Rational::one()
    } else {
        q
    }
}

fn bounds(set: &IndexSet) -> Bounds {
    // Ultimately periodic sets have exact density = residues / modulus.
    if let Some(up) = upset::normalize(set) {
        return Bounds::exact(Rational::new(
            up.hits_per_period().into(),
            up.modulus.into(),
        ));
    }
    match set {
        IndexSet::Finite(_) => Bounds::exact(Rational::zero()),
        IndexSet::Full => Bounds::exact(Rational::one()),
        IndexSet::ArithProg { stride, .. } => {
            Bounds::exact(Rational::new(1.into(), (*stride).into()))
        }
        IndexSet::DyadicValuation { v } => {
            Bounds::exact(Rational::one() / rat_pow(&rat_int(2), u64::from(*v) + 1))
        }
        IndexSet::Powers { .. } | IndexSet::PolyImage { .. } => Bounds::exact(Rational::zero()),
        IndexSet::TailSolution { eventually_in, .. } => {
            if *eventually_in {
                Bounds::exact(Rational::one())
            } else {
                Bounds::exact(Rational::zero())
            }
        }
        IndexSet::Complement(a) => {
            let b = bounds(a);
            Bounds {
                lower: Rational::one() - &b.upper,
                upper: Rational::one() - &b.lower,
                exact: b.exact,
            }
        }
        IndexSet::Union(a, b) => {
            let da = bounds(a);
            let db = bounds(b);
            let di = bounds(&IndexSet::intersection((**a).clone(), (**b).clone()));
            if da.exact && db.exact && di.exact {
                return Bounds::exact(clamp01(&da.lower + &db.lower - &di.lower));
            }
            // |A ∪ B| = |A| + |B| - |A ∩ B| gives the bracket.
            let lower = clamp01(
                (&da.lower + &db.lower - &di.upper)
                    .max(da.lower.clone())
                    .max(db.lower.clone()),
            );
            let upper = clamp01(&da.upper + &db.upper - &di.lower);
            Bounds::interval(lower, upper)
        }
        IndexSet::Intersection(a, b) => {
            let da = bounds(a);
            let db = bounds(b);
            // A subset of a null set is null.
            if da.upper.is_zero() || db.upper.is_zero() {
                return Bounds::exact(Rational::zero());
            }
            let lower = clamp01(&da.lower + &db.lower - Rational::one());
            let upper = da.upper.min(db.upper);
            Bounds::interval(lower, upper)
        }
        IndexSet::Difference(a, b) => bounds(&IndexSet::intersection(
            (**a).clone(),
            IndexSet::complement((**b).clone()),
        )),
    }
}

/// Rigorous natural density of an index set.
pub fn natural_density(set: &IndexSet) -> DensityResult {
    bounds(set).into_result()
}

/// A family of per-piece densities `coeff * ratio^j` indexed by `j >= 1`,
/// with `ratio` in `(0, 1)` so the total is summable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyDensity {
    coeff: Rational,
    ratio: Rational,
}

impl FamilyDensity {
    pub fn geometric(coeff: Rational, ratio: Rational) -> Result<Self, DensityError> {
        if ratio <= Rational::zero() || ratio >= Rational::one() {
            return Err(DensityError::NotSummable(format!(
                "geometric ratio {} outside (0,1)",
                crate::rational::format_rational(&ratio)
            )));
        }
        if coeff <= Rational::zero() {
            return Err(DensityError::NoDensityData(
                "nonpositive density coefficient".into(),
            ));
        }
        Ok(FamilyDensity { coeff, ratio })
    }

    /// The dyadic partition: piece `j` has density `1/2^j`.
    pub fn dyadic() -> Self {
        FamilyDensity {
            coeff: Rational::one(),
            ratio: Rational::new(1.into(), 2.into()),
        }
    }

    /// Exact density of piece `j >= 1`.
    pub fn density_of(&self, j: u64) -> Rational {
        &self.coeff * rat_pow(&self.ratio, j)
    }

    /// Closed-form tail sum `sum_{j > from} coeff * ratio^j`.
    pub fn tail_sum(&self, from: u64) -> Rational {
        &self.coeff * rat_pow(&self.ratio, from + 1) / (Rational::one() - &self.ratio)
    }
}

/// Upper-density bracket for the union of all family pieces past `from`:
/// `[0, min(1, sum_{j > from} density_j)]` via the closed-form tail.
pub fn tail_union_upper_density(family: &FamilyDensity, from: u64) -> DensityResult {
    let upper = clamp01(family.tail_sum(from));
    DensityResult::Interval {
        lower: Rational::zero(),
        upper,
    }
}
