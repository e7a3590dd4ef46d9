//! Exact computation of the Ky Fan metric.
//!
//! For a law `D` of the distance `d(X,Y)` supported on finitely many
//! nonnegative rationals, `rho = inf { eps > 0 : P(D > eps) <= eps }` is
//! computed over the breakpoint set `{0} ∪ support(D)`. The tail function
//! `T(eps) = P(D > eps)` is constant on each interval between consecutive
//! breakpoints, so on the interval `[b, b')` carrying tail value `T` the
//! least feasible point is `max(b, T)` provided it stays below `b'`. The
//! first feasible interval, scanned left to right, yields the infimum, and
//! for finite support the infimum is attained.

use crate::coupling::Coupling;
use crate::dist::{DistError, FiniteDist};
use crate::rational::Rational;
use crate::space::Point;
use num::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KyFanError {
    #[error("distance law has an atom on a negative value")]
    NegativeSupport,
    #[error("distance law must live on the rational line")]
    NotOnLine,
    #[error(transparent)]
    Dist(#[from] DistError),
}

/// The computed metric value together with the attained tail probability
/// `P(D > rho)`, which witnesses feasibility: `attained_tail <= rho`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KyFanResult {
    pub rho: Rational,
    pub attained_tail: Rational,
}

/// Extracts the sorted support and masses of a law on the nonnegative line.
fn line_support(d: &FiniteDist) -> Result<Vec<(Rational, Rational)>, KyFanError> {
    let mut vals = Vec::with_capacity(d.atoms().len());
    for (p, m) in d.atoms() {
        match p {
            Point::Real(v) => {
                if *v < Rational::zero() {
                    return Err(KyFanError::NegativeSupport);
                }
                vals.push((v.clone(), m.clone()));
            }
            Point::Label(_) => return Err(KyFanError::NotOnLine),
        }
    }
    vals.sort_by(|(a, _), (b, _)| a.cmp(b));
    Ok(vals)
}

/// Least `eps >= 0` with `P(D > eps) <= eps`, exact.
pub fn kyfan_of_law(d: &FiniteDist) -> Result<KyFanResult, KyFanError> {
    let support = line_support(d)?;
    kyfan_from_support(&support, &Rational::zero())
}

/// Core interval scan shared with the limit-law variant. `mass_at_infinity`
/// is an extra tail mass sitting above every breakpoint.
fn kyfan_from_support(
    support: &[(Rational, Rational)],
    mass_at_infinity: &Rational,
) -> Result<KyFanResult, KyFanError> {
    if *mass_at_infinity < Rational::zero() {
        return Err(KyFanError::NegativeSupport);
    }
    // Breakpoints: 0 plus the support values, ascending and distinct.
    let mut breaks: Vec<Rational> = vec![Rational::zero()];
    for (v, _) in support {
        if breaks.last() != Some(v) {
            breaks.push(v.clone());
        }
    }
    for (i, b) in breaks.iter().enumerate() {
        // T on [b, next) is the mass strictly above b.
        let tail: Rational = support
            .iter()
            .filter(|(v, _)| v > b)
            .map(|(_, m)| m.clone())
            .sum::<Rational>()
            + mass_at_infinity;
        let candidate = if tail > *b { tail.clone() } else { b.clone() };
        let fits = match breaks.get(i + 1) {
            Some(next) => candidate < *next,
            None => true,
        };
        if fits {
            // Tail at the candidate itself equals the interval tail.
            return Ok(KyFanResult {
                rho: candidate,
                attained_tail: tail,
            });
        }
    }
    unreachable!("the last interval is always feasible");
}

/// Ky Fan distance between two laws under a declared coupling.
pub fn kyfan_between(
    x: &FiniteDist,
    y: &FiniteDist,
    c: &Coupling,
) -> Result<KyFanResult, KyFanError> {
    if c.x() != x || c.y() != y {
        return Err(KyFanError::Dist(DistError::SpaceMismatch));
    }
    kyfan_of_law(&c.distance_law()?)
}

/// A limiting distance law: finitely many nonnegative rational atoms plus an
/// optional escaping mass sitting above every finite value. Produced by the
/// symbolic sequence analysis when some atoms diverge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitLaw {
    pub finite_atoms: Vec<(Rational, Rational)>,
    pub mass_at_infinity: Rational,
}

impl LimitLaw {
    pub fn new(
        finite_atoms: Vec<(Rational, Rational)>,
        mass_at_infinity: Rational,
    ) -> Result<Self, KyFanError> {
        let mut merged: Vec<(Rational, Rational)> = Vec::new();
        for (v, m) in finite_atoms {
            if v < Rational::zero() || m < Rational::zero() {
                return Err(KyFanError::NegativeSupport);
            }
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some((_, acc)) => *acc += m,
                None => merged.push((v, m)),
            }
        }
        merged.retain(|(_, m)| !m.is_zero());
        merged.sort_by(|(a, _), (b, _)| a.cmp(b));
        let total: Rational =
            merged.iter().map(|(_, m)| m.clone()).sum::<Rational>() + &mass_at_infinity;
        if !total.is_one() {
            return Err(KyFanError::Dist(DistError::MassNotOne {
                deficit: Rational::one() - &total,
                got: total,
            }));
        }
        Ok(LimitLaw {
            finite_atoms: merged,
            mass_at_infinity,
        })
    }
}

/// Ky Fan value of a limiting law, with the escaping mass counting toward
/// every tail.
pub fn kyfan_of_limit_law(law: &LimitLaw) -> Result<KyFanResult, KyFanError> {
    kyfan_from_support(&law.finite_atoms, &law.mass_at_infinity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    /// Brute-force oracle: scans all breakpoints and a dense rational grid on
    /// [0, 1], returning the least grid-or-breakpoint value that is feasible
    /// and checking that everything below it is infeasible. Independent of
    /// the interval-scan implementation.
    fn oracle(d: &FiniteDist, grid_denom: i64) -> Rational {
        let mut candidates: Vec<Rational> = (0..=grid_denom).map(|k| rat(k, grid_denom)).collect();
        for (p, _) in d.atoms() {
            if let Point::Real(v) = p {
                candidates.push(v.clone());
            }
        }
        candidates.sort();
        candidates.dedup();
        let feasible = |eps: &Rational| d.tail_above(eps) <= *eps;
        let best = candidates
            .iter()
            .find(|eps| feasible(eps))
            .expect("eps = 1 is always feasible")
            .clone();
        for eps in &candidates {
            if *eps < best {
                assert!(!feasible(eps), "oracle scan found a smaller feasible value");
            }
        }
        best
    }

    #[test]
    fn degenerate_distance_gives_its_value() {
        for r in [rat(1, 8), rat(1, 4), rat(2, 5)] {
            let two_r = &r + &r;
            let d = FiniteDist::degenerate(two_r.clone());
            let res = kyfan_of_law(&d).unwrap();
            assert_eq!(res.rho, two_r);
            assert_eq!(res.attained_tail, rat_int(0));
        }
    }

    #[test]
    fn zero_law_gives_zero() {
        let d = FiniteDist::degenerate(rat_int(0));
        let res = kyfan_of_law(&d).unwrap();
        assert_eq!(res.rho, rat_int(0));
        assert_eq!(res.attained_tail, rat_int(0));
    }

    #[test]
    fn interior_tail_intersection() {
        // Frozen from the brute-force oracle: the tail drops to 1/2 at 1/10
        // and the identity line meets it at 1/2 before the next atom at 9/10.
        let d = FiniteDist::on_line(vec![(rat(1, 10), rat(1, 2)), (rat(9, 10), rat(1, 2))]).unwrap();
        let res = kyfan_of_law(&d).unwrap();
        assert_eq!(res.rho, rat(1, 2));
        assert_eq!(res.attained_tail, rat(1, 2));
        assert_eq!(oracle(&d, 200), rat(1, 2));
    }

    #[test]
    fn bernoulli_against_zero_is_half() {
        let x = FiniteDist::bernoulli(rat(1, 2)).unwrap();
        let y = FiniteDist::degenerate(rat_int(0));
        let c = Coupling::product(&x, &y).unwrap();
        let res = kyfan_between(&x, &y, &c).unwrap();
        assert_eq!(res.rho, rat(1, 2));
        assert_eq!(oracle(&c.distance_law().unwrap(), 200), rat(1, 2));
    }

    #[test]
    fn identity_via_diagonal() {
        let x = FiniteDist::on_line(vec![(rat_int(2), rat(1, 3)), (rat_int(5), rat(2, 3))]).unwrap();
        let c = Coupling::diagonal(&x);
        assert_eq!(kyfan_between(&x, &x, &c).unwrap().rho, rat_int(0));
    }

    #[test]
    fn far_apart_degenerates_cap_at_one() {
        let x = FiniteDist::degenerate(rat_int(10));
        let y = FiniteDist::degenerate(rat_int(-10));
        let c = Coupling::product(&x, &y).unwrap();
        assert_eq!(kyfan_between(&x, &y, &c).unwrap().rho, rat_int(1));
    }

    #[test]
    fn matches_oracle_on_breakpoint_edge_cases() {
        // Tail value exactly equal to an atom value.
        let d = FiniteDist::on_line(vec![(rat(1, 2), rat(1, 2)), (rat_int(0), rat(1, 2))]).unwrap();
        let res = kyfan_of_law(&d).unwrap();
        assert_eq!(res.rho, oracle(&d, 512));
        // Mass concentrated just below where the identity line would cross.
        let d2 = FiniteDist::on_line(vec![
            (rat(1, 3), rat(1, 4)),
            (rat(2, 3), rat(1, 4)),
            (rat_int(0), rat(1, 2)),
        ])
        .unwrap();
        assert_eq!(kyfan_of_law(&d2).unwrap().rho, oracle(&d2, 600));
    }

    #[test]
    fn minimality_at_breakpoints() {
        let d = FiniteDist::on_line(vec![
            (rat(1, 10), rat(1, 2)),
            (rat(9, 10), rat(3, 10)),
            (rat_int(0), rat(1, 5)),
        ])
        .unwrap();
        let res = kyfan_of_law(&d).unwrap();
        for (p, _) in d.atoms() {
            if let Point::Real(v) = p {
                if *v < res.rho {
                    assert!(d.tail_above(v) > *v, "tail must exceed eps below rho");
                }
            }
        }
        assert!(res.attained_tail <= res.rho);
    }

    #[test]
    fn limit_law_with_escaping_mass() {
        // All mass escapes: the metric saturates at 1.
        let all = LimitLaw::new(vec![], rat_int(1)).unwrap();
        assert_eq!(kyfan_of_limit_law(&all).unwrap().rho, rat_int(1));
        // Half the mass at zero, half escaping: tail is 1/2 everywhere.
        let half = LimitLaw::new(vec![(rat_int(0), rat(1, 2))], rat(1, 2)).unwrap();
        assert_eq!(kyfan_of_limit_law(&half).unwrap().rho, rat(1, 2));
        // No escaping mass: agrees with the plain law computation.
        let plain = LimitLaw::new(vec![(rat(1, 10), rat(1, 2)), (rat(9, 10), rat(1, 2))], rat_int(0))
            .unwrap();
        assert_eq!(kyfan_of_limit_law(&plain).unwrap().rho, rat(1, 2));
    }

    #[test]
    fn negative_support_rejected() {
        let d = FiniteDist::degenerate(rat_int(-1));
        assert!(matches!(
            kyfan_of_law(&d),
            Err(KyFanError::NegativeSupport)
        ));
    }
}
