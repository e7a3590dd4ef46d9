//! Ideals on the naturals and three-valued membership decisions.
//!
//! The catalog covers the finite ideal, the density-zero ideal, and the
//! harmonic summable ideal, each decided with replayable certificates:
//! counting bounds for density, geometric or p-series tail sums for
//! convergence, contained arithmetic progressions for divergence. A
//! truncation-based semi-decision for exhaustive submeasure ideals is also
//! provided; it can report membership flagged as truncation evidence but
//! never reports non-membership, since a finite ladder proves nothing about
//! the limit.

use super::density::{natural_density, DensityResult};
use super::set::IndexSet;
use super::upset;
use crate::rational::{format_rational, rat_int, rat_pow, Rational};
use num::{One, Zero};
use serde::Serialize;

/// Weight function for a weighted-sum submeasure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightKind {
    /// `w(n) = 1/n`
    Reciprocal,
    /// `w(n) = 1/n^k`
    ReciprocalPow(u32),
    /// `w(n) = p^n`
    Geometric(Rational),
}

impl WeightKind {
    fn weight(&self, n: u64) -> Rational {
        let nq = rat_int(n as i64);
        match self {
            WeightKind::Reciprocal => nq.recip(),
            WeightKind::ReciprocalPow(k) => rat_pow(&nq, u64::from(*k)).recip(),
            WeightKind::Geometric(p) => rat_pow(p, n),
        }
    }
}

/// A lower semicontinuous submeasure evaluated on finite sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubmeasureSpec {
    /// `phi(F) = sum_{n in F} w(n)`
    WeightedSum(WeightKind),
}

impl SubmeasureSpec {
    fn eval_window(&self, set: &IndexSet, lo_exclusive: u64, hi_inclusive: u64) -> Rational {
        let SubmeasureSpec::WeightedSum(w) = self;
        let mut total = Rational::zero();
        for n in (lo_exclusive + 1)..=hi_inclusive {
            if set.contains(n) {
                total += w.weight(n);
            }
        }
        total
    }
}

/// The ideal catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ideal {
    /// Finite subsets.
    Fin,
    /// Subsets of natural density zero.
    Density,
    /// Subsets whose reciprocal sum converges.
    Summable,
    /// Exhaustive ideal of a submeasure, decided only up to truncation.
    ExhTruncated {
        submeasure: SubmeasureSpec,
        depth: u64,
        tolerance: Rational,
    },
}

impl Ideal {
    pub fn exh(submeasure: SubmeasureSpec, depth: u64, tolerance: Rational) -> Self {
        Ideal::ExhTruncated {
            submeasure,
            depth,
            tolerance,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Ideal::Fin => "fin",
            Ideal::Density => "density",
            Ideal::Summable => "summable",
            Ideal::ExhTruncated { .. } => "exh",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    In,
    NotIn,
    Unknown,
}

/// Machine-checkable justification attached to every definite answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// The set is finite with the given extent.
    FiniteSet { members_below: u64 },
    /// The set contains the residue class `residue (mod modulus)` from
    /// `start` on, hence is infinite (and harmonically divergent).
    ContainsResidueClass {
        modulus: u64,
        residue: u64,
        start: u64,
    },
    /// Exact natural density.
    DensityValue { value: Rational },
    /// Rigorous positive lower bound on the density.
    DensityLowerBound { lower: Rational },
    /// Geometric tail: `sum 1/(scale * base^m) = 1/(scale (base-1))`.
    GeometricTail { base: u64, scale: u64, tail_sum: Rational },
    /// p-series tail bound for `degree >= 2`.
    PSeriesTail { scale: u64, degree: u32, bound: Rational },
    /// Membership inherited from a superset/subset/union argument.
    Inherited {
        rule: &'static str,
        inner: Box<Certificate>,
    },
    /// Truncation ladder evidence (`flagged: true` marks a semi-decision).
    TruncationLadder {
        windows: Vec<Rational>,
        flagged: bool,
    },
    /// Textual justification for structural facts.
    Structural(String),
    /// For `Unknown`: names the blocking subproblem.
    Blocked(String),
}

impl Certificate {
    pub fn describe(&self) -> String {
        match self {
            Certificate::FiniteSet { members_below } => {
                format!("finite set, all members below {members_below}")
            }
            Certificate::ContainsResidueClass {
                modulus,
                residue,
                start,
            } => format!(
                "contains the class {residue} (mod {modulus}) from {start} on"
            ),
            Certificate::DensityValue { value } => {
                format!("natural density {}", format_rational(value))
            }
            Certificate::DensityLowerBound { lower } => {
                format!("lower density at least {}", format_rational(lower))
            }
            Certificate::GeometricTail {
                base,
                scale,
                tail_sum,
            } => format!(
                "geometric tail sum over scale {scale} base {base} equals {}",
                format_rational(tail_sum)
            ),
            Certificate::PSeriesTail {
                scale,
                degree,
                bound,
            } => format!(
                "p-series tail of degree {degree}, scale {scale}, bounded by {}",
                format_rational(bound)
            ),
            Certificate::Inherited { rule, inner } => {
                format!("{rule}: {}", inner.describe())
            }
            Certificate::TruncationLadder { windows, flagged } => {
                let vals: Vec<String> = windows.iter().map(format_rational).collect();
                let tag = if *flagged { " [truncation-based]" } else { "" };
                format!("ladder {}{}", vals.join(" -> "), tag)
            }
            Certificate::Structural(s) => s.clone(),
            Certificate::Blocked(s) => format!("blocked on: {s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipVerdict {
    pub answer: Answer,
    pub certificate: Certificate,
}

impl MembershipVerdict {
    fn new(answer: Answer, certificate: Certificate) -> Self {
        MembershipVerdict {
            answer,
            certificate,
        }
    }
}

/// Three-valued finiteness of an index set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Finiteness {
    Finite,
    Infinite,
    Undecided,
}

/// Decides finiteness through the ultimately periodic normal form, the
/// sparse primitives, residue-cycle analysis for sparse-by-periodic
/// intersections, and density lower bounds.
pub fn finiteness(set: &IndexSet) -> Finiteness {
    if let Some(up) = upset::normalize(set) {
        return if up.is_finite() {
            Finiteness::Finite
        } else {
            Finiteness::Infinite
        };
    }
    match set {
        IndexSet::Finite(_) => Finiteness::Finite,
        IndexSet::Powers { .. } | IndexSet::PolyImage { .. } => Finiteness::Infinite,
        IndexSet::Full
        | IndexSet::ArithProg { .. }
        | IndexSet::DyadicValuation { .. } => Finiteness::Infinite,
        IndexSet::TailSolution { eventually_in, .. } => {
            if *eventually_in {
                Finiteness::Infinite
            } else {
                Finiteness::Finite
            }
        }
        IndexSet::Union(a, b) => match (finiteness(a), finiteness(b)) {
            (Finiteness::Finite, Finiteness::Finite) => Finiteness::Finite,
            (Finiteness::Infinite, _) | (_, Finiteness::Infinite) => Finiteness::Infinite,
            _ => Finiteness::Undecided,
        },
        IndexSet::Intersection(a, b) => intersection_finiteness(a, b),
        IndexSet::Difference(a, b) => {
            match (finiteness(a), finiteness(b)) {
                (Finiteness::Finite, _) => Finiteness::Finite,
                (Finiteness::Infinite, Finiteness::Finite) => Finiteness::Infinite,
                _ => {
                    // A positive lower density forces infiniteness.
                    let (lower, _) = natural_density(set).bounds();
                    if lower > Rational::zero() {
                        Finiteness::Infinite
                    } else {
                        Finiteness::Undecided
                    }
                }
            }
        }
        IndexSet::Complement(a) => {
            if finiteness(a) == Finiteness::Finite {
                return Finiteness::Infinite;
            }
            let (_, upper) = natural_density(a).bounds();
            if upper < Rational::one() {
                Finiteness::Infinite
            } else {
                Finiteness::Undecided
            }
        }
    }
}

fn intersection_finiteness(a: &IndexSet, b: &IndexSet) -> Finiteness {
    let fa = finiteness(a);
    let fb = finiteness(b);
    if fa == Finiteness::Finite || fb == Finiteness::Finite {
        return Finiteness::Finite;
    }
    // Sparse primitive against an ultimately periodic set: the residues of
    // the sparse elements are eventually cyclic, so hitting the periodic
    // residue set infinitely often is decidable.
    let whole = IndexSet::intersection(a.clone(), b.clone());
    for (sparse, other) in [(a, b), (b, a)] {
        if let Some(up) = upset::normalize(other) {
            match sparse {
                IndexSet::Powers { base, scale } => {
                    return powers_hits_upset(*base, *scale, &up);
                }
                IndexSet::PolyImage { scale, degree } => {
                    return poly_hits_upset(*scale, *degree, &up);
                }
                _ => {}
            }
        }
    }
    let (lower, _) = natural_density(&whole).bounds();
    if lower > Rational::zero() {
        Finiteness::Infinite
    } else {
        Finiteness::Undecided
    }
}

/// Do infinitely many `scale * base^m` land in the periodic part of `up`?
fn powers_hits_upset(base: u64, scale: u64, up: &upset::UpSet) -> Finiteness {
    let m = up.modulus;
    // Iterate x_t = scale * base^t mod m; the orbit enters a cycle within m
    // steps. Residues hit inside the cycle are hit infinitely often.
    let mut seen: Vec<u64> = Vec::new();
    let mut x = (scale % m) * (base % m) % m;
    let mut steps = 0u64;
    loop {
        if let Some(pos) = seen.iter().position(|r| *r == x) {
            let cycle = &seen[pos..];
            if cycle.iter().any(|r| up.residues.contains(r)) {
                return Finiteness::Infinite;
            }
            return Finiteness::Finite;
        }
        seen.push(x);
        x = x * (base % m) % m;
        steps += 1;
        if steps > m + 2 {
            return Finiteness::Undecided;
        }
    }
}

/// Do infinitely many `scale * t^degree` land in the periodic part of `up`?
fn poly_hits_upset(scale: u64, degree: u32, up: &upset::UpSet) -> Finiteness {
    let m = up.modulus;
    for t in 0..m {
        let mut pow = 1u64 % m;
        for _ in 0..degree {
            pow = pow * (t % m) % m;
        }
        let x = (scale % m) * pow % m;
        if up.residues.contains(&x) {
            return Finiteness::Infinite;
        }
    }
    Finiteness::Finite
}

/// Convergence status of `sum_{n in A} 1/n`.
enum Summability {
    Convergent(Certificate),
    Divergent(Certificate),
    Undecided(String),
}

fn harmonic_summability(set: &IndexSet) -> Summability {
    if let Some(up) = upset::normalize(set) {
        return if up.is_finite() {
            Summability::Convergent(Certificate::FiniteSet {
                members_below: up.start,
            })
        } else {
            let residue = *up.residues.iter().next().expect("nonempty");
            Summability::Divergent(Certificate::ContainsResidueClass {
                modulus: up.modulus,
                residue,
                start: up.start,
            })
        };
    }
    match set {
        IndexSet::Finite(ms) => Summability::Convergent(Certificate::FiniteSet {
            members_below: ms.last().map_or(1, |m| m + 1),
        }),
        IndexSet::Full => Summability::Divergent(Certificate::ContainsResidueClass {
            modulus: 1,
            residue: 0,
            start: 1,
        }),
        IndexSet::ArithProg { stride, offset } => {
            Summability::Divergent(Certificate::ContainsResidueClass {
                modulus: *stride,
                residue: offset % stride,
                start: (*offset).max(1),
            })
        }
        IndexSet::DyadicValuation { v } => Summability::Divergent(Certificate::ContainsResidueClass {
            modulus: 1u64 << (v + 1),
            residue: 1u64 << v,
            start: 1,
        }),
        IndexSet::Powers { base, scale } => {
            // sum_{m >= 1} 1/(scale base^m) = 1 / (scale (base - 1))
            let tail_sum = Rational::new(1.into(), (*scale).into())
                * Rational::new(1.into(), (*base - 1).into());
            Summability::Convergent(Certificate::GeometricTail {
                base: *base,
                scale: *scale,
                tail_sum,
            })
        }
        IndexSet::PolyImage { scale, degree } => {
            // sum_{t >= 1} 1/(scale t^k) <= 2/scale for k >= 2, by the
            // telescoping bound 1/t^2 <= 1/(t(t-1)).
            let bound = Rational::new(2.into(), (*scale).into());
            Summability::Convergent(Certificate::PSeriesTail {
                scale: *scale,
                degree: *degree,
                bound,
            })
        }
        IndexSet::TailSolution { eventually_in, from, .. } => {
            if *eventually_in {
                Summability::Divergent(Certificate::ContainsResidueClass {
                    modulus: 1,
                    residue: 0,
                    start: *from,
                })
            } else {
                Summability::Convergent(Certificate::FiniteSet {
                    members_below: *from,
                })
            }
        }
        IndexSet::Union(a, b) => match (harmonic_summability(a), harmonic_summability(b)) {
            (Summability::Convergent(ca), Summability::Convergent(_)) => {
                Summability::Convergent(Certificate::Inherited {
                    rule: "union of convergent-sum sets",
                    inner: Box::new(ca),
                })
            }
            (Summability::Divergent(c), _) | (_, Summability::Divergent(c)) => {
                Summability::Divergent(Certificate::Inherited {
                    rule: "superset of a divergent-sum set",
                    inner: Box::new(c),
                })
            }
            _ => Summability::Undecided("summability of a union operand".into()),
        },
        IndexSet::Intersection(a, b) => {
            match (harmonic_summability(a), harmonic_summability(b)) {
                (Summability::Convergent(c), _) | (_, Summability::Convergent(c)) => {
                    Summability::Convergent(Certificate::Inherited {
                        rule: "subset of a convergent-sum set",
                        inner: Box::new(c),
                    })
                }
                _ => Summability::Undecided("summability of an intersection".into()),
            }
        }
        IndexSet::Difference(a, b) => {
            match (harmonic_summability(a), harmonic_summability(b)) {
                (Summability::Convergent(c), _) => Summability::Convergent(Certificate::Inherited {
                    rule: "subset of a convergent-sum set",
                    inner: Box::new(c),
                }),
                (Summability::Divergent(ca), Summability::Convergent(_)) => {
                    Summability::Divergent(Certificate::Inherited {
                        rule: "divergent minus convergent",
                        inner: Box::new(ca),
                    })
                }
                _ => Summability::Undecided("summability of a difference".into()),
            }
        }
        IndexSet::Complement(a) => match harmonic_summability(a) {
            Summability::Convergent(c) => Summability::Divergent(Certificate::Inherited {
                rule: "complement of a convergent-sum set",
                inner: Box::new(c),
            }),
            _ => Summability::Undecided("summability of a complement".into()),
        },
    }
}

/// Three-valued ideal membership with certificates.
pub fn ideal_member(ideal: &Ideal, set: &IndexSet) -> MembershipVerdict {
    match ideal {
        Ideal::Fin => match finiteness(set) {
            Finiteness::Finite => MembershipVerdict::new(
                Answer::In,
                Certificate::Structural("finite by construction".into()),
            ),
            Finiteness::Infinite => MembershipVerdict::new(
                Answer::NotIn,
                Certificate::Structural("infinite by construction".into()),
            ),
            Finiteness::Undecided => MembershipVerdict::new(
                Answer::Unknown,
                Certificate::Blocked("finiteness of a sparse intersection".into()),
            ),
        },
        Ideal::Density => match natural_density(set) {
            DensityResult::Exact(q) => {
                if q.is_zero() {
                    MembershipVerdict::new(Answer::In, Certificate::DensityValue { value: q })
                } else {
                    MembershipVerdict::new(
                        Answer::NotIn,
                        Certificate::DensityValue { value: q },
                    )
                }
            }
            DensityResult::Interval { lower, upper } => {
                if upper.is_zero() {
                    MembershipVerdict::new(
                        Answer::In,
                        Certificate::DensityValue {
                            value: Rational::zero(),
                        },
                    )
                } else if lower > Rational::zero() {
                    MembershipVerdict::new(
                        Answer::NotIn,
                        Certificate::DensityLowerBound { lower },
                    )
                } else {
                    MembershipVerdict::new(
                        Answer::Unknown,
                        Certificate::Blocked("density bracket straddles zero".into()),
                    )
                }
            }
            DensityResult::Unknown => MembershipVerdict::new(
                Answer::Unknown,
                Certificate::Blocked("no rigorous density bound".into()),
            ),
        },
        Ideal::Summable => match harmonic_summability(set) {
            Summability::Convergent(c) => MembershipVerdict::new(Answer::In, c),
            Summability::Divergent(c) => MembershipVerdict::new(Answer::NotIn, c),
            Summability::Undecided(why) => {
                MembershipVerdict::new(Answer::Unknown, Certificate::Blocked(why))
            }
        },
        Ideal::ExhTruncated {
            submeasure,
            depth,
            tolerance,
        } => {
            // Structurally finite sets have eventually empty tails.
            if finiteness(set) == Finiteness::Finite {
                return MembershipVerdict::new(
                    Answer::In,
                    Certificate::Structural("finite set: tail submeasure vanishes".into()),
                );
            }
            // Truncated tails phi(A ∩ (t, horizon]) on a ladder of cuts t;
            // these are nonincreasing by construction, and the certification
            // asks the deepest one to fall within tolerance.
            let depth = (*depth).max(1);
            let steps = 8u64;
            let horizon = steps * depth;
            let mut windows = Vec::with_capacity(steps as usize);
            for i in 0..steps {
                let t = i * depth;
                windows.push(submeasure.eval_window(set, t, horizon));
            }
            let monotone = windows.windows(2).all(|w| w[1] <= w[0]);
            let last_small = windows.last().map_or(false, |w| w <= tolerance);
            if monotone && last_small {
                MembershipVerdict::new(
                    Answer::In,
                    Certificate::TruncationLadder {
                        windows,
                        flagged: true,
                    },
                )
            } else {
                MembershipVerdict::new(
                    Answer::Unknown,
                    Certificate::TruncationLadder {
                        windows,
                        flagged: false,
                    },
                )
            }
        }
    }
}

/// Membership of `set` in the dual filter of `ideal`: whether the complement
/// belongs to the ideal.
pub fn dual_filter_member(ideal: &Ideal, set: &IndexSet) -> MembershipVerdict {
    ideal_member(ideal, &IndexSet::complement(set.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn summable_accepts_powers_with_geometric_certificate() {
        let v = ideal_member(&Ideal::Summable, &IndexSet::powers(2, 1));
        assert_eq!(v.answer, Answer::In);
        match v.certificate {
            Certificate::GeometricTail { tail_sum, .. } => assert_eq!(tail_sum, rat_int(1)),
            other => panic!("expected a geometric certificate, got {other:?}"),
        }
    }

    #[test]
    fn density_accepts_squares() {
        let v = ideal_member(&Ideal::Density, &IndexSet::poly_image(1, 2));
        assert_eq!(v.answer, Answer::In);
    }

    #[test]
    fn fin_rejects_odd_numbers() {
        let v = ideal_member(&Ideal::Fin, &IndexSet::arith_prog(2, 1));
        assert_eq!(v.answer, Answer::NotIn);
    }

    #[test]
    fn summable_rejects_dyadic_classes() {
        for v in 0..6 {
            let m = ideal_member(&Ideal::Summable, &IndexSet::dyadic(v));
            assert_eq!(m.answer, Answer::NotIn);
        }
    }

    #[test]
    fn dual_filter_examples() {
        // Complement of the squares has density 1, so the squares' complement
        // is in the dual filter of the density ideal.
        let v = dual_filter_member(&Ideal::Density, &IndexSet::complement(IndexSet::poly_image(1, 2)));
        assert_eq!(v.answer, Answer::In);
        let v = dual_filter_member(&Ideal::Fin, &IndexSet::Full);
        assert_eq!(v.answer, Answer::In);
        // The odd numbers have even complement of density 1/2.
        let v = dual_filter_member(&Ideal::Density, &IndexSet::arith_prog(2, 1));
        assert_eq!(v.answer, Answer::NotIn);
    }

    #[test]
    fn properness_and_admissibility_for_the_catalog() {
        let catalog = [Ideal::Fin, Ideal::Density, Ideal::Summable];
        for ideal in &catalog {
            assert_eq!(
                ideal_member(ideal, &IndexSet::Full).answer,
                Answer::NotIn,
                "{} must be proper",
                ideal.name()
            );
            for t in [1u64, 2, 17, 1024] {
                assert_eq!(
                    ideal_member(ideal, &IndexSet::finite(vec![t])).answer,
                    Answer::In,
                    "{} must be admissible",
                    ideal.name()
                );
            }
        }
    }

    #[test]
    fn subset_monotonicity_never_flips_to_not_in() {
        let catalog = [Ideal::Fin, Ideal::Density, Ideal::Summable];
        let members = [
            IndexSet::powers(2, 1),
            IndexSet::poly_image(1, 2),
            IndexSet::finite(vec![1, 2, 3]),
        ];
        let others = [
            IndexSet::arith_prog(2, 1),
            IndexSet::dyadic(1),
            IndexSet::Full,
        ];
        for ideal in &catalog {
            for a in &members {
                if ideal_member(ideal, a).answer != Answer::In {
                    continue;
                }
                for b in &others {
                    let sub = IndexSet::intersection(a.clone(), b.clone());
                    let v = ideal_member(ideal, &sub);
                    assert_ne!(
                        v.answer,
                        Answer::NotIn,
                        "structural subset of a member reported NotIn under {}",
                        ideal.name()
                    );
                    let diff = IndexSet::difference(a.clone(), b.clone());
                    assert_ne!(
                        ideal_member(ideal, &diff).answer,
                        Answer::NotIn,
                        "difference subset reported NotIn under {}",
                        ideal.name()
                    );
                }
                // Union of members stays in.
                for b in &members {
                    if ideal_member(ideal, b).answer == Answer::In {
                        let u = IndexSet::union(a.clone(), b.clone());
                        assert_eq!(ideal_member(ideal, &u).answer, Answer::In);
                    }
                }
            }
        }
    }

    #[test]
    fn complement_of_summable_member_diverges() {
        let v = ideal_member(
            &Ideal::Summable,
            &IndexSet::complement(IndexSet::powers(2, 1)),
        );
        assert_eq!(v.answer, Answer::NotIn);
    }

    #[test]
    fn powers_inside_periodic_sets() {
        // Powers of two are eventually 0 mod 4: infinitely many in ap(4,0),
        // none in ap(2,1).
        let inter = IndexSet::intersection(IndexSet::powers(2, 1), IndexSet::arith_prog(4, 0));
        assert_eq!(ideal_member(&Ideal::Fin, &inter).answer, Answer::NotIn);
        let empty = IndexSet::intersection(IndexSet::powers(2, 1), IndexSet::arith_prog(2, 1));
        assert_eq!(ideal_member(&Ideal::Fin, &empty).answer, Answer::In);
        // Squares hit every residue class mod 3 except 2.
        let sq_two_mod3 = IndexSet::intersection(
            IndexSet::poly_image(1, 2),
            IndexSet::arith_prog(3, 2),
        );
        assert_eq!(ideal_member(&Ideal::Fin, &sq_two_mod3).answer, Answer::In);
        let sq_one_mod3 =
            IndexSet::intersection(IndexSet::poly_image(1, 2), IndexSet::arith_prog(3, 1));
        assert_eq!(ideal_member(&Ideal::Fin, &sq_one_mod3).answer, Answer::NotIn);
    }

    #[test]
    fn sparse_intersection_is_honestly_unknown() {
        let hard = IndexSet::intersection(IndexSet::powers(2, 1), IndexSet::poly_image(1, 3));
        assert_eq!(ideal_member(&Ideal::Fin, &hard).answer, Answer::Unknown);
    }

    #[test]
    fn exh_truncated_flags_memberships_and_never_rejects() {
        let exh = Ideal::exh(
            SubmeasureSpec::WeightedSum(WeightKind::ReciprocalPow(2)),
            64,
            rat(1, 100),
        );
        // A geometric set: windows vanish quickly.
        let v = ideal_member(&exh, &IndexSet::powers(2, 1));
        assert_eq!(v.answer, Answer::In);
        // The full set under 1/n weights does not certify within a strict
        // tolerance.
        let strict = Ideal::exh(
            SubmeasureSpec::WeightedSum(WeightKind::Reciprocal),
            32,
            rat(1, 1_000_000),
        );
        let v = ideal_member(&strict, &IndexSet::Full);
        assert_eq!(v.answer, Answer::Unknown);
        // Never NotIn, even for the full set.
        assert_ne!(v.answer, Answer::NotIn);
    }

    #[test]
    fn divergence_certificates_replay() {
        let v = ideal_member(&Ideal::Summable, &IndexSet::dyadic(2));
        match v.certificate {
            Certificate::ContainsResidueClass {
                modulus,
                residue,
                start,
            } => {
                // Replay: the first few members of the class really belong.
                let set = IndexSet::dyadic(2);
                let mut n = start;
                while n % modulus != residue {
                    n += 1;
                }
                for k in 0..50u64 {
                    assert!(set.contains(n + k * modulus));
                }
            }
            other => panic!("expected a residue-class certificate, got {other:?}"),
        }
    }
}
