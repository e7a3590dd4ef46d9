//! Finite probes of the structural facts about limit and cluster sets:
//! the diameter bound, the two-sided sandwich, equivalence under
//! ideal-almost-sure modification, closedness along declared families, and
//! the Ky Fan route to the zero-roughness verdict.

use super::engine::{
    check_rough_limit, classify_cluster, validate_target, AnalysisError, CouplingSpec, Target,
};
use super::types::{Verdict, VerdictAnswer};
use crate::coupling::Coupling;
use crate::dist::DistError;
use crate::index::{ideal_member, Answer, Ideal, IndexSet};
use crate::kyfan::{kyfan_of_law, kyfan_of_limit_law, KyFanError, LimitLaw};
use crate::rational::Rational;
use crate::seq::piece::{PiecewiseSequence, SeqError};
use crate::seq::profile::{build_pairs, DistanceLimit, PieceCoupling};
use crate::space::Point;
use num::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProbeError {
    #[error("the sequence is not ideal-convergent in probability to the center")]
    HypothesisNotEstablished,
    #[error("member {index} failed rough-limit verification")]
    UnverifiedMember { index: usize },
    #[error("modification set is not inside the ideal")]
    NotIdealAlmostSure,
    #[error("sequences differ at index {n} outside of the declared modification set")]
    DiffersOutsideDeclared { n: u64 },
    #[error("family distances to the declared limit are not monotonically vanishing")]
    NotConvergentFamily,
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    KyFan(#[from] KyFanError),
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error(transparent)]
    Dist(#[from] DistError),
}

/// One candidate for the sandwich probe: a target with its coupling to the
/// sequence and a coupling to the center.
#[derive(Debug, Clone)]
pub struct SandwichCandidate {
    pub name: String,
    pub target: Target,
    pub to_center: Coupling,
}

#[derive(Debug, Clone)]
pub struct SandwichRow {
    pub name: String,
    /// `P(d(center, Y) >= r) = 0`
    pub in_theta: bool,
    pub in_limit: Verdict,
    /// `rho(center, Y) <= r`
    pub in_ball: bool,
    pub rho: Rational,
    /// Definitive violation of one of the two inclusions.
    pub fatal: bool,
    pub note: String,
}

#[derive(Debug, Clone)]
pub struct SandwichReport {
    pub rows: Vec<SandwichRow>,
    pub ok: bool,
}

/// Probes the two-sided containment of the rough limit set between the
/// near-null neighborhood of the center and its closed Ky Fan ball.
pub fn sandwich_probe(
    seq: &PiecewiseSequence,
    center: &Target,
    r: &Rational,
    ideal: &Ideal,
    candidates: &[SandwichCandidate],
) -> Result<SandwichReport, ProbeError> {
    let pre = check_rough_limit(seq, center, &Rational::zero(), ideal)?;
    if pre.answer != VerdictAnswer::Yes {
        return Err(ProbeError::HypothesisNotEstablished);
    }
    let mut rows = Vec::new();
    let mut ok = true;
    for cand in candidates {
        let dlaw = cand.to_center.distance_law()?;
        // P(d >= r) = P(d > r) + P(d = r)
        let mass_at_least_r = dlaw.tail_above(r) + dlaw.mass_at(&Point::Real(r.clone()));
        let in_theta = mass_at_least_r.is_zero();
        let in_limit = check_rough_limit(seq, &cand.target, r, ideal)?;
        let rho = kyfan_of_law(&dlaw)?.rho;
        let in_ball = rho <= *r;
        let mut fatal = false;
        let mut note = String::new();
        if in_theta && in_limit.answer == VerdictAnswer::No {
            fatal = true;
            note = "near-null neighborhood member rejected by the rough limit set".into();
        }
        if in_limit.answer == VerdictAnswer::Yes && !in_ball {
            fatal = true;
            note = "rough limit member escapes the closed Ky Fan ball".into();
        }
        if in_limit.answer == VerdictAnswer::Unknown {
            note = "limit membership undecided; inclusion not confirmed".into();
        }
        ok &= !fatal;
        rows.push(SandwichRow {
            name: cand.name.clone(),
            in_theta,
            in_limit,
            in_ball,
            rho,
            fatal,
            note,
        });
    }
    Ok(SandwichReport { rows, ok })
}

#[derive(Debug, Clone)]
pub struct DiameterReport {
    pub max_rho: Rational,
    pub bound: Rational,
    pub pairwise: Vec<(usize, usize, Rational)>,
    pub within_bound: bool,
}

/// Verifies each member against the sequence and computes the maximal
/// pairwise Ky Fan distance, asserting the diameter bound `min(1, 2r)`.
pub fn diameter_probe(
    seq: &PiecewiseSequence,
    r: &Rational,
    ideal: &Ideal,
    members: &[Target],
    pair_couplings: &[(usize, usize, Coupling)],
) -> Result<DiameterReport, ProbeError> {
    for (index, member) in members.iter().enumerate() {
        let v = check_rough_limit(seq, member, r, ideal)?;
        if v.answer != VerdictAnswer::Yes {
            return Err(ProbeError::UnverifiedMember { index });
        }
    }
    let mut pairwise = Vec::new();
    let mut max_rho = Rational::zero();
    for i in 0..members.len() {
        for j in (i + 1)..members.len() {
            let coupling = pair_couplings
                .iter()
                .find(|(a, b, _)| (*a, *b) == (i, j) || (*a, *b) == (j, i))
                .map(|(_, _, c)| c.clone())
                .map_or_else(
                    || Coupling::product(&members[i].dist, &members[j].dist),
                    Ok,
                )?;
            let rho = kyfan_of_law(&coupling.distance_law()?)?.rho;
            if rho > max_rho {
                max_rho = rho.clone();
            }
            pairwise.push((i, j, rho));
        }
    }
    let two_r = r + r;
    let bound = if two_r > Rational::one() {
        Rational::one()
    } else {
        two_r
    };
    let within_bound = max_rho <= bound;
    Ok(DiameterReport {
        max_rho,
        bound,
        pairwise,
        within_bound,
    })
}

#[derive(Debug, Clone)]
pub struct IasReport {
    pub limit_agree: bool,
    pub cluster_agree: bool,
    pub left_limit: Verdict,
    pub right_limit: Verdict,
    pub left_delta_star: Option<Rational>,
    pub right_delta_star: Option<Rational>,
}

/// Two sequences agreeing off an ideal modification set must produce the
/// same limit and cluster classifications.
pub fn ias_equivalence_probe(
    seq_x: &PiecewiseSequence,
    seq_y: &PiecewiseSequence,
    ideal: &Ideal,
    target: &Target,
    r: &Rational,
    modified_on: &IndexSet,
) -> Result<IasReport, ProbeError> {
    let m = ideal_member(ideal, modified_on);
    if m.answer != Answer::In {
        return Err(ProbeError::NotIdealAlmostSure);
    }
    for n in 1..=2_000u64 {
        if modified_on.contains(n) {
            continue;
        }
        if seq_x.law_at(n)? != seq_y.law_at(n)? {
            return Err(ProbeError::DiffersOutsideDeclared { n });
        }
    }
    let left_limit = check_rough_limit(seq_x, target, r, ideal)?;
    let right_limit = check_rough_limit(seq_y, target, r, ideal)?;
    let left_cluster = classify_cluster(seq_x, target, r, ideal)?;
    let right_cluster = classify_cluster(seq_y, target, r, ideal)?;
    let cluster_agree = left_cluster.limit_point.answer == right_cluster.limit_point.answer
        && left_cluster.strong_cluster.answer == right_cluster.strong_cluster.answer
        && left_cluster.weak_cluster.answer == right_cluster.weak_cluster.answer
        && left_cluster.delta_star_sup == right_cluster.delta_star_sup;
    Ok(IasReport {
        limit_agree: left_limit.answer == right_limit.answer,
        cluster_agree,
        left_limit,
        right_limit,
        left_delta_star: left_cluster.delta_star_sup,
        right_delta_star: right_cluster.delta_star_sup,
    })
}

/// One member of a closedness family: a target plus its coupling to the
/// declared limit.
#[derive(Debug, Clone)]
pub struct ClosednessMember {
    pub name: String,
    pub target: Target,
    pub to_limit: Coupling,
}

#[derive(Debug, Clone)]
pub struct ClosednessReport {
    pub member_rhos: Vec<Rational>,
    pub members_limit: Vec<VerdictAnswer>,
    pub members_strong: Vec<VerdictAnswer>,
    pub members_weak: Vec<VerdictAnswer>,
    pub member_delta_stars: Vec<Option<Rational>>,
    pub limit_inherited: Option<bool>,
    pub strong_inherited: Option<bool>,
    pub weak_inherited: Option<bool>,
    pub z_weak: VerdictAnswer,
    pub z_delta_star: Option<Rational>,
    pub ok: bool,
}

/// Probes closedness along a declared family converging to `z` in the
/// Ky Fan metric. Limit-set and strong-cluster membership must pass to the
/// limit; weak-cluster membership is asserted only under a declared uniform
/// lower bound on the members' cluster constants.
pub fn closedness_probe(
    seq: &PiecewiseSequence,
    r: &Rational,
    ideal: &Ideal,
    family: &[ClosednessMember],
    z: &Target,
    uniform_delta_lower: Option<Rational>,
) -> Result<ClosednessReport, ProbeError> {
    let mut member_rhos = Vec::new();
    for member in family {
        let rho = kyfan_of_law(&member.to_limit.distance_law()?)?.rho;
        member_rhos.push(rho);
    }
    let vanishing = member_rhos.windows(2).all(|w| w[1] <= w[0]);
    if !vanishing {
        return Err(ProbeError::NotConvergentFamily);
    }
    let mut members_limit = Vec::new();
    let mut members_strong = Vec::new();
    let mut members_weak = Vec::new();
    let mut member_delta_stars = Vec::new();
    for member in family {
        let lim = check_rough_limit(seq, &member.target, r, ideal)?;
        let cluster = classify_cluster(seq, &member.target, r, ideal)?;
        members_limit.push(lim.answer);
        members_strong.push(cluster.strong_cluster.answer);
        members_weak.push(cluster.weak_cluster.answer);
        member_delta_stars.push(cluster.delta_star_sup);
    }
    let z_lim = check_rough_limit(seq, z, r, ideal)?;
    let z_cluster = classify_cluster(seq, z, r, ideal)?;
    let mut ok = true;

    let all_yes = |v: &[VerdictAnswer]| v.iter().all(|a| *a == VerdictAnswer::Yes);
    let limit_inherited = if all_yes(&members_limit) {
        let inherited = z_lim.answer == VerdictAnswer::Yes;
        ok &= inherited;
        Some(inherited)
    } else {
        None
    };
    let strong_inherited = if all_yes(&members_strong) {
        let inherited = z_cluster.strong_cluster.answer == VerdictAnswer::Yes;
        ok &= inherited;
        Some(inherited)
    } else {
        None
    };
    let weak_inherited = match &uniform_delta_lower {
        Some(bound) => {
            let uniform = member_delta_stars
                .iter()
                .all(|d| d.as_ref().map_or(false, |v| v >= bound));
            if all_yes(&members_weak) && uniform {
                let inherited = z_cluster.weak_cluster.answer == VerdictAnswer::Yes;
                ok &= inherited;
                Some(inherited)
            } else {
                ok = false;
                Some(false)
            }
        }
        None => None,
    };
    Ok(ClosednessReport {
        member_rhos,
        members_limit,
        members_strong,
        members_weak,
        member_delta_stars,
        limit_inherited,
        strong_inherited,
        weak_inherited,
        z_weak: z_cluster.weak_cluster.answer,
        z_delta_star: z_cluster.delta_star_sup,
        ok,
    })
}

#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub probability_route: VerdictAnswer,
    pub rho_route: VerdictAnswer,
    pub agree: bool,
}

/// Zero-roughness verdict through the Ky Fan metric: the sequence converges
/// ideally in probability iff the Ky Fan distances to the target converge
/// ideally to zero. The route computes, for every non-ideal piece, the
/// Ky Fan value of the limiting distance law and requires it to vanish.
pub fn rho_route_verdict(
    seq: &PiecewiseSequence,
    target: &Target,
    ideal: &Ideal,
) -> Result<VerdictAnswer, ProbeError> {
    validate_target(seq, target)?;
    let atoms: Vec<(Rational, Rational)> = target
        .dist
        .atoms()
        .iter()
        .map(|(p, m)| match p {
            Point::Real(v) => Ok((v.clone(), m.clone())),
            Point::Label(_) => Err(AnalysisError::TargetNotOnLine),
        })
        .collect::<Result<_, _>>()?;
    let mut unknown = false;
    for (i, piece) in seq.pieces().iter().enumerate() {
        let membership = ideal_member(ideal, &piece.set);
        if membership.answer == Answer::In {
            continue;
        }
        let coupling = match &target.coupling {
            CouplingSpec::Product => PieceCoupling::Product,
            CouplingSpec::SinglePieceJoint(t) => {
                debug_assert_eq!(i, 0);
                PieceCoupling::Joint(t.clone())
            }
        };
        let pairs = build_pairs(&piece.atoms, &atoms, &coupling, None)?;
        let rho_limit = limiting_rho(&pairs.iter().map(pair_limit).collect::<Vec<_>>())?;
        if !rho_limit.is_zero() {
            if membership.answer == Answer::NotIn {
                return Ok(VerdictAnswer::No);
            }
            unknown = true;
        }
    }
    if let Some(fam) = seq.family() {
        // A family rejection needs the member sets certified outside the
        // ideal, mirroring the probability route: every fixed piece must be
        // inside the ideal for the dyadic classes to stay non-ideal after
        // carving.
        let members_not_in = !matches!(ideal, Ideal::ExhTruncated { .. })
            && seq
                .pieces()
                .iter()
                .all(|p| ideal_member(ideal, &p.set).answer == Answer::In);
        let mut member_bad = false;
        // Member-wise: the limiting law at member j must be the point mass
        // at zero for every j. Within the grammar a member distance function
        // that vanishes at two distinct members is identically |y|, so
        // scanning two members plus the j-limit decides all of them.
        for j in [1u64, 2, 3, 64] {
            let pairs = build_pairs(&fam.atoms, &atoms, &PieceCoupling::Product, Some(j))?;
            let rho_limit = limiting_rho(&pairs.iter().map(pair_limit).collect::<Vec<_>>())?;
            if !rho_limit.is_zero() {
                member_bad = true;
            }
        }
        for (value, prob) in &fam.atoms {
            if prob.limit().is_zero() {
                continue;
            }
            for (y, ym) in &atoms {
                if ym.is_zero() {
                    continue;
                }
                let limit_in_j = match value {
                    crate::seq::valuefn::ValueFn::IndexedConst { .. } => Some(y.abs()),
                    other => match other.limit(None).map_err(SeqError::from)? {
                        crate::seq::valuefn::ValueLimit::Finite(l) => Some((l - y).abs()),
                        _ => None,
                    },
                };
                if limit_in_j != Some(Rational::zero()) {
                    member_bad = true;
                }
            }
        }
        if member_bad {
            return Ok(if members_not_in {
                VerdictAnswer::No
            } else {
                VerdictAnswer::Unknown
            });
        }
    }
    Ok(if unknown {
        VerdictAnswer::Unknown
    } else {
        VerdictAnswer::Yes
    })
}

fn pair_limit(p: &crate::seq::profile::PairForm) -> (Option<Rational>, Rational) {
    match p.dist.limit() {
        DistanceLimit::Finite(l) => (Some(l), p.mass_limit.clone()),
        DistanceLimit::Infinite => (None, p.mass_limit.clone()),
    }
}

/// Ky Fan value of the limiting distance law described by pair limits.
fn limiting_rho(pairs: &[(Option<Rational>, Rational)]) -> Result<Rational, ProbeError> {
    let mut finite = Vec::new();
    let mut escaping = Rational::zero();
    for (limit, mass) in pairs {
        match limit {
            Some(l) => finite.push((l.clone(), mass.clone())),
            None => escaping += mass,
        }
    }
    let law = LimitLaw::new(finite, escaping)?;
    Ok(kyfan_of_limit_law(&law)?.rho)
}

/// Compares the probability-route and Ky Fan-route verdicts at roughness 0.
pub fn prop_equivalence(
    seq: &PiecewiseSequence,
    target: &Target,
    ideal: &Ideal,
) -> Result<EquivalenceReport, ProbeError> {
    let probability = check_rough_limit(seq, target, &Rational::zero(), ideal)?.answer;
    let rho = rho_route_verdict(seq, target, ideal)?;
    Ok(EquivalenceReport {
        agree: probability == rho,
        probability_route: probability,
        rho_route: rho,
    })
}

/// Re-evaluates a rough-limit rejection witness: the named configuration
/// must reproduce a limiting exceedance strictly above the witness level.
pub fn replay_limit_witness(
    seq: &PiecewiseSequence,
    target: &Target,
    r: &Rational,
    witness: &super::types::Witness,
) -> Result<bool, ProbeError> {
    // The witness names a piece and pins (epsilon, delta, exceedance limit);
    // replay recomputes the symbolic exceedance limit on that piece and
    // checks that it reproduces the recorded limit and stays above delta.
    let atoms: Vec<(Rational, Rational)> = target
        .dist
        .atoms()
        .iter()
        .filter_map(|(p, m)| match p {
            Point::Real(v) => Some((v.clone(), m.clone())),
            Point::Label(_) => None,
        })
        .collect();
    for (i, piece) in seq.pieces().iter().enumerate() {
        if format!("{}", piece.set) != witness.piece {
            continue;
        }
        let coupling = match &target.coupling {
            CouplingSpec::Product => PieceCoupling::Product,
            CouplingSpec::SinglePieceJoint(t) => {
                debug_assert_eq!(i, 0);
                PieceCoupling::Joint(t.clone())
            }
        };
        let pairs = build_pairs(&piece.atoms, &atoms, &coupling, None)?;
        let profile = crate::seq::profile::MassProfile::new(&pairs, r.clone());
        let e = profile.exceedance_limit_at(&witness.epsilon);
        return Ok(e == witness.exceedance_limit && e > witness.delta);
    }
    if let Some(fam) = seq.family() {
        if let Some(j) = witness
            .piece
            .strip_prefix("family member j=")
            .and_then(|rest| rest.split_whitespace().next())
            .and_then(|tok| tok.parse::<u64>().ok())
        {
            let pairs = build_pairs(&fam.atoms, &atoms, &PieceCoupling::Product, Some(j))?;
            let profile = crate::seq::profile::MassProfile::new(&pairs, r.clone());
            let e = profile.exceedance_limit_at(&witness.epsilon);
            return Ok(e == witness.exceedance_limit && e > witness.delta);
        }
    }
    Ok(false)
}

/// Ky Fan distance of two point masses: `min(|a-b|, 1)`.
pub fn degenerate_rho(a: &Rational, b: &Rational) -> Rational {
    let d = (a - b).abs();
    if d > Rational::one() {
        Rational::one()
    } else {
        d
    }
}
