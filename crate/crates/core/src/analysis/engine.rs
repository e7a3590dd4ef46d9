//! Core decision engine: piece analyses and the convergence/cluster
//! procedures.

use super::types::{ClusterReport, PieceDatum, Verdict, Witness};
use crate::dist::FiniteDist;
use crate::index::{ideal_member, Answer, Ideal, MembershipVerdict};
use crate::rational::{format_rational, rat_int, Rational};
use crate::seq::decay::Sign;
use crate::seq::piece::{PiecewiseSequence, SeqError};
use crate::seq::probfn::ProbFn;
use crate::seq::profile::{
    build_pairs, exceedance_fn, indexed_within, DistanceLimit, Exceedance, JSet, JointTable,
    MassProfile, PairForm, PieceCoupling,
};
use crate::seq::valuefn::{ValueFn, ValueLimit};
use crate::space::Point;
use num::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("target law must live on the rational line")]
    TargetNotOnLine,
    #[error("explicit joint couplings require a single-piece sequence without a family")]
    JointNeedsSinglePiece,
    #[error("roughness degree must be nonnegative")]
    NegativeRoughness,
    #[error(transparent)]
    Seq(#[from] SeqError),
}

/// How the sequence couples to the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CouplingSpec {
    /// Product coupling on every piece.
    Product,
    /// Explicit joint table for the unique piece of a one-piece sequence.
    SinglePieceJoint(JointTable),
}

/// A target law together with its declared coupling to the sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Target {
    pub dist: FiniteDist,
    pub coupling: CouplingSpec,
}

impl Target {
    pub fn product(dist: FiniteDist) -> Self {
        Target {
            dist,
            coupling: CouplingSpec::Product,
        }
    }

    pub fn coupling_description(&self) -> String {
        match &self.coupling {
            CouplingSpec::Product => "independent".to_string(),
            CouplingSpec::SinglePieceJoint(t) => {
                format!("explicit joint ({} cells)", t.entries.len())
            }
        }
    }
}

/// Extracts the target's atoms as rational (value, mass) pairs.
fn target_atoms(target: &FiniteDist) -> Result<Vec<(Rational, Rational)>, AnalysisError> {
    target
        .atoms()
        .iter()
        .map(|(p, m)| match p {
            Point::Real(v) => Ok((v.clone(), m.clone())),
            Point::Label(_) => Err(AnalysisError::TargetNotOnLine),
        })
        .collect()
}

/// Validates a target's coupling against the sequence shape.
pub fn validate_target(seq: &PiecewiseSequence, target: &Target) -> Result<(), AnalysisError> {
    let atoms = target_atoms(&target.dist)?;
    match &target.coupling {
        CouplingSpec::Product => Ok(()),
        CouplingSpec::SinglePieceJoint(table) => {
            if seq.pieces().len() != 1 || seq.family().is_some() {
                return Err(AnalysisError::JointNeedsSinglePiece);
            }
            let masses: Vec<Rational> = atoms.iter().map(|(_, m)| m.clone()).collect();
            table
                .validate(&seq.pieces()[0].atoms, &masses)
                .map_err(AnalysisError::from)
        }
    }
}

fn piece_coupling(target: &Target, piece_index: usize) -> PieceCoupling {
    match &target.coupling {
        CouplingSpec::Product => PieceCoupling::Product,
        CouplingSpec::SinglePieceJoint(table) => {
            debug_assert_eq!(piece_index, 0);
            PieceCoupling::Joint(table.clone())
        }
    }
}

/// Analysis data of one fixed piece at roughness `r`.
struct PieceAnalysis {
    name: String,
    membership: MembershipVerdict,
    pairs: Vec<PairForm>,
    profile: MassProfile,
}

impl PieceAnalysis {
    fn datum(&self) -> PieceDatum {
        PieceDatum {
            piece: self.name.clone(),
            membership: self.membership.answer,
            membership_certificate: self.membership.certificate.describe(),
            c_plus: self.profile.c_plus(),
        }
    }

    /// Witness for a piece whose limiting mass does not fully enter the
    /// closed `r`-ball: a radius excess separating the nearest excluded
    /// limit, and half the escaping mass as the level.
    fn witness(&self, r: &Rational) -> Witness {
        let mut nearest: Option<Rational> = None;
        for p in &self.pairs {
            if p.mass_limit.is_zero() {
                continue;
            }
            if let DistanceLimit::Finite(l) = p.dist.limit() {
                if l > *r {
                    let gap = &l - r;
                    nearest = Some(match nearest {
                        Some(g) => g.min(gap),
                        None => gap,
                    });
                }
            }
        }
        let epsilon = nearest.map_or_else(|| rat_int(1), |g| g / rat_int(2));
        let exceedance_limit = self.profile.exceedance_limit_at(&epsilon);
        Witness {
            delta: &exceedance_limit / rat_int(2),
            epsilon,
            piece: self.name.clone(),
            exceedance_limit,
            membership_certificate: self.membership.certificate.describe(),
        }
    }
}

/// Distance behavior of a family pair as the member parameter varies.
#[derive(Debug, Clone)]
enum FamilyDist {
    /// Distance limit independent of the member (None = divergent).
    Fixed(Option<Rational>),
    /// Indexed constant value: distance `|coeff/(j+shift) - y|` exactly.
    Indexed {
        coeff: Rational,
        shift: u64,
        y: Rational,
    },
}

#[derive(Debug, Clone)]
struct FamilyPair {
    mass_limit: Rational,
    dist: FamilyDist,
}

impl FamilyPair {
    /// Distance limit (in n) at member `j`.
    fn limit_at(&self, j: u64) -> Option<Rational> {
        match &self.dist {
            FamilyDist::Fixed(l) => l.clone(),
            FamilyDist::Indexed { coeff, shift, y } => {
                let v = coeff / Rational::from_integer((j + shift).into());
                Some((v - y).abs())
            }
        }
    }

    /// Limit of the member distances as `j` grows.
    fn limit_in_j(&self) -> Option<Rational> {
        match &self.dist {
            FamilyDist::Fixed(l) => l.clone(),
            FamilyDist::Indexed { y, .. } => Some(y.abs()),
        }
    }

    /// Members whose distance limit is within `bound` (closed comparison).
    fn members_within(&self, bound: &Rational) -> JSet {
        match &self.dist {
            FamilyDist::Fixed(None) => JSet::Empty,
            FamilyDist::Fixed(Some(l)) => {
                if l <= bound {
                    JSet::All
                } else {
                    JSet::Empty
                }
            }
            FamilyDist::Indexed { coeff, shift, y } => {
                indexed_within(coeff, *shift, y, bound, false)
            }
        }
    }
}

/// Aggregated family analysis against a target at roughness `r`.
struct FamilyAnalysis {
    pairs: Vec<FamilyPair>,
    /// Generic membership status of the members in the ideal.
    member_status: MemberStatus,
}

#[derive(Debug, Clone)]
enum MemberStatus {
    /// Every member set lies outside the ideal, with the stated reason.
    AllNotIn(String),
    Unknown(String),
}

impl FamilyAnalysis {
    fn member_not_in(&self) -> bool {
        matches!(self.member_status, MemberStatus::AllNotIn(_))
    }

    fn status_text(&self) -> String {
        match &self.member_status {
            MemberStatus::AllNotIn(s) | MemberStatus::Unknown(s) => s.clone(),
        }
    }

    /// Candidate member parameters where qualification patterns can change:
    /// boundaries of every pair's member set, their neighbors, 1, and a
    /// representative beyond all boundaries.
    fn candidate_members(&self, r: &Rational) -> Vec<u64> {
        let mut cands: Vec<u64> = vec![1];
        let mut max_boundary = 1u64;
        for pair in &self.pairs {
            for b in pair.members_within(r).boundary_candidates() {
                for x in [b.saturating_sub(1).max(1), b, b.saturating_add(1)] {
                    cands.push(x);
                }
                max_boundary = max_boundary.max(b.saturating_add(1));
            }
        }
        cands.push(max_boundary.saturating_add(1));
        cands.sort_unstable();
        cands.dedup();
        cands
    }

    /// `c_plus` of member `j`: the limiting mass within the closed `r`-ball.
    fn member_c_plus(&self, j: u64, r: &Rational) -> Rational {
        self.pairs
            .iter()
            .filter_map(|p| match p.limit_at(j) {
                Some(l) if l <= *r => Some(p.mass_limit.clone()),
                _ => None,
            })
            .sum()
    }

    /// Limiting mass within `r` in the joint limit over members.
    fn assembly_mass(&self, r: &Rational) -> Rational {
        self.pairs
            .iter()
            .filter_map(|p| match p.limit_in_j() {
                Some(l) if l <= *r => Some(p.mass_limit.clone()),
                _ => None,
            })
            .sum()
    }

    /// Whether every positive-mass pair stays within `r` at every member.
    fn all_members_within(&self, r: &Rational) -> bool {
        self.pairs
            .iter()
            .filter(|p| !p.mass_limit.is_zero())
            .all(|p| p.members_within(r).covers_all())
    }

    /// The smallest member violating `all_members_within`, for witnesses.
    fn first_violating_member(&self, r: &Rational) -> Option<u64> {
        for j in self.candidate_members(r) {
            let violated = self.pairs.iter().any(|p| {
                !p.mass_limit.is_zero()
                    && match p.limit_at(j) {
                        Some(l) => l > *r,
                        None => true,
                    }
            });
            if violated {
                return Some(j);
            }
        }
        None
    }
}

/// Builds the per-piece analyses of a sequence against a target.
struct SequenceAnalysis {
    pieces: Vec<PieceAnalysis>,
    family: Option<FamilyAnalysis>,
}

fn analyze(
    seq: &PiecewiseSequence,
    target: &Target,
    r: &Rational,
    ideal: &Ideal,
) -> Result<SequenceAnalysis, AnalysisError> {
    if *r < Rational::zero() {
        return Err(AnalysisError::NegativeRoughness);
    }
    validate_target(seq, target)?;
    let atoms = target_atoms(&target.dist)?;
    let mut pieces = Vec::new();
    for (i, piece) in seq.pieces().iter().enumerate() {
        let coupling = piece_coupling(target, i);
        let pairs = build_pairs(&piece.atoms, &atoms, &coupling, None)?;
        let profile = MassProfile::new(&pairs, r.clone());
        pieces.push(PieceAnalysis {
            name: format!("{}", piece.set),
            membership: ideal_member(ideal, &piece.set),
            pairs,
            profile,
        });
    }
    let family = match seq.family() {
        None => None,
        Some(fam) => {
            let mut pairs = Vec::new();
            for (value, prob) in &fam.atoms {
                for (y, ym) in &atoms {
                    let mass = ProbFn::from_decay(prob.decay().scale(ym))
                        .map_err(SeqError::from)?;
                    let dist = match value {
                        ValueFn::IndexedConst { coeff, shift } => FamilyDist::Indexed {
                            coeff: coeff.clone(),
                            shift: *shift,
                            y: y.clone(),
                        },
                        other => match other.limit(None).map_err(SeqError::from)? {
                            ValueLimit::Finite(l) => FamilyDist::Fixed(Some((l - y).abs())),
                            _ => FamilyDist::Fixed(None),
                        },
                    };
                    pairs.push(FamilyPair {
                        mass_limit: mass.limit().clone(),
                        dist,
                    });
                }
            }
            let member_status = family_member_status(seq, ideal);
            Some(FamilyAnalysis {
                pairs,
                member_status,
            })
        }
    };
    Ok(SequenceAnalysis { pieces, family })
}

/// Generic ideal status of the family members `dyadic(j-1) \ fixed pieces`.
///
/// The dyadic classes lie outside every catalog ideal; carving out fixed
/// pieces preserves that as long as each carved piece belongs to the ideal
/// (density zero cannot lower a positive density to zero, and removing a
/// convergent-sum set keeps a divergent sum divergent).
fn family_member_status(seq: &PiecewiseSequence, ideal: &Ideal) -> MemberStatus {
    if matches!(ideal, Ideal::ExhTruncated { .. }) {
        return MemberStatus::Unknown(
            "family members cannot be certified outside the exhaustive ideal".into(),
        );
    }
    for piece in seq.pieces() {
        let carved = ideal_member(ideal, &piece.set);
        if carved.answer != Answer::In {
            return MemberStatus::Unknown(format!(
                "fixed piece {} is not certified inside the ideal; member sets are not generically decided",
                piece.set
            ));
        }
    }
    let reason = match ideal {
        Ideal::Fin => "each member is an infinite set minus an ideal set".to_string(),
        Ideal::Density => {
            "member j has density 2^-j, unchanged by removing density-zero pieces".to_string()
        }
        Ideal::Summable => {
            "member j carries a divergent reciprocal sum, unchanged by removing convergent pieces"
                .to_string()
        }
        Ideal::ExhTruncated { .. } => unreachable!(),
    };
    MemberStatus::AllNotIn(reason)
}

/// Decides rough ideal convergence in probability of the sequence to the
/// target at roughness `r`.
pub fn check_rough_limit(
    seq: &PiecewiseSequence,
    target: &Target,
    r: &Rational,
    ideal: &Ideal,
) -> Result<Verdict, AnalysisError> {
    let analysis = analyze(seq, target, r, ideal)?;
    let data: Vec<PieceDatum> = analysis.pieces.iter().map(|p| p.datum()).collect();
    let mut blocking: Option<String> = None;
    for piece in &analysis.pieces {
        if piece.profile.c_plus().is_one() {
            continue;
        }
        match piece.membership.answer {
            Answer::In => {}
            Answer::NotIn => {
                return Ok(Verdict::no(piece.witness(r), data));
            }
            Answer::Unknown => {
                blocking.get_or_insert_with(|| {
                    format!(
                        "piece {} has escaping mass but undecided ideal membership",
                        piece.name
                    )
                });
            }
        }
    }
    if let Some(family) = &analysis.family {
        if !family.all_members_within(r) {
            if family.member_not_in() {
                let j = family
                    .first_violating_member(r)
                    .expect("a violating member exists");
                let witness = family_member_witness(seq, target, family, j, r)?;
                return Ok(Verdict::no(witness, data));
            }
            blocking.get_or_insert_with(|| {
                format!(
                    "family member escapes the {}-ball but member status is: {}",
                    format_rational(r),
                    family.status_text()
                )
            });
        }
    }
    match blocking {
        Some(b) => Ok(Verdict::unknown(b, data)),
        None => Ok(Verdict::yes(data)),
    }
}

/// Builds a witness at a concrete violating family member.
fn family_member_witness(
    seq: &PiecewiseSequence,
    target: &Target,
    family: &FamilyAnalysis,
    j: u64,
    r: &Rational,
) -> Result<Witness, AnalysisError> {
    let atoms = target_atoms(&target.dist)?;
    let fam = seq.family().expect("family present");
    let pairs = build_pairs(&fam.atoms, &atoms, &PieceCoupling::Product, Some(j))?;
    let profile = MassProfile::new(&pairs, r.clone());
    let mut nearest: Option<Rational> = None;
    for p in &pairs {
        if p.mass_limit.is_zero() {
            continue;
        }
        if let DistanceLimit::Finite(l) = p.dist.limit() {
            if l > *r {
                let gap = &l - r;
                nearest = Some(match nearest.take() {
                    Some(g) => g.min(gap),
                    None => gap,
                });
            }
        }
    }
    let epsilon = nearest.map_or_else(|| rat_int(1), |g| g / rat_int(2));
    let exceedance_limit = profile.exceedance_limit_at(&epsilon);
    Ok(Witness {
        delta: &exceedance_limit / rat_int(2),
        epsilon,
        piece: format!("family member j={j} on {}", seq.family_member_set(j)),
        exceedance_limit,
        membership_certificate: family.status_text(),
    })
}

/// Classifies the target as a rough limit point, strong cluster point, and
/// weak cluster point of the sequence.
pub fn classify_cluster(
    seq: &PiecewiseSequence,
    target: &Target,
    r: &Rational,
    ideal: &Ideal,
) -> Result<ClusterReport, AnalysisError> {
    let analysis = analyze(seq, target, r, ideal)?;
    let data: Vec<PieceDatum> = analysis.pieces.iter().map(|p| p.datum()).collect();

    // Fixed-piece summary.
    let mut strong_piece: Option<&PieceAnalysis> = None;
    let mut strong_unknown: Option<String> = None;
    let mut weak_best: Option<(Rational, String)> = None;
    let mut weak_unknown: Option<String> = None;
    for piece in &analysis.pieces {
        let c_plus = piece.profile.c_plus();
        match piece.membership.answer {
            Answer::In => {}
            Answer::NotIn => {
                if c_plus.is_one() && strong_piece.is_none() {
                    strong_piece = Some(piece);
                }
                if !c_plus.is_zero() {
                    let better = weak_best
                        .as_ref()
                        .map_or(true, |(best, _)| c_plus > *best);
                    if better {
                        weak_best = Some((c_plus.clone(), piece.name.clone()));
                    }
                }
            }
            Answer::Unknown => {
                if c_plus.is_one() {
                    strong_unknown.get_or_insert_with(|| {
                        format!("piece {} concentrates but has undecided membership", piece.name)
                    });
                }
                if !c_plus.is_zero() {
                    weak_unknown.get_or_insert_with(|| {
                        format!(
                            "piece {} holds limiting mass {} with undecided membership",
                            piece.name,
                            format_rational(&c_plus)
                        )
                    });
                }
            }
        }
    }

    // Family summary.
    struct FamilySummary {
        member_full: Option<u64>,
        assembles: bool,
        sup_mass: Rational,
        member_not_in: bool,
        any_member_mass: bool,
        status: String,
        no_member_full: bool,
    }
    let family_summary = analysis.family.as_ref().map(|family| {
        let mut member_full = None;
        let mut sup_mass = Rational::zero();
        let mut any_member_mass = false;
        for j in family.candidate_members(r) {
            let c = family.member_c_plus(j, r);
            if c.is_one() && member_full.is_none() {
                member_full = Some(j);
            }
            if !c.is_zero() {
                any_member_mass = true;
            }
            if c > sup_mass {
                sup_mass = c;
            }
        }
        let assembles = family.assembly_mass(r).is_one();
        let assembly = family.assembly_mass(r);
        if assembly > sup_mass {
            sup_mass = assembly.clone();
        }
        if !assembly.is_zero() {
            any_member_mass = true;
        }
        FamilySummary {
            member_full,
            assembles,
            sup_mass,
            member_not_in: family.member_not_in(),
            any_member_mass,
            status: family.status_text(),
            no_member_full: member_full.is_none(),
        }
    });

    // Strong cluster point.
    let strong = if let Some(piece) = strong_piece {
        let mut pieces = data.clone();
        pieces.retain(|d| d.piece == piece.name);
        Verdict::yes(pieces)
    } else if let Some(fs) = &family_summary {
        if fs.member_not_in && (fs.member_full.is_some() || fs.assembles) {
            let family = analysis.family.as_ref().expect("family present");
            let piece = match fs.member_full {
                Some(j) => format!("family member j={j}"),
                None => "family assembly: members concentrate within r for every eps".to_string(),
            };
            Verdict::yes(vec![PieceDatum {
                piece,
                membership: Answer::NotIn,
                membership_certificate: family.status_text(),
                c_plus: Rational::one(),
            }])
        } else if fs.member_full.is_some() || fs.assembles {
            Verdict::unknown(fs.status.clone(), data.clone())
        } else if let Some(b) = &strong_unknown {
            Verdict::unknown(b.clone(), data.clone())
        } else {
            strong_no_verdict(&analysis, r, &data)
        }
    } else if let Some(b) = &strong_unknown {
        Verdict::unknown(b.clone(), data.clone())
    } else {
        strong_no_verdict(&analysis, r, &data)
    };

    // Weak cluster point: the best limiting mass among non-ideal carriers.
    let mut best = weak_best.clone();
    if let Some(fs) = &family_summary {
        if fs.member_not_in && !fs.sup_mass.is_zero() {
            let better = best.as_ref().map_or(true, |(b, _)| fs.sup_mass > *b);
            if better {
                best = Some((fs.sup_mass.clone(), "family".to_string()));
            }
        }
        if !fs.member_not_in && fs.any_member_mass {
            weak_unknown.get_or_insert_with(|| fs.status.clone());
        }
    }
    let (weak, delta_star_sup) = match best {
        Some((m, carrier)) => {
            let mut pieces = data.clone();
            pieces.retain(|d| d.piece == carrier);
            if pieces.is_empty() {
                pieces = data.clone();
            }
            (Verdict::yes(pieces), Some(m))
        }
        None => match &weak_unknown {
            Some(b) => (Verdict::unknown(b.clone(), data.clone()), None),
            None => (weak_no_verdict(&analysis, r, &data), None),
        },
    };

    // Rough limit point.
    let limit_point = if let Some(piece) = strong_piece {
        let mut pieces = data.clone();
        pieces.retain(|d| d.piece == piece.name);
        Verdict::yes(pieces)
    } else if let Some(fs) = &family_summary {
        if let (Some(j), true) = (fs.member_full, fs.member_not_in) {
            Verdict::yes(vec![PieceDatum {
                piece: format!("family member j={j}"),
                membership: Answer::NotIn,
                membership_certificate: fs.status.clone(),
                c_plus: Rational::one(),
            }])
        } else if fs.member_full.is_some() {
            Verdict::unknown(fs.status.clone(), data.clone())
        } else if strong_unknown.is_some() {
            Verdict::unknown(strong_unknown.clone().expect("present"), data.clone())
        } else if matches!(ideal, Ideal::Density) && fs.no_member_full {
            // Tail-density argument: any candidate index set meets each
            // member finitely, so its upper density is squeezed below every
            // geometric tail and the set is null.
            Verdict::no(
                Witness {
                    epsilon: Rational::zero(),
                    delta: Rational::zero(),
                    piece: "family tail: qualifying members have vanishing tail-union density"
                        .to_string(),
                    exceedance_limit: Rational::zero(),
                    membership_certificate:
                        "tail unions have upper density 2^-J for every J".to_string(),
                },
                data.clone(),
            )
        } else {
            Verdict::unknown(
                "limit-point status of family assemblies is decided only under the density ideal"
                    .to_string(),
                data.clone(),
            )
        }
    } else if let Some(b) = &strong_unknown {
        Verdict::unknown(b.clone(), data.clone())
    } else {
        // No family: candidates meet every piece finitely.
        strong_no_verdict(&analysis, r, &data)
    };

    let report = ClusterReport {
        limit_point,
        strong_cluster: strong,
        weak_cluster: weak,
        delta_star_sup,
        coupling: target.coupling_description(),
    };
    debug_assert!(report.chain_consistent(), "cluster chain violated");
    Ok(report)
}

/// `No` verdict for the strong/limit questions: every carrier keeps mass
/// out of the closed `r`-ball.
fn strong_no_verdict(
    analysis: &SequenceAnalysis,
    r: &Rational,
    data: &[PieceDatum],
) -> Verdict {
    let witness = no_witness(analysis, r, "no piece concentrates its limiting mass within r");
    Verdict::no(witness, data.to_vec())
}

/// `No` verdict for the weak question: every carrier's limiting mass within
/// `r` is zero.
fn weak_no_verdict(analysis: &SequenceAnalysis, r: &Rational, data: &[PieceDatum]) -> Verdict {
    let witness = no_witness(
        analysis,
        r,
        "every non-ideal carrier has zero limiting mass within r",
    );
    Verdict::no(witness, data.to_vec())
}

/// Shared witness construction: a radius excess below every positive gap.
fn no_witness(analysis: &SequenceAnalysis, r: &Rational, label: &str) -> Witness {
    // Smallest positive excess among finite limits beyond r, over fixed
    // pieces, candidate members, and family j-limits.
    let mut gap: Option<Rational> = None;
    let mut consider = |l: &Rational| {
        if *l > *r {
            let g = l - r;
            gap = Some(match gap.take() {
                Some(old) => old.min(g),
                None => g,
            });
        }
    };
    for piece in &analysis.pieces {
        for p in &piece.pairs {
            if p.mass_limit.is_zero() {
                continue;
            }
            if let DistanceLimit::Finite(l) = p.dist.limit() {
                consider(&l);
            }
        }
    }
    if let Some(family) = &analysis.family {
        for pair in &family.pairs {
            if pair.mass_limit.is_zero() {
                continue;
            }
            for j in family.candidate_members(r) {
                if let Some(l) = pair.limit_at(j) {
                    consider(&l);
                }
            }
            if let Some(l) = pair.limit_in_j() {
                consider(&l);
            }
        }
    }
    let epsilon = gap.map_or_else(|| rat_int(1), |g| g / rat_int(2));
    let exceedance_limit = analysis
        .pieces
        .iter()
        .filter(|p| p.membership.answer != Answer::In)
        .map(|p| p.profile.exceedance_limit_at(&epsilon))
        .max()
        .unwrap_or_else(Rational::zero);
    Witness {
        delta: &exceedance_limit / rat_int(2),
        epsilon,
        piece: label.to_string(),
        exceedance_limit,
        membership_certificate: String::new(),
    }
}

/// Verdict on the proximity set `{n : P(d(X_n, Y) < t) > delta}` against the
/// ideal, evaluated at a concrete threshold pair.
pub fn proximity_set_verdict(
    seq: &PiecewiseSequence,
    target: &Target,
    t: &Rational,
    delta: &Rational,
    ideal: &Ideal,
) -> Result<(Answer, String), AnalysisError> {
    validate_target(seq, target)?;
    let atoms = target_atoms(&target.dist)?;
    let mut undecided: Option<String> = None;
    for (i, piece) in seq.pieces().iter().enumerate() {
        let coupling = piece_coupling(target, i);
        let pairs = build_pairs(&piece.atoms, &atoms, &coupling, None)?;
        let inside = proximity_mass(&pairs, t);
        let (sign, _) = inside.eventual_cmp(delta);
        if sign == Sign::Positive {
            let membership = ideal_member(ideal, &piece.set);
            match membership.answer {
                Answer::NotIn => {
                    return Ok((
                        Answer::NotIn,
                        format!(
                            "piece {} qualifies cofinally and {}",
                            piece.set,
                            membership.certificate.describe()
                        ),
                    ));
                }
                Answer::Unknown => {
                    undecided.get_or_insert_with(|| {
                        format!("piece {} qualifies but membership is undecided", piece.set)
                    });
                }
                Answer::In => {}
            }
        }
    }
    if let Some(fam) = seq.family() {
        let analysis = analyze(seq, target, &Rational::zero(), ideal)?;
        let family = analysis.family.as_ref().expect("family present");
        let mut candidates: Vec<u64> = vec![1];
        let mut max_b = 1u64;
        for pair in &family.pairs {
            if let FamilyDist::Indexed { coeff, shift, y } = &pair.dist {
                for b in indexed_within(coeff, *shift, y, t, true).boundary_candidates() {
                    for x in [b.saturating_sub(1).max(1), b, b.saturating_add(1)] {
                        candidates.push(x);
                    }
                    max_b = max_b.max(b.saturating_add(1));
                }
            }
        }
        candidates.push(max_b.saturating_add(1));
        candidates.sort_unstable();
        candidates.dedup();
        let rep = *candidates.last().expect("nonempty");
        for j in candidates {
            let pairs = build_pairs(&fam.atoms, &atoms, &PieceCoupling::Product, Some(j))?;
            let inside = proximity_mass(&pairs, t);
            let (sign, _) = inside.eventual_cmp(delta);
            if sign == Sign::Positive {
                let (answer, describe) = if j == rep {
                    match &family.member_status {
                        MemberStatus::AllNotIn(s) => (Answer::NotIn, s.clone()),
                        MemberStatus::Unknown(s) => (Answer::Unknown, s.clone()),
                    }
                } else {
                    let m = ideal_member(ideal, &seq.family_member_set(j));
                    (m.answer, m.certificate.describe())
                };
                match answer {
                    Answer::NotIn => {
                        return Ok((
                            Answer::NotIn,
                            format!("family member j={j} qualifies cofinally and {describe}"),
                        ));
                    }
                    Answer::Unknown => {
                        undecided.get_or_insert_with(|| {
                            format!("family member j={j} qualifies but is undecided: {describe}")
                        });
                    }
                    Answer::In => {}
                }
            }
        }
    }
    match undecided {
        Some(b) => Ok((Answer::Unknown, b)),
        None => Ok((
            Answer::In,
            "qualifying indices form a finite union of ideal sets plus a finite set".to_string(),
        )),
    }
}

/// Symbolic mass inside the open ball of radius `t`: the sum of the mass
/// functions of pairs whose distance is eventually strictly below `t`.
fn proximity_mass(pairs: &[PairForm], t: &Rational) -> crate::seq::decay::Decay {
    let mut total = crate::seq::decay::Decay::zero();
    for pair in pairs {
        let inside = match &pair.dist {
            crate::seq::profile::DistanceForm::Diverging { .. } => false,
            crate::seq::profile::DistanceForm::Decay { decay, .. } => {
                matches!(decay.eventual_cmp(t).0, Sign::Negative)
            }
        };
        if inside {
            total = total.add(&pair.mass);
        }
    }
    total
}

/// Symbolic exceedance of the piece hosting index-set position `piece_index`
/// (or the family member `j`) at threshold `r + eps`.
pub fn exceedance_symbolic(
    seq: &PiecewiseSequence,
    target: &Target,
    piece: crate::seq::piece::PieceRef,
    r: &Rational,
    eps: &Rational,
) -> Result<Exceedance, AnalysisError> {
    validate_target(seq, target)?;
    let atoms = target_atoms(&target.dist)?;
    let (pair_atoms, j, coupling) = match piece {
        crate::seq::piece::PieceRef::Fixed(i) => {
            (&seq.pieces()[i].atoms, None, piece_coupling(target, i))
        }
        crate::seq::piece::PieceRef::Family { j } => (
            &seq.family().expect("family present").atoms,
            Some(j),
            PieceCoupling::Product,
        ),
    };
    let pairs = build_pairs(pair_atoms, &atoms, &coupling, j)?;
    Ok(exceedance_fn(&pairs, r, eps))
}

/// Exact pointwise exceedance `P(d(X_n, Y) > t)` computed through the law at
/// `n` and the distance law of the declared coupling.
pub fn exceedance_pointwise(
    seq: &PiecewiseSequence,
    target: &Target,
    n: u64,
    t: &Rational,
) -> Result<Rational, AnalysisError> {
    let law = seq.law_at(n)?;
    let coupling = match &target.coupling {
        CouplingSpec::Product => {
            crate::coupling::Coupling::product(&law, &target.dist).map_err(SeqError::from)?
        }
        CouplingSpec::SinglePieceJoint(table) => {
            let piece = &seq.pieces()[0];
            let atoms = target_atoms(&target.dist)?;
            let mut cells = Vec::new();
            for (i, jdx, m) in &table.entries {
                let x = piece.atoms[*i].0.eval(n, None).map_err(SeqError::from)?;
                let y = atoms[*jdx].0.clone();
                cells.push((
                    Point::Real(x),
                    Point::Real(y),
                    m.eval(n),
                ));
            }
            crate::coupling::Coupling::explicit_joint(&law, &target.dist, cells)
                .map_err(SeqError::from)?
        }
    };
    let dlaw = coupling.distance_law().map_err(SeqError::from)?;
    Ok(dlaw.tail_above(t))
}
