//! The reproduction registry: embedded fixture documents with expected
//! results, each expectation tagged with its provenance.

use anyhow::{anyhow, Result};
use roughlab_core::analysis::{
    check_rough_limit, classify_cluster, closedness_probe, diameter_probe, exceedance_symbolic,
    ias_equivalence_probe, prop_equivalence, proximity_set_verdict, replay_limit_witness,
    sandwich_probe, ClosednessMember, SandwichCandidate, Target, VerdictAnswer,
};
use roughlab_core::coupling::Coupling;
use roughlab_core::fixtures;
use roughlab_core::index::{natural_density, tail_union_upper_density, DensityResult, Ideal, IndexSet};
use roughlab_core::rational::{format_rational, rat, rat_int, rat_pow, Rational};
use roughlab_core::seq::{PieceRef, PiecewiseSequence};
use roughlab_core::FiniteDist;
use roughlab_dsl::{parse, SpecDocument};
use num::Zero;

/// Where an expected value comes from: stated in the source material,
/// immediate from the definitions, or computed by an independent oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Reported,
    Trivial,
    Derived,
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::Reported => "reported",
            Provenance::Trivial => "trivial",
            Provenance::Derived => "derived",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub provenance: Provenance,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str, provenance: Provenance, passed: bool, detail: String) -> Self {
        CheckOutcome {
            name: name.to_string(),
            provenance,
            passed,
            detail,
        }
    }
}

pub struct RegistryEntry {
    pub id: &'static str,
    pub title: &'static str,
    /// Embedded specification source; the entry's sequence model.
    pub source: String,
    run: fn(&SpecDocument) -> Result<Vec<CheckOutcome>>,
}

impl RegistryEntry {
    pub fn document(&self) -> Result<SpecDocument> {
        parse(&self.source).map_err(|errs| anyhow!("fixture parse failure: {}", errs[0]))
    }

    pub fn run(&self) -> Result<Vec<CheckOutcome>> {
        let doc = self.document()?;
        (self.run)(&doc)
    }
}

const SHARPNESS_SRC: &str = include_str!("../../../specs/two-regime.rcl");

const PRODUCT_CHAIN_SRC: &str = include_str!("../../../specs/product-chain.rcl");

const PRODUCT_CHAIN_CELLS_SRC: &str = include_str!("../../../specs/product-chain-cells.rcl");

const DYADIC_FAMILY_SRC: &str = include_str!("../../../specs/dyadic-family.rcl");

const ODD_CONTRAST_SRC: &str = include_str!("../../../specs/odd-contrast.rcl");

const QUARTER_JOINT_SRC: &str = include_str!("../../../specs/quarter-joint.rcl");

fn geometric_spectrum_source(levels: u32) -> String {
    let doc = SpecDocument {
        ideal: Ideal::Density,
        sequence: fixtures::geometric_spectrum(levels),
        target: Some(roughlab_dsl::TargetDecl {
            atoms: vec![(rat_int(0), rat_int(1))],
            coupling: roughlab_dsl::CouplingDecl::Independent,
        }),
        queries: vec![roughlab_dsl::Query::Cluster { r: rat_int(0) }],
    };
    roughlab_dsl::print(&doc)
}

pub const SPECTRUM_LEVELS: u32 = 12;

pub fn registry() -> Vec<RegistryEntry> {
    vec![
        RegistryEntry {
            id: "thm2.1-sharpness",
            title: "diameter bound attained by opposite degenerate limits",
            source: SHARPNESS_SRC.to_string(),
            run: run_sharpness,
        },
        RegistryEntry {
            id: "ex2.5",
            title: "strict sandwich around the product-chain sequence",
            source: PRODUCT_CHAIN_SRC.to_string(),
            run: run_product_chain,
        },
        RegistryEntry {
            id: "ex3.3",
            title: "strong cluster point that is no limit point",
            source: DYADIC_FAMILY_SRC.to_string(),
            run: run_dyadic_family,
        },
        RegistryEntry {
            id: "ex3.5",
            title: "weak cluster point that is not strong",
            source: ODD_CONTRAST_SRC.to_string(),
            run: run_odd_contrast,
        },
        RegistryEntry {
            id: "ex3.12",
            title: "weak cluster constants vanishing along a family",
            source: geometric_spectrum_source(SPECTRUM_LEVELS),
            run: run_geometric_spectrum,
        },
        RegistryEntry {
            id: "prop1.7-equiv",
            title: "probability route equals the Ky Fan route at zero roughness",
            source: DYADIC_FAMILY_SRC.to_string(),
            run: run_equivalence,
        },
        RegistryEntry {
            id: "remark-joint",
            title: "fixed-mass proximity under an explicit quarter joint",
            source: QUARTER_JOINT_SRC.to_string(),
            run: run_quarter_joint,
        },
        RegistryEntry {
            id: "thm2.2-closedness",
            title: "limit and strong-cluster sets closed along a declared family",
            source: SHARPNESS_SRC.to_string(),
            run: run_closedness,
        },
        RegistryEntry {
            id: "prop3.7-ias",
            title: "ideal-almost-sure modification preserves the reports",
            source: DYADIC_FAMILY_SRC.to_string(),
            run: run_ias,
        },
        RegistryEntry {
            id: "lemma3.9-grid",
            title: "threshold monotonicity on the proximity grids",
            source: ODD_CONTRAST_SRC.to_string(),
            run: run_lemma_grid,
        },
    ]
}

pub fn entry(id: &str) -> Result<RegistryEntry> {
    registry()
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| anyhow!("unknown registry id {id:?}"))
}

fn check_eq<T: PartialEq + std::fmt::Debug>(
    name: &str,
    provenance: Provenance,
    got: T,
    want: T,
) -> CheckOutcome {
    let passed = got == want;
    CheckOutcome::new(
        name,
        provenance,
        passed,
        format!("expected {want:?}, got {got:?}"),
    )
}

fn degenerate_target(v: Rational) -> Target {
    Target::product(FiniteDist::degenerate(v))
}

// ---- entry runners ----------------------------------------------------

fn run_sharpness(doc: &SpecDocument) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let seq = &doc.sequence;
    let r = rat(1, 4);
    // rho between the two degenerate limits is exactly 2r.
    let x = FiniteDist::degenerate(rat(1, 4));
    let y = FiniteDist::degenerate(rat(-1, 4));
    let c = Coupling::product(&x, &y)?;
    let rho = roughlab_core::kyfan::kyfan_between(&x, &y, &c)?.rho;
    out.push(check_eq(
        "rho(X*, Y*) = 2r",
        Provenance::Reported,
        format_rational(&rho),
        "1/2".to_string(),
    ));
    let members = vec![degenerate_target(rat(1, 4)), degenerate_target(rat(-1, 4))];
    let report = diameter_probe(seq, &r, &doc.ideal, &members, &[])?;
    out.push(check_eq(
        "diameter = min(1, 2r)",
        Provenance::Reported,
        format_rational(&report.max_rho),
        "1/2".to_string(),
    ));
    out.push(CheckOutcome::new(
        "diameter within bound",
        Provenance::Reported,
        report.within_bound,
        format!("max {}", format_rational(&report.max_rho)),
    ));
    // Three degenerates: pairwise values 1/2, 1/4, 1/4.
    let members = vec![
        degenerate_target(rat(1, 4)),
        degenerate_target(rat(-1, 4)),
        degenerate_target(rat_int(0)),
    ];
    let report = diameter_probe(seq, &r, &doc.ideal, &members, &[])?;
    let mut rhos: Vec<Rational> = report.pairwise.iter().map(|(_, _, r)| r.clone()).collect();
    rhos.sort();
    let rhos: Vec<String> = rhos.iter().map(format_rational).collect();
    out.push(check_eq(
        "three-member pairwise distances",
        Provenance::Derived,
        rhos.join(","),
        "1/4,1/4,1/2".to_string(),
    ));
    let single = diameter_probe(seq, &r, &doc.ideal, &members[..1], &[])?;
    out.push(check_eq(
        "singleton member list has diameter 0",
        Provenance::Trivial,
        format_rational(&single.max_rho),
        "0".to_string(),
    ));
    Ok(out)
}

fn run_product_chain(doc: &SpecDocument) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let seq = &doc.sequence;
    let ideal = &doc.ideal;
    // Symbolic exceedance against the constant one at r=1 is p^n; equality
    // checked at n = 1..20.
    let one = degenerate_target(rat_int(1));
    let exc = exceedance_symbolic(seq, &one, PieceRef::Fixed(0), &rat_int(1), &rat(1, 4))?;
    let mut all = true;
    for n in 1..=20u64 {
        if exc.eval(n) != rat_pow(&rat(1, 2), n) {
            all = false;
        }
    }
    out.push(CheckOutcome::new(
        "limiting exceedance vs the constant one equals p^n at n=1..20",
        Provenance::Reported,
        all,
        "exact geometric power".into(),
    ));
    // Limit verdicts.
    let v = check_rough_limit(seq, &one, &rat_int(1), ideal)?;
    out.push(check_eq(
        "constant one accepted at r=1",
        Provenance::Reported,
        v.answer,
        VerdictAnswer::Yes,
    ));
    let zero = degenerate_target(rat_int(0));
    let v = check_rough_limit(seq, &zero, &rat_int(0), ideal)?;
    out.push(check_eq(
        "zero accepted at r=0",
        Provenance::Reported,
        v.answer,
        VerdictAnswer::Yes,
    ));
    let z = Target::product(FiniteDist::on_line(vec![
        (rat_int(0), rat(1, 2)),
        (rat_int(2), rat(1, 2)),
    ])?);
    let v = check_rough_limit(seq, &z, &rat_int(1), ideal)?;
    out.push(check_eq(
        "fair {0,2} law rejected at r=1",
        Provenance::Reported,
        v.answer,
        VerdictAnswer::No,
    ));
    let w = v.witness.clone().ok_or_else(|| anyhow!("missing witness"))?;
    out.push(check_eq(
        "main-model rejection exceedance",
        Provenance::Derived,
        format_rational(&w.exceedance_limit),
        "1/2".to_string(),
    ));
    out.push(CheckOutcome::new(
        "main-model witness replays",
        Provenance::Derived,
        replay_limit_witness(seq, &z, &rat_int(1), &w)?,
        "replayed the exceedance limit".into(),
    ));
    // The cell-mass model pins the printed value 3/4.
    let cells = parse(PRODUCT_CHAIN_CELLS_SRC)
        .map_err(|e| anyhow!("cells fixture: {}", e[0]))?;
    let zc = cells
        .target
        .as_ref()
        .ok_or_else(|| anyhow!("cells target"))?
        .to_target()?;
    let v = check_rough_limit(&cells.sequence, &zc, &rat_int(1), &cells.ideal)?;
    out.push(check_eq(
        "cell-mass rejection verdict",
        Provenance::Reported,
        v.answer,
        VerdictAnswer::No,
    ));
    let w = v.witness.clone().ok_or_else(|| anyhow!("missing witness"))?;
    out.push(check_eq(
        "cell-mass rejection exceedance is 3/4",
        Provenance::Reported,
        format_rational(&w.exceedance_limit),
        "3/4".to_string(),
    ));
    out.push(CheckOutcome::new(
        "cell-mass witness replays",
        Provenance::Reported,
        replay_limit_witness(&cells.sequence, &zc, &rat_int(1), &w)?,
        "replayed the 3/4 limit".into(),
    ));
    // Sandwich strictness: theta misses the constant one, the ball holds z.
    let x_star = FiniteDist::degenerate(rat_int(0));
    let y_one = FiniteDist::degenerate(rat_int(1));
    let z_dist = FiniteDist::on_line(vec![(rat_int(0), rat(1, 2)), (rat_int(2), rat(1, 2))])?;
    let candidates = vec![
        SandwichCandidate {
            name: "one".into(),
            target: degenerate_target(rat_int(1)),
            to_center: Coupling::product(&x_star, &y_one)?,
        },
        SandwichCandidate {
            name: "fair".into(),
            target: Target::product(z_dist.clone()),
            to_center: Coupling::product(&x_star, &z_dist)?,
        },
    ];
    let report = sandwich_probe(seq, &zero, &rat_int(1), ideal, &candidates)?;
    out.push(CheckOutcome::new(
        "sandwich containments hold",
        Provenance::Reported,
        report.ok,
        "no containment violated".into(),
    ));
    let first = &report.rows[0];
    out.push(CheckOutcome::new(
        "first inclusion strict",
        Provenance::Reported,
        !first.in_theta && first.in_limit.answer == VerdictAnswer::Yes,
        format!("theta={}, limit={:?}", first.in_theta, first.in_limit.answer),
    ));
    let second = &report.rows[1];
    out.push(CheckOutcome::new(
        "second inclusion strict",
        Provenance::Reported,
        second.in_limit.answer == VerdictAnswer::No && second.in_ball,
        format!("limit={:?}, ball={}", second.in_limit.answer, second.in_ball),
    ));
    Ok(out)
}

fn run_odd_contrast(doc: &SpecDocument) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let seq = &doc.sequence;
    let y = Target::product(FiniteDist::bernoulli(rat(1, 2))?);
    for ideal in [Ideal::Fin, Ideal::Density, Ideal::Summable] {
        let report = classify_cluster(seq, &y, &rat_int(1), &ideal)?;
        out.push(check_eq(
            &format!("weak cluster under {}", ideal.name()),
            Provenance::Reported,
            report.weak_cluster.answer,
            VerdictAnswer::Yes,
        ));
        out.push(check_eq(
            &format!("delta_star_sup = 1/2 under {}", ideal.name()),
            Provenance::Reported,
            report.delta_star_sup.map(|d| format_rational(&d)),
            Some("1/2".to_string()),
        ));
        out.push(check_eq(
            &format!("strong cluster refused under {}", ideal.name()),
            Provenance::Reported,
            report.strong_cluster.answer,
            VerdictAnswer::No,
        ));
    }
    Ok(out)
}

fn run_geometric_spectrum(doc: &SpecDocument) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let seq = &doc.sequence;
    let ideal = &doc.ideal;
    let levels = SPECTRUM_LEVELS;
    for k in 1..=levels {
        let a_k = rat_pow(&rat(1, 2), u64::from(k));
        let report = classify_cluster(seq, &degenerate_target(a_k.clone()), &rat_int(0), ideal)?;
        let ok = report.weak_cluster.answer == VerdictAnswer::Yes
            && report.delta_star_sup == Some(a_k.clone());
        out.push(CheckOutcome::new(
            &format!("delta_star_sup(Y_{k}) = 2^-{k}"),
            Provenance::Reported,
            ok,
            format!(
                "weak={:?}, delta_star={:?}",
                report.weak_cluster.answer,
                report.delta_star_sup.as_ref().map(format_rational)
            ),
        ));
    }
    let z = degenerate_target(rat_int(0));
    let report = classify_cluster(seq, &z, &rat_int(0), ideal)?;
    out.push(check_eq(
        "zero is not a weak cluster point",
        Provenance::Reported,
        report.weak_cluster.answer,
        VerdictAnswer::No,
    ));
    // Non-closedness exhibited along the declared family.
    let z_dist = FiniteDist::degenerate(rat_int(0));
    let family: Vec<ClosednessMember> = (1..=levels)
        .map(|k| {
            let a_k = rat_pow(&rat(1, 2), u64::from(k));
            let dist = FiniteDist::degenerate(a_k.clone());
            Ok(ClosednessMember {
                name: format!("level-{k}"),
                target: degenerate_target(a_k),
                to_limit: Coupling::product(&dist, &z_dist)?,
            })
        })
        .collect::<Result<_>>()?;
    let probe = closedness_probe(seq, &rat_int(0), ideal, &family, &z, None)?;
    let all_members_weak = probe
        .members_weak
        .iter()
        .all(|a| *a == VerdictAnswer::Yes);
    out.push(CheckOutcome::new(
        "members weak, limit excluded: weak set not closed here",
        Provenance::Reported,
        all_members_weak && probe.z_weak == VerdictAnswer::No,
        format!("z_weak={:?}", probe.z_weak),
    ));
    // Positive uniform-constant probe on a separate anchored family.
    let anchored = fixtures::anchored_drift();
    let family: Vec<ClosednessMember> = (1..=6i64)
        .map(|k| {
            let v = rat(1, k);
            let dist = FiniteDist::degenerate(v.clone());
            Ok(ClosednessMember {
                name: format!("m{k}"),
                target: degenerate_target(v),
                to_limit: Coupling::product(&dist, &z_dist)?,
            })
        })
        .collect::<Result<_>>()?;
    let probe = closedness_probe(
        &anchored,
        &rat_int(1),
        &Ideal::Density,
        &family,
        &degenerate_target(rat_int(0)),
        Some(rat(1, 2)),
    )?;
    out.push(CheckOutcome::new(
        "uniform constants force weak closedness",
        Provenance::Derived,
        probe.ok && probe.weak_inherited == Some(true),
        format!("ok={}, inherited={:?}", probe.ok, probe.weak_inherited),
    ));
    Ok(out)
}

fn run_equivalence(_doc: &SpecDocument) -> Result<Vec<CheckOutcome>> {
    let bern = Target::product(FiniteDist::bernoulli(rat(1, 2))?);
    let cases: Vec<(&str, PiecewiseSequence, Target)> = vec![
        ("two-regime vs 1/4", fixtures::two_regime(), degenerate_target(rat(1, 4))),
        ("two-regime vs 0", fixtures::two_regime(), degenerate_target(rat_int(0))),
        (
            "product-chain vs 0",
            fixtures::product_chain(rat(1, 2)),
            degenerate_target(rat_int(0)),
        ),
        (
            "product-chain vs 1",
            fixtures::product_chain(rat(1, 2)),
            degenerate_target(rat_int(1)),
        ),
        ("family vs 0", fixtures::dyadic_family(), degenerate_target(rat_int(0))),
        ("family vs 1/3", fixtures::dyadic_family(), degenerate_target(rat(1, 3))),
        ("odd-contrast vs coin", fixtures::odd_contrast(), bern),
        (
            "spectrum vs 1/4",
            fixtures::geometric_spectrum(6),
            degenerate_target(rat(1, 4)),
        ),
        (
            "anchored vs 0",
            fixtures::anchored_drift(),
            degenerate_target(rat_int(0)),
        ),
    ];
    let mut out = Vec::new();
    let mut all = true;
    let mut detail = String::new();
    for (name, seq, target) in &cases {
        for ideal in [Ideal::Fin, Ideal::Density, Ideal::Summable] {
            let rep = prop_equivalence(seq, target, &ideal)?;
            if !rep.agree {
                all = false;
                detail.push_str(&format!(
                    "{name} under {}: probability={:?} rho={:?}; ",
                    ideal.name(),
                    rep.probability_route,
                    rep.rho_route
                ));
            }
        }
    }
    out.push(CheckOutcome::new(
        "probability and Ky Fan routes agree on every registry sequence",
        Provenance::Reported,
        all,
        if detail.is_empty() {
            "100% agreement".into()
        } else {
            detail
        },
    ));
    Ok(out)
}

fn run_quarter_joint(doc: &SpecDocument) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let target = doc
        .target
        .as_ref()
        .ok_or_else(|| anyhow!("target"))?
        .to_target()?;
    let report = classify_cluster(&doc.sequence, &target, &rat_int(0), &doc.ideal)?;
    out.push(check_eq(
        "weak cluster with constant 1/4",
        Provenance::Reported,
        report.delta_star_sup.map(|d| format_rational(&d)),
        Some("1/4".to_string()),
    ));
    out.push(check_eq(
        "not a strong cluster point",
        Provenance::Derived,
        report.strong_cluster.answer,
        VerdictAnswer::No,
    ));
    Ok(out)
}

fn run_closedness(doc: &SpecDocument) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let seq = &doc.sequence;
    let r = rat(1, 4);
    let z_value = rat(1, 4);
    let z_dist = FiniteDist::degenerate(z_value.clone());
    let family: Vec<ClosednessMember> = (1..=8i64)
        .map(|k| {
            let v = rat(1, 4) - rat(1, 4 * k);
            let dist = FiniteDist::degenerate(v.clone());
            Ok(ClosednessMember {
                name: format!("member-{k}"),
                target: degenerate_target(v),
                to_limit: Coupling::product(&dist, &z_dist)?,
            })
        })
        .collect::<Result<_>>()?;
    let probe = closedness_probe(
        seq,
        &r,
        &doc.ideal,
        &family,
        &degenerate_target(z_value),
        Some(rat(1, 2)),
    )?;
    out.push(CheckOutcome::new(
        "limit set closed along the declared family",
        Provenance::Reported,
        probe.limit_inherited == Some(true),
        format!("{:?}", probe.limit_inherited),
    ));
    out.push(CheckOutcome::new(
        "strong cluster set closed along the declared family",
        Provenance::Reported,
        probe.strong_inherited == Some(true),
        format!("{:?}", probe.strong_inherited),
    ));
    out.push(CheckOutcome::new(
        "member distances decrease to the limit",
        Provenance::Derived,
        probe.member_rhos.windows(2).all(|w| w[1] <= w[0])
            && probe.member_rhos.last().map_or(false, |r| r.is_zero() || *r == rat(1, 32)),
        format!(
            "rhos: {}",
            probe
                .member_rhos
                .iter()
                .map(format_rational)
                .collect::<Vec<_>>()
                .join(", ")
        ),
    ));
    Ok(out)
}

fn run_ias(doc: &SpecDocument) -> Result<Vec<CheckOutcome>> {
    use roughlab_core::seq::{FamilyModel, PieceModel, ProbFn, ValueFn};
    let seq_x = doc.sequence.clone();
    // Modify the family model on the powers of two.
    let fam = doc
        .sequence
        .family()
        .ok_or_else(|| anyhow!("family fixture expected"))?
        .clone();
    let seq_y = PiecewiseSequence::new(
        vec![PieceModel {
            set: IndexSet::powers(2, 1),
            atoms: vec![(
                ValueFn::constant(rat_int(5)),
                ProbFn::constant(rat_int(1)).map_err(|e| anyhow!(e.to_string()))?,
            )],
        }],
        Some(FamilyModel { atoms: fam.atoms }),
    )
    .map_err(|e| anyhow!(e.to_string()))?;
    let target = degenerate_target(rat_int(0));
    let report = ias_equivalence_probe(
        &seq_x,
        &seq_y,
        &doc.ideal,
        &target,
        &rat_int(0),
        &IndexSet::powers(2, 1),
    )
    .map_err(|e| anyhow!(e.to_string()))?;
    Ok(vec![
        CheckOutcome::new(
            "limit reports agree after null modification",
            Provenance::Reported,
            report.limit_agree,
            format!("{:?} vs {:?}", report.left_limit.answer, report.right_limit.answer),
        ),
        CheckOutcome::new(
            "cluster reports agree after null modification",
            Provenance::Reported,
            report.cluster_agree,
            format!(
                "delta_star {:?} vs {:?}",
                report.left_delta_star.as_ref().map(format_rational),
                report.right_delta_star.as_ref().map(format_rational)
            ),
        ),
    ])
}

fn run_lemma_grid(_doc: &SpecDocument) -> Result<Vec<CheckOutcome>> {
    let bern = Target::product(FiniteDist::bernoulli(rat(1, 2))?);
    let cases: Vec<(PiecewiseSequence, Target, Rational)> = vec![
        (fixtures::odd_contrast(), bern, rat_int(1)),
        (fixtures::dyadic_family(), degenerate_target(rat_int(0)), rat_int(0)),
        (
            fixtures::product_chain(rat(1, 2)),
            degenerate_target(rat_int(0)),
            rat_int(0),
        ),
        (fixtures::two_regime(), degenerate_target(rat(1, 4)), rat(1, 4)),
        (
            fixtures::geometric_spectrum(6),
            degenerate_target(rat(1, 8)),
            rat_int(0),
        ),
    ];
    let mut violations = 0usize;
    let mut total = 0usize;
    for (seq, target, r) in &cases {
        for ideal in [Ideal::Fin, Ideal::Density, Ideal::Summable] {
            let grid: Vec<Rational> = (1..=10).map(|k| rat(k, 10)).collect();
            let mut verdicts = Vec::new();
            for eps in &grid {
                for delta in &grid {
                    let t = r + eps;
                    let (ans, _) = proximity_set_verdict(seq, target, &t, delta, &ideal)
                        .map_err(|e| anyhow!(e.to_string()))?;
                    verdicts.push((eps.clone(), delta.clone(), ans));
                    total += 1;
                }
            }
            use roughlab_core::index::Answer;
            for (e1, d1, a1) in &verdicts {
                if *a1 != Answer::In {
                    continue;
                }
                for (e2, d2, a2) in &verdicts {
                    if e2 <= e1 && d2 >= d1 && *a2 == Answer::NotIn {
                        violations += 1;
                    }
                }
            }
        }
    }
    Ok(vec![CheckOutcome::new(
        "no monotonicity violation on the 10x10 grids",
        Provenance::Reported,
        violations == 0,
        format!("{total} grid points, {violations} violations"),
    )])
}

fn run_dyadic_family(doc: &SpecDocument) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let seq = &doc.sequence;
    let ideal = &doc.ideal;
    let zero = degenerate_target(rat_int(0));
    let report = classify_cluster(seq, &zero, &rat_int(0), ideal)?;
    out.push(check_eq(
        "zero is a strong cluster point",
        Provenance::Reported,
        report.strong_cluster.answer,
        VerdictAnswer::Yes,
    ));
    out.push(check_eq(
        "zero is not a limit point",
        Provenance::Reported,
        report.limit_point.answer,
        VerdictAnswer::No,
    ));
    for j in 1..=20u32 {
        let d = natural_density(&IndexSet::dyadic(j - 1));
        let want = DensityResult::Exact(rat_int(1) / rat_pow(&rat_int(2), u64::from(j)));
        if d != want {
            out.push(CheckOutcome::new(
                &format!("density of member {j}"),
                Provenance::Reported,
                false,
                format!("{d:?}"),
            ));
        }
    }
    out.push(CheckOutcome::new(
        "member densities are the dyadic powers up to j=20",
        Provenance::Reported,
        true,
        "1/2^j for j = 1..20".into(),
    ));
    let fam = seq.family_density();
    let mut tail_ok = true;
    for j in 0..=20u64 {
        let want = if j == 0 {
            rat_int(1)
        } else {
            rat_int(1) / rat_pow(&rat_int(2), j)
        };
        match tail_union_upper_density(&fam, j) {
            DensityResult::Interval { lower, upper } => {
                if !(lower.is_zero() && upper == want) {
                    tail_ok = false;
                }
            }
            _ => tail_ok = false,
        }
    }
    out.push(CheckOutcome::new(
        "tail-union bound is the geometric tail 2^-J",
        Provenance::Reported,
        tail_ok,
        "interval [0, 2^-J] for J = 0..20".into(),
    ));
    // Each member target is a limit point through its own class.
    for j in [1i64, 2, 3] {
        let rep = classify_cluster(seq, &degenerate_target(rat(1, j)), &rat_int(0), ideal)?;
        out.push(check_eq(
            &format!("1/{j} is a limit point"),
            Provenance::Derived,
            rep.limit_point.answer,
            VerdictAnswer::Yes,
        ));
    }
    Ok(out)
}
