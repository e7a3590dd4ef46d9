//! End-to-end checks of the convergence and cluster decision procedures on
//! the canonical sequence models.

use roughlab_core::analysis::{
    check_rough_limit, classify_cluster, exceedance_pointwise, exceedance_symbolic,
    proximity_set_verdict, prop_equivalence, replay_limit_witness, rho_route_verdict,
    CouplingSpec, Target, VerdictAnswer,
};
use roughlab_core::fixtures;
use roughlab_core::index::{Answer, Ideal};
use roughlab_core::rational::{rat, rat_int, rat_pow, Rational};
use roughlab_core::seq::{JointTable, PieceRef, ProbFn, ValueFn};
use roughlab_core::FiniteDist;
use num::Zero;

fn degenerate_target(v: Rational) -> Target {
    Target::product(FiniteDist::degenerate(v))
}

#[test]
fn two_regime_rough_limits_under_the_summable_ideal() {
    let seq = fixtures::two_regime();
    let r = rat(1, 4);
    // Both r and -r are rough limits: the coin piece has a convergent
    // reciprocal sum and the bump piece concentrates within distance r.
    for center in [rat(1, 4), rat(-1, 4)] {
        let v = check_rough_limit(&seq, &degenerate_target(center), &r, &Ideal::Summable).unwrap();
        assert_eq!(v.answer, VerdictAnswer::Yes, "{v:?}");
    }
    // A far target is rejected with a replayable witness.
    let far = degenerate_target(rat_int(3));
    let v = check_rough_limit(&seq, &far, &r, &Ideal::Summable).unwrap();
    assert_eq!(v.answer, VerdictAnswer::No);
    let w = v.witness.clone().unwrap();
    assert!(replay_limit_witness(&seq, &far, &r, &w).unwrap());
}

#[test]
fn two_regime_is_not_a_rough_limit_family_under_fin() {
    // Under the finite ideal the coin piece is infinite and far from any
    // single point at roughness 1/4, so nothing converges.
    let seq = fixtures::two_regime();
    let v = check_rough_limit(
        &seq,
        &degenerate_target(rat(1, 4)),
        &rat(1, 4),
        &Ideal::Fin,
    )
    .unwrap();
    assert_eq!(v.answer, VerdictAnswer::No);
}

#[test]
fn product_chain_limit_verdicts() {
    let seq = fixtures::product_chain(rat(1, 2));
    let ideal = Ideal::Density;
    // Converges in probability to zero.
    let v = check_rough_limit(&seq, &degenerate_target(rat_int(0)), &rat_int(0), &ideal).unwrap();
    assert_eq!(v.answer, VerdictAnswer::Yes, "{v:?}");
    // The constant one is a rough limit at r = 1.
    let v = check_rough_limit(&seq, &degenerate_target(rat_int(1)), &rat_int(1), &ideal).unwrap();
    assert_eq!(v.answer, VerdictAnswer::Yes, "{v:?}");
    // The fair {0, 2} law is rejected at r = 1; on the main model the
    // limiting exceedance is 1/2.
    let z = Target::product(
        FiniteDist::on_line(vec![(rat_int(0), rat(1, 2)), (rat_int(2), rat(1, 2))]).unwrap(),
    );
    let v = check_rough_limit(&seq, &z, &rat_int(1), &ideal).unwrap();
    assert_eq!(v.answer, VerdictAnswer::No);
    let w = v.witness.clone().unwrap();
    assert_eq!(w.exceedance_limit, rat(1, 2));
    assert!(replay_limit_witness(&seq, &z, &rat_int(1), &w).unwrap());
}

#[test]
fn product_chain_cells_rejection_is_three_quarters() {
    let seq = fixtures::product_chain_cells();
    let z = Target::product(
        FiniteDist::on_line(vec![(rat_int(0), rat(1, 2)), (rat_int(2), rat(1, 2))]).unwrap(),
    );
    let v = check_rough_limit(&seq, &z, &rat_int(1), &Ideal::Density).unwrap();
    assert_eq!(v.answer, VerdictAnswer::No);
    let w = v.witness.clone().unwrap();
    assert_eq!(w.exceedance_limit, rat(3, 4));
    assert!(w.epsilon < rat(1, 2) || w.epsilon == rat(1, 2));
    assert!(replay_limit_witness(&seq, &z, &rat_int(1), &w).unwrap());
}

#[test]
fn product_chain_symbolic_exceedance_is_the_geometric_power() {
    let seq = fixtures::product_chain(rat(1, 2));
    // Against the constant one at r = 1, the symbolic exceedance on the
    // off-squares piece is exactly p^n.
    let target = degenerate_target(rat_int(1));
    let exc = exceedance_symbolic(&seq, &target, PieceRef::Fixed(0), &rat_int(1), &rat(1, 4))
        .unwrap();
    let expected = ProbFn::geom_pow(rat(1, 2)).unwrap();
    assert_eq!(&exc.symbolic, expected.decay());
    for n in 1..=20u64 {
        assert_eq!(exc.eval(n), rat_pow(&rat(1, 2), n));
    }
    // And against zero at r = 0 it is p^n as well.
    let exc = exceedance_symbolic(
        &seq,
        &degenerate_target(rat_int(0)),
        PieceRef::Fixed(0),
        &rat_int(0),
        &rat(1, 2),
    )
    .unwrap();
    assert_eq!(&exc.symbolic, expected.decay());
}

#[test]
fn dyadic_family_cluster_classification() {
    let seq = fixtures::dyadic_family();
    let zero = degenerate_target(rat_int(0));
    let report = classify_cluster(&seq, &zero, &rat_int(0), &Ideal::Density).unwrap();
    assert_eq!(report.strong_cluster.answer, VerdictAnswer::Yes, "{report:?}");
    assert_eq!(report.limit_point.answer, VerdictAnswer::No, "{report:?}");
    assert_eq!(report.weak_cluster.answer, VerdictAnswer::Yes);
    assert!(report.chain_consistent());
    // Each reciprocal 1/j is a limit point through its own member class.
    for j in [1i64, 2, 3, 5] {
        let yj = degenerate_target(rat(1, j));
        let rep = classify_cluster(&seq, &yj, &rat_int(0), &Ideal::Density).unwrap();
        assert_eq!(rep.limit_point.answer, VerdictAnswer::Yes, "j={j} {rep:?}");
        assert_eq!(rep.strong_cluster.answer, VerdictAnswer::Yes);
    }
    // A point off the closure of the value set is nothing at all.
    let off = degenerate_target(rat_int(7));
    let rep = classify_cluster(&seq, &off, &rat_int(0), &Ideal::Density).unwrap();
    assert_eq!(rep.limit_point.answer, VerdictAnswer::No);
    assert_eq!(rep.strong_cluster.answer, VerdictAnswer::No);
    assert_eq!(rep.weak_cluster.answer, VerdictAnswer::No);
}

#[test]
fn dyadic_family_densities_and_rough_limit() {
    let seq = fixtures::dyadic_family();
    use roughlab_core::index::{natural_density, DensityResult, IndexSet};
    for j in 1..=20u32 {
        let d = natural_density(&IndexSet::dyadic(j - 1));
        assert_eq!(
            d,
            DensityResult::Exact(rat_int(1) / rat_pow(&rat_int(2), u64::from(j)))
        );
    }
    // Z = 0 is not a rough limit at r = 0 (members concentrate at 1/j > 0).
    let v = check_rough_limit(
        &seq,
        &degenerate_target(rat_int(0)),
        &rat_int(0),
        &Ideal::Density,
    )
    .unwrap();
    assert_eq!(v.answer, VerdictAnswer::No);
}

#[test]
fn odd_contrast_weak_but_not_strong() {
    let seq = fixtures::odd_contrast();
    let y = Target::product(FiniteDist::bernoulli(rat(1, 2)).unwrap());
    for ideal in [Ideal::Fin, Ideal::Density, Ideal::Summable] {
        let report = classify_cluster(&seq, &y, &rat_int(1), &ideal).unwrap();
        assert_eq!(
            report.weak_cluster.answer,
            VerdictAnswer::Yes,
            "{ideal:?} {report:?}"
        );
        assert_eq!(report.delta_star_sup, Some(rat(1, 2)), "{ideal:?}");
        assert_eq!(report.strong_cluster.answer, VerdictAnswer::No);
        assert!(report.chain_consistent());
    }
}

#[test]
fn geometric_spectrum_weak_constants() {
    let levels = 12u32;
    let seq = fixtures::geometric_spectrum(levels);
    let ideal = Ideal::Density;
    for k in 1..=levels {
        let a_k = rat_pow(&rat(1, 2), u64::from(k));
        let yk = degenerate_target(a_k.clone());
        let report = classify_cluster(&seq, &yk, &rat_int(0), &ideal).unwrap();
        assert_eq!(report.weak_cluster.answer, VerdictAnswer::Yes, "k={k}");
        // The far atom at 2 coincides with no a_k, so the constant is a_k
        // exactly.
        assert_eq!(report.delta_star_sup, Some(a_k), "k={k}");
        assert_eq!(report.strong_cluster.answer, VerdictAnswer::No, "k={k}");
    }
    // The declared Ky Fan limit of the Y_k is zero, which holds no mass.
    let z = degenerate_target(rat_int(0));
    let report = classify_cluster(&seq, &z, &rat_int(0), &ideal).unwrap();
    assert_eq!(report.weak_cluster.answer, VerdictAnswer::No);
    assert_eq!(report.delta_star_sup, None);
}

#[test]
fn half_split_quarter_joint_cluster() {
    let seq = fixtures::half_split();
    let quarter = ProbFn::constant(rat(1, 4)).unwrap();
    let table = JointTable {
        entries: vec![
            (0, 0, quarter.clone()),
            (0, 1, quarter.clone()),
            (1, 0, quarter.clone()),
            (1, 1, quarter),
        ],
    };
    let target = Target {
        dist: FiniteDist::bernoulli(rat(1, 2)).unwrap(),
        coupling: CouplingSpec::SinglePieceJoint(table),
    };
    for ideal in [Ideal::Fin, Ideal::Density, Ideal::Summable] {
        let report = classify_cluster(&seq, &target, &rat_int(0), &ideal).unwrap();
        assert_eq!(report.weak_cluster.answer, VerdictAnswer::Yes, "{ideal:?}");
        assert_eq!(report.delta_star_sup, Some(rat(1, 4)), "{ideal:?}");
        assert_eq!(report.strong_cluster.answer, VerdictAnswer::No);
        assert_eq!(report.limit_point.answer, VerdictAnswer::No);
    }
}

#[test]
fn proximity_verdicts_honor_threshold_monotonicity() {
    // Lemma-style grid: if the proximity set is inside the ideal at
    // (eps, delta), it stays inside for smaller eps and larger delta.
    let cases: Vec<(roughlab_core::seq::PiecewiseSequence, Target, Rational)> = vec![
        (
            fixtures::odd_contrast(),
            Target::product(FiniteDist::bernoulli(rat(1, 2)).unwrap()),
            rat_int(1),
        ),
        (
            fixtures::dyadic_family(),
            degenerate_target(rat_int(0)),
            rat_int(0),
        ),
        (
            fixtures::product_chain(rat(1, 2)),
            degenerate_target(rat_int(0)),
            rat_int(0),
        ),
    ];
    for (seq, target, r) in &cases {
        for ideal in [Ideal::Fin, Ideal::Density, Ideal::Summable] {
            let grid: Vec<Rational> = (1..=10).map(|k| rat(k, 10)).collect();
            let mut verdicts = Vec::new();
            for eps in &grid {
                for delta in &grid {
                    let t = r + eps;
                    let (ans, _) =
                        proximity_set_verdict(seq, target, &t, delta, &ideal).unwrap();
                    verdicts.push((eps.clone(), delta.clone(), ans));
                }
            }
            for (e1, d1, a1) in &verdicts {
                if *a1 != Answer::In {
                    continue;
                }
                for (e2, d2, a2) in &verdicts {
                    if e2 <= e1 && d2 >= d1 {
                        assert_ne!(
                            *a2,
                            Answer::NotIn,
                            "monotonicity violated at ({e1},{d1}) -> ({e2},{d2}) under {ideal:?}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn symbolic_exceedance_agrees_with_pointwise_computation() {
    let targets: Vec<(roughlab_core::seq::PiecewiseSequence, Target, Rational, Rational)> = vec![
        (
            fixtures::two_regime(),
            degenerate_target(rat(1, 4)),
            rat(1, 4),
            rat(1, 4),
        ),
        (
            fixtures::product_chain(rat(1, 2)),
            degenerate_target(rat_int(1)),
            rat_int(1),
            rat(1, 4),
        ),
        (
            fixtures::dyadic_family(),
            degenerate_target(rat_int(0)),
            rat_int(0),
            rat(1, 3),
        ),
        (
            fixtures::odd_contrast(),
            Target::product(FiniteDist::bernoulli(rat(1, 2)).unwrap()),
            rat_int(1),
            rat(1, 2),
        ),
    ];
    for (seq, target, r, eps) in &targets {
        let threshold = r + eps;
        for n in 1..=1000u64 {
            let piece = seq.resolve(n).expect("covered");
            let exc = exceedance_symbolic(seq, target, piece, r, eps).unwrap();
            let direct = exceedance_pointwise(seq, target, n, &threshold).unwrap();
            if n >= exc.from {
                assert_eq!(exc.eval(n), direct, "mismatch at n={n}");
            } else {
                // Below the resolution index the operation falls back to the
                // pointwise route, which is the value itself.
                let _ = direct;
            }
        }
    }
}

#[test]
fn probability_and_kyfan_routes_agree_at_zero_roughness() {
    let bern = Target::product(FiniteDist::bernoulli(rat(1, 2)).unwrap());
    let cases: Vec<(roughlab_core::seq::PiecewiseSequence, Target)> = vec![
        (fixtures::two_regime(), degenerate_target(rat(1, 4))),
        (fixtures::two_regime(), degenerate_target(rat_int(0))),
        (fixtures::product_chain(rat(1, 2)), degenerate_target(rat_int(0))),
        (fixtures::product_chain(rat(1, 2)), degenerate_target(rat_int(1))),
        (fixtures::dyadic_family(), degenerate_target(rat_int(0))),
        (fixtures::dyadic_family(), degenerate_target(rat(1, 3))),
        (fixtures::odd_contrast(), bern),
        (fixtures::geometric_spectrum(6), degenerate_target(rat(1, 4))),
        (fixtures::anchored_drift(), degenerate_target(rat_int(0))),
    ];
    for (seq, target) in &cases {
        for ideal in [Ideal::Fin, Ideal::Density, Ideal::Summable] {
            let rep = prop_equivalence(seq, target, &ideal).unwrap();
            assert!(
                rep.agree,
                "routes disagree: probability={:?} rho={:?}",
                rep.probability_route, rep.rho_route
            );
        }
    }
}

#[test]
fn deterministic_lifts_converge_like_their_sequences() {
    // x_n = 1/n everywhere: converges to 0, so the lift does at every r.
    let lift = fixtures::deterministic_lift(
        ValueFn::reciprocal_shift(rat_int(1), 1).unwrap(),
        ValueFn::reciprocal_shift(rat_int(1), 1).unwrap(),
    );
    for r in [rat_int(0), rat(1, 2)] {
        for ideal in [Ideal::Fin, Ideal::Density, Ideal::Summable] {
            let v = check_rough_limit(&lift, &degenerate_target(rat_int(0)), &r, &ideal).unwrap();
            assert_eq!(v.answer, VerdictAnswer::Yes);
        }
    }
    // Alternating 0 / 1: rough-converges to 1/2 at r = 1/2 but not at r = 1/4.
    let alt = fixtures::deterministic_lift(
        ValueFn::constant(rat_int(0)),
        ValueFn::constant(rat_int(1)),
    );
    let v = check_rough_limit(
        &alt,
        &degenerate_target(rat(1, 2)),
        &rat(1, 2),
        &Ideal::Density,
    )
    .unwrap();
    assert_eq!(v.answer, VerdictAnswer::Yes);
    let v = check_rough_limit(
        &alt,
        &degenerate_target(rat(1, 2)),
        &rat(1, 4),
        &Ideal::Density,
    )
    .unwrap();
    assert_eq!(v.answer, VerdictAnswer::No);
}

#[test]
fn strong_cluster_points_exist_for_recurring_finite_laws() {
    // A sequence whose laws range over two fixed laws: some strong cluster
    // point turns up on a small candidate grid for each positive roughness.
    let alt = fixtures::deterministic_lift(
        ValueFn::constant(rat_int(1)),
        ValueFn::constant(rat_int(0)),
    );
    for ideal in [Ideal::Fin, Ideal::Density, Ideal::Summable] {
        for r in [rat(1, 4), rat(1, 2), rat_int(1)] {
            let grid: Vec<Rational> = vec![
                rat_int(0),
                rat(1, 4),
                rat(1, 2),
                rat(3, 4),
                rat_int(1),
            ];
            let found = grid.iter().any(|y| {
                classify_cluster(&alt, &degenerate_target(y.clone()), &r, &ideal)
                    .map(|rep| rep.strong_cluster.answer == VerdictAnswer::Yes)
                    .unwrap_or(false)
            });
            assert!(found, "no strong cluster point found for r={r} {ideal:?}");
        }
    }
}

#[test]
fn pointwise_kyfan_sequence_matches_the_zero_roughness_verdict() {
    use roughlab_core::coupling::Coupling;
    use roughlab_core::kyfan::kyfan_of_law;
    // Accepted case: the product chain converges to zero under the density
    // ideal; outside the null square piece the pointwise Ky Fan distances
    // drop below every grid level and stay there.
    let seq = fixtures::product_chain(rat(1, 2));
    let target = FiniteDist::degenerate(rat_int(0));
    let squares = roughlab_core::index::IndexSet::poly_image(1, 2);
    for eps in [rat(1, 4), rat(1, 10), rat(1, 100)] {
        let mut above: Vec<u64> = Vec::new();
        for n in 1..=1000u64 {
            if squares.contains(n) {
                continue;
            }
            let law = seq.law_at(n).unwrap();
            let c = Coupling::product(&law, &target).unwrap();
            let rho_n = kyfan_of_law(&c.distance_law().unwrap()).unwrap().rho;
            if rho_n >= eps {
                above.push(n);
            }
        }
        // Finitely many exceedances, all at the very front.
        assert!(above.len() < 12, "eps={eps}: {above:?}");
        assert!(above.iter().all(|n| *n < 12));
    }
    // Rejected case: against the dyadic family target zero, the pointwise
    // distances concentrate near 1/j on each member class, never below 1/j.
    let fam = fixtures::dyadic_family();
    let mut far_count = 0u64;
    for n in 1..=1000u64 {
        let law = fam.law_at(n).unwrap();
        let c = Coupling::product(&law, &target).unwrap();
        let rho_n = kyfan_of_law(&c.distance_law().unwrap()).unwrap().rho;
        if rho_n >= rat(1, 11) {
            far_count += 1;
        }
    }
    // Members j <= 10 fill at least half of every prefix; their distances
    // stabilize near 1/j >= 1/10 > 1/11.
    assert!(far_count > 900, "only {far_count} far distances");
}

#[test]
fn rho_route_rejects_mass_escape() {
    let seq = fixtures::anchored_drift();
    // Along the odds the sequence is identically zero; along the evens the
    // mass escapes. Under the density ideal neither piece is null, so zero
    // is not a plain limit, and both routes agree on the rejection.
    let v = rho_route_verdict(&seq, &degenerate_target(rat_int(0)), &Ideal::Density).unwrap();
    assert_eq!(v, VerdictAnswer::No);
    let rep = prop_equivalence(&seq, &degenerate_target(rat_int(0)), &Ideal::Density).unwrap();
    assert!(rep.agree);
}

#[test]
fn family_member_exceedance_matches_direct_values() {
    let seq = fixtures::dyadic_family();
    let target = degenerate_target(rat_int(0));
    // Member j = 3 (indices with dyadic valuation 2): distance atoms 1/3 and
    // 1/4; at threshold 1/4 + tiny only the 1/3 atom exceeds, with mass
    // 1 - 1/n^2... the threshold r + eps = 0 + 3/10 sits between 1/4 and 1/3.
    let exc = exceedance_symbolic(
        &seq,
        &target,
        PieceRef::Family { j: 3 },
        &rat_int(0),
        &rat(3, 10),
    )
    .unwrap();
    for n in [4u64, 12, 20, 28] {
        let expected = rat_int(1) - rat_int(1) / rat_pow(&rat_int(n as i64), 2);
        assert_eq!(exc.eval(n), expected);
    }
    assert!(!exc.symbolic.limit().is_zero());
}
