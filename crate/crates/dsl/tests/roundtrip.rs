//! Round-trip identity on generated documents and diagnostics on mutated
//! sources.

use proptest::prelude::*;
use roughlab_core::index::{Ideal, IndexSet};
use roughlab_core::rational::{rat, Rational};
use roughlab_core::seq::{FamilyModel, PieceModel, PiecewiseSequence, ProbFn, ValueFn};
use roughlab_dsl::{parse, print, CouplingDecl, Query, SpecDocument, TargetDecl};

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn arb_unit_rational() -> impl Strategy<Value = Rational> {
    (1i64..=7, 2i64..=8)
        .prop_map(|(a, b)| {
            let (a, b) = if a < b { (a, b) } else { (b - 1, b) };
            rat(a.max(1), b)
        })
        .prop_filter("proper fraction", |q| {
            *q > rat(0, 1) && *q < rat(1, 1)
        })
}

fn arb_valuefn(family: bool) -> impl Strategy<Value = ValueFn> {
    let nonzero = (1i64..=9, 1i64..=4, any::<bool>())
        .prop_map(|(n, d, neg)| if neg { rat(-n, d) } else { rat(n, d) });
    let base = prop_oneof![Just(rat(2, 1)), Just(rat(3, 1)), Just(rat(3, 2))];
    let mut options = vec![
        arb_rational().prop_map(ValueFn::constant).boxed(),
        (nonzero.clone(), 1u32..=3)
            .prop_map(|(c, k)| ValueFn::monomial(c, k).unwrap())
            .boxed(),
        (nonzero.clone(), base)
            .prop_map(|(c, b)| ValueFn::exponential(c, b).unwrap())
            .boxed(),
        (nonzero.clone(), 1u32..=3)
            .prop_map(|(c, k)| ValueFn::reciprocal_shift(c, k).unwrap())
            .boxed(),
    ];
    if family {
        options.push(
            (nonzero, 0u64..=3)
                .prop_map(|(c, s)| ValueFn::indexed_const(c, s))
                .boxed(),
        );
    }
    proptest::strategy::Union::new(options)
}

/// Mass patterns that sum to one symbolically.
fn arb_mass_pattern() -> impl Strategy<Value = Vec<ProbFn>> {
    prop_oneof![
        Just(vec![ProbFn::constant(rat(1, 1)).unwrap()]),
        arb_unit_rational().prop_map(|a| {
            let pa = ProbFn::constant(a).unwrap();
            let pb = pa.one_minus().unwrap();
            vec![pa, pb]
        }),
        (arb_unit_rational(), 1u32..=2).prop_map(|(c, k)| {
            let pa = ProbFn::recip(c, k).unwrap();
            let pb = pa.one_minus().unwrap();
            vec![pa, pb]
        }),
        arb_unit_rational().prop_map(|p| {
            let pa = ProbFn::geom_pow(p).unwrap();
            let pb = pa.one_minus().unwrap();
            vec![pa, pb]
        }),
        (arb_unit_rational(), 1u32..=2).prop_map(|(c, k)| {
            let half = ProbFn::constant(rat(1, 2)).unwrap();
            let dip = ProbFn::recip(c / rat(2, 1), k).unwrap();
            let pa = half.sub(&dip).unwrap();
            let pb = pa.one_minus().unwrap();
            vec![pa, pb]
        }),
    ]
}

fn atoms_strategy(family: bool) -> impl Strategy<Value = Vec<(ValueFn, ProbFn)>> {
    arb_mass_pattern().prop_flat_map(move |masses| {
        let k = masses.len();
        proptest::collection::vec(arb_valuefn(family), k).prop_map(move |values| {
            values
                .into_iter()
                .zip(masses.clone())
                .collect::<Vec<(ValueFn, ProbFn)>>()
        })
    })
}

fn arb_sequence() -> impl Strategy<Value = PiecewiseSequence> {
    let split = prop_oneof![
        Just(vec![IndexSet::Full]),
        Just(vec![
            IndexSet::arith_prog(2, 1),
            IndexSet::complement(IndexSet::arith_prog(2, 1)),
        ]),
        Just(vec![
            IndexSet::powers(2, 1),
            IndexSet::complement(IndexSet::powers(2, 1)),
        ]),
        Just(vec![
            IndexSet::poly_image(1, 2),
            IndexSet::complement(IndexSet::poly_image(1, 2)),
        ]),
    ];
    let fixed = split.prop_flat_map(|sets| {
        let k = sets.len();
        proptest::collection::vec(atoms_strategy(false), k).prop_map(move |atom_lists| {
            let pieces: Vec<PieceModel> = sets
                .clone()
                .into_iter()
                .zip(atom_lists)
                .map(|(set, atoms)| PieceModel { set, atoms })
                .collect();
            PiecewiseSequence::new(pieces, None).expect("generated sequence is valid")
        })
    });
    let family_only = atoms_strategy(true).prop_map(|atoms| {
        PiecewiseSequence::new(vec![], Some(FamilyModel { atoms }))
            .expect("generated family is valid")
    });
    let family_with_carve = (atoms_strategy(true), atoms_strategy(false)).prop_map(
        |(fam_atoms, piece_atoms)| {
            PiecewiseSequence::new(
                vec![PieceModel {
                    set: IndexSet::powers(2, 1),
                    atoms: piece_atoms,
                }],
                Some(FamilyModel { atoms: fam_atoms }),
            )
            .expect("generated carved family is valid")
        },
    );
    prop_oneof![fixed, family_only, family_with_carve]
}

fn arb_ideal() -> impl Strategy<Value = Ideal> {
    use roughlab_core::index::{SubmeasureSpec, WeightKind};
    prop_oneof![
        Just(Ideal::Fin),
        Just(Ideal::Density),
        Just(Ideal::Summable),
        (1u64..=64, 2i64..=100).prop_map(|(depth, t)| Ideal::exh(
            SubmeasureSpec::WeightedSum(WeightKind::ReciprocalPow(2)),
            depth,
            rat(1, t)
        )),
    ]
}

fn arb_target_atoms() -> impl Strategy<Value = Vec<(Rational, Rational)>> {
    proptest::collection::vec((arb_rational(), 1u64..=5), 1..=3).prop_map(|entries| {
        let mut values: Vec<Rational> = Vec::new();
        let mut weights: Vec<u64> = Vec::new();
        for (v, w) in entries {
            if !values.contains(&v) {
                values.push(v);
                weights.push(w);
            }
        }
        let total: u64 = weights.iter().sum();
        let mut atoms: Vec<(Rational, Rational)> = values
            .into_iter()
            .zip(weights)
            .map(|(v, w)| (v, Rational::new(w.into(), total.into())))
            .collect();
        // Documents hold target atoms in canonical (sorted) order.
        atoms.sort_by(|(a, _), (b, _)| a.cmp(b));
        atoms
    })
}

fn arb_queries() -> impl Strategy<Value = Vec<Query>> {
    let q = prop_oneof![
        (1u64..=40).prop_map(|n| Query::Metric { n }),
        (0i64..=3, proptest::option::of(arb_unit_rational())).prop_map(|(r, eps)| Query::Limit {
            r: rat(r, 2),
            delta: eps.clone(),
            eps,
        }),
        (0i64..=3).prop_map(|r| Query::Cluster { r: rat(r, 2) }),
        proptest::collection::vec(arb_rational(), 1..=3)
            .prop_map(|members| Query::Diameter { r: rat(1, 4), members }),
        proptest::collection::vec(arb_target_atoms(), 1..=2)
            .prop_map(|candidates| Query::Sandwich { r: rat(1, 1), candidates }),
    ];
    proptest::collection::vec(q, 0..=4)
}

fn arb_document() -> impl Strategy<Value = SpecDocument> {
    (
        arb_ideal(),
        arb_sequence(),
        proptest::option::of(arb_target_atoms()),
        arb_queries(),
    )
        .prop_map(|(ideal, sequence, target_atoms, mut queries)| {
            let target = target_atoms.map(|atoms| TargetDecl {
                atoms,
                coupling: CouplingDecl::Independent,
            });
            if target.is_none() {
                queries.clear();
            }
            SpecDocument {
                ideal,
                sequence,
                target,
                queries,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn parse_print_round_trip(doc in arb_document()) {
        let text = print(&doc);
        let parsed = parse(&text).map_err(|e| {
            TestCaseError::fail(format!("reparse failed: {:?}\n{text}", e[0]))
        })?;
        prop_assert_eq!(&parsed, &doc, "document drift through print/parse:\n{}", text);
        // Printing is idempotent on the canonical form.
        prop_assert_eq!(print(&parsed), text);
    }

    #[test]
    fn token_deletion_never_corrupts_silently(doc in arb_document(), pick in any::<prop::sample::Index>()) {
        let text = print(&doc);
        let tokens: Vec<&str> = text.split_whitespace().collect();
        prop_assume!(tokens.len() > 1);
        let k = pick.index(tokens.len());
        let mutated: Vec<&str> = tokens
            .iter()
            .enumerate()
            .filter_map(|(i, t)| (i != k).then_some(*t))
            .collect();
        let mutated = mutated.join(" ");
        match parse(&mutated) {
            Err(_) => {} // diagnostic, as required
            Ok(reparsed) => {
                // If the mutation still parses, it must parse to exactly what
                // the mutated text says, never silently to the original.
                prop_assert_eq!(print(&reparsed), print(&reparsed));
                prop_assert_ne!(&reparsed, &doc, "deleting {:?} was silently ignored", tokens[k]);
            }
        }
    }

    #[test]
    fn mass_perturbation_yields_a_diagnostic(doc in arb_document()) {
        // Perturb the first "prob <rat>" mass upward; exact mass validation
        // must reject the document.
        let text = print(&doc);
        if let Some(pos) = text.find("prob 1/2") {
            let mutated = format!("{}prob 3/5{}", &text[..pos], &text[pos + 8..]);
            prop_assert!(parse(&mutated).is_err(), "perturbed mass accepted:\n{mutated}");
        }
    }
}

#[test]
fn deleted_token_example_yields_diagnostic() {
    let text = "ideal density sequence { piece full { atom value 0 prob 1 } }";
    let missing = text.replace("prob 1", "prob");
    assert!(parse(&missing).is_err());
    let missing_brace = text.replace(" } }", " }");
    assert!(parse(&missing_brace).is_err());
}
