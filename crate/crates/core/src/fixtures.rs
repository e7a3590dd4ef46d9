//! Canonical sequence models used by the test suites and the reproduction
//! registry.
//!
//! Each builder returns a validated [`PiecewiseSequence`]; targets and
//! couplings are left to the caller.

use crate::index::IndexSet;
use crate::rational::{rat, rat_int, rat_pow, Rational};
use crate::seq::piece::{FamilyModel, PieceModel, PiecewiseSequence};
use crate::seq::probfn::ProbFn;
use crate::seq::valuefn::ValueFn;

/// Two-regime sequence: a symmetric coin on `{-5, 5}` along the powers of
/// two, and a vanishing bump `{0 w.p. 1-1/n, 1 w.p. 1/n}` elsewhere.
pub fn two_regime() -> PiecewiseSequence {
    let powers = PieceModel {
        set: IndexSet::powers(2, 1),
        atoms: vec![
            (
                ValueFn::constant(rat_int(-5)),
                ProbFn::constant(rat(1, 2)).expect("probability"),
            ),
            (
                ValueFn::constant(rat_int(5)),
                ProbFn::constant(rat(1, 2)).expect("probability"),
            ),
        ],
    };
    let elsewhere = PieceModel {
        set: IndexSet::complement(IndexSet::powers(2, 1)),
        atoms: vec![
            (
                ValueFn::constant(rat_int(0)),
                ProbFn::recip(rat_int(1), 1)
                    .expect("probability")
                    .one_minus()
                    .expect("probability"),
            ),
            (
                ValueFn::constant(rat_int(1)),
                ProbFn::recip(rat_int(1), 1).expect("probability"),
            ),
        ],
    };
    PiecewiseSequence::new(vec![powers, elsewhere], None).expect("valid sequence")
}

/// Product-chain sequence: off the squares the law is
/// `{0 w.p. 1 - p^n, 2^n w.p. p^n}`; on the squares the mass escapes to
/// infinity, modeled by the value `n` with probability one (any finite
/// target sees the same limiting behavior).
pub fn product_chain(p: Rational) -> PiecewiseSequence {
    let off_squares = PieceModel {
        set: IndexSet::complement(IndexSet::poly_image(1, 2)),
        atoms: vec![
            (
                ValueFn::constant(rat_int(0)),
                ProbFn::geom_pow(p.clone())
                    .expect("base in (0,1)")
                    .one_minus()
                    .expect("probability"),
            ),
            (
                ValueFn::exponential(rat_int(1), rat_int(2)).expect("base above 1"),
                ProbFn::geom_pow(p).expect("base in (0,1)"),
            ),
        ],
    };
    let squares = PieceModel {
        set: IndexSet::poly_image(1, 2),
        atoms: vec![(
            ValueFn::monomial(rat_int(1), 1).expect("degree"),
            ProbFn::constant(rat_int(1)).expect("probability"),
        )],
    };
    PiecewiseSequence::new(vec![off_squares, squares], None).expect("valid sequence")
}

/// Cell-mass variant of the product chain: off the squares the two values
/// `0` and `2^n` are equiprobable, which is the reading under which every
/// joint cell against a fair two-point target carries mass 1/4.
pub fn product_chain_cells() -> PiecewiseSequence {
    let off_squares = PieceModel {
        set: IndexSet::complement(IndexSet::poly_image(1, 2)),
        atoms: vec![
            (
                ValueFn::constant(rat_int(0)),
                ProbFn::constant(rat(1, 2)).expect("probability"),
            ),
            (
                ValueFn::exponential(rat_int(1), rat_int(2)).expect("base above 1"),
                ProbFn::constant(rat(1, 2)).expect("probability"),
            ),
        ],
    };
    let squares = PieceModel {
        set: IndexSet::poly_image(1, 2),
        atoms: vec![(
            ValueFn::monomial(rat_int(1), 1).expect("degree"),
            ProbFn::constant(rat_int(1)).expect("probability"),
        )],
    };
    PiecewiseSequence::new(vec![off_squares, squares], None).expect("valid sequence")
}

/// Dyadic family sequence: on member `j` the value sits at `1/j` with mass
/// `1 - 1/n^2` and at `1/(j+1)` with mass `1/n^2`.
pub fn dyadic_family() -> PiecewiseSequence {
    let fam = FamilyModel {
        atoms: vec![
            (
                ValueFn::indexed_const(rat_int(1), 0),
                ProbFn::recip(rat_int(1), 2)
                    .expect("probability")
                    .one_minus()
                    .expect("probability"),
            ),
            (
                ValueFn::indexed_const(rat_int(1), 1),
                ProbFn::recip(rat_int(1), 2).expect("probability"),
            ),
        ],
    };
    PiecewiseSequence::new(vec![], Some(fam)).expect("valid sequence")
}

/// Two-piece contrast sequence on the odd numbers versus the rest: on the
/// odds the law is `{-2 w.p. 1/2 - 1/(2n^2), 1 w.p. 1/2 + 1/(2n^2)}`, off
/// the odds the mass escapes along `{-1 w.p. 1/n, n^2 w.p. 1 - 1/n}`.
pub fn odd_contrast() -> PiecewiseSequence {
    let on_a = PieceModel {
        set: IndexSet::arith_prog(2, 1),
        atoms: vec![
            (
                ValueFn::constant(rat_int(-2)),
                ProbFn::constant(rat(1, 2))
                    .expect("probability")
                    .sub(&ProbFn::recip(rat(1, 2), 2).expect("probability"))
                    .expect("probability"),
            ),
            (
                ValueFn::constant(rat_int(1)),
                ProbFn::constant(rat(1, 2))
                    .expect("probability")
                    .add(&ProbFn::recip(rat(1, 2), 2).expect("probability"))
                    .expect("probability"),
            ),
        ],
    };
    let off_a = PieceModel {
        set: IndexSet::complement(IndexSet::arith_prog(2, 1)),
        atoms: vec![
            (
                ValueFn::constant(rat_int(-1)),
                ProbFn::recip(rat_int(1), 1).expect("probability"),
            ),
            (
                ValueFn::monomial(rat_int(1), 2).expect("degree"),
                ProbFn::recip(rat_int(1), 1)
                    .expect("probability")
                    .one_minus()
                    .expect("probability"),
            ),
        ],
    };
    PiecewiseSequence::new(vec![on_a, off_a], None).expect("valid sequence")
}

/// Geometric-spectrum sequence: on the odd numbers the value is `2^-k` with
/// probability `2^-k` for `k = 1..=levels`, topped up by a far atom at `2`
/// carrying the remainder `2^-levels`; elsewhere the mass escapes along
/// `{-n^3 w.p. 1/3, n^2 w.p. 2/3}`.
pub fn geometric_spectrum(levels: u32) -> PiecewiseSequence {
    assert!(levels >= 1);
    let mut atoms = Vec::new();
    for k in 1..=levels {
        let a_k = rat_pow(&rat(1, 2), u64::from(k));
        atoms.push((
            ValueFn::constant(a_k.clone()),
            ProbFn::constant(a_k).expect("probability"),
        ));
    }
    atoms.push((
        ValueFn::constant(rat_int(2)),
        ProbFn::constant(rat_pow(&rat(1, 2), u64::from(levels))).expect("probability"),
    ));
    let on_a = PieceModel {
        set: IndexSet::arith_prog(2, 1),
        atoms,
    };
    let off_a = PieceModel {
        set: IndexSet::complement(IndexSet::arith_prog(2, 1)),
        atoms: vec![
            (
                ValueFn::monomial(rat_int(-1), 3).expect("degree"),
                ProbFn::constant(rat(1, 3)).expect("probability"),
            ),
            (
                ValueFn::monomial(rat_int(1), 2).expect("degree"),
                ProbFn::constant(rat(2, 3)).expect("probability"),
            ),
        ],
    };
    PiecewiseSequence::new(vec![on_a, off_a], None).expect("valid sequence")
}

/// Half-split sequence: `{0 w.p. 1/2, n w.p. 1/2}` on every index; pairs
/// with an explicit all-quarters joint against a fair two-point target.
pub fn half_split() -> PiecewiseSequence {
    let piece = PieceModel {
        set: IndexSet::Full,
        atoms: vec![
            (
                ValueFn::constant(rat_int(0)),
                ProbFn::constant(rat(1, 2)).expect("probability"),
            ),
            (
                ValueFn::monomial(rat_int(1), 1).expect("degree"),
                ProbFn::constant(rat(1, 2)).expect("probability"),
            ),
        ],
    };
    PiecewiseSequence::new(vec![piece], None).expect("valid sequence")
}

/// Anchored drift: on the odds the sequence is the constant zero; off the
/// odds the value escapes to infinity with full mass.
pub fn anchored_drift() -> PiecewiseSequence {
    let on = PieceModel {
        set: IndexSet::arith_prog(2, 1),
        atoms: vec![(
            ValueFn::constant(rat_int(0)),
            ProbFn::constant(rat_int(1)).expect("probability"),
        )],
    };
    let off = PieceModel {
        set: IndexSet::complement(IndexSet::arith_prog(2, 1)),
        atoms: vec![(
            ValueFn::monomial(rat_int(1), 1).expect("degree"),
            ProbFn::constant(rat_int(1)).expect("probability"),
        )],
    };
    PiecewiseSequence::new(vec![on, off], None).expect("valid sequence")
}

/// One-point lift of a deterministic sequence given by a value function per
/// piece of a two-piece split.
pub fn deterministic_lift(on_odd: ValueFn, off_odd: ValueFn) -> PiecewiseSequence {
    let one = || ProbFn::constant(rat_int(1)).expect("probability");
    PiecewiseSequence::new(
        vec![
            PieceModel {
                set: IndexSet::arith_prog(2, 1),
                atoms: vec![(on_odd, one())],
            },
            PieceModel {
                set: IndexSet::complement(IndexSet::arith_prog(2, 1)),
                atoms: vec![(off_odd, one())],
            },
        ],
        None,
    )
    .expect("valid sequence")
}
