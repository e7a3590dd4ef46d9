//! Piecewise symbolic sequences of laws.
//!
//! A sequence assigns to each index `n` a finitely supported law on the
//! rational line. Finitely many fixed pieces claim disjoint index sets; an
//! optional family piece covers the remaining indices through the dyadic
//! partition, with the member parameter `j = v2(n) + 1`. Atom masses are
//! probability functions of `n` that must sum to the constant one
//! symbolically; atom values are value functions of `n` (and of `j` inside
//! the family).

use super::probfn::{ProbFn, ProbFnError};
use super::valuefn::{ValueFn, ValueFnError};
use crate::dist::{DistError, FiniteDist};
use crate::index::{FamilyDensity, IndexSet};
use crate::rational::Rational;
use crate::seq::decay::Decay;
use num::{One, Zero};

/// Enumeration bound for the structural coverage/disjointness validation.
pub const COVERAGE_CHECK_LIMIT: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeqError {
    #[error("atom masses of piece {piece} do not sum to one symbolically")]
    MassNotOneSymbolic { piece: String },
    #[error("pieces overlap at index {n}")]
    OverlappingPieces { n: u64 },
    #[error("no piece covers index {n}")]
    NotCovered { n: u64 },
    #[error("index {n} is outside the validity range of a mass function")]
    OutsideValidity { n: u64 },
    #[error("family-indexed atom value used in a fixed piece")]
    FamilyIndexedValueInFixedPiece,
    #[error("a piece must carry at least one atom")]
    EmptyPiece,
    #[error(transparent)]
    Value(#[from] ValueFnError),
    #[error(transparent)]
    Prob(#[from] ProbFnError),
    #[error(transparent)]
    Dist(#[from] DistError),
}

/// One fixed piece: an index set and its atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceModel {
    pub set: IndexSet,
    pub atoms: Vec<(ValueFn, ProbFn)>,
}

/// The family piece over the dyadic partition: member `j` lives on the
/// indices of dyadic valuation `j - 1` not claimed by a fixed piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyModel {
    pub atoms: Vec<(ValueFn, ProbFn)>,
}

/// Which piece an index resolves to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceRef {
    Fixed(usize),
    Family { j: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseSequence {
    pieces: Vec<PieceModel>,
    family: Option<FamilyModel>,
}

fn symbolic_mass_is_one(atoms: &[(ValueFn, ProbFn)]) -> bool {
    let total = atoms
        .iter()
        .fold(Decay::zero(), |acc, (_, p)| acc.add(p.decay()));
    total == Decay::constant(Rational::one())
}

impl PiecewiseSequence {
    pub fn new(
        pieces: Vec<PieceModel>,
        family: Option<FamilyModel>,
    ) -> Result<Self, SeqError> {
        for (i, piece) in pieces.iter().enumerate() {
            if piece.atoms.is_empty() {
                return Err(SeqError::EmptyPiece);
            }
            if !symbolic_mass_is_one(&piece.atoms) {
                return Err(SeqError::MassNotOneSymbolic {
                    piece: format!("{}", piece.set),
                });
            }
            if piece.atoms.iter().any(|(v, _)| v.uses_family_index()) {
                return Err(SeqError::FamilyIndexedValueInFixedPiece);
            }
            let _ = i;
        }
        if let Some(fam) = &family {
            if fam.atoms.is_empty() {
                return Err(SeqError::EmptyPiece);
            }
            if !symbolic_mass_is_one(&fam.atoms) {
                return Err(SeqError::MassNotOneSymbolic {
                    piece: "family".into(),
                });
            }
        }
        let seq = PiecewiseSequence { pieces, family };
        seq.validate_partition()?;
        seq.validate_mass_prefix()?;
        Ok(seq)
    }

    fn validate_partition(&self) -> Result<(), SeqError> {
        for n in 1..=COVERAGE_CHECK_LIMIT {
            let mut hits = 0usize;
            for piece in &self.pieces {
                if piece.set.contains(n) {
                    hits += 1;
                }
            }
            if hits > 1 {
                return Err(SeqError::OverlappingPieces { n });
            }
            if hits == 0 && self.family.is_none() {
                return Err(SeqError::NotCovered { n });
            }
        }
        Ok(())
    }

    /// Pointwise mass validity below the symbolic validity indices.
    fn validate_mass_prefix(&self) -> Result<(), SeqError> {
        let all_atoms = self
            .pieces
            .iter()
            .flat_map(|p| p.atoms.iter())
            .chain(self.family.iter().flat_map(|f| f.atoms.iter()));
        let max_n_min = all_atoms.map(|(_, p)| p.n_min()).max().unwrap_or(1);
        for n in 1..max_n_min.min(COVERAGE_CHECK_LIMIT + 1) {
            let Some(piece_ref) = self.resolve(n) else {
                continue;
            };
            for (_, p) in self.atoms_of(piece_ref) {
                if n < p.n_min() {
                    let v = p.eval(n);
                    if v < Rational::zero() || v > Rational::one() {
                        return Err(SeqError::OutsideValidity { n });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn pieces(&self) -> &[PieceModel] {
        &self.pieces
    }

    pub fn family(&self) -> Option<&FamilyModel> {
        self.family.as_ref()
    }

    /// The piece responsible for index `n`.
    pub fn resolve(&self, n: u64) -> Option<PieceRef> {
        for (i, piece) in self.pieces.iter().enumerate() {
            if piece.set.contains(n) {
                return Some(PieceRef::Fixed(i));
            }
        }
        if self.family.is_some() {
            return Some(PieceRef::Family {
                j: u64::from(n.trailing_zeros()) + 1,
            });
        }
        None
    }

    pub fn atoms_of(&self, piece: PieceRef) -> &[(ValueFn, ProbFn)] {
        match piece {
            PieceRef::Fixed(i) => &self.pieces[i].atoms,
            PieceRef::Family { .. } => &self.family.as_ref().expect("family present").atoms,
        }
    }

    /// The index set of a family member: the dyadic class minus every fixed
    /// piece.
    pub fn family_member_set(&self, j: u64) -> IndexSet {
        let mut set = IndexSet::dyadic((j - 1).try_into().expect("family parameter in range"));
        for piece in &self.pieces {
            set = IndexSet::difference(set, piece.set.clone());
        }
        set
    }

    /// Per-member exact densities of the dyadic family.
    pub fn family_density(&self) -> FamilyDensity {
        FamilyDensity::dyadic()
    }

    /// The exact law at index `n`.
    pub fn law_at(&self, n: u64) -> Result<FiniteDist, SeqError> {
        assert!(n >= 1);
        let piece = self.resolve(n).ok_or(SeqError::NotCovered { n })?;
        let j = match piece {
            PieceRef::Family { j } => Some(j),
            PieceRef::Fixed(_) => None,
        };
        let atoms = self.atoms_of(piece);
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(atoms.len());
        for (value, prob) in atoms {
            let mass = prob.eval(n);
            if n < prob.n_min() && (mass < Rational::zero() || mass > Rational::one()) {
                return Err(SeqError::OutsideValidity { n });
            }
            let v = value.eval(n, j)?;
            out.push((v, mass));
        }
        Ok(FiniteDist::on_line(out).map_err(DistError::from)?)
    }
}
