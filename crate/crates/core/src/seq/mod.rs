//! Symbolic sequences of finitely supported laws and their limiting
//! behavior.

pub mod decay;
pub mod piece;
pub mod probfn;
pub mod profile;
pub mod valuefn;

pub use decay::{Decay, Direction, Sign};
pub use piece::{FamilyModel, PieceModel, PieceRef, PiecewiseSequence, SeqError};
pub use probfn::{ProbFn, ProbFnError};
pub use profile::{
    build_pairs, exceedance_fn, indexed_within, limiting_mass_profile, threshold_solution,
    Approach, DistanceForm, DistanceLimit, Exceedance, JSet, JointTable, MassProfile, PairForm,
    PieceCoupling,
};
pub use valuefn::{ValueFn, ValueFnError, ValueLimit};
