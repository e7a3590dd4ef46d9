//! Symbolic subsets of the naturals, their densities, and ideal membership.

mod density;
mod ideal;
mod set;
mod upset;

pub use density::{
    natural_density, tail_union_upper_density, DensityError, DensityResult, FamilyDensity,
};
pub use ideal::{
    dual_filter_member, ideal_member, Answer, Certificate, Finiteness, Ideal, MembershipVerdict,
    SubmeasureSpec, WeightKind,
};
pub use set::IndexSet;
pub use upset::UpSet;
