//! Decision procedures for rough ideal convergence in probability.
//!
//! Everything here reduces questions of the form "does this index set built
//! from probability thresholds belong to the ideal?" to the limiting mass
//! profiles of the sequence's pieces against the target, combined with the
//! certified ideal-membership verdicts of the piece index sets. Answers are
//! three-valued: `Yes` carries per-piece limit data and membership
//! certificates, `No` carries a replayable counterexample witness, and
//! `Unknown` names the blocking subproblem.

mod engine;
mod probes;
mod types;

pub use engine::{
    check_rough_limit, classify_cluster, exceedance_pointwise, exceedance_symbolic,
    proximity_set_verdict, validate_target, AnalysisError, CouplingSpec, Target,
};
pub use probes::{
    closedness_probe, degenerate_rho, diameter_probe, ias_equivalence_probe, prop_equivalence,
    replay_limit_witness, rho_route_verdict, sandwich_probe, ClosednessMember, ClosednessReport,
    DiameterReport, EquivalenceReport, IasReport, ProbeError, SandwichCandidate, SandwichReport,
    SandwichRow,
};
pub use types::{ClusterReport, PieceDatum, Verdict, VerdictAnswer, Witness};
