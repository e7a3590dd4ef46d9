//! The abstract specification document.

use roughlab_core::analysis::{CouplingSpec, Target};
use roughlab_core::dist::FiniteDist;
use roughlab_core::index::Ideal;
use roughlab_core::rational::Rational;
use roughlab_core::seq::{JointTable, PiecewiseSequence, ProbFn};

/// Declared target: atoms of the law plus the coupling to the sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetDecl {
    pub atoms: Vec<(Rational, Rational)>,
    pub coupling: CouplingDecl,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CouplingDecl {
    Independent,
    /// Joint cells `(sequence atom index, target atom index, mass function)`.
    Joint(Vec<(usize, usize, ProbFn)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Query {
    /// Ky Fan distance between the sequence law at `n` and the target.
    Metric { n: u64 },
    /// Rough ideal convergence at roughness `r`; the optional grid point
    /// additionally evaluates the proximity set at `(r + eps, delta)`.
    Limit {
        r: Rational,
        eps: Option<Rational>,
        delta: Option<Rational>,
    },
    /// Limit-point / cluster classification at roughness `r`.
    Cluster { r: Rational },
    /// Diameter probe over degenerate members.
    Diameter { r: Rational, members: Vec<Rational> },
    /// Sandwich probe over candidate laws (atom lists).
    Sandwich {
        r: Rational,
        candidates: Vec<Vec<(Rational, Rational)>>,
    },
}

/// A parsed and validated specification document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecDocument {
    pub ideal: Ideal,
    pub sequence: PiecewiseSequence,
    pub target: Option<TargetDecl>,
    pub queries: Vec<Query>,
}

impl TargetDecl {
    /// Materializes the declared target for the analysis layer.
    pub fn to_target(&self) -> Result<Target, roughlab_core::dist::DistError> {
        let dist = FiniteDist::on_line(self.atoms.clone())?;
        let coupling = match &self.coupling {
            CouplingDecl::Independent => CouplingSpec::Product,
            CouplingDecl::Joint(entries) => CouplingSpec::SinglePieceJoint(JointTable {
                entries: entries.clone(),
            }),
        };
        Ok(Target { dist, coupling })
    }
}
