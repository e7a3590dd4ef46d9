//! Verdicts, witnesses, and cluster reports.

use crate::index::Answer;
use crate::rational::{format_rational, Rational};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictAnswer {
    Yes,
    No,
    Unknown,
}

/// Replayable counterexample: at radius excess `epsilon` and level `delta`,
/// the named piece keeps limiting exceedance `exceedance_limit > delta`
/// while lying outside the ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub epsilon: Rational,
    pub delta: Rational,
    pub piece: String,
    pub exceedance_limit: Rational,
    pub membership_certificate: String,
}

/// Per-piece limit data backing a `Yes` answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceDatum {
    pub piece: String,
    pub membership: Answer,
    pub membership_certificate: String,
    pub c_plus: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub answer: VerdictAnswer,
    pub pieces: Vec<PieceDatum>,
    pub witness: Option<Witness>,
    pub blocking: Option<String>,
}

impl Verdict {
    pub fn yes(pieces: Vec<PieceDatum>) -> Self {
        Verdict {
            answer: VerdictAnswer::Yes,
            pieces,
            witness: None,
            blocking: None,
        }
    }

    pub fn no(witness: Witness, pieces: Vec<PieceDatum>) -> Self {
        Verdict {
            answer: VerdictAnswer::No,
            pieces,
            witness: Some(witness),
            blocking: None,
        }
    }

    pub fn unknown(blocking: String, pieces: Vec<PieceDatum>) -> Self {
        Verdict {
            answer: VerdictAnswer::Unknown,
            pieces,
            witness: None,
            blocking: Some(blocking),
        }
    }

    pub fn is_yes(&self) -> bool {
        self.answer == VerdictAnswer::Yes
    }

    pub fn is_no(&self) -> bool {
        self.answer == VerdictAnswer::No
    }

    /// Stable JSON form: `answer`, `certificate`, `witness`, `blocking`.
    pub fn to_json(&self) -> serde_json::Value {
        let answer = match self.answer {
            VerdictAnswer::Yes => "yes",
            VerdictAnswer::No => "no",
            VerdictAnswer::Unknown => "unknown",
        };
        let certificate: Vec<serde_json::Value> = self
            .pieces
            .iter()
            .map(|p| {
                serde_json::json!({
                    "piece": p.piece,
                    "membership": match p.membership {
                        Answer::In => "in",
                        Answer::NotIn => "not_in",
                        Answer::Unknown => "unknown",
                    },
                    "membership_certificate": p.membership_certificate,
                    "c_plus": format_rational(&p.c_plus),
                })
            })
            .collect();
        let witness = self.witness.as_ref().map(|w| {
            serde_json::json!({
                "epsilon": format_rational(&w.epsilon),
                "delta": format_rational(&w.delta),
                "piece": w.piece,
                "exceedance_limit": format_rational(&w.exceedance_limit),
                "membership_certificate": w.membership_certificate,
            })
        });
        serde_json::json!({
            "answer": answer,
            "certificate": certificate,
            "witness": witness,
            "blocking": self.blocking,
        })
    }
}

/// Limit-point / strong-cluster / weak-cluster classification of a target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterReport {
    pub limit_point: Verdict,
    pub strong_cluster: Verdict,
    pub weak_cluster: Verdict,
    /// Supremum of valid weak-cluster constants; every rational strictly
    /// between zero and this value validates the weak definition.
    pub delta_star_sup: Option<Rational>,
    /// The coupling the constants are relative to.
    pub coupling: String,
}

impl ClusterReport {
    /// The implication chain limit => strong => weak must hold whenever the
    /// answers are definite.
    pub fn chain_consistent(&self) -> bool {
        let implies = |a: &Verdict, b: &Verdict| {
            !(a.answer == VerdictAnswer::Yes && b.answer == VerdictAnswer::No)
        };
        implies(&self.limit_point, &self.strong_cluster)
            && implies(&self.strong_cluster, &self.weak_cluster)
            && implies(&self.limit_point, &self.weak_cluster)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "limit_point": self.limit_point.to_json(),
            "strong_cluster": self.strong_cluster.to_json(),
            "weak_cluster": self.weak_cluster.to_json(),
            "delta_star_sup": self.delta_star_sup.as_ref().map(format_rational),
            "coupling": self.coupling,
        })
    }
}
