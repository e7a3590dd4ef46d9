//! Executes the queries of a parsed document and assembles the report.

use anyhow::{anyhow, Context, Result};
use roughlab_core::analysis::{
    check_rough_limit, classify_cluster, diameter_probe, proximity_set_verdict, sandwich_probe,
    SandwichCandidate, Target, Verdict,
};
use roughlab_core::coupling::Coupling;
use roughlab_core::index::Answer;
use roughlab_core::kyfan::kyfan_of_law;
use roughlab_core::rational::{format_rational, Rational};
use roughlab_core::FiniteDist;
use roughlab_dsl::{Query, SpecDocument};

/// One executed probe.
pub struct ProbeResult {
    pub kind: &'static str,
    pub params: String,
    pub summary: String,
    pub json: serde_json::Value,
    /// A definite inconsistency (violated containment or bound).
    pub fatal: bool,
}

pub struct RunReport {
    pub probes: Vec<ProbeResult>,
    pub fatal: bool,
}

impl RunReport {
    pub fn to_json(&self, file: &str) -> serde_json::Value {
        serde_json::json!({
            "file": file,
            "fatal": self.fatal,
            "probes": self.probes.iter().map(|p| serde_json::json!({
                "kind": p.kind,
                "params": p.params,
                "summary": p.summary,
                "ok": !p.fatal,
                "result": p.json,
            })).collect::<Vec<_>>(),
        })
    }
}

fn verdict_summary(v: &Verdict) -> String {
    use roughlab_core::analysis::VerdictAnswer::*;
    match v.answer {
        Yes => "yes".to_string(),
        No => match &v.witness {
            Some(w) => format!(
                "no (witness eps={}, delta={}, exceedance limit {})",
                format_rational(&w.epsilon),
                format_rational(&w.delta),
                format_rational(&w.exceedance_limit)
            ),
            None => "no".to_string(),
        },
        Unknown => format!(
            "unknown ({})",
            v.blocking.clone().unwrap_or_else(|| "blocked".into())
        ),
    }
}

/// Runs every query of the document.
pub fn run_document(doc: &SpecDocument) -> Result<RunReport> {
    let target = doc
        .target
        .as_ref()
        .map(|t| t.to_target())
        .transpose()
        .context("materializing the target law")?;
    let mut probes = Vec::new();
    for query in &doc.queries {
        let target = target
            .as_ref()
            .ok_or_else(|| anyhow!("query requires a target"))?;
        match query {
            Query::Metric { n } => {
                let law = doc.sequence.law_at(*n)?;
                let coupling = match &target.coupling {
                    roughlab_core::analysis::CouplingSpec::Product => {
                        Coupling::product(&law, &target.dist)?
                    }
                    roughlab_core::analysis::CouplingSpec::SinglePieceJoint(_) => {
                        return Err(anyhow!(
                            "metric under a joint coupling: use the exceedance queries instead"
                        ))
                    }
                };
                let res = kyfan_of_law(&coupling.distance_law()?)?;
                probes.push(ProbeResult {
                    kind: "metric",
                    params: format!("n={n}"),
                    summary: format!("rho = {}", format_rational(&res.rho)),
                    json: serde_json::json!({
                        "rho": format_rational(&res.rho),
                        "attained_tail": format_rational(&res.attained_tail),
                    }),
                    fatal: false,
                });
            }
            Query::Limit { r, eps, delta } => {
                let v = check_rough_limit(&doc.sequence, target, r, &doc.ideal)?;
                let mut json = v.to_json();
                let mut summary = verdict_summary(&v);
                if let (Some(e), Some(d)) = (eps, delta) {
                    let t = r + e;
                    let (answer, why) =
                        proximity_set_verdict(&doc.sequence, target, &t, d, &doc.ideal)?;
                    let label = match answer {
                        Answer::In => "in",
                        Answer::NotIn => "not_in",
                        Answer::Unknown => "unknown",
                    };
                    summary.push_str(&format!("; proximity set at the grid point: {label}"));
                    json["proximity_grid"] = serde_json::json!({
                        "eps": format_rational(e),
                        "delta": format_rational(d),
                        "answer": label,
                        "justification": why,
                    });
                }
                probes.push(ProbeResult {
                    kind: "limit",
                    params: format!("r={}", format_rational(r)),
                    summary,
                    json,
                    fatal: false,
                });
            }
            Query::Cluster { r } => {
                let report = classify_cluster(&doc.sequence, target, r, &doc.ideal)?;
                let fatal = !report.chain_consistent();
                probes.push(ProbeResult {
                    kind: "cluster",
                    params: format!("r={}", format_rational(r)),
                    summary: format!(
                        "limit_point={}, strong={}, weak={}{}",
                        verdict_summary(&report.limit_point),
                        verdict_summary(&report.strong_cluster),
                        verdict_summary(&report.weak_cluster),
                        report
                            .delta_star_sup
                            .as_ref()
                            .map(|d| format!(", delta_star_sup={}", format_rational(d)))
                            .unwrap_or_default()
                    ),
                    json: report.to_json(),
                    fatal,
                });
            }
            Query::Diameter { r, members } => {
                let member_targets: Vec<Target> = members
                    .iter()
                    .map(|v| Target::product(FiniteDist::degenerate(v.clone())))
                    .collect();
                let report =
                    diameter_probe(&doc.sequence, r, &doc.ideal, &member_targets, &[])?;
                let fatal = !report.within_bound;
                probes.push(ProbeResult {
                    kind: "diameter",
                    params: format!("r={}", format_rational(r)),
                    summary: format!(
                        "max rho = {} (bound {})",
                        format_rational(&report.max_rho),
                        format_rational(&report.bound)
                    ),
                    json: serde_json::json!({
                        "max_rho": format_rational(&report.max_rho),
                        "bound": format_rational(&report.bound),
                        "pairwise": report.pairwise.iter().map(|(i, j, r)| {
                            serde_json::json!([i, j, format_rational(r)])
                        }).collect::<Vec<_>>(),
                        "within_bound": report.within_bound,
                    }),
                    fatal,
                });
            }
            Query::Sandwich { r, candidates } => {
                let center = target;
                let center_dist = center.dist.clone();
                let cands: Vec<SandwichCandidate> = candidates
                    .iter()
                    .enumerate()
                    .map(|(i, atoms)| {
                        let dist = FiniteDist::on_line(atoms.clone())?;
                        Ok(SandwichCandidate {
                            name: format!("candidate-{i}"),
                            target: Target::product(dist.clone()),
                            to_center: Coupling::product(&center_dist, &dist)?,
                        })
                    })
                    .collect::<Result<_>>()?;
                let report =
                    sandwich_probe(&doc.sequence, center, r, &doc.ideal, &cands)?;
                let fatal = !report.ok;
                probes.push(ProbeResult {
                    kind: "sandwich",
                    params: format!("r={}", format_rational(r)),
                    summary: report
                        .rows
                        .iter()
                        .map(|row| {
                            format!(
                                "{}: theta={}, limit={}, ball={} (rho={})",
                                row.name,
                                row.in_theta,
                                verdict_summary(&row.in_limit),
                                row.in_ball,
                                format_rational(&row.rho)
                            )
                        })
                        .collect::<Vec<_>>()
                        .join("; "),
                    json: serde_json::json!({
                        "rows": report.rows.iter().map(|row| serde_json::json!({
                            "name": row.name,
                            "in_theta": row.in_theta,
                            "in_limit": row.in_limit.to_json(),
                            "in_ball": row.in_ball,
                            "rho": format_rational(&row.rho),
                            "fatal": row.fatal,
                            "note": row.note,
                        })).collect::<Vec<_>>(),
                        "ok": report.ok,
                    }),
                    fatal,
                });
            }
        }
    }
    let fatal = probes.iter().any(|p| p.fatal);
    Ok(RunReport { probes, fatal })
}

/// Convenience: the target of a document, or an error.
pub fn document_target(doc: &SpecDocument) -> Result<Target> {
    doc.target
        .as_ref()
        .ok_or_else(|| anyhow!("document has no target"))?
        .to_target()
        .map_err(|e| anyhow!(e.to_string()))
}

/// Parses a rational from the command line.
pub fn parse_cli_rational(s: &str) -> Result<Rational> {
    roughlab_core::rational::parse_rational(s).map_err(|e| anyhow!(e.to_string()))
}
