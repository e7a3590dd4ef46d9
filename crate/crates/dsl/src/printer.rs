//! Canonical printing. `parse(print(doc))` reproduces the abstract document.

use crate::doc::{CouplingDecl, Query, SpecDocument, TargetDecl};
use num::{One, Signed, Zero};
use roughlab_core::index::{Ideal, SubmeasureSpec, WeightKind};
use roughlab_core::rational::format_rational;
use roughlab_core::seq::{Decay, ProbFn, ValueFn};
use std::fmt::Write;

/// Canonical form of a mass function: constant, then reciprocal terms by
/// ascending exponent, then geometric terms by descending base.
pub fn decay_to_string(d: &Decay) -> String {
    struct Term {
        negative: bool,
        body: String,
    }
    let mut terms: Vec<Term> = Vec::new();
    let constant = d.limit();
    if !constant.is_zero() {
        terms.push(Term {
            negative: constant.is_negative(),
            body: format_rational(&constant.abs()),
        });
    }
    for (coeff, k) in d.recip_terms() {
        let mag = coeff.abs();
        let lead = if mag.is_one() {
            "1".to_string()
        } else {
            format_rational(&mag)
        };
        let body = if *k == 1 {
            format!("{lead}/n")
        } else {
            format!("{lead}/n^{k}")
        };
        terms.push(Term {
            negative: coeff.is_negative(),
            body,
        });
    }
    for (coeff, p) in d.geom_terms() {
        let mag = coeff.abs();
        let base = format_rational(p);
        let body = if mag.is_one() {
            format!("{base}^n")
        } else {
            format!("{} * {base}^n", format_rational(&mag))
        };
        terms.push(Term {
            negative: coeff.is_negative(),
            body,
        });
    }
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        if i == 0 {
            if t.negative {
                out.push('-');
            }
        } else if t.negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&t.body);
    }
    out
}

pub fn probfn_to_string(p: &ProbFn) -> String {
    decay_to_string(p.decay())
}

pub fn valuefn_to_string(v: &ValueFn) -> String {
    match v {
        ValueFn::Const(q) => format_rational(q),
        ValueFn::Monomial { coeff, degree } => {
            let power = if *degree == 1 {
                "n".to_string()
            } else {
                format!("n^{degree}")
            };
            if coeff.is_one() {
                power
            } else if (-coeff.clone()).is_one() {
                format!("-{power}")
            } else {
                format!("{}*{power}", format_rational(coeff))
            }
        }
        ValueFn::Exponential { coeff, base } => {
            let body = format!("{}^n", format_rational(base));
            if coeff.is_one() {
                body
            } else {
                format!("{}*{body}", format_rational(coeff))
            }
        }
        ValueFn::ReciprocalShift { coeff, degree } => {
            let power = if *degree == 1 {
                "n".to_string()
            } else {
                format!("n^{degree}")
            };
            let mag = coeff.abs();
            let lead = format_rational(&mag);
            if coeff.is_negative() {
                format!("-{lead}/{power}")
            } else {
                format!("{lead}/{power}")
            }
        }
        ValueFn::IndexedConst { coeff, shift } => {
            let denom = if *shift == 0 {
                "j".to_string()
            } else {
                format!("(j+{shift})")
            };
            let mag = coeff.abs();
            let lead = format_rational(&mag);
            if coeff.is_negative() {
                format!("-{lead}/{denom}")
            } else {
                format!("{lead}/{denom}")
            }
        }
    }
}

fn ideal_to_string(ideal: &Ideal) -> String {
    match ideal {
        Ideal::Fin => "fin".into(),
        Ideal::Density => "density".into(),
        Ideal::Summable => "summable".into(),
        Ideal::ExhTruncated {
            submeasure: SubmeasureSpec::WeightedSum(w),
            depth,
            tolerance,
        } => {
            let weights = match w {
                WeightKind::Reciprocal => "recip".to_string(),
                WeightKind::ReciprocalPow(k) => format!("recip^{k}"),
                WeightKind::Geometric(p) => format!("geom({})", format_rational(p)),
            };
            format!(
                "exh(weights={weights}, depth={depth}, tol={})",
                format_rational(tolerance)
            )
        }
    }
}

fn write_target(out: &mut String, target: &TargetDecl) {
    out.push_str("target {");
    for (v, m) in &target.atoms {
        let _ = write!(out, " atom {} : {}", format_rational(v), format_rational(m));
    }
    out.push_str(" } coupling ");
    match &target.coupling {
        CouplingDecl::Independent => out.push_str("independent"),
        CouplingDecl::Joint(cells) => {
            out.push_str("joint {");
            for (i, j, m) in cells {
                let _ = write!(out, " {i} {j} : {}", probfn_to_string(m));
            }
            out.push_str(" }");
        }
    }
    out.push('\n');
}

/// Canonical text of a document.
pub fn print(doc: &SpecDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ideal {}", ideal_to_string(&doc.ideal));
    out.push_str("sequence {\n");
    for piece in doc.sequence.pieces() {
        let _ = writeln!(out, "  piece {} {{", piece.set);
        for (v, p) in &piece.atoms {
            let _ = writeln!(
                out,
                "    atom value {} prob {}",
                valuefn_to_string(v),
                probfn_to_string(p)
            );
        }
        out.push_str("  }\n");
    }
    if let Some(fam) = doc.sequence.family() {
        out.push_str("  family dyadic(j) {\n");
        for (v, p) in &fam.atoms {
            let _ = writeln!(
                out,
                "    atom value {} prob {}",
                valuefn_to_string(v),
                probfn_to_string(p)
            );
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    if let Some(target) = &doc.target {
        write_target(&mut out, target);
    }
    for query in &doc.queries {
        match query {
            Query::Metric { n } => {
                let _ = writeln!(out, "query metric n={n}");
            }
            Query::Limit { r, eps, delta } => {
                let mut line = format!("query limit r={}", format_rational(r));
                if let Some(e) = eps {
                    let _ = write!(line, " eps={}", format_rational(e));
                }
                if let Some(d) = delta {
                    let _ = write!(line, " delta={}", format_rational(d));
                }
                let _ = writeln!(out, "{line}");
            }
            Query::Cluster { r } => {
                let _ = writeln!(out, "query cluster r={}", format_rational(r));
            }
            Query::Diameter { r, members } => {
                let ms: Vec<String> = members.iter().map(format_rational).collect();
                let _ = writeln!(
                    out,
                    "query diameter r={} members {{ {} }}",
                    format_rational(r),
                    ms.join(", ")
                );
            }
            Query::Sandwich { r, candidates } => {
                let mut line = format!("query sandwich r={} {{", format_rational(r));
                for atoms in candidates {
                    line.push_str(" candidate {");
                    for (v, m) in atoms {
                        let _ = write!(
                            line,
                            " atom {} : {}",
                            format_rational(v),
                            format_rational(m)
                        );
                    }
                    line.push_str(" }");
                }
                line.push_str(" }");
                let _ = writeln!(out, "{line}");
            }
        }
    }
    out
}
