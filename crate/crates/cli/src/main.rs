//! Command line for the convergence laboratory: run specification files,
//! compute exact Ky Fan distances, query densities and ideal membership,
//! cross-check with Monte Carlo sampling, and reproduce the registry.

use anyhow::{anyhow, bail, Context, Result};
use roughlab_cli::{registry, report, runner};
use clap::{Args, Parser, Subcommand};
use roughlab_core::analysis::{check_rough_limit, classify_cluster};
use roughlab_core::coupling::Coupling;
use roughlab_core::index::{dual_filter_member, ideal_member, natural_density, Answer, Ideal};
use roughlab_core::kyfan::kyfan_of_law;
use roughlab_core::rational::{format_rational, Rational};
use roughlab_core::FiniteDist;
use roughlab_mc::{calibration_suite, estimate_density, SampleConfig};
use runner::parse_cli_rational;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "roughlab", version, about = "exact Ky Fan metric and rough ideal convergence analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct McFlags {
    /// RNG seed (also via ROUGHLAB_SEED).
    #[arg(long, env = "ROUGHLAB_SEED")]
    seed: Option<u64>,
    /// Samples per index.
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    /// Comma-separated index budget.
    #[arg(long, default_value = "1,2,3,5,10,20,50,100")]
    indices: String,
}

impl McFlags {
    fn config(&self) -> Result<SampleConfig> {
        let mut cfg = SampleConfig::default();
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        cfg.samples_per_index = self.samples;
        cfg.index_budget = self
            .indices
            .split(',')
            .map(|t| t.trim().parse::<u64>().context("index budget"))
            .collect::<Result<_>>()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a specification file and execute its queries.
    Run {
        file: PathBuf,
        /// Emit the JSON report instead of the table.
        #[arg(long)]
        json: bool,
    },
    /// Ky Fan metric of a stored distance law, or between two laws.
    Metric {
        /// JSON file with the law of the distance.
        #[arg(long)]
        law: Option<PathBuf>,
        /// JSON file with the first law.
        #[arg(long)]
        x: Option<PathBuf>,
        /// JSON file with the second law.
        #[arg(long)]
        y: Option<PathBuf>,
        /// "product" or a JSON file with explicit joint cells.
        #[arg(long, default_value = "product")]
        coupling: String,
    },
    /// Rigorous natural density of an index-set expression.
    Density {
        expr: String,
        /// Also print the counting ratio up to this bound.
        #[arg(long)]
        counting: Option<u64>,
    },
    /// Three-valued ideal membership of an index-set expression.
    IdealMember {
        expr: String,
        /// fin | density | summable
        #[arg(long, default_value = "density")]
        ideal: String,
        /// Test the dual filter instead of the ideal.
        #[arg(long)]
        dual: bool,
    },
    /// Rough-limit verdict for the file's target at the given roughness.
    Check {
        file: PathBuf,
        #[arg(long)]
        r: String,
        #[arg(long)]
        json: bool,
    },
    /// Limit-point / cluster classification for the file's target.
    Cluster {
        file: PathBuf,
        #[arg(long)]
        r: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the sandwich queries of a file.
    Sandwich {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the diameter queries of a file.
    Diameter {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo calibration sweep against exact references (CSV).
    McCheck {
        #[command(flatten)]
        flags: McFlags,
    },
    /// Reproduce registry entries and compare against expected results.
    Reproduce {
        /// Entry id; use --all for the whole registry.
        id: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        json: bool,
    },
}

fn parse_document(path: &PathBuf) -> Result<roughlab_dsl::SpecDocument> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    roughlab_dsl::parse(&text).map_err(|errs| {
        for e in &errs {
            eprintln!("{e}");
        }
        anyhow!("{} did not parse", path.display())
    })
}

fn load_law(path: &PathBuf) -> Result<FiniteDist> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    FiniteDist::from_json(&value).map_err(|e| anyhow!(e.to_string()))
}

fn parse_ideal_name(name: &str) -> Result<Ideal> {
    Ok(match name {
        "fin" => Ideal::Fin,
        "density" => Ideal::Density,
        "summable" => Ideal::Summable,
        other => bail!("unknown ideal {other:?} (expected fin, density, or summable)"),
    })
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { file, json } => {
            let doc = parse_document(&file)?;
            let report = runner::run_document(&doc)?;
            let jdoc = report.to_json(&file.display().to_string());
            report::validate_report(&jdoc).context("report schema")?;
            if json {
                println!("{}", serde_json::to_string_pretty(&jdoc)?);
            } else {
                for probe in &report.probes {
                    println!(
                        "{:<9} {:<12} {}{}",
                        probe.kind,
                        probe.params,
                        probe.summary,
                        if probe.fatal { "  [FATAL]" } else { "" }
                    );
                }
                if report.probes.is_empty() {
                    println!("no queries");
                }
            }
            Ok(!report.fatal)
        }
        Command::Metric { law, x, y, coupling } => {
            let dlaw = match (law, x, y) {
                (Some(law), None, None) => load_law(&law)?,
                (None, Some(x), Some(y)) => {
                    let lx = load_law(&x)?;
                    let ly = load_law(&y)?;
                    let c = if coupling == "product" {
                        Coupling::product(&lx, &ly).map_err(|e| anyhow!(e.to_string()))?
                    } else {
                        let text = std::fs::read_to_string(&coupling)?;
                        let v: serde_json::Value = serde_json::from_str(&text)?;
                        let cells = v
                            .get("cells")
                            .and_then(|c| c.as_array())
                            .ok_or_else(|| anyhow!("coupling file needs a \"cells\" array"))?;
                        let mut table = Vec::new();
                        for cell in cells {
                            let arr = cell
                                .as_array()
                                .filter(|a| a.len() == 3)
                                .ok_or_else(|| anyhow!("cells are [x, y, mass] triples"))?;
                            let px = json_point(&arr[0])?;
                            let py = json_point(&arr[1])?;
                            let mass = json_rational(&arr[2])?;
                            table.push((px, py, mass));
                        }
                        Coupling::explicit_joint(&lx, &ly, table)
                            .map_err(|e| anyhow!(e.to_string()))?
                    };
                    c.distance_law().map_err(|e| anyhow!(e.to_string()))?
                }
                _ => bail!("provide either --law, or --x and --y"),
            };
            let res = kyfan_of_law(&dlaw).map_err(|e| anyhow!(e.to_string()))?;
            println!("{}", format_rational(&res.rho));
            Ok(true)
        }
        Command::Density { expr, counting } => {
            let set = roughlab_dsl::parse_index_set(&expr)
                .map_err(|errs| anyhow!("{}", errs[0]))?;
            match natural_density(&set) {
                roughlab_core::index::DensityResult::Exact(q) => {
                    println!("exact {}", format_rational(&q))
                }
                roughlab_core::index::DensityResult::Interval { lower, upper } => println!(
                    "interval [{}, {}]",
                    format_rational(&lower),
                    format_rational(&upper)
                ),
                roughlab_core::index::DensityResult::Unknown => println!("unknown"),
            }
            if let Some(limit) = counting {
                let cfg = SampleConfig::default();
                let ratio = estimate_density(&set, limit, &cfg);
                println!("counting ratio at {limit}: {}", format_rational(&ratio));
            }
            Ok(true)
        }
        Command::IdealMember { expr, ideal, dual } => {
            let set = roughlab_dsl::parse_index_set(&expr)
                .map_err(|errs| anyhow!("{}", errs[0]))?;
            let ideal = parse_ideal_name(&ideal)?;
            let verdict = if dual {
                dual_filter_member(&ideal, &set)
            } else {
                ideal_member(&ideal, &set)
            };
            let label = match verdict.answer {
                Answer::In => "in",
                Answer::NotIn => "not-in",
                Answer::Unknown => "unknown",
            };
            println!("{label}: {}", verdict.certificate.describe());
            Ok(true)
        }
        Command::Check { file, r, json } => {
            let doc = parse_document(&file)?;
            let target = runner::document_target(&doc)?;
            let r = parse_cli_rational(&r)?;
            let v = check_rough_limit(&doc.sequence, &target, &r, &doc.ideal)
                .map_err(|e| anyhow!(e.to_string()))?;
            if json {
                println!("{}", serde_json::to_string_pretty(&v.to_json())?);
            } else {
                println!("{:?}", v.answer);
                if let Some(w) = &v.witness {
                    println!(
                        "witness: eps={}, delta={}, piece={}, exceedance limit={}",
                        format_rational(&w.epsilon),
                        format_rational(&w.delta),
                        w.piece,
                        format_rational(&w.exceedance_limit)
                    );
                }
                if let Some(b) = &v.blocking {
                    println!("blocked on: {b}");
                }
            }
            Ok(true)
        }
        Command::Cluster { file, r, json } => {
            let doc = parse_document(&file)?;
            let target = runner::document_target(&doc)?;
            let r = parse_cli_rational(&r)?;
            let rep = classify_cluster(&doc.sequence, &target, &r, &doc.ideal)
                .map_err(|e| anyhow!(e.to_string()))?;
            if json {
                println!("{}", serde_json::to_string_pretty(&rep.to_json())?);
            } else {
                println!(
                    "limit_point={:?} strong={:?} weak={:?} delta_star_sup={}",
                    rep.limit_point.answer,
                    rep.strong_cluster.answer,
                    rep.weak_cluster.answer,
                    rep.delta_star_sup
                        .as_ref()
                        .map(format_rational)
                        .unwrap_or_else(|| "-".into())
                );
            }
            Ok(rep.chain_consistent())
        }
        Command::Sandwich { file, json } | Command::Diameter { file, json } => {
            let doc = parse_document(&file)?;
            let report = runner::run_document(&doc)?;
            let jdoc = report.to_json(&file.display().to_string());
            if json {
                println!("{}", serde_json::to_string_pretty(&jdoc)?);
            } else {
                for probe in &report.probes {
                    if probe.kind == "sandwich" || probe.kind == "diameter" {
                        println!("{:<9} {:<10} {}", probe.kind, probe.params, probe.summary);
                    }
                }
            }
            Ok(!report.fatal)
        }
        Command::McCheck { flags } => {
            let cfg = flags.config()?;
            let summary = calibration_suite(&cfg).map_err(|e| anyhow!(e.to_string()))?;
            println!("{}", roughlab_mc::EstimateRow::csv_header());
            for row in &summary.rows {
                println!("{}", row.to_csv());
            }
            eprintln!(
                "calibration: {}/{} within {} sigma ({:.1}%)",
                summary.passed,
                summary.total,
                cfg.confidence_sigma,
                100.0 * summary.pass_fraction()
            );
            Ok(summary.pass_fraction() >= 0.95)
        }
        Command::Reproduce { id, all, json } => {
            let entries = if all {
                registry::registry()
            } else {
                let id = id.ok_or_else(|| anyhow!("give a registry id or --all"))?;
                vec![registry::entry(&id)?]
            };
            let mut ok = true;
            let mut rows = Vec::new();
            for e in entries {
                if !json {
                    println!("== {} — {}", e.id, e.title);
                }
                let outcomes = e.run()?;
                for o in &outcomes {
                    ok &= o.passed;
                    if json {
                        rows.push(serde_json::json!({
                            "entry": e.id,
                            "title": e.title,
                            "check": o.name,
                            "provenance": o.provenance.tag(),
                            "passed": o.passed,
                            "detail": o.detail,
                        }));
                    } else {
                        println!(
                            "{:<18} {:<4} [{}] {} — {}",
                            e.id,
                            if o.passed { "PASS" } else { "FAIL" },
                            o.provenance.tag(),
                            o.name,
                            o.detail
                        );
                    }
                }
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&serde_json::Value::Array(rows))?);
            }
            Ok(ok)
        }
    }
}

fn json_point(v: &serde_json::Value) -> Result<roughlab_core::Point> {
    match v {
        serde_json::Value::String(s) => match parse_cli_rational(s) {
            Ok(q) => Ok(roughlab_core::Point::Real(q)),
            Err(_) => Ok(roughlab_core::Point::Label(s.clone())),
        },
        serde_json::Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| anyhow!("non-integer numeric point"))?;
            Ok(roughlab_core::Point::Real(
                roughlab_core::rational::rat_int(i),
            ))
        }
        _ => bail!("points are strings or integers"),
    }
}

fn json_rational(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => parse_cli_rational(s),
        serde_json::Value::Number(n) => Ok(roughlab_core::rational::rat_int(
            n.as_i64().ok_or_else(|| anyhow!("non-integer mass"))?,
        )),
        _ => bail!("masses are strings or integers"),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
