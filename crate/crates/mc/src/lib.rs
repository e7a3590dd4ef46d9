//! Monte Carlo cross-validation of the exact layer.
//!
//! Sampling is exact: a uniform draw is a 64-bit integer interpreted as the
//! rational `k / 2^64` and inverted through the rational cumulative masses,
//! so two runs with the same configuration are bit-identical and the
//! estimator is an honest Binomial proportion. When an exact reference value
//! is available, the pass check compares `(estimate - exact)^2` against
//! `sigma^2` scaled by the configured confidence multiple, entirely in
//! rational arithmetic; the reported `sigma` column is the usual plug-in
//! standard error.

use num::{One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use roughlab_core::analysis::{exceedance_pointwise, AnalysisError, CouplingSpec, Target};
use roughlab_core::index::IndexSet;
use roughlab_core::rational::{format_rational, rat_pow, Rational};
use roughlab_core::seq::{PiecewiseSequence, SeqError};
use roughlab_core::space::Point;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum McError {
    #[error("sample count must be positive")]
    NoSamples,
    #[error("target must live on the rational line")]
    TargetNotOnLine,
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Seq(#[from] SeqError),
}

/// Reproducible sampling configuration. Identical configurations produce
/// bit-identical outputs; per-index substreams make the results independent
/// of scheduling order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleConfig {
    pub seed: u64,
    pub samples_per_index: u64,
    pub index_budget: Vec<u64>,
    pub confidence_sigma: u32,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: 0x726f_7567_686c_6162,
            samples_per_index: 10_000,
            index_budget: vec![1, 2, 3, 5, 10, 20, 50, 100],
            confidence_sigma: 3,
        }
    }
}

/// One estimate with its exact reference when available.
#[derive(Debug, Clone)]
pub struct EstimateRow {
    pub n: u64,
    pub hits: u64,
    pub samples: u64,
    pub estimate: Rational,
    /// Plug-in standard error, for reporting.
    pub sigma: f64,
    pub exact: Option<Rational>,
    /// Within `confidence_sigma` binomial standard deviations of the exact
    /// value (vacuously true when no exact value is available).
    pub pass: bool,
}

impl EstimateRow {
    pub fn csv_header() -> &'static str {
        "n,estimate,sigma,exact,pass"
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{:.6e},{},{}",
            self.n,
            format_rational(&self.estimate),
            self.sigma,
            self.exact.as_ref().map_or(String::new(), format_rational),
            self.pass
        )
    }
}

/// Uniform rational in `[0, 1)` with denominator `2^64`.
fn uniform(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.next_u64().into(), (num::BigInt::one() << 64u32).into())
}

/// Inverse-CDF draw from sorted `(value, cumulative)` boundaries.
fn draw<'v>(cumulative: &'v [(Rational, Rational)], u: &Rational) -> &'v Rational {
    for (value, bound) in cumulative {
        if u < bound {
            return value;
        }
    }
    &cumulative.last().expect("nonempty support").0
}

fn cumulative_of(atoms: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    let mut acc = Rational::zero();
    atoms
        .iter()
        .map(|(v, m)| {
            acc += m;
            (v.clone(), acc.clone())
        })
        .collect()
}

fn line_atoms(dist: &roughlab_core::FiniteDist) -> Result<Vec<(Rational, Rational)>, McError> {
    dist.atoms()
        .iter()
        .map(|(p, m)| match p {
            Point::Real(v) => Ok((v.clone(), m.clone())),
            Point::Label(_) => Err(McError::TargetNotOnLine),
        })
        .collect()
}

/// Binomial estimate of `P(d(X_n, Y) > r + eps)` with the per-index
/// substream `n`, flagged against the exact value.
pub fn estimate_exceedance(
    seq: &PiecewiseSequence,
    target: &Target,
    r: &Rational,
    eps: &Rational,
    n: u64,
    cfg: &SampleConfig,
) -> Result<EstimateRow, McError> {
    if cfg.samples_per_index == 0 {
        return Err(McError::NoSamples);
    }
    let threshold = r + eps;
    let law = seq.law_at(n)?;
    let x_atoms = line_atoms(&law)?;
    let y_atoms = line_atoms(&target.dist)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(n);

    let mut hits: u64 = 0;
    match &target.coupling {
        CouplingSpec::Product => {
            let cx = cumulative_of(&x_atoms);
            let cy = cumulative_of(&y_atoms);
            for _ in 0..cfg.samples_per_index {
                let x = draw(&cx, &uniform(&mut rng)).clone();
                let y = draw(&cy, &uniform(&mut rng));
                if (x - y).abs() > threshold {
                    hits += 1;
                }
            }
        }
        CouplingSpec::SinglePieceJoint(table) => {
            // Evaluate the joint cells at n and sample the distance directly.
            let piece = &seq.pieces()[0];
            let mut cells: Vec<(Rational, Rational)> = Vec::new();
            for (i, jdx, m) in &table.entries {
                let x = piece.atoms[*i]
                    .0
                    .eval(n, None)
                    .map_err(SeqError::from)?;
                let y = &y_atoms[*jdx].0;
                let d = (x - y).abs();
                cells.push((d, m.eval(n)));
            }
            let cd = cumulative_of(&cells);
            for _ in 0..cfg.samples_per_index {
                let d = draw(&cd, &uniform(&mut rng));
                if *d > threshold {
                    hits += 1;
                }
            }
        }
    }

    let samples = cfg.samples_per_index;
    let estimate = Rational::new(hits.into(), samples.into());
    let exact = exceedance_pointwise(seq, target, n, &threshold)?;
    let sigma = {
        let p = hits as f64 / samples as f64;
        (p * (1.0 - p) / samples as f64).sqrt()
    };
    // Exact binomial check: (estimate - exact)^2 <= c^2 * exact (1-exact) / m.
    let c2 = Rational::from_integer((u64::from(cfg.confidence_sigma * cfg.confidence_sigma)).into());
    let diff = &estimate - &exact;
    let var = &exact * (Rational::one() - &exact) / Rational::from_integer(samples.into());
    let pass = &diff * &diff <= c2 * var;
    Ok(EstimateRow {
        n,
        hits,
        samples,
        estimate,
        sigma,
        exact: Some(exact),
        pass,
    })
}

/// Exact counting ratio `|A ∩ [1, N]| / N`; no sampling involved.
pub fn estimate_density(set: &IndexSet, limit: u64, _cfg: &SampleConfig) -> Rational {
    assert!(limit >= 1);
    Rational::new(set.count_upto(limit).into(), limit.into())
}

/// Runs the exceedance estimator over the configured index budget.
pub fn exceedance_sweep(
    seq: &PiecewiseSequence,
    target: &Target,
    r: &Rational,
    eps: &Rational,
    cfg: &SampleConfig,
) -> Result<Vec<EstimateRow>, McError> {
    cfg.index_budget
        .iter()
        .map(|n| estimate_exceedance(seq, target, r, eps, *n, cfg))
        .collect()
}

pub use calibration::{calibration_suite, CalibrationSummary};

mod calibration {
    use super::*;
    use roughlab_core::fixtures;
    use roughlab_core::rational::rat;

    /// Outcome of the calibration run: how many exact-reference estimates
    /// fell within the confidence band.
    #[derive(Debug, Clone)]
    pub struct CalibrationSummary {
        pub rows: Vec<EstimateRow>,
        pub total: usize,
        pub passed: usize,
    }

    impl CalibrationSummary {
        pub fn pass_fraction(&self) -> f64 {
            self.passed as f64 / self.total.max(1) as f64
        }
    }

    /// The standard calibration sweep: every canonical sequence against a
    /// grid of indices and radius excesses, all with exact references.
    pub fn calibration_suite(cfg: &SampleConfig) -> Result<CalibrationSummary, McError> {
        let bern = Target::product(roughlab_core::FiniteDist::bernoulli(rat(1, 2)).unwrap());
        let zero = Target::product(roughlab_core::FiniteDist::degenerate(rat(0, 1)));
        let one = Target::product(roughlab_core::FiniteDist::degenerate(rat(1, 1)));
        let quarter = Target::product(roughlab_core::FiniteDist::degenerate(rat(1, 4)));
        let fair_two = Target::product(
            roughlab_core::FiniteDist::on_line(vec![
                (rat(0, 1), rat(1, 2)),
                (rat(2, 1), rat(1, 2)),
            ])
            .unwrap(),
        );
        let suite: Vec<(PiecewiseSequence, Target, Rational)> = vec![
            (fixtures::two_regime(), quarter, rat(1, 4)),
            (fixtures::product_chain(rat(1, 2)), one, rat(1, 1)),
            (fixtures::product_chain(rat(1, 2)), zero.clone(), rat(0, 1)),
            (fixtures::product_chain_cells(), fair_two, rat(1, 1)),
            (fixtures::odd_contrast(), bern, rat(1, 1)),
            (fixtures::dyadic_family(), zero.clone(), rat(0, 1)),
            (fixtures::geometric_spectrum(8), zero, rat(0, 1)),
        ];
        let epsilons = [rat(1, 4), rat(1, 2), rat(9, 10)];
        let mut rows = Vec::new();
        for (seq, target, r) in &suite {
            for eps in &epsilons {
                for n in &cfg.index_budget {
                    rows.push(estimate_exceedance(seq, target, r, eps, *n, cfg)?);
                }
            }
        }
        let passed = rows.iter().filter(|r| r.pass).count();
        Ok(CalibrationSummary {
            total: rows.len(),
            passed,
            rows,
        })
    }
}

pub fn two_pow(k: u64) -> Rational {
    rat_pow(&Rational::from_integer(2.into()), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use roughlab_core::fixtures;
    use roughlab_core::rational::{rat, rat_int};
    use roughlab_core::FiniteDist;

    fn small_cfg() -> SampleConfig {
        SampleConfig {
            samples_per_index: 2_000,
            index_budget: vec![1, 2, 3, 5, 10],
            ..SampleConfig::default()
        }
    }

    #[test]
    fn determinism_bit_identical_runs() {
        let seq = fixtures::product_chain(rat(1, 2));
        let target = Target::product(FiniteDist::degenerate(rat_int(1)));
        let cfg = small_cfg();
        let a = exceedance_sweep(&seq, &target, &rat_int(1), &rat(1, 4), &cfg).unwrap();
        let b = exceedance_sweep(&seq, &target, &rat_int(1), &rat(1, 4), &cfg).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.hits, y.hits);
            assert_eq!(x.estimate, y.estimate);
        }
        // A different seed gives a different sample path somewhere.
        let cfg2 = SampleConfig {
            seed: cfg.seed + 1,
            ..cfg
        };
        let c = exceedance_sweep(&seq, &target, &rat_int(1), &rat(1, 4), &cfg2).unwrap();
        assert!(a.iter().zip(&c).any(|(x, y)| x.hits != y.hits));
    }

    #[test]
    fn exact_zero_and_one_probabilities_sample_exactly() {
        // Constant sequence equal to the target: exceedance identically 0.
        let seq = fixtures::deterministic_lift(
            roughlab_core::seq::ValueFn::constant(rat_int(0)),
            roughlab_core::seq::ValueFn::constant(rat_int(0)),
        );
        let target = Target::product(FiniteDist::degenerate(rat_int(0)));
        let row =
            estimate_exceedance(&seq, &target, &rat_int(0), &rat(1, 2), 7, &small_cfg()).unwrap();
        assert_eq!(row.hits, 0);
        assert_eq!(row.exact, Some(rat_int(0)));
        assert!(row.pass);
    }

    #[test]
    fn product_chain_estimates_track_the_geometric_tail() {
        let seq = fixtures::product_chain(rat(1, 2));
        let target = Target::product(FiniteDist::degenerate(rat_int(0)));
        let cfg = SampleConfig {
            samples_per_index: 20_000,
            ..SampleConfig::default()
        };
        // At n = 10 (not a square) the exact exceedance is 2^-10.
        let row = estimate_exceedance(&seq, &target, &rat_int(0), &rat(1, 2), 10, &cfg).unwrap();
        assert_eq!(row.exact, Some(rat_int(1) / two_pow(10)));
        assert!(row.pass, "estimate {} off the tail", row.estimate);
    }

    #[test]
    fn joint_coupling_sampling_matches_exact() {
        use roughlab_core::seq::{JointTable, ProbFn};
        let seq = fixtures::half_split();
        let quarter = ProbFn::constant(rat(1, 4)).unwrap();
        let table = JointTable {
            entries: vec![
                (0, 0, quarter.clone()),
                (0, 1, quarter.clone()),
                (1, 0, quarter.clone()),
                (1, 1, quarter),
            ],
        };
        let target = Target {
            dist: FiniteDist::bernoulli(rat(1, 2)).unwrap(),
            coupling: CouplingSpec::SinglePieceJoint(table),
        };
        for n in [2u64, 5, 9] {
            let row =
                estimate_exceedance(&seq, &target, &rat_int(0), &rat(1, 2), n, &small_cfg())
                    .unwrap();
            // Exact: pairs with distance > 1/2: (0,1), (n,0), (n,1) -> 3/4.
            assert_eq!(row.exact, Some(rat(3, 4)));
            assert!(row.pass, "joint estimate {} at n={n}", row.estimate);
        }
    }

    #[test]
    fn density_counting_is_exact() {
        let cfg = small_cfg();
        let ratio = estimate_density(&IndexSet::dyadic(2), 1 << 20, &cfg);
        let diff = (ratio - rat(1, 8)).abs();
        assert!(diff <= Rational::new(1.into(), (1u64 << 20).into()));
        assert_eq!(estimate_density(&IndexSet::Full, 999, &cfg), rat_int(1));
        assert_eq!(
            estimate_density(&IndexSet::poly_image(1, 2), 1_000_000, &cfg),
            rat(1000, 1_000_000)
        );
    }

    #[test]
    fn calibration_smoke() {
        let cfg = SampleConfig {
            samples_per_index: 1_000,
            index_budget: vec![1, 2, 3, 5, 10, 20, 40, 80, 160, 320],
            ..SampleConfig::default()
        };
        let summary = calibration_suite(&cfg).unwrap();
        assert!(summary.total >= 200, "suite too small: {}", summary.total);
        assert!(
            summary.pass_fraction() >= 0.95,
            "calibration {}/{}",
            summary.passed,
            summary.total
        );
    }
}
