//! Oracle cross-check suites.

use std::fmt::Write;

use gconc::axisym::distance_lower_bound;
use gconc::oracles::{constrained_cg_min, convex_roof_upper};
use gconc::pure_measures::cg_of_f;
use gconc::random::{random_noisy_pure, random_schmidt_bounded, seeded_rng};
use gconc::slopt::{best_bound, BoundConfig};
use gconc::state::hs_distance;
use gconc::{DensityMatrix, Dim};
use rand::Rng;

use crate::{exit, Outcome};

pub const SANDWICH_SLACK: f64 = 1e-6;
pub const CURVE_TOL: f64 = 1e-4;
pub const CURVE_OPTIMALITY_SLACK: f64 = 1e-6;
pub const DISTANCE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Sandwich,
    Curve,
    #[value(name = "appendixC", alias = "distance")]
    Distance,
}

#[derive(Debug, Clone, clap::Args)]
pub struct VerifyArgs {
    /// Suite to run; all suites when omitted.
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sample count for the randomized suites (default 200 for sandwich, 100 for appendixC).
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
    /// Smallest margin by which a check passed (negative when one failed).
    pub worst_margin: f64,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        Self { name, checked: 0, failures: Vec::new(), worst_margin: f64::INFINITY }
    }

    fn record(&mut self, margin: f64, describe: impl FnOnce() -> String) {
        self.checked += 1;
        self.worst_margin = self.worst_margin.min(margin);
        if margin < 0.0 || margin.is_nan() {
            self.failures.push(describe());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

/// Noisy random pure state; the weight cycles through `0, 0.1, …, 0.9`.
pub fn sandwich_state(dim: Dim, seed: u64, i: usize) -> DensityMatrix {
    random_noisy_pure(dim, (i % 10) as f64 / 10.0, &mut seeded_rng(seed, i as u64))
}

/// Roof estimate that only spends more trials when the cheap one is not above `lower`.
pub fn upper_estimate(rho: &DensityMatrix, lower: f64, seed: u64) -> f64 {
    let cheap = convex_roof_upper(rho, 1, seed).value;
    if lower <= cheap + SANDWICH_SLACK {
        return cheap;
    }
    convex_roof_upper(rho, 12, seed).value
}

/// Full pipeline bound versus an explicit decomposition on random `d = 3` states.
pub fn sandwich(seed: u64, samples: usize) -> SuiteResult {
    let mut result = SuiteResult::new("sandwich");
    let dim = Dim::new(3).expect("valid");
    for i in 0..samples {
        let rho = sandwich_state(dim, seed, i);
        let config = BoundConfig { seed: seed.wrapping_add(i as u64), ..BoundConfig::default() };
        let lower = best_bound(&rho, &config).final_bound;
        let upper = upper_estimate(&rho, lower, seed.wrapping_add(i as u64));
        result.record(upper + SANDWICH_SLACK - lower, || format!("state {i}: bound {lower} above estimate {upper}"));
    }
    result
}

/// Closed-form pure-state curve versus numerical constrained minimization, d = 3..5.
pub fn curve(seed: u64) -> SuiteResult {
    let mut result = SuiteResult::new("curve");
    for d in 3..=5 {
        let dim = Dim::new(d).expect("valid");
        let lo = (d as f64 - 1.0) / d as f64;
        for i in 0..50 {
            let f = lo + (1.0 - lo) * i as f64 / 49.0;
            let closed = cg_of_f(dim, f).expect("on the curve domain").cg;
            let numeric = constrained_cg_min(dim, f, 16, seed).expect("on the curve domain");
            let margin = (CURVE_TOL - (numeric - closed).abs()).min(numeric - closed + CURVE_OPTIMALITY_SLACK);
            result.record(margin, || format!("d={d} F={f}: closed {closed}, numeric {numeric}"));
        }
    }
    result
}

/// Distance bound against explicit states of bounded Schmidt number, d = 3, 4.
pub fn distance_suite(seed: u64, samples: usize) -> SuiteResult {
    let mut result = SuiteResult::new("appendixC");
    for i in 0..samples {
        let mut rng = seeded_rng(seed, 1 << 32 | i as u64);
        let d = 3 + i % 2;
        let dim = Dim::new(d).expect("valid");
        let k = 1 + (i / 2) % (d - 1);
        let rho = random_noisy_pure(dim, rng.random::<f64>() * 0.5, &mut rng);
        let sigma = random_schmidt_bounded(dim, k, 1 + i % 4, &mut rng);
        let bound = distance_lower_bound(&rho, k).expect("k in range");
        let actual = hs_distance(&rho, &sigma).expect("same dimension");
        result.record(actual + DISTANCE_SLACK - bound, || format!("pair {i} (d={d}, k={k}): bound {bound} > distance {actual}"));
    }
    result
}

pub fn run(args: &VerifyArgs) -> Outcome {
    let suites = match args.suite {
        Some(s) => vec![s],
        None => vec![Suite::Sandwich, Suite::Curve, Suite::Distance],
    };
    let mut output = String::new();
    let mut all_passed = true;
    for suite in suites {
        let result = match suite {
            Suite::Sandwich => sandwich(args.seed, args.samples.unwrap_or(200)),
            Suite::Curve => curve(args.seed),
            Suite::Distance => distance_suite(args.seed, args.samples.unwrap_or(100)),
        };
        let status = if result.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            output,
            "{status} {}: {} checks, {} failures, worst margin {:.3e}",
            result.name,
            result.checked,
            result.failures.len(),
            result.worst_margin
        );
        for failure in &result.failures {
            let _ = writeln!(output, "  {failure}");
        }
        all_passed &= result.passed();
    }
    Outcome { output, exit: if all_passed { exit::OK } else { exit::VERIFY_FAILED } }
}
