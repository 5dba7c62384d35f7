//! `bound`, `curve`, `cluster` and `distance`.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::PathBuf;
use std::time::Instant;

use gconc::axisym::{c2_axisym_unit, cg_axisym, coords_xy, distance_lower_bound, AxisymState};
use gconc::multipartite::{cluster_report, ClusterReport};
use gconc::oracles::convex_roof_upper;
use gconc::pure_measures::cg_of_f;
use gconc::slopt::{best_bound, BoundConfig};
use gconc::state::DEFAULT_DIM_CAP;
use gconc::{BipartiteOperator, Dim, Error};

use crate::input::load_state;
use crate::report::{to_sorted_json, BoundReport};
use crate::{exit, CliError, Format, Outcome};

#[derive(Debug, Clone, clap::Args)]
pub struct BoundArgs {
    /// State file (JSON).
    pub input: PathBuf,
    /// Maximize the fidelity over local unitaries before projecting.
    #[arg(long)]
    pub lu_opt: bool,
    /// Also bound the filtered normal form.
    #[arg(long)]
    pub nf: bool,
    /// Optimize the witness over local phases.
    #[arg(long)]
    pub phases: bool,
    /// Starts for every multi-start optimization.
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trials of the convex-roof upper estimate (0 skips it).
    #[arg(long, default_value_t = 0)]
    pub upper_trials: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Shorthand for `--format text`.
    #[arg(long, conflicts_with = "format")]
    pub text: bool,
    /// Shorthand for `--format json`.
    #[arg(long, conflicts_with_all = ["format", "text"])]
    pub json: bool,
    /// Include per-stage wall-clock times (output is then no longer reproducible).
    #[arg(long)]
    pub timings: bool,
    /// Largest accepted local dimension.
    #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
    pub max_dim: usize,
}

impl BoundArgs {
    fn format(&self) -> Format {
        if self.text {
            Format::Text
        } else {
            self.format
        }
    }

    pub fn config(&self) -> BoundConfig {
        BoundConfig {
            use_nf: self.nf,
            use_lu: self.lu_opt,
            use_phases: self.phases,
            restarts: self.restarts,
            seed: self.seed,
            ..BoundConfig::default()
        }
    }
}

struct Stopwatch(Option<BTreeMap<String, f64>>);

impl Stopwatch {
    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if let Some(t) = &mut self.0 {
            t.insert(stage.to_string(), start.elapsed().as_secs_f64() * 1e3);
        }
        out
    }
}

pub fn bound(args: &BoundArgs) -> Result<Outcome, CliError> {
    let mut clock = Stopwatch(args.timings.then(BTreeMap::new));
    let loaded = clock.time("load", || load_state(&args.input, args.max_dim))?;
    let rho = &loaded.rho;
    let d = rho.dim().get();
    let config = args.config();

    let best = clock.time("bound", || best_bound(rho, &config));
    let distance_bounds = clock.time("distance", || {
        (1..d)
            .map(|k| Ok((k.to_string(), distance_lower_bound(rho, k)?)))
            .collect::<Result<BTreeMap<_, _>, Error>>()
    })?;
    let upper_bound = (args.upper_trials > 0)
        .then(|| clock.time("upper", || convex_roof_upper(rho, args.upper_trials, args.seed).value));

    let nf_route = best.normal_form.as_ref();
    let report = BoundReport {
        input_digest: loaded.digest,
        d,
        fidelity: best.direct.fidelity,
        fidelity_optimized: best.direct.fidelity_optimized,
        witness: best.direct.witness.clone(),
        axisym_bound: best.direct.axisym_bound,
        nf_used: nf_route.is_some(),
        trace_factor: nf_route.map(|n| n.summary.trace_factor),
        normal_form: best.normal_form.clone(),
        final_bound: best.final_bound,
        certified: best.final_bound > 0.0,
        exact_zero: best.exact_zero,
        distance_bounds,
        upper_bound,
        seed: args.seed,
        config,
        timings: clock.0,
    };
    let output = match args.format() {
        Format::Text => report.to_text(),
        Format::Json | Format::Csv => to_sorted_json(&report),
    };
    let exit = if report.certified { exit::OK } else { exit::INCONCLUSIVE };
    Ok(Outcome { output, exit })
}

#[derive(Debug, Clone, clap::Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub d: usize,
    /// Number of grid points on `0 ≤ F ≤ 1`.
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
    /// Output CSV path; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Curve data: the axisymmetric G- and 2-concurrence, the pure-state minimum where it
/// is defined, and the coordinates of `F·Φ + (1−F)·ρ₂` in the state triangle.
///
/// The 2-concurrence column uses the normalization in which `|Φ_d⟩` has value 1.
pub fn curve_csv(d: usize, samples: usize) -> Result<String, CliError> {
    let dim = Dim::with_cap(d, DEFAULT_DIM_CAP)?;
    if samples < 2 {
        return Err(CliError::Invalid(Error::InvalidArgument(format!("need at least 2 samples, got {samples}"))));
    }
    let mut out = String::from("F,cg_axisym,c2_axisym,cg_of_F,x,y\n");
    for i in 0..samples {
        let f = i as f64 / (samples - 1) as f64;
        let pure_min = cg_of_f(dim, f).map(|p| p.cg.to_string()).unwrap_or_default();
        let xy = coords_xy(&AxisymState::from_pq(dim, f, 0.0)?);
        let _ = writeln!(out, "{f},{},{},{pure_min},{},{}", cg_axisym(f, dim), c2_axisym_unit(f, dim), xy.x, xy.y);
    }
    Ok(out)
}

pub fn curve(args: &CurveArgs) -> Result<Outcome, CliError> {
    let csv = curve_csv(args.d, args.samples)?;
    match &args.out {
        Some(path) => {
            std::fs::write(path, &csv).map_err(|source| CliError::Write { path: path.clone(), source })?;
            Ok(Outcome::ok(format!("wrote {} rows to {}\n", args.samples, path.display())))
        }
        None => Ok(Outcome::ok(csv)),
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct ClusterArgs {
    /// Number of qubits (even, 4 to 12).
    #[arg(long)]
    pub qubits: usize,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

fn cluster_text(report: &ClusterReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "linear cluster, {} qubits, cut dimension {}; 2^(-N/2) = {:.6}; GME reference w = {:.6}",
        report.n_qubits, report.d, report.scaling_reference, report.gme_reference
    );
    let _ = writeln!(s, "{:<16} {:>5} {:>10} {:>12} {:>10}  note", "partition", "rank", "cg_pure", "f_opt", "w_star");
    for row in &report.rows {
        let note = if row.applicable { "" } else { "not applicable (Schmidt rank below d)" };
        let line = format!(
            "{:<16} {:>5} {:>10.6} {:>12.9} {:>10.6}  {note}",
            row.partition, row.schmidt_rank, row.cg_pure, row.threshold.f_opt, row.threshold.w_star
        );
        let _ = writeln!(s, "{}", line.trim_end());
    }
    s
}

fn cluster_csv(report: &ClusterReport) -> String {
    let mut s = String::from("partition,schmidt_rank,cg_pure,applicable,f_opt,w_star,gme_reference\n");
    for row in &report.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            row.partition, row.schmidt_rank, row.cg_pure, row.applicable, row.threshold.f_opt, row.threshold.w_star,
            report.gme_reference
        );
    }
    s
}

pub fn cluster(args: &ClusterArgs) -> Result<Outcome, CliError> {
    let report = cluster_report(args.qubits, args.restarts, args.seed)?;
    let output = match args.format {
        Format::Text => cluster_text(&report),
        Format::Csv => cluster_csv(&report),
        Format::Json => to_sorted_json(&report),
    };
    Ok(Outcome::ok(output))
}

#[derive(Debug, Clone, clap::Args)]
pub struct DistanceArgs {
    pub input: PathBuf,
    /// Schmidt number `k` of the set, `1 ≤ k ≤ d − 1`.
    #[arg(long)]
    pub schmidt_number: usize,
    #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
    pub max_dim: usize,
}

pub fn distance(args: &DistanceArgs) -> Result<Outcome, CliError> {
    let loaded = load_state(&args.input, args.max_dim)?;
    let value = distance_lower_bound(&loaded.rho, args.schmidt_number)?;
    Ok(Outcome::ok(format!("{value}\n")))
}
