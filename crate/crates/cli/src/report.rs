//! The `bound` report and its renderings.

use std::collections::BTreeMap;
use std::fmt::Write;

use gconc::slopt::{BoundConfig, NormalFormRoute};
use gconc::witness::WitnessResult;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    /// SHA-256 of the input file bytes.
    pub input_digest: String,
    pub d: usize,
    pub fidelity: f64,
    pub fidelity_optimized: Option<f64>,
    pub witness: Option<WitnessResult>,
    pub axisym_bound: f64,
    pub nf_used: bool,
    pub trace_factor: Option<f64>,
    pub normal_form: Option<NormalFormRoute>,
    pub final_bound: f64,
    /// `final_bound > 0`: full Schmidt rank certified.
    pub certified: bool,
    /// Set when the bound is zero because the normal form vanished.
    pub exact_zero: bool,
    /// Lower bounds on the distance to Schmidt number `k`, keyed by `k`.
    pub distance_bounds: BTreeMap<String, f64>,
    pub upper_bound: Option<f64>,
    pub seed: u64,
    pub config: BoundConfig,
    /// Milliseconds per stage; only present on request since it breaks reproducibility.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

/// Pretty JSON with lexicographically sorted keys at every level.
pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    // `Value` objects are ordered maps, so a round trip sorts every key
    let value = serde_json::to_value(value).expect("report is serializable");
    let mut out = serde_json::to_string_pretty(&value).expect("report is serializable");
    out.push('\n');
    out
}

fn optional(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.12}"))
}

impl BoundReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "input sha256        {}", self.input_digest);
        let _ = writeln!(s, "local dimension     {}", self.d);
        let _ = writeln!(s, "fidelity            {:.12}", self.fidelity);
        let _ = writeln!(s, "fidelity (LU opt)   {}", optional(self.fidelity_optimized));
        let _ = writeln!(s, "witness             {}", optional(self.witness.as_ref().map(|w| w.raw)));
        let _ = writeln!(s, "axisymmetric bound  {:.12}", self.axisym_bound);
        let _ = writeln!(s, "normal form         {}", if self.nf_used { "used" } else { "off" });
        let _ = writeln!(s, "trace factor        {}", optional(self.trace_factor));
        for (k, v) in &self.distance_bounds {
            let _ = writeln!(s, "distance to SN<={k:<3} {v:.12}");
        }
        let _ = writeln!(s, "upper estimate      {}", optional(self.upper_bound));
        let _ = writeln!(s, "final bound         {:.12}", self.final_bound);
        let verdict = if self.certified {
            "full Schmidt rank certified"
        } else if self.exact_zero {
            "normal form vanished: G-concurrence is exactly zero"
        } else {
            "inconclusive"
        };
        let _ = writeln!(s, "verdict             {verdict}");
        if let Some(timings) = &self.timings {
            for (stage, ms) in timings {
                let _ = writeln!(s, "time {stage:<14} {ms:.3} ms");
            }
        }
        s
    }
}
