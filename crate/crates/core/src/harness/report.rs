use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::RunConfig;
use crate::eigensolve::Spectrum;
use crate::numerics::{DecimalString, ExactReal};

/// Wall-clock time per pipeline stage.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimings {
    pub roots: Duration,
    pub assembly: Duration,
    pub tridiagonalization: Duration,
    pub bisection: Duration,
    pub vectors: Duration,
    pub self_check: Duration,
    pub total: Duration,
}

impl StageTimings {
    fn per_stage_json(&self) -> Value {
        json!({
            "roots": self.roots.as_secs_f64(),
            "assembly": self.assembly.as_secs_f64(),
            "tridiagonalization": self.tridiagonalization.as_secs_f64(),
            "bisection": self.bisection.as_secs_f64(),
            "vectors": self.vectors.as_secs_f64(),
            "self_check": self.self_check.as_secs_f64(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub index: usize,
    /// Truncated to the reported accuracy.
    pub digits: DecimalString,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matched_selfcheck: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matched_reference: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    /// All `P - 10` trustworthy-arithmetic digits, before the self-check cut.
    #[serde(skip)]
    pub full_digits: DecimalString,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub config: RunConfig,
    pub energies: Vec<EnergyReport>,
    /// Eigenpairs of the primary run, with vectors when requested.
    pub spectrum: Spectrum,
    pub timings: StageTimings,
}

impl SolveReport {
    /// The structured form. Timings are left out when `with_timings` is false,
    /// which makes the output a pure function of the configuration.
    pub fn to_json(&self, with_timings: bool) -> Value {
        let c = &self.config;
        let mut v = json!({
            "lambda": c.lambda,
            "mesh_points": c.mesh_points,
            "precision": c.precision,
            "variant": c.variant,
            "scaling": c.scaling,
            "energies": self.energies,
        });
        if with_timings {
            v["runtime_seconds"] = json!({
                "total": self.timings.total.as_secs_f64(),
                "per_stage": self.timings.per_stage_json(),
            });
        }
        v
    }

    pub fn to_text(&self, with_timings: bool) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "lambda = {}  N = {}  P = {}  variant = {}  h = {}",
            c.lambda, c.mesh_points, c.precision, c.variant, c.scaling
        );
        for e in &self.energies {
            let _ = write!(out, "E{:<3} {}", e.index, e.digits);
            let mut notes = Vec::new();
            if let Some(m) = e.matched_selfcheck {
                notes.push(format!("self-check {m}"));
            }
            if let Some(m) = e.matched_reference {
                notes.push(format!("reference {m}"));
            }
            if let Some(n) = e.nodes {
                notes.push(format!("nodes {n}"));
            }
            if !notes.is_empty() {
                let _ = write!(out, "  [{}]", notes.join(", "));
            }
            out.push('\n');
        }
        if with_timings {
            let t = &self.timings;
            let _ = writeln!(
                out,
                "time {:.3}s (roots {:.3}, assembly {:.3}, tridiagonal {:.3}, bisection {:.3}, vectors {:.3}, self-check {:.3})",
                t.total.as_secs_f64(),
                t.roots.as_secs_f64(),
                t.assembly.as_secs_f64(),
                t.tridiagonalization.as_secs_f64(),
                t.bisection.as_secs_f64(),
                t.vectors.as_secs_f64(),
                t.self_check.as_secs_f64(),
            );
        }
        out
    }
}

/// What a [`ConvergenceRow`] was compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchBasis {
    Reference,
    /// No reference exists; compared with the largest mesh in the study.
    LargestMesh,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub mesh_points: usize,
    pub runtime_seconds: f64,
    pub matched_decimal_places: usize,
    pub matched_against: MatchBasis,
    pub energy: DecimalString,
}

/// Outcome of one published convergence marker.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarkerOutcome {
    pub lambda: ExactReal,
    pub state: usize,
    pub mesh_points: usize,
    pub precision: u32,
    pub required: usize,
    pub matched: usize,
}

impl MarkerOutcome {
    pub fn passed(&self) -> bool {
        self.matched >= self.required
    }
}
