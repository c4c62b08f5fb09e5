//! Orchestration: single solves with an `N` vs `N + delta` self-check,
//! convergence studies, comparison with published digits, node counts and
//! reporting.

mod config;
mod reference;
mod report;

use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;

pub use config::{
    parse_config_file, OutputFormat, RunConfig, DEFAULT_CHECK_INCREMENT, DEFAULT_PRECISION,
    DEFAULT_STATES,
};
pub use reference::{reference_check, Marker, ReferenceData, ReferenceEntry};
pub use report::{
    ConvergenceRow, EnergyReport, MarkerOutcome, MatchBasis, SolveReport, StageTimings,
};

use crate::eigensolve::{attach_vectors, eigenvalues_from_form, householder_decompose, Eigenpair, Spectrum};
use crate::error::{Error, Result, Stage};
use crate::mesh::{build_mesh, hamiltonian_matrix, KineticVariant, PotentialSpec};
use crate::numerics::{
    matched_decimal_places, truncate_decimal, with_precision, BigReal, DecimalString, ExactReal,
    PrecisionContext,
};

/// Environment variable capping the worker pool; `0` or unset means one per core.
pub const THREADS_ENV: &str = "LAGMESH_THREADS";

/// Worker count requested through [`THREADS_ENV`] (`0` = automatic).
pub fn threads_from_env() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"))),
        _ => Ok(0),
    }
}

/// Pool sized by [`THREADS_ENV`]. Results never depend on its size.
pub fn worker_pool() -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads_from_env()?)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

/// One pass of the pipeline at a fixed size.
#[derive(Debug)]
struct RawRun {
    spectrum: Spectrum,
    timings: StageTimings,
}

fn run_pipeline(
    config: &RunConfig,
    mesh_points: usize,
    want_vectors: bool,
    ctx: &PrecisionContext,
) -> Result<RawRun> {
    let mut timings = StageTimings::default();
    let start = Instant::now();

    let clock = Instant::now();
    let mesh = build_mesh(mesh_points, &config.scaling.to_real(ctx), ctx).map_err(Error::at(Stage::Roots))?;
    timings.roots = clock.elapsed();

    let clock = Instant::now();
    let pot = PotentialSpec::quartic(&config.lambda.to_real(ctx), ctx);
    let h = hamiltonian_matrix(&mesh, &pot, config.variant).map_err(Error::at(Stage::Assembly))?;
    timings.assembly = clock.elapsed();

    let clock = Instant::now();
    let form = householder_decompose(&h);
    timings.tridiagonalization = clock.elapsed();

    let clock = Instant::now();
    let indices: Vec<usize> = (0..config.states).collect();
    let values = eigenvalues_from_form(&form, &indices, None).map_err(Error::at(Stage::Bisection))?;
    let mut pairs: Vec<Eigenpair> = indices
        .into_iter()
        .zip(values)
        .map(|(index, value)| Eigenpair {
            index,
            value,
            vector: None,
        })
        .collect();
    timings.bisection = clock.elapsed();

    if want_vectors {
        let clock = Instant::now();
        attach_vectors(&h, &form, &mut pairs, None).map_err(Error::at(Stage::Vectors))?;
        timings.vectors = clock.elapsed();
    }
    timings.total = start.elapsed();
    Ok(RawRun {
        spectrum: Spectrum { pairs },
        timings,
    })
}

fn full_digits(x: &BigReal, ctx: &PrecisionContext) -> Result<DecimalString> {
    truncate_decimal(x, ctx.max_reported_digits())
}

/// Solves for the lowest `config.states` energies.
///
/// With a self-check increment each reported energy is cut to the decimal
/// places on which the `N` and `N + delta` runs agree (never more than
/// `P - 10`); otherwise all `P - 10` places are reported. When the embedded
/// reference data knows the level, `matched_reference` compares the full
/// `P - 10` digit string with it.
pub fn solve_spectrum(config: &RunConfig) -> Result<SolveReport> {
    config.validate()?;
    let start = Instant::now();
    let ctx = with_precision(config.precision)?;
    let primary = run_pipeline(config, config.mesh_points, config.want_vectors, &ctx)?;

    let full: Vec<DecimalString> = primary
        .spectrum
        .pairs
        .iter()
        .map(|p| full_digits(&p.value, &ctx))
        .collect::<Result<_>>()?;

    let mut timings = primary.timings;
    let matched_selfcheck = match config.check_increment {
        Some(delta) => {
            let clock = Instant::now();
            let other = self_check_digits(config, delta, &ctx)?;
            timings.self_check = clock.elapsed();
            Some(
                full.iter()
                    .zip(&other)
                    .map(|(a, b)| matched_decimal_places(a, b))
                    .collect::<Vec<_>>(),
            )
        }
        None => None,
    };

    let refdata = ReferenceData::embedded();
    let energies = primary
        .spectrum
        .pairs
        .iter()
        .zip(&full)
        .enumerate()
        .map(|(i, (pair, full))| {
            let selfcheck = matched_selfcheck.as_ref().map(|m| m[i]);
            let reported = selfcheck.unwrap_or(usize::MAX).min(ctx.max_reported_digits());
            Ok(EnergyReport {
                index: pair.index,
                digits: truncate_decimal(&pair.value, reported)?,
                matched_selfcheck: selfcheck,
                matched_reference: refdata
                    .find(&config.lambda, pair.index)
                    .map(|e| matched_decimal_places(full, &e.digits)),
                nodes: pair.vector.as_deref().map(|v| count_nodes(v, &ctx)),
                full_digits: full.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    timings.total = start.elapsed();
    Ok(SolveReport {
        config: config.clone(),
        energies,
        spectrum: primary.spectrum,
        timings,
    })
}

/// Full-precision digit strings of the `N + delta` run.
fn self_check_digits(config: &RunConfig, delta: usize, ctx: &PrecisionContext) -> Result<Vec<DecimalString>> {
    let n = config
        .mesh_points
        .checked_add(delta)
        .ok_or_else(|| Error::Config("mesh size overflow".into()))?;
    let run = run_pipeline(config, n, false, ctx).map_err(Error::at(Stage::SelfCheck))?;
    run.spectrum
        .pairs
        .iter()
        .map(|p| full_digits(&p.value, ctx))
        .collect()
}

/// Matched decimal places per state between the `N` and `N + delta` runs,
/// capped at `P - 10`. Uses `config.check_increment`, defaulting to 20.
pub fn self_check_accuracy(config: &RunConfig) -> Result<Vec<usize>> {
    config.validate()?;
    let delta = config.check_increment.unwrap_or(DEFAULT_CHECK_INCREMENT);
    let ctx = with_precision(config.precision)?;
    let primary = run_pipeline(config, config.mesh_points, false, &ctx)?;
    let other = self_check_digits(config, delta, &ctx)?;
    primary
        .spectrum
        .pairs
        .iter()
        .zip(&other)
        .map(|(p, b)| Ok(matched_decimal_places(&full_digits(&p.value, &ctx)?, b)))
        .collect()
}

/// Energy of one state for each mesh size, with matched decimal places
/// against the embedded reference (or, lacking one, the largest mesh).
///
/// Sizes run in parallel; rows come back in input order.
pub fn convergence_study(
    lambda: &ExactReal,
    state: usize,
    mesh_list: &[usize],
    precision: u32,
    variant: KineticVariant,
) -> Result<Vec<ConvergenceRow>> {
    if mesh_list.is_empty() {
        return Err(Error::Config("empty mesh list".into()));
    }
    if mesh_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("mesh list must be strictly ascending".into()));
    }
    let ctx = with_precision(precision)?;
    let runs: Vec<(DecimalString, f64)> = mesh_list
        .par_iter()
        .map(|&n| {
            let config = RunConfig::new(lambda.clone(), n)
                .with_states(state + 1)
                .with_precision(precision)
                .with_variant(variant)
                .with_check_increment(None);
            config.validate()?;
            let clock = Instant::now();
            let run = run_pipeline(&config, n, false, &ctx)?;
            let seconds = clock.elapsed().as_secs_f64();
            Ok((full_digits(&run.spectrum.pairs[state].value, &ctx)?, seconds))
        })
        .collect::<Result<_>>()?;

    let (target, basis) = match ReferenceData::embedded().find(lambda, state) {
        Some(entry) => (entry.digits.clone(), MatchBasis::Reference),
        None => (runs.last().map(|r| r.0.clone()).unwrap(), MatchBasis::LargestMesh),
    };
    Ok(mesh_list
        .iter()
        .zip(runs)
        .map(|(&mesh_points, (energy, runtime_seconds))| ConvergenceRow {
            mesh_points,
            runtime_seconds,
            matched_decimal_places: matched_decimal_places(&energy, &target),
            matched_against: basis,
            energy,
        })
        .collect())
}

/// Runs every embedded marker with `Y <= max_mesh_points` at `N = Y`.
///
/// Each run uses `max(min_precision, Z + 30)` digits; one eigensolve serves
/// all markers of a level at the same mesh size.
pub fn check_against_reference(
    max_mesh_points: usize,
    min_precision: u32,
    variant: KineticVariant,
) -> Result<Vec<MarkerOutcome>> {
    let mut jobs: Vec<(&ReferenceEntry, usize, u32)> = Vec::new();
    for entry in &ReferenceData::embedded().entries {
        for m in entry.markers.iter().filter(|m| m.mesh_points <= max_mesh_points) {
            let p = min_precision.max(m.decimal_place as u32 + 30);
            jobs.push((entry, m.mesh_points, p));
        }
    }
    jobs.par_iter()
        .map(|&(entry, n, precision)| {
            let ctx = with_precision(precision)?;
            let config = RunConfig::new(entry.lambda.clone(), n)
                .with_states(entry.state + 1)
                .with_precision(precision)
                .with_variant(variant)
                .with_check_increment(None);
            config.validate()?;
            let run = run_pipeline(&config, n, false, &ctx)?;
            let digits = full_digits(&run.spectrum.pairs[entry.state].value, &ctx)?;
            let required = entry
                .markers
                .iter()
                .find(|m| m.mesh_points == n)
                .map_or(0, |m| m.decimal_place);
            Ok(MarkerOutcome {
                lambda: entry.lambda.clone(),
                state: entry.state,
                mesh_points: n,
                precision,
                required,
                matched: matched_decimal_places(&digits, &entry.digits),
            })
        })
        .collect()
}

/// Strict sign changes between consecutive mesh samples.
///
/// Samples below `10^(-P/2)` in magnitude are skipped, and so is the
/// unresolved tail. Far from the well the mesh eigenvector carries a small
/// remainder of the long-range kinetic couplings that flips sign from one
/// mesh point to the next with a slowly varying envelope, while the resolved
/// wave function rises by orders of magnitude per point. Walking in from
/// either end, the tail stops at the first sample more than [`TAIL_JUMP`]
/// times the largest one seen so far. The same remainder also fills any
/// interior region where the wave function is that small (under a barrier),
/// so samples up to `TAIL_JUMP` times the tail maximum are skipped
/// everywhere. Without such a jump no tail is assumed.
pub fn count_nodes(vector: &[BigReal], ctx: &PrecisionContext) -> usize {
    let mut threshold = ctx.ten_to_minus(ctx.decimal_digits() / 2);
    for tail in [tail_level(vector.iter()), tail_level(vector.iter().rev())]
        .into_iter()
        .flatten()
    {
        let level = tail.clone().abs() * TAIL_JUMP;
        if level > threshold {
            threshold = level;
        }
    }
    count_nodes_above(vector, &threshold)
}

/// Growth factor separating the resolved wave function from the unresolved tail.
pub const TAIL_JUMP: u32 = 10;

/// Strict sign changes between consecutive samples of magnitude above `threshold`.
pub fn count_nodes_above(vector: &[BigReal], threshold: &BigReal) -> usize {
    let mut last: Option<bool> = None;
    let mut nodes = 0;
    for x in vector {
        if x.cmp_abs(threshold) != Some(Ordering::Greater) {
            continue;
        }
        let negative = x.is_sign_negative();
        if last.is_some_and(|prev| prev != negative) {
            nodes += 1;
        }
        last = Some(negative);
    }
    nodes
}

/// Largest sample before the first jump by more than [`TAIL_JUMP`].
fn tail_level<'a>(mut samples: impl Iterator<Item = &'a BigReal>) -> Option<&'a BigReal> {
    let mut max = samples.next()?;
    for x in samples {
        if x.cmp_abs(&(max.clone().abs() * TAIL_JUMP)) == Some(Ordering::Greater) {
            return Some(max);
        }
        if x.cmp_abs(max) == Some(Ordering::Greater) {
            max = x;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(v: i64) -> ExactReal {
        ExactReal::from_integer(v)
    }

    #[test]
    fn nodes_of_simple_vectors() {
        let c = with_precision(40).unwrap();
        let v = |xs: &[f64]| xs.iter().map(|&x| c.real(x)).collect::<Vec<_>>();
        assert_eq!(count_nodes(&v(&[0.1, 0.5, 0.9, 0.2]), &c), 0);
        assert_eq!(count_nodes(&v(&[1.0, -1.0]), &c), 1);
        assert_eq!(count_nodes(&v(&[1.0, 0.0, -1.0, 1e-30, 2.0]), &c), 2);
        assert_eq!(count_nodes(&v(&[1.0, -1e-25, 1.0]), &c), 0);
        // alternating tails with a beat on both sides of a positive bulk
        let tails = v(&[1e-9, -2e-9, 1e-9, 3e-10, -2e-9, 1e-3, 0.1, 0.9, 0.1, 1e-3, -2e-9, 1e-9, -2e-9]);
        assert_eq!(count_nodes(&tails, &c), 0);
        assert_eq!(count_nodes_above(&tails, &c.ten_to_minus(20)), 7);
        // the remainder also sits under a central barrier
        let barrier = v(&[1e-9, -2e-9, 1e-9, 1e-3, 0.5, 1e-3, 4e-9, -4e-9, 4e-9, -1e-3, -0.5, -1e-3, -1e-9, 2e-9]);
        assert_eq!(count_nodes(&barrier, &c), 1);
        // no jump, no tail
        assert_eq!(count_nodes(&v(&[0.3, -0.4, 0.5, -0.5]), &c), 3);
        assert_eq!(count_nodes(&[], &c), 0);
    }

    #[test]
    fn two_point_closed_form() {
        let config = RunConfig::new(lam(1), 2)
            .with_states(2)
            .with_variant(KineticVariant::Exact)
            .with_precision(40)
            .with_check_increment(None);
        let report = solve_spectrum(&config).unwrap();
        let c = with_precision(40).unwrap();
        for (pair, exact) in report.spectrum.pairs.iter().zip([c.ratio(1, 16), c.ratio(9, 16)]) {
            let diff = BigReal::with_val(c.bits(), &pair.value - &exact).abs();
            assert!(diff < c.ten_to_minus(30));
        }
        assert!(report.energies.iter().all(|e| e.digits.fraction_len() == 30));
        assert!(report.energies.iter().all(|e| e.matched_selfcheck.is_none()));
    }

    #[test]
    fn zero_increment_agrees_fully() {
        let config = RunConfig::new(lam(-1), 12)
            .with_states(3)
            .with_precision(50)
            .with_check_increment(Some(0));
        assert_eq!(self_check_accuracy(&config).unwrap(), vec![40, 40, 40]);
        let report = solve_spectrum(&config).unwrap();
        assert!(report.energies.iter().all(|e| e.digits.fraction_len() == 40));
    }

    #[test]
    fn reported_digits_follow_self_check() {
        let config = RunConfig::new(lam(-1), 30).with_states(2).with_precision(60);
        let report = solve_spectrum(&config).unwrap();
        for e in &report.energies {
            let m = e.matched_selfcheck.unwrap();
            assert!(m < 50);
            assert_eq!(e.digits.fraction_len(), m);
            assert_eq!(e.digits, e.full_digits.truncated(m));
        }
        assert!(report.energies[0].matched_reference.is_some());
        assert!(report.energies[1].matched_reference.is_none());
    }

    #[test]
    fn stage_is_reported() {
        let config = RunConfig::new(lam(1), 0).with_check_increment(None);
        assert!(matches!(solve_spectrum(&config), Err(Error::Config(_))));
        let err = run_pipeline(&RunConfig::new(lam(1), 4), 0, false, &with_precision(40).unwrap())
            .unwrap_err();
        assert!(matches!(err, Error::Stage { stage: Stage::Roots, .. }));
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn study_validation() {
        let v = KineticVariant::Exact;
        assert!(convergence_study(&lam(1), 0, &[], 40, v).is_err());
        assert!(convergence_study(&lam(1), 0, &[20, 10], 40, v).is_err());
        assert!(convergence_study(&lam(1), 0, &[10, 10], 40, v).is_err());
    }

    #[test]
    fn study_without_reference_uses_largest_mesh() {
        let rows = convergence_study(&lam(3), 0, &[10, 20, 30], 40, KineticVariant::Exact).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.matched_against == MatchBasis::LargestMesh));
        assert_eq!(rows[2].matched_decimal_places, 30);
        assert!(rows[0].matched_decimal_places <= rows[1].matched_decimal_places);
        assert!(rows.iter().all(|r| r.runtime_seconds > 0.0));
    }

    #[test]
    fn json_shape() {
        let config = RunConfig::new(lam(-1), 10)
            .with_states(2)
            .with_precision(40)
            .with_check_increment(None)
            .with_vectors(true);
        let report = solve_spectrum(&config).unwrap();
        let v = report.to_json(true);
        assert_eq!(v["lambda"], "-1");
        assert_eq!(v["mesh_points"], 10);
        assert_eq!(v["precision"], 40);
        assert_eq!(v["variant"], "gauss");
        assert_eq!(v["scaling"], "1");
        assert!(v["energies"][0]["digits"].is_string());
        assert_eq!(v["energies"][0]["index"], 0);
        assert_eq!(v["energies"][1]["nodes"], 1);
        assert!(v["energies"][0].get("full_digits").is_none());
        assert!(v["runtime_seconds"]["total"].as_f64().unwrap() > 0.0);
        assert!(v["runtime_seconds"]["per_stage"]["bisection"].is_number());
        assert!(report.to_json(false).get("runtime_seconds").is_none());
        assert!(report.to_text(false).contains("nodes 1"));
    }
}
