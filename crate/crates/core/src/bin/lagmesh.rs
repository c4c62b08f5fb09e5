use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lagmesh::harness::{
    check_against_reference, convergence_study, parse_config_file, solve_spectrum, worker_pool,
    OutputFormat, RunConfig,
};
use lagmesh::mesh::{build_mesh, hamiltonian_matrix, write_matrix_dump, PotentialSpec};
use lagmesh::numerics::{with_precision, ExactReal};
use lagmesh::{Error, Result};

#[derive(Parser)]
#[command(name = "lagmesh", version, about = "Lagrange-mesh energies of the quartic oscillator")]
struct Cli {
    /// File of `key = value` settings; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lowest energies at one mesh size, with an N vs N+delta self-check.
    Solve(SolveArgs),
    /// One state over a list of mesh sizes.
    Study(StudyArgs),
    /// Reproduce the stored convergence markers.
    Check(CheckArgs),
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long)]
    states: Option<String>,
    #[arg(long)]
    mesh_points: Option<String>,
    #[arg(long)]
    precision: Option<String>,
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    scaling: Option<String>,
    /// Extra mesh points for the self-check, or `off`.
    #[arg(long)]
    check_increment: Option<String>,
    /// Compute eigenvectors and report node counts.
    #[arg(long)]
    vectors: bool,
    #[arg(long)]
    format: Option<String>,
    /// Leave wall-clock times out of the output.
    #[arg(long)]
    no_timings: bool,
    /// Write the Hamiltonian matrix to this file.
    #[arg(long)]
    dump_matrix: Option<PathBuf>,
}

#[derive(Args)]
struct StudyArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, default_value_t = 0)]
    state: usize,
    /// Comma-separated ascending mesh sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    mesh_list: Vec<usize>,
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    /// Run the stored markers against the embedded reference digits.
    #[arg(long, required = true)]
    against_paper: bool,
    #[arg(long, default_value_t = 400)]
    max_mesh_points: usize,
    /// Lower bound on the working precision of each run.
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    format: Option<String>,
}

const STUDY_PRECISION: u32 = 120;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = worker_pool().and_then(|pool| pool.install(|| run(cli)));
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let file = match &cli.config {
        Some(path) => parse_config_file(&fs::read_to_string(path)?)?,
        None => Vec::new(),
    };
    let from_file = |key: &str| {
        file.iter()
            .rev()
            .find(|(k, _)| k.replace('_', "-") == key)
            .map(|(_, v)| v.clone())
    };
    match cli.command {
        Command::Solve(args) => solve(args, &file),
        Command::Study(args) => {
            let lambda: ExactReal = args
                .lambda
                .or_else(|| from_file("lambda"))
                .ok_or_else(|| Error::Config("--lambda is required".into()))?
                .parse()?;
            let precision = match args.precision {
                Some(p) => p,
                None => from_file("precision").map_or(Ok(STUDY_PRECISION), |p| parse_u32("precision", &p))?,
            };
            let variant = pick(args.variant, from_file("variant"))?.unwrap_or_default();
            let format = pick(args.format, from_file("format"))?.unwrap_or_default();
            let rows = convergence_study(&lambda, args.state, &args.mesh_list, precision, variant)?;
            let mut out = io::stdout().lock();
            match format {
                OutputFormat::Json => writeln!(out, "{}", to_json(&rows))?,
                OutputFormat::Text => {
                    writeln!(out, "{:>6} {:>10} {:>7}  energy", "N", "seconds", "matched")?;
                    for r in &rows {
                        writeln!(
                            out,
                            "{:>6} {:>10.3} {:>7}  {}",
                            r.mesh_points, r.runtime_seconds, r.matched_decimal_places, r.energy
                        )?;
                    }
                }
            }
            Ok(0)
        }
        Command::Check(args) => {
            let precision = match args.precision {
                Some(p) => p,
                None => from_file("precision").map_or(Ok(STUDY_PRECISION), |p| parse_u32("precision", &p))?,
            };
            let variant = pick(args.variant, from_file("variant"))?.unwrap_or_default();
            let format = pick(args.format, from_file("format"))?.unwrap_or_default();
            let outcomes = check_against_reference(args.max_mesh_points, precision, variant)?;
            let mut out = io::stdout().lock();
            match format {
                OutputFormat::Json => writeln!(out, "{}", to_json(&outcomes))?,
                OutputFormat::Text => {
                    for o in &outcomes {
                        writeln!(
                            out,
                            "{} lambda={} state={} N={} P={} required={} matched={}",
                            if o.passed() { "PASS" } else { "FAIL" },
                            o.lambda,
                            o.state,
                            o.mesh_points,
                            o.precision,
                            o.required,
                            o.matched
                        )?;
                    }
                }
            }
            Ok(if outcomes.iter().all(|o| o.passed()) { 0 } else { 1 })
        }
    }
}

fn solve(args: SolveArgs, file: &[(String, String)]) -> Result<u8> {
    let mut settings: Vec<(String, String)> = file.to_vec();
    let flags = [
        ("lambda", args.lambda),
        ("states", args.states),
        ("mesh-points", args.mesh_points),
        ("precision", args.precision),
        ("variant", args.variant),
        ("scaling", args.scaling),
        ("check-increment", args.check_increment),
        ("format", args.format),
    ];
    settings.extend(flags.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))));
    if args.vectors {
        settings.push(("vectors".into(), "true".into()));
    }
    let has = |key: &str| settings.iter().any(|(k, _)| k.replace('_', "-") == key);
    for key in ["lambda", "mesh-points"] {
        if !has(key) {
            return Err(Error::Config(format!("--{key} is required")));
        }
    }
    let mut config = RunConfig::new(ExactReal::from_integer(0), 0);
    for (k, v) in &settings {
        config.set(k, v)?;
    }
    config.validate()?;

    if let Some(path) = &args.dump_matrix {
        let ctx = with_precision(config.precision)?;
        let mesh = build_mesh(config.mesh_points, &config.scaling.to_real(&ctx), &ctx)?;
        let pot = PotentialSpec::quartic(&config.lambda.to_real(&ctx), &ctx);
        let h = hamiltonian_matrix(&mesh, &pot, config.variant)?;
        let mut f = io::BufWriter::new(fs::File::create(path)?);
        write_matrix_dump(&mut f, &h, &mesh, config.variant)?;
        f.flush()?;
    }

    let report = solve_spectrum(&config)?;
    let mut out = io::stdout().lock();
    match config.format {
        OutputFormat::Json => writeln!(out, "{}", to_json(&report.to_json(!args.no_timings)))?,
        OutputFormat::Text => write!(out, "{}", report.to_text(!args.no_timings))?,
    }
    Ok(0)
}

fn pick<T: std::str::FromStr<Err = Error>>(cli: Option<String>, file: Option<String>) -> Result<Option<T>> {
    cli.or(file).map(|s| s.parse()).transpose()
}

fn parse_u32(key: &str, value: &str) -> Result<u32> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: expected a non-negative integer, got {value:?}")))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}
