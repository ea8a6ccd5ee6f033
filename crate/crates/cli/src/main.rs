//! Command-line surface: parameter sweeps over the K curves, Monte-Carlo
//! runs, and the acceptance gate.
//!
//! Exit codes: 0 success, 1 validation error, 2 acceptance or strict-mode
//! tolerance failure.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lgi_core::analytic::{
    c12_coherent, c12_thermal, c13_coherent, c13_thermal, detector_error_threshold,
};
use lgi_core::fock::{FockCutoff, InputSpec, PhotonDistribution, DENSE_CUTOFF_LIMIT};
use lgi_core::montecarlo::{estimate_correlators, RunConfig};
use lgi_core::observables::{k_exact, ExperimentConfig};
use lgi_core::run_acceptance;

#[derive(Parser)]
#[command(
    name = "lgi",
    about = "Leggett-Garg correlators for classical light in Mach-Zehnder setups",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a K curve over its parameter and emit CSV or JSON rows.
    Sweep(SweepArgs),
    /// Run the Monte-Carlo estimator once and print the report as JSON.
    Mc(McArgs),
    /// Run the acceptance suite; exits 0 only if every criterion passes.
    Check,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Coherent input; parameter is the mean photon number |α|².
    Coherent,
    /// Dephased-coherent input; parameter is |α|².
    Dephased,
    /// Thermal input; parameter is λ = ħω/kT.
    Thermal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    Analytic,
    Exact,
    Montecarlo,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    min: f64,
    #[arg(long)]
    max: f64,
    /// Number of grid points (at least 2, endpoints included).
    #[arg(long)]
    steps: usize,
    /// Dephasing damping factors, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1.0")]
    gamma: Vec<f64>,
    #[arg(long, value_enum, default_value = "all")]
    engine: EngineChoice,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Fail (exit 2) if analytic and exact rows disagree beyond 1e-8.
    #[arg(long)]
    strict: bool,
    /// Truncation cutoff; raised automatically if the input tail exceeds 1e-12.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Trials per setup for Monte-Carlo rows (accepts forms like 1e6).
    #[arg(long, default_value = "100000")]
    trials: f64,
    #[arg(long, env = "LGI_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct McArgs {
    /// Input field as family:parameter, e.g. fock:1, coherent:1.386,
    /// dephased:2.0, thermal:0.5348 (coherent/dephased take |α|²).
    #[arg(long)]
    input: String,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Per-detector error rate.
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Trials per setup (accepts forms like 1e6).
    #[arg(long, default_value = "100000")]
    trials: f64,
    #[arg(long, env = "LGI_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    shards: usize,
    #[arg(long)]
    cutoff: Option<usize>,
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Tolerance(String),
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        CliError::Validation(message.into())
    }
}

impl From<lgi_core::Error> for CliError {
    fn from(err: lgi_core::Error) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Validation(format!("io error: {err}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not errors.
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Mc(args) => cmd_mc(args),
        Command::Check => cmd_check(),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Validation(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Tolerance(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

#[derive(serde::Serialize)]
struct SweepRow {
    param: f64,
    gamma: f64,
    c12: f64,
    c23: f64,
    c13: f64,
    k: f64,
    violated: bool,
    engine: &'static str,
    stderr_k: Option<f64>,
}

fn parse_trials(trials: f64) -> Result<u64, CliError> {
    if !trials.is_finite() || !(1.0..=1e12).contains(&trials) {
        return Err(CliError::validation(format!(
            "trials must be in [1, 1e12], got {trials}"
        )));
    }
    Ok(trials.round() as u64)
}

fn family_distribution(family: Family, param: f64) -> Result<PhotonDistribution, CliError> {
    Ok(match family {
        Family::Coherent => PhotonDistribution::coherent_from_mean(param)?,
        Family::Dephased => PhotonDistribution::dephased_from_mean(param)?,
        Family::Thermal => PhotonDistribution::thermal(param)?,
    })
}

/// Cutoff actually used: the requested (or default) one, raised until the
/// input tail drops below 1e-12.
fn effective_cutoff(
    dist: &PhotonDistribution,
    requested: Option<usize>,
    dense_needed: bool,
) -> Result<FockCutoff, CliError> {
    let base = requested.unwrap_or(lgi_core::DEFAULT_N_MAX);
    let required = dist.required_cutoff(lgi_core::DEFAULT_TAIL_TOLERANCE);
    let n_max = base.max(required);
    if dense_needed && n_max > DENSE_CUTOFF_LIMIT {
        return Err(CliError::validation(format!(
            "coherent input needs cutoff {n_max}, beyond the dense limit {DENSE_CUTOFF_LIMIT}; \
             lower the intensity or use the dephased family"
        )));
    }
    Ok(FockCutoff::new(n_max)?)
}

fn analytic_row(family: Family, param: f64, gamma: f64) -> SweepRow {
    let (c12, c13) = match family {
        Family::Coherent | Family::Dephased => (c12_coherent(param), c13_coherent(param, gamma)),
        Family::Thermal => (c12_thermal(param), c13_thermal(param, gamma)),
    };
    let k = c12 - c13;
    SweepRow {
        param,
        gamma,
        c12,
        c23: 0.0,
        c13,
        k,
        violated: k > 1.0,
        engine: "analytic",
        stderr_k: None,
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, CliError> {
    if args.steps < 2 {
        return Err(CliError::validation("steps must be at least 2"));
    }
    if !args.min.is_finite() || !args.max.is_finite() || args.min >= args.max {
        return Err(CliError::validation("min must be strictly below max"));
    }
    if args.family == Family::Thermal && args.min <= 0.0 {
        return Err(CliError::validation("thermal sweeps need min > 0"));
    }
    if args.family != Family::Thermal && args.min < 0.0 {
        return Err(CliError::validation("mean photon number must be >= 0"));
    }
    let mut gammas = args.gamma.clone();
    if gammas.is_empty() {
        return Err(CliError::validation("at least one gamma value is required"));
    }
    for &g in &gammas {
        if !(0.0..=1.0).contains(&g) {
            return Err(CliError::validation(format!("gamma {g} outside [0, 1]")));
        }
    }
    gammas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    gammas.dedup();
    let trials = parse_trials(args.trials)?;

    let params: Vec<f64> = (0..args.steps)
        .map(|i| args.min + (args.max - args.min) * i as f64 / (args.steps - 1) as f64)
        .collect();

    let engines: Vec<EngineChoice> = match args.engine {
        EngineChoice::All => vec![
            EngineChoice::Analytic,
            EngineChoice::Exact,
            EngineChoice::Montecarlo,
        ],
        single => vec![single],
    };

    let mut rows = Vec::new();
    for engine in &engines {
        for &gamma in &gammas {
            for &param in &params {
                let row = match engine {
                    EngineChoice::Analytic => analytic_row(args.family, param, gamma),
                    EngineChoice::Exact => {
                        let dist = family_distribution(args.family, param)?;
                        let dense = matches!(dist, PhotonDistribution::Coherent { .. });
                        let cutoff = effective_cutoff(&dist, args.cutoff, dense)?;
                        let config = ExperimentConfig::with_cutoff(cutoff).gamma(gamma);
                        let report = k_exact(&InputSpec::new(dist), &config)?;
                        SweepRow {
                            param,
                            gamma,
                            c12: report.c12,
                            c23: report.c23,
                            c13: report.c13,
                            k: report.k,
                            violated: report.violated,
                            engine: "exact",
                            stderr_k: None,
                        }
                    }
                    EngineChoice::Montecarlo => {
                        let dist = family_distribution(args.family, param)?;
                        let dense = matches!(dist, PhotonDistribution::Coherent { .. });
                        let cutoff = effective_cutoff(&dist, args.cutoff, dense)?;
                        let config = RunConfig {
                            gamma,
                            n_trials: trials,
                            seed: args.seed,
                            cutoff,
                            ..RunConfig::new(InputSpec::new(dist))
                        };
                        let report = estimate_correlators(&config)?;
                        SweepRow {
                            param,
                            gamma,
                            c12: report.c12,
                            c23: report.c23,
                            c13: report.c13,
                            k: report.k,
                            violated: report.violated,
                            engine: "montecarlo",
                            stderr_k: report.stats.map(|s| s.stderr_k),
                        }
                    }
                    EngineChoice::All => unreachable!(),
                };
                rows.push(row);
            }
        }
    }

    // Row-wise agreement between the closed forms and the exact engine.
    let mut worst: Option<(f64, f64, f64)> = None;
    if engines.contains(&EngineChoice::Analytic) && engines.contains(&EngineChoice::Exact) {
        for row in rows.iter().filter(|r| r.engine == "analytic") {
            let partner = rows
                .iter()
                .find(|r| r.engine == "exact" && r.param == row.param && r.gamma == row.gamma)
                .expect("matching exact row");
            let dev = (row.k - partner.k).abs();
            if worst.is_none_or(|(_, _, w)| dev > w) {
                worst = Some((row.param, row.gamma, dev));
            }
        }
    }

    let text = match args.format {
        OutputFormat::Csv => render_csv(&rows),
        OutputFormat::Json => {
            serde_json::to_string_pretty(&rows).map_err(|e| CliError::validation(e.to_string()))?
        }
    };
    match &args.output {
        Some(path) => std::fs::write(path, text)?,
        None => println!("{text}"),
    }

    if let Some((param, gamma, dev)) = worst {
        if dev > 1e-8 {
            let message = format!(
                "analytic and exact engines disagree by {dev:.3e} at param {param}, gamma {gamma}"
            );
            if args.strict {
                return Err(CliError::Tolerance(message));
            }
            eprintln!("warning: {message}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Fixed column order; floats carry 12 significant digits; stderr_k is empty
/// for non-Monte-Carlo rows.
fn render_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("param,gamma,c12,c23,c13,k,violated,engine,stderr_k\n");
    for row in rows {
        let stderr = row
            .stderr_k
            .map(|v| format!("{v:.11e}"))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e},{},{},{}",
            row.param,
            row.gamma,
            row.c12,
            row.c23,
            row.c13,
            row.k,
            row.violated,
            row.engine,
            stderr
        );
    }
    out
}

fn parse_input(text: &str) -> Result<PhotonDistribution, CliError> {
    let (family, value) = text
        .split_once(':')
        .ok_or_else(|| CliError::validation("input must look like family:parameter"))?;
    let dist = match family {
        "fock" => {
            let n: usize = value
                .parse()
                .map_err(|_| CliError::validation(format!("bad photon number {value}")))?;
            PhotonDistribution::Fock { n }
        }
        "coherent" | "dephased" | "thermal" => {
            let param: f64 = value
                .parse()
                .map_err(|_| CliError::validation(format!("bad parameter {value}")))?;
            match family {
                "coherent" => PhotonDistribution::coherent_from_mean(param)?,
                "dephased" => PhotonDistribution::dephased_from_mean(param)?,
                _ => PhotonDistribution::thermal(param)?,
            }
        }
        other => {
            return Err(CliError::validation(format!(
                "unknown input family {other}; expected fock, coherent, dephased, or thermal"
            )))
        }
    };
    Ok(dist)
}

#[derive(serde::Serialize)]
struct McOutput {
    input: String,
    gamma: f64,
    epsilon: f64,
    /// Worst-case overall error fraction 1 − (1−ε)³ of the three detectors.
    eta: f64,
    /// Macrorealist bound 1 + 2η at this error rate.
    threshold: f64,
    n_trials: u64,
    seed: u64,
    shards: usize,
    cutoff: usize,
    report: lgi_core::CorrelatorReport,
    exceeds_threshold: bool,
}

fn cmd_mc(args: McArgs) -> Result<ExitCode, CliError> {
    let dist = parse_input(&args.input)?;
    let dense = matches!(dist, PhotonDistribution::Coherent { .. });
    let cutoff = effective_cutoff(&dist, args.cutoff, dense)?;
    let trials = parse_trials(args.trials)?;
    let config = RunConfig {
        gamma: args.gamma,
        epsilon: args.epsilon,
        n_trials: trials,
        seed: args.seed,
        cutoff,
        shards: args.shards,
        ..RunConfig::new(InputSpec::new(dist))
    };
    let report = estimate_correlators(&config)?;
    let (eta, threshold) = detector_error_threshold(args.epsilon)?;
    let stderr_k = report.stats.map(|s| s.stderr_k).unwrap_or(0.0);
    let output = McOutput {
        input: args.input,
        gamma: args.gamma,
        epsilon: args.epsilon,
        eta,
        threshold,
        n_trials: trials,
        seed: args.seed,
        shards: args.shards,
        cutoff: cutoff.n_max(),
        report,
        exceeds_threshold: report.k - 3.0 * stderr_k > threshold,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&output).map_err(|e| CliError::validation(e.to_string()))?
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_check() -> Result<ExitCode, CliError> {
    let outcomes = run_acceptance();
    let mut all_passed = true;
    for outcome in &outcomes {
        println!("{outcome}");
        for line in &outcome.details {
            println!("    {line}");
        }
        all_passed &= outcome.passed;
    }
    if all_passed {
        println!("acceptance: all {} criteria passed", outcomes.len());
        Ok(ExitCode::SUCCESS)
    } else {
        let failed: Vec<String> = outcomes
            .iter()
            .filter(|o| !o.passed)
            .map(|o| o.id.to_string())
            .collect();
        Err(CliError::Tolerance(format!(
            "acceptance criteria failed: {}",
            failed.join(", ")
        )))
    }
}
