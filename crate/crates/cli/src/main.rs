mod error;
mod report;
mod scenario;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use symbiont::oracle::{run_campaign, verify_scenario, OracleConfig};
use symbiont::sweep::{export, run_sweep, ExportFormat, SweepSpec};
use symbiont::{classify_equilibria, compare, equilibrium::equilibrium, Regime, Scenario};

use error::CliError;
use report::Report;
use scenario::ScenarioArgs;

/// Closed-form and brute-force analysis of industrial symbiosis in a
/// competitive market.
///
/// Scenario values are resolved in this order, later sources overriding
/// earlier ones: --reference, then --scenario FILE, then the per-key flags.
/// Set SYMBIONT_THREADS to cap the worker threads used by verify and sweep.
///
/// Exit codes: 0 success, 1 oracle verification failure, 2 invalid input,
/// 3 i/o failure.
#[derive(Debug, Parser)]
#[command(name = "symbiont", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    Benchmark,
    Symbiosis,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Benchmark => Regime::Benchmark,
            RegimeArg::Symbiosis => Regime::Symbiosis,
        }
    }
}

#[derive(Debug, Clone, clap::Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Cross-check the scenario against the numeric oracle first
    #[arg(long)]
    verify: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Equilibrium of one regime
    Solve {
        #[arg(long, value_enum, default_value = "benchmark")]
        regime: RegimeArg,
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Gaps between the symbiosis and benchmark equilibria
    Compare {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Adoption cutoffs and which symmetric profiles are equilibria
    Adoption {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check closed forms against the numeric oracle, on one scenario or on
    /// a seeded random campaign
    Verify {
        /// Run a campaign of this many random scenarios instead
        #[arg(long)]
        draws: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write one JSON verification record per line to this file
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Run a sweep described by a JSON spec file
    Sweep {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Cross-check every grid point against the numeric oracle
        #[arg(long)]
        verify: bool,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SYMBIONT_THREADS") else {
        return Ok(());
    };
    let threads: usize =
        raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
            CliError::Validation(format!("SYMBIONT_THREADS must be a positive integer (got `{raw}`)"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Validation(format!("cannot size thread pool: {e}")))
}

fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => match std::io::stdout().lock().write_all(bytes) {
            // a closed pipe (e.g. `| head`) is not an error
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                Err(CliError::Io(format!("cannot write to stdout: {e}")))
            }
            _ => Ok(()),
        },
    }
}

fn check_with_oracle(s: &Scenario) -> Result<(), CliError> {
    let record = verify_scenario(&s.market, &s.tech, &OracleConfig::default());
    if record.passed {
        return Ok(());
    }
    let failed: Vec<String> = record.failed_checks().map(|c| c.name.clone()).collect();
    let detail = record
        .error
        .unwrap_or_else(|| format!("failed checks: {}", failed.join(", ")));
    Err(CliError::Verification(detail))
}

fn render(report: &Report, format: Format, json: impl FnOnce() -> serde_json::Value) -> Vec<u8> {
    match format {
        Format::Table => report.table().into_bytes(),
        Format::Csv => report.csv().into_bytes(),
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&json()).expect("report values are finite");
            out.push(b'\n');
            out
        }
    }
}

fn solve(regime: Regime, s: &Scenario, output: &OutputArgs) -> Result<(), CliError> {
    if output.verify {
        check_with_oracle(s)?;
    }
    let e = equilibrium(&s.market, &s.tech, regime);
    let report = report::equilibrium(&e);
    emit(
        &render(&report, output.format, || serde_json::json!(e)),
        output.out.as_deref(),
    )
}

fn compare_cmd(s: &Scenario, output: &OutputArgs) -> Result<(), CliError> {
    if output.verify {
        check_with_oracle(s)?;
    }
    let c = compare(&s.market, &s.tech);
    if c.degenerate_gain {
        eprintln!(
            "notice: degenerate profitability gain (d = 0 and p_g = 0); the pollution sign condition is undefined"
        );
    }
    let report = report::comparison(&c);
    emit(
        &render(&report, output.format, || serde_json::json!(c)),
        output.out.as_deref(),
    )
}

fn adoption(s: &Scenario, output: &OutputArgs) -> Result<(), CliError> {
    if output.verify {
        check_with_oracle(s)?;
    }
    let a = classify_equilibria(&s.market, &s.tech);
    let report = report::adoption(&a, s.tech.c_g());
    emit(
        &render(&report, output.format, || serde_json::json!(a)),
        output.out.as_deref(),
    )
}

fn verify(draws: Option<usize>, seed: u64, out: Option<&Path>, scenario: &ScenarioArgs) -> Result<(), CliError> {
    let cfg = OracleConfig::default();
    let records = match draws {
        Some(0) => return Err(CliError::Validation("--draws must be positive".into())),
        Some(draws) => run_campaign(draws, seed, &cfg).records,
        None => {
            let s = scenario.load()?;
            let record = verify_scenario(&s.market, &s.tech, &cfg);
            let mut lines = String::new();
            for check in &record.checks {
                let verdict = if check.passed { "pass" } else { "FAIL" };
                lines.push_str(&format!("{}={verdict} rel_err={:.3e}\n", check.name, check.rel_err));
            }
            if let Some(e) = &record.error {
                lines.push_str(&format!("oracle_error={e}\n"));
            }
            emit(lines.as_bytes(), None)?;
            vec![record]
        }
    };

    if let Some(path) = out {
        let mut lines = Vec::new();
        for r in &records {
            serde_json::to_writer(&mut lines, r).expect("records serialize");
            lines.push(b'\n');
        }
        emit(&lines, Some(path))?;
    }

    let passed = records.iter().filter(|r| r.passed).count();
    emit(format!("{passed}/{} pass\n", records.len()).as_bytes(), None)?;
    if passed == records.len() {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{} of {} scenarios failed",
            records.len() - passed,
            records.len()
        )))
    }
}

fn sweep(path: &Path, format: Format, out: Option<&Path>, verify: bool) -> Result<(), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut spec: SweepSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: invalid sweep spec: {e}", path.display())))?;
    spec.verify |= verify;
    let export_format = match format {
        Format::Csv => ExportFormat::Csv,
        Format::Json => ExportFormat::Json,
        Format::Table => return Err(CliError::Validation("sweep output is csv or json".into())),
    };
    let result = run_sweep(&spec).map_err(|e| match e {
        symbiont::sweep::SweepError::VerificationFailed { .. } => CliError::Verification(e.to_string()),
        _ => CliError::Validation(e.to_string()),
    })?;
    emit(&export(&result, export_format), out)
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Solve {
            regime,
            scenario,
            output,
        } => solve(regime.into(), &scenario.load()?, &output),
        Command::Compare { scenario, output } => compare_cmd(&scenario.load()?, &output),
        Command::Adoption { scenario, output } => adoption(&scenario.load()?, &output),
        Command::Verify {
            draws,
            seed,
            out,
            scenario,
        } => verify(draws, seed, out.as_deref(), &scenario),
        Command::Sweep {
            spec,
            format,
            out,
            verify,
        } => sweep(&spec, format, out.as_deref(), verify),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("symbiont: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
