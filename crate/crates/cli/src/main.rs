//! Batch front end: scenario sweeps, validation runs, and ROC tables as CSV.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error, 3 resource
//! cap exceeded.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sqradar::fock::FockError;
use sqradar::scenario::{analytic_snr, build, DetectionScenario, ScenarioError, ScenarioKind};
use sqradar::snr::{equivalent_snr, roc_point};
use sqradar::validate::{run as run_validation, Profile};

use config::{apply_param, ScenarioConfig};
use output::CsvWriter;

#[derive(Parser)]
#[command(
    name = "sqradar",
    about = "Squeezed-light laser radar SNR toolkit",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one scenario parameter and emit SNR rows as CSV.
    Sweep(SweepArgs),
    /// Run the scenario-versus-closed-form validation suite.
    Validate(ValidateArgs),
    /// Emit threshold-test operating points as CSV.
    Roc(RocArgs),
    /// Inspect the available scenarios.
    Scenario(ScenarioArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Scenario file: {"kind": ..., "params": {...}, "cutoff": ...}
    #[arg(long)]
    config: PathBuf,
    /// Name of the parameter to sweep.
    #[arg(long)]
    param: String,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    /// Number of sweep points (at least 2, endpoints included).
    #[arg(long)]
    steps: usize,
    #[arg(long, value_enum)]
    engine: Engine,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Engine {
    Analytic,
    Numeric,
    Both,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, default_value = "default")]
    profile: String,
}

#[derive(Args)]
struct RocArgs {
    /// Equivalent SNR D².
    #[arg(long)]
    d2: f64,
    /// Comma-separated list of observation counts M.
    #[arg(long, value_delimiter = ',')]
    m: Vec<u64>,
    /// Comma-separated list of decision thresholds.
    #[arg(long, value_delimiter = ',')]
    thresholds: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScenarioArgs {
    #[command(subcommand)]
    command: ScenarioCommand,
}

#[derive(Subcommand)]
enum ScenarioCommand {
    /// Print every scenario kind with its required and optional parameters.
    List,
}

enum CliError {
    Usage(String),
    Validation(String),
    ResourceCap(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Usage(_) => 2,
            CliError::ResourceCap(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Validation(m) | CliError::ResourceCap(m) => m,
        }
    }
}

fn scenario_error(e: ScenarioError) -> CliError {
    match &e {
        ScenarioError::Fock(FockError::DimensionCap { .. }) => CliError::ResourceCap(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(args) => sweep(args),
        Command::Validate(args) => validate(args),
        Command::Roc(args) => roc(args),
        Command::Scenario(args) => match args.command {
            ScenarioCommand::List => scenario_list(),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

/// A validated sweep: base scenario, the parameter to vary, endpoints,
/// point count, and which engines to run.
struct SweepSpec {
    scenario: DetectionScenario,
    sweep_param: String,
    from: f64,
    to: f64,
    steps: usize,
    engine: Engine,
}

impl SweepSpec {
    fn from_args(args: &SweepArgs) -> Result<Self, CliError> {
        if args.steps < 2 {
            return Err(CliError::Usage(format!(
                "steps must be at least 2, got {}",
                args.steps
            )));
        }
        if args.from > args.to {
            return Err(CliError::Usage(format!(
                "sweep range is reversed: from {} to {}",
                args.from, args.to
            )));
        }
        let cfg = ScenarioConfig::load(&args.config).map_err(CliError::Usage)?;
        let (kind, params) = cfg.into_scenario().map_err(CliError::Usage)?;
        if !config::sweepable_params(kind).contains(&args.param.as_str()) {
            return Err(CliError::Usage(format!(
                "parameter `{}` cannot be swept for scenario {kind}; choose one of {}",
                args.param,
                config::sweepable_params(kind).join(", ")
            )));
        }
        Ok(Self {
            scenario: DetectionScenario::new(kind, params),
            sweep_param: args.param.clone(),
            from: args.from,
            to: args.to,
            steps: args.steps,
            engine: args.engine,
        })
    }

    fn value_at(&self, i: usize) -> f64 {
        self.from + (self.to - self.from) * i as f64 / (self.steps - 1) as f64
    }
}

fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let spec = SweepSpec::from_args(&args)?;
    let mut writer = CsvWriter::create(args.out.as_deref()).map_err(CliError::Usage)?;
    writer
        .header("param,value,snr_analytic,snr_numeric,rel_error,leakage_h0,leakage_h1")
        .map_err(CliError::Usage)?;

    for i in 0..spec.steps {
        let value = spec.value_at(i);
        let mut params = spec.scenario.params;
        apply_param(&mut params, &spec.sweep_param, value).map_err(CliError::Usage)?;
        let scenario = DetectionScenario::new(spec.scenario.kind, params);

        let analytic = if spec.engine != Engine::Numeric {
            Some(analytic_snr(&scenario).map_err(scenario_error)?)
        } else {
            None
        };
        let numeric = if spec.engine != Engine::Analytic {
            let pair = build(&scenario).map_err(scenario_error)?;
            let mut report = equivalent_snr(&pair).map_err(|e| CliError::Usage(format!("{e}")))?;
            if let Some(a) = analytic {
                report = report.with_analytic(a);
            }
            for d in &report.diagnostics {
                eprintln!("warning: {d}");
            }
            Some(report)
        } else {
            None
        };

        let mut row = vec![spec.sweep_param.clone(), output::num(value)];
        row.push(analytic.map(output::num).unwrap_or_default());
        match &numeric {
            Some(rep) => {
                row.push(output::num(rep.snr_numeric));
                row.push(rep.rel_error.map(output::num).unwrap_or_default());
                row.push(output::num(rep.leakage_h0));
                row.push(output::num(rep.leakage_h1));
            }
            None => row.extend([String::new(), String::new(), String::new(), String::new()]),
        }
        writer.row(&row).map_err(CliError::Usage)?;
    }
    writer.finish().map_err(CliError::Usage)
}

fn validate(args: ValidateArgs) -> Result<(), CliError> {
    let profile = Profile::from_name(&args.profile)
        .ok_or_else(|| CliError::Usage(format!("unknown profile `{}`", args.profile)))?;
    let summary = run_validation(&profile);
    println!("validation (profile: {})", summary.profile);
    for c in &summary.criteria {
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!("{status} {} — {}", c.name, c.detail);
    }
    println!(
        "worst rel error {:.2e}, worst leakage {:.2e}, elapsed {:.1}s",
        summary.worst_rel_error(),
        summary.worst_leakage(),
        summary.elapsed_seconds
    );
    if summary.passed() {
        Ok(())
    } else {
        Err(CliError::Validation("validation criteria failed".into()))
    }
}

fn roc(args: RocArgs) -> Result<(), CliError> {
    if args.d2 < 0.0 {
        return Err(CliError::Usage(format!(
            "d2 must be nonnegative, got {}",
            args.d2
        )));
    }
    if args.m.is_empty() || args.thresholds.is_empty() {
        return Err(CliError::Usage(
            "both --m and --thresholds need at least one value".into(),
        ));
    }
    let mut writer = CsvWriter::create(args.out.as_deref()).map_err(CliError::Usage)?;
    writer
        .header("m,threshold,q0,qd")
        .map_err(CliError::Usage)?;
    for &m in &args.m {
        for &x in &args.thresholds {
            let p = roc_point(args.d2, m, x).map_err(|e| CliError::Usage(e.to_string()))?;
            writer
                .row(&[
                    m.to_string(),
                    output::num(x),
                    output::num(p.q0),
                    output::num(p.qd),
                ])
                .map_err(CliError::Usage)?;
        }
    }
    writer.finish().map_err(CliError::Usage)
}

fn scenario_list() -> Result<(), CliError> {
    for kind in ScenarioKind::all() {
        println!("{kind}");
        println!("  required: {}", kind.required_params().join(", "));
        println!("  optional: {}", kind.optional_params().join(", "));
    }
    Ok(())
}
