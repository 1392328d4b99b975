use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tnep::cli::{run_study, validate_case, ReportFormat, RunConfig, Stage, EXIT_ERROR};
use tnep::mabc::MabcConfig;
use tnep::network::Severity;
use tnep::planner::{EvalPolicy, Security, StudySpec};
use tnep::powerflow::Model;

#[derive(Parser)]
#[command(
    name = "tnep",
    version,
    about = "Probabilistic transmission expansion planning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for the cheapest secure expansion plan.
    Plan(PlanArgs),
    /// Check a case file and report diagnostics.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Ac,
    Dc,
}

#[derive(Clone, Copy, ValueEnum)]
enum SecurityArg {
    None,
    For,
    #[value(name = "n-1")]
    N1,
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    Crisp,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportArg {
    Json,
    Csv,
    Both,
}

#[derive(clap::Args)]
struct PlanArgs {
    /// Bundled dataset (garver6, ieee24) or path to a case file.
    #[arg(long)]
    case: String,
    #[arg(long, value_enum, default_value = "dc")]
    model: ModelArg,
    #[arg(long, value_enum, default_value = "for")]
    security: SecurityArg,
    #[arg(long, value_enum, default_value = "full")]
    stage: StageArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Monte Carlo samples for an independent check of the final plan.
    #[arg(long, value_name = "N")]
    verify_mcs: Option<usize>,
    /// Directory for the report and convergence traces.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Score every candidate with the full evaluation, no gates.
    #[arg(long)]
    no_gates: bool,
    #[arg(long, value_enum, default_value = "both")]
    report: ReportArg,
}

#[derive(clap::Args)]
struct ValidateArgs {
    #[arg(long)]
    case: String,
    #[arg(long, value_enum, default_value = "dc")]
    model: ModelArg,
    /// Also check the case is complete for this study.
    #[arg(long, value_enum)]
    security: Option<SecurityArg>,
}

fn model(m: ModelArg) -> Model {
    match m {
        ModelArg::Ac => Model::Ac,
        ModelArg::Dc => Model::Dc,
    }
}

fn security(s: SecurityArg) -> Security {
    match s {
        SecurityArg::None => Security::None,
        SecurityArg::For => Security::For,
        SecurityArg::N1 => Security::NMinus1,
    }
}

fn plan(a: PlanArgs) -> Result<i32, (i32, String)> {
    let mut config = RunConfig::new(a.case, StudySpec::new(model(a.model), security(a.security)));
    config.mabc = MabcConfig {
        seed: a.seed,
        trials: a.trials,
        ..MabcConfig::default()
    };
    config.stage = match a.stage {
        StageArg::Crisp => Stage::Crisp,
        StageArg::Full => Stage::Full,
    };
    config.policy = if a.no_gates {
        EvalPolicy::Rigorous
    } else {
        EvalPolicy::Strategies
    };
    config.verify = a.verify_mcs;
    config.report = match a.report {
        ReportArg::Json => ReportFormat::Json,
        ReportArg::Csv => ReportFormat::Csv,
        ReportArg::Both => ReportFormat::Both,
    };
    config.out = a.out;

    let outcome = run_study(&config).map_err(|e| (e.exit_code(), e.to_string()))?;
    let r = &outcome.report;
    if config.out.is_none() {
        if !matches!(config.report, ReportFormat::Csv) {
            print!("{}", r.to_json(true));
        }
        if !matches!(config.report, ReportFormat::Json) {
            print!("{}", r.to_csv());
        }
    }
    let plan: Vec<String> = r
        .plan
        .iter()
        .map(|e| format!("{}:{}", e.corridor, e.additions))
        .collect();
    eprintln!(
        "{} {} stage, {}: v_pr {} {} [{}] feasible {} pf_calls {}",
        r.case,
        r.stage,
        r.study.security,
        r.v_pr,
        r.cost_unit,
        plan.join(", "),
        r.feasible,
        r.pf_calls
    );
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    for p in &outcome.written {
        eprintln!("wrote {}", p.display());
    }
    Ok(outcome.exit_code)
}

fn validate(a: ValidateArgs) -> Result<i32, (i32, String)> {
    let spec = a
        .security
        .map(|s| StudySpec::new(model(a.model), security(s)));
    let diags =
        validate_case(&a.case, spec.as_ref()).map_err(|e| (e.exit_code(), e.to_string()))?;
    for d in &diags {
        println!("{d}");
    }
    if diags.iter().any(|d| d.severity == Severity::Error) {
        Ok(EXIT_ERROR)
    } else {
        println!("ok");
        Ok(0)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Plan(a) => plan(a),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err((code, e)) => {
            eprintln!("error: {e}");
            ExitCode::from(code as u8)
        }
    }
}
