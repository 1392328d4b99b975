//! Batch front end shared by the `tnep` binary and the examples: resolve a
//! case, run one study, write the artifacts, map the outcome to an exit code.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::caseio::{parse_case, CaseError};
use crate::datasets;
use crate::mabc::MabcConfig;
use crate::network::{Diagnostic, NetworkCase, Severity};
use crate::planner::{
    solve_crisp, solve_probabilistic, traces_csv, verify_plan, EvalPolicy, GateConfig, PlanError,
    PlanReport, StudySpec,
};

/// A plan with zero expected penalty was found.
pub const EXIT_FEASIBLE: i32 = 0;
/// Bad input, unreadable file or internal failure.
pub const EXIT_ERROR: i32 = 1;
/// The study ran but no plan with zero expected penalty came out of it.
pub const EXIT_INFEASIBLE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Case { path: String, source: CaseError },
    #[error("case `{0}` is neither a bundled dataset nor an existing file")]
    UnknownCase(String),
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("{}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// A search that found nothing feasible is an infeasible study, not a
    /// usage error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Plan(PlanError::NoFeasiblePlan { .. }) => EXIT_INFEASIBLE,
            _ => EXIT_ERROR,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Deterministic search at mean conditions only.
    Crisp,
    /// Crisp search followed by the probabilistic search.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Both,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Bundled dataset name or path to a case file.
    pub case: String,
    pub study: StudySpec,
    /// `trials` and `seed` here are the restart count and master seed.
    pub mabc: MabcConfig,
    pub gates: GateConfig,
    pub policy: EvalPolicy,
    pub stage: Stage,
    /// Monte Carlo samples for the final check, if any.
    pub verify: Option<usize>,
    /// Artifact directory. Without one nothing is written.
    pub out: Option<PathBuf>,
    pub report: ReportFormat,
}

impl RunConfig {
    pub fn new(case: impl Into<String>, study: StudySpec) -> Self {
        RunConfig {
            case: case.into(),
            study,
            mabc: MabcConfig::default(),
            gates: GateConfig::default(),
            policy: EvalPolicy::Strategies,
            stage: Stage::Full,
            verify: None,
            out: None,
            report: ReportFormat::Both,
        }
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub report: PlanReport,
    pub exit_code: i32,
    /// Files written, in creation order.
    pub written: Vec<PathBuf>,
}

/// Resolves `case` as a bundled dataset first, then as a path.
pub fn load_case(case: &str, model: crate::powerflow::Model) -> Result<NetworkCase, CliError> {
    let (origin, text) = match datasets::bundled_text(case, model) {
        Some(t) => (case.to_string(), t.to_string()),
        None => {
            let path = Path::new(case);
            if !path.is_file() {
                return Err(CliError::UnknownCase(case.into()));
            }
            let text = fs::read_to_string(path).map_err(|e| CliError::Io {
                path: path.into(),
                source: e,
            })?;
            (path.display().to_string(), text)
        }
    };
    parse_case(&text).map_err(|e| CliError::Case {
        path: origin,
        source: e,
    })
}

/// Schema and invariant checks, plus completeness for `study` if given.
pub fn validate_case(case: &str, study: Option<&StudySpec>) -> Result<Vec<Diagnostic>, CliError> {
    let model = study.map_or(crate::powerflow::Model::Dc, |s| s.model);
    let net = load_case(case, model)?;
    let mut out = net.validate();
    if let Some(s) = study {
        if s.is_probabilistic() && net.uncertainty.is_none() {
            out.push(Diagnostic {
                severity: Severity::Error,
                message: format!(
                    "study `{}` is probabilistic but the case has no [uncertainty] section",
                    s.security
                ),
            });
        }
    }
    Ok(out)
}

/// Exit status implied by a report.
pub fn exit_code(report: &PlanReport) -> i32 {
    if report.feasible && report.e_fpen == Some(0.0) {
        EXIT_FEASIBLE
    } else {
        EXIT_INFEASIBLE
    }
}

/// Runs one study end to end. An infeasible outcome is not an error: it is
/// reported with `EXIT_INFEASIBLE`. A crisp stage that finds nothing at all
/// surfaces as `PlanError::NoFeasiblePlan`.
pub fn run_study(config: &RunConfig) -> Result<RunOutcome, CliError> {
    if config.mabc.trials == 0 {
        return Err(CliError::NoTrials);
    }
    let case = load_case(&config.case, config.study.model)?;
    let mut diags = case.validate();
    if config.stage == Stage::Full && config.study.is_probabilistic() && case.uncertainty.is_none()
    {
        return Err(PlanError::MissingUncertainty.into());
    }
    diags.retain(|d| d.severity == Severity::Error);
    if !diags.is_empty() {
        return Err(CliError::Invalid(diags));
    }

    let seed = config.mabc.seed;
    let crisp = solve_crisp(&case, &config.study, &config.mabc)?;
    let mut traces = vec![("trace-crisp.csv", traces_csv(&crisp.traces))];
    let mut report = match config.stage {
        Stage::Crisp => PlanReport::from_crisp(&case, &config.study, seed, &crisp),
        Stage::Full => {
            let prob = solve_probabilistic(
                &case,
                &config.study,
                &crisp,
                &config.mabc,
                &config.gates,
                config.policy,
            )?;
            traces.push(("trace-full.csv", traces_csv(&prob.traces)));
            PlanReport::from_probabilistic(&case, &config.study, seed, &crisp, &prob, config.policy)
        }
    };
    if let Some(samples) = config.verify {
        let plan = crate::network::ExpansionPlan::new(report.additions.clone());
        let study = match config.stage {
            Stage::Crisp => crate::planner::crisp_spec(&config.study),
            Stage::Full => config.study,
        };
        let verdict = verify_plan(&case, &study, &plan, samples, seed)?;
        if !verdict.feasible() {
            report.warnings.push(format!(
                "Monte Carlo check: {:.4} of {} samples violate a limit",
                verdict.violation_fraction, verdict.samples
            ));
        }
        report.verification = Some(verdict);
    }

    let mut written = Vec::new();
    if let Some(dir) = &config.out {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |e| CliError::Io { path, source: e }
        };
        fs::create_dir_all(dir).map_err(io(dir))?;
        let mut put = |name: &str, body: &str| -> Result<(), CliError> {
            let p = dir.join(name);
            fs::write(&p, body).map_err(io(&p))?;
            written.push(p);
            Ok(())
        };
        if matches!(config.report, ReportFormat::Json | ReportFormat::Both) {
            put("report.json", &report.to_json(true))?;
        }
        if matches!(config.report, ReportFormat::Csv | ReportFormat::Both) {
            put("report.csv", &report.to_csv())?;
        }
        for (name, body) in &traces {
            put(name, body)?;
        }
    }

    Ok(RunOutcome {
        exit_code: exit_code(&report),
        report,
        written,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::Security;
    use crate::powerflow::Model;

    #[test]
    fn bundled_names_and_paths_resolve() {
        assert_eq!(load_case("garver6", Model::Ac).unwrap().name, "garver6-ac");
        assert!(matches!(
            load_case("nowhere.case", Model::Dc),
            Err(CliError::UnknownCase(_))
        ));
    }

    #[test]
    fn syntax_errors_carry_a_position() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.case");
        fs::write(
            &p,
            "[limits]\nname = x\n\n[buses]\nid kind p_demand q_demand\n1 slack oops 0\n",
        )
        .unwrap();
        let msg = load_case(p.to_str().unwrap(), Model::Dc)
            .unwrap_err()
            .to_string();
        assert!(msg.contains("line"), "{msg}");
        assert!(msg.contains("column"), "{msg}");
    }

    #[test]
    fn probabilistic_study_needs_uncertainty() {
        let mut case = datasets::garver6(Model::Dc);
        case.uncertainty = None;
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("plain.case");
        fs::write(&p, crate::caseio::serialize_case(&case)).unwrap();
        let path = p.to_str().unwrap();

        let spec = StudySpec::new(Model::Dc, Security::For);
        let diags = validate_case(path, Some(&spec)).unwrap();
        assert!(diags.iter().any(|d| d.severity == Severity::Error));
        assert!(validate_case(path, None).unwrap().is_empty());
        assert!(matches!(
            run_study(&RunConfig::new(path, spec)),
            Err(CliError::Plan(PlanError::MissingUncertainty))
        ));
    }
}
