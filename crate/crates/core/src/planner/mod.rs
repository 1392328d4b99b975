//! Two-stage planning: a crisp search at mean conditions, then a
//! probabilistic search seeded with the crisp plan in which every candidate
//! is screened by cheap gates before its point-estimate power flow runs.

mod evaluate;
mod gates;
mod inputs;
mod report;
mod solve;
mod verify;

pub use evaluate::{
    deterministic_evaluate, probabilistic_evaluate, ContingencyOutcome, DeterministicDetail,
    EvalPolicy, ProbDetail,
};
pub use gates::{
    corridor_gate, cost_gate, line_gate, GateConfig, GateKind, GateOutcome, GateState,
};
pub use inputs::{evaluate_state, Realization, StudyInputs, VariableKind};
pub use report::{
    GateCounts, PlanEntry, PlanReport, ProbEvals, TrialSummary, REPORT_SCHEMA_VERSION,
};
pub use solve::{
    crisp_spec, solve_crisp, solve_probabilistic, traces_csv, Counters, CrispResult, ProbOutcome,
};
pub use verify::{verify_plan, ContingencyShare, Verdict};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constraints::PenaltyWeights;
use crate::mabc::MabcError;
use crate::pem::PemError;
use crate::powerflow::{Model, PfOptions};
use crate::uncertainty::{UncertaintyError, DEFAULT_SAMPLES};

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("case has no [uncertainty] section but the study is probabilistic")]
    MissingUncertainty,
    #[error("no feasible plan found in {trials} trial(s)")]
    NoFeasiblePlan { trials: usize },
    #[error(transparent)]
    Uncertainty(#[from] UncertaintyError),
    #[error(transparent)]
    Pem(#[from] PemError),
    #[error(transparent)]
    Mabc(#[from] MabcError),
    #[error(transparent)]
    Network(#[from] crate::network::NetworkError),
}

/// Which line outages a study guards against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Security {
    /// Intact network only.
    #[serde(rename = "none")]
    None,
    /// Circuit availabilities are random variables driven by forced outage rates.
    #[serde(rename = "for")]
    For,
    /// Every single-circuit outage is checked deterministically.
    #[serde(rename = "n-1")]
    NMinus1,
}

impl fmt::Display for Security {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Security::None => "none",
            Security::For => "for",
            Security::NMinus1 => "n-1",
        })
    }
}

impl FromStr for Security {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Security::None),
            "for" => Ok(Security::For),
            "n-1" | "n1" => Ok(Security::NMinus1),
            other => Err(format!("unknown security `{other}` (none, for, n-1)")),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Ac => "ac",
            Model::Dc => "dc",
        })
    }
}

impl FromStr for Model {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ac" => Ok(Model::Ac),
            "dc" => Ok(Model::Dc),
            other => Err(format!("unknown model `{other}` (ac, dc)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StudySpec {
    pub model: Model,
    pub security: Security,
    /// Treat wind output as random.
    pub wind: bool,
    /// Treat bus loads as random.
    pub load: bool,
    /// Sample count used to discretize continuous distributions.
    pub samples: usize,
    pub weights: PenaltyWeights,
    #[serde(skip)]
    pub pf: PfOptions,
}

impl StudySpec {
    pub fn new(model: Model, security: Security) -> Self {
        StudySpec {
            model,
            security,
            wind: true,
            load: true,
            samples: DEFAULT_SAMPLES,
            weights: PenaltyWeights::default(),
            pf: PfOptions::default(),
        }
    }

    /// Whether any input is random.
    pub fn is_probabilistic(&self) -> bool {
        self.wind || self.load || self.security == Security::For
    }
}
