//! Study report: JSON for machines, a flat CSV laid out like a result table.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use super::evaluate::EvalPolicy;
use super::solve::{Counters, CrispResult, ProbOutcome};
use super::verify::Verdict;
use super::StudySpec;
use crate::network::{ExpansionPlan, NetworkCase};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GateCounts {
    pub corridor: usize,
    pub line: usize,
    pub cost: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub trial: usize,
    pub seed: u64,
    pub plan: String,
    pub cost: f64,
    pub v_aug: f64,
    pub feasible: bool,
    pub evaluations: usize,
    pub pf_calls: usize,
    pub elapsed_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanEntry {
    pub corridor: String,
    pub additions: u32,
    pub cost_contribution: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProbEvals {
    pub started: usize,
    pub completed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanReport {
    pub schema_version: u32,
    pub case: String,
    pub cost_unit: String,
    pub study: StudySpec,
    /// `crisp` or `full`.
    pub stage: String,
    pub policy: EvalPolicy,
    pub seed: u64,
    pub trials: usize,
    pub plan: Vec<PlanEntry>,
    pub additions: Vec<u32>,
    pub new_line_count: u32,
    pub corridors_used: usize,
    pub crisp_plan: Vec<PlanEntry>,
    pub v_cr: f64,
    /// Cost of the reported plan.
    pub v_pr: f64,
    pub v_aug: f64,
    pub e_fpen: Option<f64>,
    pub feasible: bool,
    /// Power flows of the reported stage.
    pub pf_calls: usize,
    pub crisp_pf_calls: usize,
    pub prob_evals: ProbEvals,
    pub gate_rejections: GateCounts,
    pub trial_summaries: Vec<TrialSummary>,
    pub verification: Option<Verdict>,
    pub warnings: Vec<String>,
    /// Mean wall time of one trial of the reported stage.
    pub elapsed_s: f64,
}

fn entries(plan: &ExpansionPlan, case: &NetworkCase) -> Vec<PlanEntry> {
    plan.additions()
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(l, &n)| PlanEntry {
            corridor: case.corridor_label(l),
            additions: n,
            cost_contribution: f64::from(n) * case.corridors[l].cost,
        })
        .collect()
}

fn mean_elapsed(trials: &[TrialSummary]) -> f64 {
    if trials.is_empty() {
        0.0
    } else {
        trials.iter().map(|t| t.elapsed_s).sum::<f64>() / trials.len() as f64
    }
}

impl PlanReport {
    fn base(case: &NetworkCase, study: &StudySpec, seed: u64, crisp: &CrispResult) -> Self {
        PlanReport {
            schema_version: REPORT_SCHEMA_VERSION,
            case: case.name.clone(),
            cost_unit: case.cost_unit.clone(),
            study: *study,
            stage: "crisp".into(),
            policy: EvalPolicy::Strategies,
            seed,
            trials: crisp.trials.len(),
            plan: entries(&crisp.plan, case),
            additions: crisp.plan.additions().to_vec(),
            new_line_count: crisp.plan.total_lines(),
            corridors_used: crisp.plan.corridors_used(),
            crisp_plan: entries(&crisp.plan, case),
            v_cr: crisp.v_cr,
            v_pr: crisp.v_cr,
            v_aug: crisp.v_cr,
            e_fpen: Some(0.0),
            feasible: true,
            pf_calls: crisp.counters.pf_calls,
            crisp_pf_calls: crisp.counters.pf_calls,
            prob_evals: ProbEvals {
                started: 0,
                completed: 0,
            },
            gate_rejections: GateCounts::default(),
            trial_summaries: crisp.trials.clone(),
            verification: None,
            warnings: Vec::new(),
            elapsed_s: mean_elapsed(&crisp.trials),
        }
    }

    pub fn from_crisp(
        case: &NetworkCase,
        study: &StudySpec,
        seed: u64,
        crisp: &CrispResult,
    ) -> Self {
        Self::base(case, study, seed, crisp)
    }

    pub fn from_probabilistic(
        case: &NetworkCase,
        study: &StudySpec,
        seed: u64,
        crisp: &CrispResult,
        prob: &ProbOutcome,
        policy: EvalPolicy,
    ) -> Self {
        let c: &Counters = &prob.counters;
        let detail = prob.detail.as_ref();
        PlanReport {
            stage: "full".into(),
            policy,
            trials: prob.trials.len(),
            plan: entries(&prob.plan, case),
            additions: prob.plan.additions().to_vec(),
            new_line_count: prob.plan.total_lines(),
            corridors_used: prob.plan.corridors_used(),
            v_pr: prob.cost,
            v_aug: prob.v_aug,
            e_fpen: detail.and_then(|d| d.e_fpen),
            feasible: prob.feasible,
            pf_calls: c.pf_calls,
            prob_evals: ProbEvals {
                started: c.prob_started,
                completed: c.prob_completed,
            },
            gate_rejections: c.gate_rejections,
            trial_summaries: prob.trials.clone(),
            warnings: detail.map(|d| d.warnings.clone()).unwrap_or_default(),
            elapsed_s: mean_elapsed(&prob.trials),
            ..Self::base(case, study, seed, crisp)
        }
    }

    /// Pretty JSON. Without timing, equal inputs give byte-identical output.
    pub fn to_json(&self, with_timing: bool) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if !with_timing {
            strip_key(&mut v, "elapsed_s");
        }
        let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("corridor,additions,cost_contribution\n");
        for e in &self.plan {
            let _ = writeln!(s, "{},{},{}", e.corridor, e.additions, e.cost_contribution);
        }
        let _ = writeln!(s, "total_lines,{},", self.new_line_count);
        let _ = writeln!(s, "v_pr,,{}", self.v_pr);
        let _ = writeln!(s, "tp_s,,{:.3}", self.elapsed_s);
        let _ = writeln!(s, "pf_calls,{},", self.pf_calls);
        let _ = writeln!(s, "gate_rejections,{},", self.gate_rejections.total());
        s
    }
}

fn strip_key(v: &mut Value, key: &str) {
    match v {
        Value::Object(m) => {
            m.remove(key);
            m.values_mut().for_each(|x| strip_key(x, key));
        }
        Value::Array(a) => a.iter_mut().for_each(|x| strip_key(x, key)),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timing_is_stripped_everywhere() {
        let mut v = serde_json::json!({"elapsed_s": 1.0, "t": [{"elapsed_s": 2.0, "x": 1}]});
        strip_key(&mut v, "elapsed_s");
        assert_eq!(v, serde_json::json!({"t": [{"x": 1}]}));
    }
}
