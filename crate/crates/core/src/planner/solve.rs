//! Stage drivers: colony trials over the crisp and probabilistic fitness.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::evaluate::{deterministic_evaluate, probabilistic_evaluate, EvalPolicy, ProbDetail};
use super::gates::{GateConfig, GateKind, GateOutcome, GateState};
use super::inputs::StudyInputs;
use super::report::{GateCounts, TrialSummary};
use super::{PlanError, StudySpec};
use crate::mabc::{self, Evaluation, MabcConfig, MabcOutcome, TracePoint};
use crate::network::{plan_cost, ExpansionPlan, NetworkCase};

/// Work done during a stage; every field only grows.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    /// Deterministic power flows solved.
    pub pf_calls: usize,
    /// Plans scored by the colony, cache hits and gate rejections included.
    pub candidates: usize,
    /// Fitness evaluations actually run.
    pub evaluated: usize,
    /// Contingency-level probabilistic evaluations.
    pub prob_started: usize,
    pub prob_completed: usize,
    pub gate_rejections: GateCounts,
}

impl Counters {
    pub fn add(&mut self, o: &Counters) {
        self.pf_calls += o.pf_calls;
        self.candidates += o.candidates;
        self.evaluated += o.evaluated;
        self.prob_started += o.prob_started;
        self.prob_completed += o.prob_completed;
        self.gate_rejections.add(&o.gate_rejections);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrispResult {
    pub plan: ExpansionPlan,
    pub v_cr: f64,
    pub counters: Counters,
    pub trials: Vec<TrialSummary>,
    /// Convergence trace of each trial.
    #[serde(skip)]
    pub traces: Vec<Vec<TracePoint>>,
}

/// Traces of all trials as one CSV table.
pub fn traces_csv(traces: &[Vec<TracePoint>]) -> String {
    let mut s = String::from("trial,cycle,best_v_aug,evaluations\n");
    for (t, trace) in traces.iter().enumerate() {
        for p in trace {
            let _ = writeln!(s, "{t},{},{},{}", p.cycle, p.best_v_aug, p.evaluations);
        }
    }
    s
}

/// Ties on cost go to the lexicographically smaller plan.
fn better(a: (f64, &ExpansionPlan), b: (f64, &ExpansionPlan)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}

fn summary(
    t: usize,
    seed: u64,
    case: &NetworkCase,
    out: &MabcOutcome,
    c: &Counters,
    secs: f64,
) -> TrialSummary {
    let pick = out.best_feasible.as_ref().unwrap_or(&out.best);
    TrialSummary {
        trial: t,
        seed,
        plan: pick.plan.describe(case),
        cost: plan_cost(&pick.plan, case).unwrap_or(f64::NAN),
        v_aug: pick.v_aug,
        feasible: out.best_feasible.is_some(),
        evaluations: out.evaluations,
        pf_calls: c.pf_calls,
        elapsed_s: secs,
    }
}

/// The crisp spec of a study: mean inputs, no random availabilities.
pub fn crisp_spec(spec: &StudySpec) -> StudySpec {
    let mut s = *spec;
    s.wind = false;
    s.load = false;
    if s.security == super::Security::For {
        s.security = super::Security::None;
    }
    s
}

/// Stage 1: colony search with deterministic fitness at mean conditions.
/// `spec` is the full study; its crisp counterpart is derived here.
pub fn solve_crisp(
    case: &NetworkCase,
    spec: &StudySpec,
    config: &MabcConfig,
) -> Result<CrispResult, PlanError> {
    config.check()?;
    let spec = crisp_spec(spec);
    let inputs = StudyInputs::new(case, &spec)?;
    let upper = case.upper_bounds();

    let runs = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let start = Instant::now();
            let cfg = MabcConfig {
                seed: config.trial_seed(t),
                ..*config
            };
            let mut cache: HashMap<ExpansionPlan, Evaluation> = HashMap::new();
            let mut counters = Counters::default();
            let mut failure = None;
            let out = mabc::run(&cfg, &upper, None, |plans| {
                counters.candidates += plans.len();
                let mut fresh: Vec<&ExpansionPlan> = Vec::new();
                for p in plans {
                    if !cache.contains_key(p) && !fresh.contains(&p) {
                        fresh.push(p);
                    }
                }
                let scored: Vec<_> = fresh
                    .par_iter()
                    .map(|p| deterministic_evaluate(case, &spec, &inputs, p))
                    .collect();
                for (p, r) in fresh.into_iter().zip(scored) {
                    let e = match r {
                        Ok(d) => {
                            counters.pf_calls += d.pf_calls;
                            counters.evaluated += 1;
                            Evaluation {
                                v_aug: d.v_aug,
                                feasible: d.feasible,
                            }
                        }
                        Err(e) => {
                            failure.get_or_insert(e);
                            Evaluation {
                                v_aug: f64::MAX,
                                feasible: false,
                            }
                        }
                    };
                    cache.insert(p.clone(), e);
                }
                plans.iter().map(|p| cache[p]).collect()
            })?;
            if let Some(e) = failure {
                return Err(e);
            }
            let summary = summary(
                t,
                cfg.seed,
                case,
                &out,
                &counters,
                start.elapsed().as_secs_f64(),
            );
            Ok((out, counters, summary))
        })
        .collect::<Result<Vec<_>, PlanError>>()?;

    let mut counters = Counters::default();
    let mut best: Option<(f64, ExpansionPlan)> = None;
    let mut trials = Vec::new();
    let mut traces = Vec::new();
    for (out, c, s) in runs {
        counters.add(&c);
        trials.push(s);
        traces.push(out.trace.clone());
        if let Some(f) = out.best_feasible {
            if best
                .as_ref()
                .is_none_or(|b| better((f.v_aug, &f.plan), (b.0, &b.1)))
            {
                best = Some((f.v_aug, f.plan));
            }
        }
    }
    let Some((v_cr, plan)) = best else {
        return Err(PlanError::NoFeasiblePlan {
            trials: config.trials,
        });
    };
    Ok(CrispResult {
        plan,
        v_cr,
        counters,
        trials,
        traces,
    })
}

/// Result of stage 2.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbOutcome {
    /// Best feasible plan, or the best infeasible one when none was found.
    pub plan: ExpansionPlan,
    pub cost: f64,
    pub v_aug: f64,
    pub feasible: bool,
    /// Evaluation of `plan` as scored during the search.
    pub detail: Option<ProbDetail>,
    pub counters: Counters,
    pub trials: Vec<TrialSummary>,
    #[serde(skip)]
    pub traces: Vec<Vec<TracePoint>>,
}

struct ProbTrial<'a> {
    case: &'a NetworkCase,
    spec: &'a StudySpec,
    inputs: &'a StudyInputs,
    policy: EvalPolicy,
    gates: GateState,
    cache: HashMap<ExpansionPlan, ProbDetail>,
    counters: Counters,
    failure: Option<PlanError>,
}

impl ProbTrial<'_> {
    fn screen(&self, plan: &ExpansionPlan, cost: f64) -> GateOutcome {
        match self.policy {
            EvalPolicy::Strategies => self.gates.screen(plan, cost),
            EvalPolicy::Rigorous => GateOutcome::Pass,
        }
    }

    fn batch(&mut self, plans: &[ExpansionPlan]) -> Vec<Evaluation> {
        self.counters.candidates += plans.len();
        let costs: Vec<f64> = plans
            .iter()
            .map(|p| plan_cost(p, self.case).unwrap_or(f64::MAX))
            .collect();
        // screening against the ceiling as it stood when the phase began
        let mut fresh: Vec<&ExpansionPlan> = Vec::new();
        for (p, &c) in plans.iter().zip(&costs) {
            if self.screen(p, c).passed() && !self.cache.contains_key(p) && !fresh.contains(&p) {
                fresh.push(p);
            }
        }
        let base = self.gates.config.gate_penalty_base;
        let (case, spec, inputs, policy) = (self.case, self.spec, self.inputs, self.policy);
        let scored: Vec<_> = fresh
            .par_iter()
            .map(|p| probabilistic_evaluate(case, spec, inputs, p, policy, base))
            .collect();
        for (p, r) in fresh.into_iter().zip(scored) {
            match r {
                Ok(d) => {
                    self.counters.pf_calls += d.pf_calls;
                    self.counters.evaluated += 1;
                    self.counters.prob_started += d.started;
                    self.counters.prob_completed += d.completed;
                    self.cache.insert(p.clone(), d);
                }
                Err(e) => {
                    self.failure.get_or_insert(e);
                }
            }
        }

        // commit in order; the ceiling may drop within the phase
        plans
            .iter()
            .zip(costs)
            .map(|(p, cost)| {
                let gate = self.screen(p, cost);
                if let GateOutcome::Reject { gate: kind, .. } = gate {
                    self.counters.gate_rejections.count(kind);
                    return Evaluation {
                        v_aug: cost + gate.penalty(base),
                        feasible: false,
                    };
                }
                let Some(d) = self.cache.get(p) else {
                    return Evaluation {
                        v_aug: f64::MAX,
                        feasible: false,
                    };
                };
                if d.feasible {
                    self.gates.record_feasible(cost);
                }
                Evaluation {
                    v_aug: d.v_aug,
                    feasible: d.feasible,
                }
            })
            .collect()
    }
}

/// Stage 2: colony search seeded with the crisp plan, scored by the gates
/// and the point-estimate evaluation.
pub fn solve_probabilistic(
    case: &NetworkCase,
    spec: &StudySpec,
    crisp: &CrispResult,
    config: &MabcConfig,
    gates: &GateConfig,
    policy: EvalPolicy,
) -> Result<ProbOutcome, PlanError> {
    config.check()?;
    let inputs = StudyInputs::new(case, spec)?;
    let upper = case.upper_bounds();

    let runs = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let start = Instant::now();
            let cfg = MabcConfig {
                seed: config.trial_seed(t),
                ..*config
            };
            let mut trial = ProbTrial {
                case,
                spec,
                inputs: &inputs,
                policy,
                gates: GateState::new(*gates, crisp.plan.clone(), crisp.v_cr),
                cache: HashMap::new(),
                counters: Counters::default(),
                failure: None,
            };
            let out = mabc::run(&cfg, &upper, Some(&crisp.plan), |plans| trial.batch(plans))?;
            if let Some(e) = trial.failure {
                return Err(e);
            }
            let pick = out.best_feasible.as_ref().unwrap_or(&out.best);
            let detail = trial.cache.get(&pick.plan).cloned();
            let summary = summary(
                t,
                cfg.seed,
                case,
                &out,
                &trial.counters,
                start.elapsed().as_secs_f64(),
            );
            Ok((out, trial.counters, summary, detail))
        })
        .collect::<Result<Vec<_>, PlanError>>()?;

    let mut counters = Counters::default();
    let mut trials = Vec::new();
    let mut traces = Vec::new();
    let mut best: Option<(bool, f64, ExpansionPlan, Option<ProbDetail>)> = None;
    for (out, c, s, detail) in runs {
        counters.add(&c);
        trials.push(s);
        traces.push(out.trace.clone());
        let (feasible, src) = match &out.best_feasible {
            Some(f) => (true, f),
            None => (false, &out.best),
        };
        let wins = match &best {
            None => true,
            Some((bf, bv, bp, _)) => {
                (feasible && !bf) || (feasible == *bf && better((src.v_aug, &src.plan), (*bv, bp)))
            }
        };
        if wins {
            best = Some((feasible, src.v_aug, src.plan.clone(), detail));
        }
    }
    let (feasible, v_aug, plan, detail) = best.expect("at least one trial");
    Ok(ProbOutcome {
        cost: plan_cost(&plan, case)?,
        plan,
        v_aug,
        feasible,
        detail,
        counters,
        trials,
        traces,
    })
}

impl GateCounts {
    pub fn count(&mut self, kind: GateKind) {
        match kind {
            GateKind::Corridor => self.corridor += 1,
            GateKind::Line => self.line += 1,
            GateKind::Cost => self.cost += 1,
        }
    }

    pub fn add(&mut self, o: &GateCounts) {
        self.corridor += o.corridor;
        self.line += o.line;
        self.cost += o.cost;
    }

    pub fn total(&self) -> usize {
        self.corridor + self.line + self.cost
    }
}
