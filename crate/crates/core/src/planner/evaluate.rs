//! Fitness of one candidate plan, crisp and probabilistic.

use serde::Serialize;

use super::inputs::{evaluate_state, StudyInputs, VariableKind};
use super::{PlanError, Security, StudySpec};
use crate::constraints::penalty;
use crate::network::{
    apply_plan, enumerate_contingencies, plan_cost, Contingency, ExpansionPlan, NetworkCase,
};
use crate::pem::{
    build_scheme, estimate_expectation, EvalPoint, PointLocation, PointOutcome, TruncationPolicy,
};

/// How much of the probabilistic evaluation may be cut short.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalPolicy {
    /// Gates, truncation at the first infeasible point and skipping of
    /// later contingencies.
    Strategies,
    /// Every point of every contingency, no gates.
    Rigorous,
}

pub(crate) fn contingencies(
    case: &NetworkCase,
    plan: &ExpansionPlan,
    security: Security,
) -> Vec<Contingency> {
    if security == Security::NMinus1 {
        enumerate_contingencies(case, plan)
    } else {
        vec![Contingency::BASE]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeterministicDetail {
    pub cost: f64,
    /// Sum of the penalties of all contingencies.
    pub penalty: f64,
    pub v_aug: f64,
    pub feasible: bool,
    pub pf_calls: usize,
    /// Contingencies that were not feasible, by index.
    pub failed: Vec<usize>,
}

/// Crisp fitness: every contingency of the study at mean inputs, with
/// `v_aug = cost + Σ F_pen`.
pub fn deterministic_evaluate(
    case: &NetworkCase,
    spec: &StudySpec,
    inputs: &StudyInputs,
    plan: &ExpansionPlan,
) -> Result<DeterministicDetail, PlanError> {
    let cost = plan_cost(plan, case)?;
    let real = inputs.mean_realization(case);
    let mut total = 0.0;
    let mut pf_calls = 0;
    let mut failed = Vec::new();
    for ctg in contingencies(case, plan, spec.security) {
        let net = apply_plan(case, plan, &ctg)?;
        let (report, calls) = evaluate_state(case, spec, &net, &real, ctg.k);
        pf_calls += calls;
        if !report.is_feasible() {
            failed.push(ctg.k);
        }
        total += penalty(&report, &spec.weights);
    }
    Ok(DeterministicDetail {
        cost,
        penalty: total,
        v_aug: cost + total,
        feasible: failed.is_empty(),
        pf_calls,
        failed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContingencyOutcome {
    pub k: usize,
    pub outaged: Option<usize>,
    /// Points evaluated.
    pub evaluations: usize,
    pub completed: bool,
    pub feasible: bool,
    /// PEM estimate of `E(F_pen)`; only meaningful when completed.
    pub expectation: f64,
    /// `Σ |w| F_pen` over the evaluated points.
    pub penalty_mass: f64,
    pub truncated_at: Option<PointLocation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbDetail {
    pub cost: f64,
    pub v_aug: f64,
    /// Sum over contingencies of the PEM estimate of `E(F_pen)`; `None`
    /// when any contingency was cut short or skipped.
    pub e_fpen: Option<f64>,
    /// Every evaluated point of every contingency was feasible and none
    /// was skipped.
    pub feasible: bool,
    pub pf_calls: usize,
    pub variables: Vec<VariableKind>,
    /// Contingencies in the study.
    pub total_contingencies: usize,
    pub started: usize,
    pub completed: usize,
    pub outcomes: Vec<ContingencyOutcome>,
    pub warnings: Vec<String>,
}

/// Probabilistic fitness of a plan that already passed the gates.
///
/// Contingencies run in order, base case first. Under
/// [`EvalPolicy::Strategies`] the first infeasible point ends the current
/// contingency and skips the rest, and the plan scores
/// `cost + base · (1 + unevaluated weight share + remaining contingency
/// share) + Σ|w|F` so that plans failing later rank better. A plan with
/// every point feasible scores its cost. Under [`EvalPolicy::Rigorous`]
/// everything is evaluated and the score is `cost + Σ|w|F`.
pub fn probabilistic_evaluate(
    case: &NetworkCase,
    spec: &StudySpec,
    inputs: &StudyInputs,
    plan: &ExpansionPlan,
    policy: EvalPolicy,
    penalty_base: f64,
) -> Result<ProbDetail, PlanError> {
    let cost = plan_cost(plan, case)?;
    let vars = inputs.variables(case, plan);
    let kinds: Vec<VariableKind> = vars.iter().map(|(k, _)| *k).collect();
    let scheme = if vars.is_empty() {
        None
    } else {
        let dists: Vec<_> = vars.iter().map(|(_, d)| *d).collect();
        Some(build_scheme(&dists)?)
    };
    let warnings = scheme.as_ref().map(|s| s.warnings()).unwrap_or_default();
    let truncation = match policy {
        EvalPolicy::Strategies => TruncationPolicy::FirstInfeasible,
        EvalPolicy::Rigorous => TruncationPolicy::Never,
    };

    let ctgs = contingencies(case, plan, spec.security);
    let total = ctgs.len();
    let mut pf_calls = 0;
    let mut outcomes = Vec::with_capacity(total);
    let mut mass_total = 0.0;

    for (idx, ctg) in ctgs.iter().enumerate() {
        let net = apply_plan(case, plan, ctg)?;
        let mut mass = 0.0;
        let mut eval = |point: &EvalPoint| {
            let real = inputs.realize(case, &kinds, &point.values);
            let (report, calls) = evaluate_state(case, spec, &net, &real, ctg.k);
            pf_calls += calls;
            let f = penalty(&report, &spec.weights);
            mass += point.weight.abs() * f;
            PointOutcome {
                value: f,
                feasible: report.is_feasible(),
            }
        };
        let outcome = match &scheme {
            Some(s) => {
                let r = estimate_expectation(s, &mut eval, truncation);
                ContingencyOutcome {
                    k: ctg.k,
                    outaged: ctg.outaged,
                    evaluations: r.evaluations(),
                    completed: r.completed(),
                    feasible: r.all_feasible(),
                    expectation: r.accumulated(),
                    penalty_mass: 0.0,
                    truncated_at: r.truncated_at(),
                }
            }
            None => {
                let o = eval(&EvalPoint {
                    location: PointLocation::Mean,
                    weight: 1.0,
                    values: Vec::new(),
                });
                let stop = !o.feasible && truncation == TruncationPolicy::FirstInfeasible;
                ContingencyOutcome {
                    k: ctg.k,
                    outaged: ctg.outaged,
                    evaluations: 1,
                    completed: !stop,
                    feasible: o.feasible,
                    expectation: o.value,
                    penalty_mass: 0.0,
                    truncated_at: stop.then_some(PointLocation::Mean),
                }
            }
        };
        let outcome = ContingencyOutcome {
            penalty_mass: mass,
            ..outcome
        };
        mass_total += mass;
        let stop = !outcome.completed;
        let unevaluated = if stop {
            let fraction = match &scheme {
                Some(s) => {
                    // share of weight mass not yet verified, the failing point included
                    let points = s.points();
                    let all: f64 = points.iter().map(|p| p.weight.abs()).sum();
                    let seen: f64 = points[..outcome.evaluations - 1]
                        .iter()
                        .map(|p| p.weight.abs())
                        .sum();
                    if all > 0.0 {
                        1.0 - seen / all
                    } else {
                        1.0
                    }
                }
                None => 1.0,
            };
            Some(fraction)
        } else {
            None
        };
        outcomes.push(outcome);
        if let Some(fraction) = unevaluated {
            let remaining = (total - idx - 1) as f64 / total as f64;
            return Ok(ProbDetail {
                cost,
                v_aug: cost + penalty_base * (1.0 + fraction + remaining) + mass_total,
                e_fpen: None,
                feasible: false,
                pf_calls,
                variables: kinds,
                total_contingencies: total,
                started: idx + 1,
                completed: idx,
                outcomes,
                warnings,
            });
        }
    }

    let feasible = outcomes.iter().all(|o| o.feasible);
    let e_fpen: f64 = outcomes.iter().map(|o| o.expectation).sum();
    Ok(ProbDetail {
        cost,
        v_aug: if feasible { cost } else { cost + mass_total },
        e_fpen: Some(if feasible { 0.0 } else { e_fpen }),
        feasible,
        pf_calls,
        variables: kinds,
        total_contingencies: total,
        started: total,
        completed: total,
        outcomes,
        warnings,
    })
}
