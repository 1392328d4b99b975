//! Limit checks, quadratic penalties, the augmented objective and fitness.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{ExpandedNetwork, GenKind, NetworkCase, StudyMode};
use crate::powerflow::{BranchFlowSet, Model, PfSolution};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstraintError {
    #[error("fitness is undefined for a zero augmented cost")]
    ZeroCost,
}

/// Weighting factors for the penalty terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyWeights {
    /// Applied once when the equality constraints cannot be met (no
    /// converged power flow or no feasible dispatch).
    pub gamma_eq: f64,
    pub gamma_voltage: f64,
    /// Flow terms are on per-unit loading `S / S_max`.
    pub gamma_flow: f64,
    /// Generator terms are on per-unit (system base) output.
    pub gamma_gen: f64,
}

impl Default for PenaltyWeights {
    fn default() -> Self {
        PenaltyWeights {
            gamma_eq: 1e8,
            gamma_voltage: 1e6,
            gamma_flow: 1e4,
            gamma_gen: 1e4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Quantity {
    Voltage { bus: usize },
    FlowFrom { corridor: usize },
    FlowTo { corridor: usize },
    GenP { generator: usize },
    GenQ { generator: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PenaltyTerm {
    pub quantity: Quantity,
    pub value: f64,
    pub min: f64,
    pub max: f64,
    pub gamma: f64,
    pub tau: f64,
}

/// Quadratic penalty on magnitudes:
/// `γ(|min| - |χ|)²` below, `γ(|χ| - |max|)²` above, zero inside.
pub fn magnitude_penalty(value: f64, min: f64, max: f64, gamma: f64) -> f64 {
    let (v, lo, hi) = (value.abs(), min.abs(), max.abs());
    if v < lo {
        gamma * (lo - v).powi(2)
    } else if v > hi {
        gamma * (v - hi).powi(2)
    } else {
        0.0
    }
}

/// Same quadratic shape for signed quantities such as reactive output,
/// whose lower limit is usually negative. `deadband` absorbs solver
/// tolerance at a pinned limit.
pub fn signed_penalty(value: f64, min: f64, max: f64, gamma: f64, deadband: f64) -> f64 {
    if value < min - deadband {
        gamma * (min - value).powi(2)
    } else if value > max + deadband {
        gamma * (value - max).powi(2)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationReport {
    pub contingency: usize,
    pub converged: bool,
    pub terms: Vec<PenaltyTerm>,
}

impl ViolationReport {
    /// Report for a state whose equality constraints could not be satisfied.
    pub fn failed(contingency: usize) -> Self {
        ViolationReport {
            contingency,
            converged: false,
            terms: Vec::new(),
        }
    }

    pub fn violations(&self) -> impl Iterator<Item = &PenaltyTerm> {
        self.terms.iter().filter(|t| t.tau > 0.0)
    }

    pub fn is_feasible(&self) -> bool {
        self.converged && self.violations().next().is_none()
    }
}

// Solver tolerance on per-unit generator output at a pinned limit.
const GEN_DEADBAND: f64 = 1e-5;

pub fn evaluate_limits(
    solution: &PfSolution,
    flows: &BranchFlowSet,
    case: &NetworkCase,
    net: &ExpandedNetwork,
    mode: StudyMode,
    weights: &PenaltyWeights,
    contingency: usize,
) -> ViolationReport {
    if !solution.converged {
        return ViolationReport::failed(contingency);
    }
    let mut terms = Vec::new();
    let base = case.base_mva;

    if solution.model == Model::Ac {
        for (i, bus) in case.buses.iter().enumerate() {
            let band = bus.band(mode);
            let v = solution.point.v[i];
            terms.push(PenaltyTerm {
                quantity: Quantity::Voltage { bus: i },
                value: v,
                min: band.min,
                max: band.max,
                gamma: weights.gamma_voltage,
                tau: magnitude_penalty(v, band.min, band.max, weights.gamma_voltage),
            });
        }
    }

    for (l, c) in case.corridors.iter().enumerate() {
        if !net.is_energized(l) {
            continue;
        }
        for (quantity, s) in [
            (Quantity::FlowFrom { corridor: l }, flows.s_from[l]),
            (Quantity::FlowTo { corridor: l }, flows.s_to[l]),
        ] {
            let loading = s / c.s_max;
            terms.push(PenaltyTerm {
                quantity,
                value: loading,
                min: 0.0,
                max: 1.0,
                gamma: weights.gamma_flow,
                tau: magnitude_penalty(loading, 0.0, 1.0, weights.gamma_flow),
            });
        }
    }

    for (g, gen) in case.generators.iter().enumerate() {
        if gen.kind != GenKind::Thermal {
            continue;
        }
        let p = solution.point.p_gen[g] / base;
        let (lo, hi) = (gen.p_min / base, gen.p_max / base);
        terms.push(PenaltyTerm {
            quantity: Quantity::GenP { generator: g },
            value: p,
            min: lo,
            max: hi,
            gamma: weights.gamma_gen,
            tau: signed_penalty(p, lo, hi, weights.gamma_gen, GEN_DEADBAND),
        });
        if solution.model == Model::Ac {
            let q = solution.point.q_gen[g] / base;
            let (lo, hi) = (gen.q_min / base, gen.q_max / base);
            terms.push(PenaltyTerm {
                quantity: Quantity::GenQ { generator: g },
                value: q,
                min: lo,
                max: hi,
                gamma: weights.gamma_gen,
                tau: signed_penalty(q, lo, hi, weights.gamma_gen, GEN_DEADBAND),
            });
        }
    }

    ViolationReport {
        contingency,
        converged: true,
        terms,
    }
}

/// `F_pen = γ_Eq · F_Eqpen + Σ τ_r`, with `F_Eqpen` 0 for a converged state
/// and 1 otherwise.
pub fn penalty(report: &ViolationReport, weights: &PenaltyWeights) -> f64 {
    let eq = if report.converged { 0.0 } else { 1.0 };
    weights.gamma_eq * eq + report.terms.iter().map(|t| t.tau).sum::<f64>()
}

pub fn augmented_cost(investment: f64, penalty: f64) -> f64 {
    debug_assert!(investment >= 0.0 && penalty >= 0.0);
    investment + penalty
}

pub fn fitness(v_aug: f64) -> Result<f64, ConstraintError> {
    if v_aug == 0.0 {
        return Err(ConstraintError::ZeroCost);
    }
    Ok(1.0 / v_aug)
}
