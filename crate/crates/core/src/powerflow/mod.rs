//! Deterministic power flow: participation-factor dispatch, Newton–Raphson
//! AC and linear DC solvers, and per-circuit branch flows.

mod ac;
mod dc;
mod flows;

pub use ac::solve_ac_pf;
pub use dc::solve_dc_pf;
pub use flows::{branch_flows, BranchFlowSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{ExpandedNetwork, GenKind, NetworkCase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Ac,
    Dc,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DispatchError {
    #[error("thermal units cannot cover {required:.3} MW (range {min:.3}..{max:.3} MW)")]
    Infeasible { required: f64, min: f64, max: f64 },
}

/// Realized demand per bus.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadState {
    /// MW per bus.
    pub p: Vec<f64>,
    /// MVAr per bus.
    pub q: Vec<f64>,
}

impl LoadState {
    pub fn nominal(case: &NetworkCase) -> Self {
        LoadState {
            p: case.buses.iter().map(|b| b.p_demand).collect(),
            q: case.buses.iter().map(|b| b.q_demand).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatingPoint {
    /// p.u. per bus
    pub v: Vec<f64>,
    /// radians per bus, slack at 0
    pub theta: Vec<f64>,
    /// MW per generator
    pub p_gen: Vec<f64>,
    /// MVAr per generator
    pub q_gen: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PfSolution {
    pub model: Model,
    pub point: OperatingPoint,
    pub converged: bool,
    pub iterations: usize,
    /// Largest per-unit power residual at exit.
    pub max_mismatch: f64,
    /// Final mismatch vector, kept only when [`PfOptions::debug_mismatch`] is on.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub enforce_q_limits: bool,
    pub debug_mismatch: bool,
}

impl Default for PfOptions {
    fn default() -> Self {
        PfOptions {
            tolerance: 1e-6,
            max_iterations: 30,
            enforce_q_limits: true,
            debug_mismatch: false,
        }
    }
}

/// Generator setpoints for realized loads and wind.
///
/// Thermal unit `g` moves from its base dispatch by `pf_g · Δ` where Δ is
/// the imbalance between realized demand (plus `losses`) and base thermal
/// output plus realized wind. Units that hit a limit are clipped and the
/// remainder is shared by the others in proportion to their factors.
/// `wind` is indexed by generator; entries for thermal units are ignored.
pub fn dispatch(
    case: &NetworkCase,
    load_p: &[f64],
    wind: &[f64],
    losses: f64,
) -> Result<Vec<f64>, DispatchError> {
    let mut p = vec![0.0; case.generators.len()];
    let mut wind_total = 0.0;
    for (g, gen) in case.generators.iter().enumerate() {
        if gen.kind == GenKind::Wind {
            p[g] = wind[g];
            wind_total += wind[g];
        }
    }
    let required = load_p.iter().sum::<f64>() + losses - wind_total;
    let thermal: Vec<usize> = case.thermal_units().map(|(g, _)| g).collect();
    let min: f64 = thermal.iter().map(|&g| case.generators[g].p_min).sum();
    let max: f64 = thermal.iter().map(|&g| case.generators[g].p_max).sum();
    let slack = 1e-9 * max.abs().max(1.0);
    if required > max + slack || required < min - slack {
        return Err(DispatchError::Infeasible { required, min, max });
    }

    let mut fixed = vec![false; case.generators.len()];
    loop {
        let free: Vec<usize> = thermal.iter().copied().filter(|&g| !fixed[g]).collect();
        let fixed_total: f64 = thermal.iter().filter(|&&g| fixed[g]).map(|&g| p[g]).sum();
        let pf_free: f64 = free.iter().map(|&g| case.generators[g].participation).sum();
        let base_free: f64 = free.iter().map(|&g| case.generators[g].p_base).sum();
        let delta = required - fixed_total - base_free;
        for &g in &free {
            let gen = &case.generators[g];
            let share = if pf_free > 0.0 {
                gen.participation / pf_free
            } else {
                1.0 / free.len() as f64
            };
            p[g] = gen.p_base + share * delta;
        }
        let mut clipped = false;
        for &g in &free {
            let gen = &case.generators[g];
            if p[g] > gen.p_max {
                p[g] = gen.p_max;
                fixed[g] = true;
                clipped = true;
            } else if p[g] < gen.p_min {
                p[g] = gen.p_min;
                fixed[g] = true;
                clipped = true;
            }
        }
        if !clipped || free.is_empty() {
            break;
        }
    }
    Ok(p)
}

/// Total output rating of the thermal units at the slack bus.
fn slack_rating(case: &NetworkCase) -> f64 {
    let Some(s) = case.slack() else { return 0.0 };
    case.thermal_units()
        .filter(|(_, g)| g.bus == s)
        .map(|(_, g)| g.p_max)
        .sum()
}

/// Dispatch followed by a power flow. For AC, when the slack picks up more
/// than 5% of its rating in losses the dispatch is repeated once with that
/// loss allowance. Returns the solution and the number of power flows run.
pub fn solve_dispatched(
    case: &NetworkCase,
    net: &ExpandedNetwork,
    loads: &LoadState,
    wind: &[f64],
    model: Model,
    opts: &PfOptions,
) -> Result<(PfSolution, usize), DispatchError> {
    let setpoints = dispatch(case, &loads.p, wind, 0.0)?;
    match model {
        Model::Dc => Ok((solve_dc_pf(case, net, &setpoints, &loads.p), 1)),
        Model::Ac => {
            let first = solve_ac_pf(case, net, &setpoints, loads, opts);
            if !first.converged {
                return Ok((first, 1));
            }
            let excess: f64 = first
                .point
                .p_gen
                .iter()
                .zip(&setpoints)
                .map(|(a, b)| a - b)
                .sum();
            if excess.abs() <= 0.05 * slack_rating(case) {
                return Ok((first, 1));
            }
            let setpoints = dispatch(case, &loads.p, wind, excess)?;
            Ok((solve_ac_pf(case, net, &setpoints, loads, opts), 2))
        }
    }
}

/// Splits the slack bus real-power residual across its thermal units.
pub(crate) fn assign_slack_power(
    case: &NetworkCase,
    p_gen: &mut [f64],
    slack: usize,
    residual_mw: f64,
) {
    let units: Vec<usize> = case
        .thermal_units()
        .filter(|(_, g)| g.bus == slack)
        .map(|(i, _)| i)
        .collect();
    if units.is_empty() {
        return;
    }
    let pf: f64 = units
        .iter()
        .map(|&g| case.generators[g].participation)
        .sum();
    for &g in &units {
        let share = if pf > 0.0 {
            case.generators[g].participation / pf
        } else {
            1.0 / units.len() as f64
        };
        p_gen[g] += share * residual_mw;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::*;
    use crate::network::{BusKind, NetworkCase};

    fn two_unit_case() -> NetworkCase {
        let mut case = three_bus();
        case.buses[1].kind = BusKind::Pv;
        case.generators = vec![thermal(0, 100.0, 50.0, 0.5), thermal(1, 200.0, 50.0, 0.5)];
        case
    }

    #[test]
    fn nominal_loads_keep_base_dispatch() {
        let case = two_unit_case();
        let p = dispatch(&case, &[0.0, 50.0, 50.0], &[0.0, 0.0], 0.0).unwrap();
        assert_eq!(p, vec![50.0, 50.0]);
    }

    #[test]
    fn increase_split_by_factors() {
        let case = two_unit_case();
        let p = dispatch(&case, &[0.0, 60.0, 50.0], &[0.0, 0.0], 0.0).unwrap();
        assert!((p[0] - 55.0).abs() < 1e-12 && (p[1] - 55.0).abs() < 1e-12);
    }

    #[test]
    fn clipped_unit_hands_excess_to_the_other() {
        let mut case = two_unit_case();
        case.generators[0].p_max = 60.0;
        // +40 MW: split gives A 70 > 60, so A = 60 and B covers 140 - 60 = 80
        let p = dispatch(&case, &[0.0, 90.0, 50.0], &[0.0, 0.0], 0.0).unwrap();
        assert_eq!(p[0], 60.0);
        assert!((p[1] - 80.0).abs() < 1e-12);
    }

    #[test]
    fn wind_offsets_thermal() {
        let mut case = two_unit_case();
        case.generators.push(crate::network::Generator {
            kind: GenKind::Wind,
            participation: 0.0,
            p_base: 0.0,
            ..thermal(2, 50.0, 0.0, 0.0)
        });
        let p = dispatch(&case, &[0.0, 50.0, 50.0], &[0.0, 0.0, 20.0], 0.0).unwrap();
        assert_eq!(p[2], 20.0);
        assert!((p[0] + p[1] - 80.0).abs() < 1e-12);
    }

    #[test]
    fn demand_beyond_capacity_is_infeasible() {
        let case = two_unit_case();
        assert!(matches!(
            dispatch(&case, &[0.0, 250.0, 100.0], &[0.0, 0.0], 0.0),
            Err(DispatchError::Infeasible { .. })
        ));
    }
}
