use serde::Serialize;

use super::{PlanError, Security, StudySpec};
use crate::constraints::{evaluate_limits, ViolationReport};
use crate::network::{ExpandedNetwork, ExpansionPlan, GenKind, NetworkCase, StudyMode};
use crate::powerflow::{branch_flows, solve_dispatched, LoadState};
use crate::uncertainty::{
    bernoulli_outage, discretize_normal, wind_power_distribution, DiscreteDistribution, LoadModel,
    OutageModel,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VariableKind {
    Load { bus: usize },
    Wind { generator: usize },
    Availability { corridor: usize },
}

/// Discretized random inputs of a study, built once and shared by every
/// candidate plan.
#[derive(Debug, Clone)]
pub struct StudyInputs {
    loads: Vec<(usize, DiscreteDistribution)>,
    winds: Vec<(usize, DiscreteDistribution)>,
    /// Per corridor; `None` when its availability is not random.
    availability: Vec<Option<DiscreteDistribution>>,
    /// Expected output per generator for wind units, zero for thermal.
    mean_wind: Vec<f64>,
}

/// One joint outcome of the random inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub loads: LoadState,
    /// MW per generator; thermal entries are ignored.
    pub wind: Vec<f64>,
    /// Availability of one circuit per listed corridor.
    pub availability: Vec<(usize, f64)>,
}

impl Realization {
    /// A realization with a circuit at an outage location counts as an
    /// outage state for voltage limits.
    pub fn has_outage(&self) -> bool {
        self.availability.iter().any(|&(_, h)| h < 0.5)
    }
}

impl StudyInputs {
    pub fn new(case: &NetworkCase, spec: &StudySpec) -> Result<Self, PlanError> {
        let unc = case.uncertainty.as_ref();
        if spec.is_probabilistic() && (spec.wind || spec.load) && unc.is_none() {
            return Err(PlanError::MissingUncertainty);
        }
        let mut mean_wind: Vec<f64> = case
            .generators
            .iter()
            .map(|g| {
                if g.kind == GenKind::Wind {
                    g.p_base
                } else {
                    0.0
                }
            })
            .collect();
        let mut winds = Vec::new();
        if let Some(u) = unc {
            for site in &u.wind {
                let dist = wind_power_distribution(&site.model, spec.samples)?;
                mean_wind[site.generator] = dist.mean();
                if spec.wind && !dist.is_deterministic() {
                    winds.push((site.generator, dist));
                }
            }
        }
        let mut loads = Vec::new();
        if spec.load {
            if let Some(u) = unc {
                for (i, (bus, sigma)) in case.buses.iter().zip(&u.load_sigma_pct).enumerate() {
                    let Some(sigma) = *sigma else { continue };
                    if bus.p_demand <= 0.0 || sigma <= 0.0 {
                        continue;
                    }
                    let dist = discretize_normal(
                        &LoadModel {
                            mu: bus.p_demand,
                            sigma_pct: sigma,
                        },
                        spec.samples,
                    )?;
                    if !dist.is_deterministic() {
                        loads.push((i, dist));
                    }
                }
            }
        }
        let availability = case
            .corridors
            .iter()
            .map(|c| {
                if spec.security != Security::For {
                    return Ok(None);
                }
                let d = bernoulli_outage(&OutageModel { rho: c.for_rate })?;
                Ok((!d.is_deterministic()).then_some(d))
            })
            .collect::<Result<Vec<_>, PlanError>>()?;
        Ok(StudyInputs {
            loads,
            winds,
            availability,
            mean_wind,
        })
    }

    /// Random variables for `plan`, in scheme order: loads, wind, then the
    /// availability of every populated corridor.
    pub fn variables(
        &self,
        case: &NetworkCase,
        plan: &ExpansionPlan,
    ) -> Vec<(VariableKind, &DiscreteDistribution)> {
        let mut out = Vec::new();
        for (bus, d) in &self.loads {
            out.push((VariableKind::Load { bus: *bus }, d));
        }
        for (g, d) in &self.winds {
            out.push((VariableKind::Wind { generator: *g }, d));
        }
        for (l, (c, &n)) in case.corridors.iter().zip(plan.additions()).enumerate() {
            if let Some(d) = &self.availability[l] {
                if c.n0 + n > 0 {
                    out.push((VariableKind::Availability { corridor: l }, d));
                }
            }
        }
        out
    }

    pub fn mean_wind(&self) -> &[f64] {
        &self.mean_wind
    }

    /// Loads and wind at their means, every circuit in service.
    pub fn mean_realization(&self, case: &NetworkCase) -> Realization {
        Realization {
            loads: LoadState::nominal(case),
            wind: self.mean_wind.clone(),
            availability: Vec::new(),
        }
    }

    /// Inputs at `values` for the listed variables, everything else at its
    /// mean. Reactive load follows the real load in proportion.
    pub fn realize(
        &self,
        case: &NetworkCase,
        kinds: &[VariableKind],
        values: &[f64],
    ) -> Realization {
        let mut r = self.mean_realization(case);
        for (kind, &v) in kinds.iter().zip(values) {
            match *kind {
                VariableKind::Load { bus } => {
                    let mu = case.buses[bus].p_demand;
                    r.loads.p[bus] = v;
                    r.loads.q[bus] = case.buses[bus].q_demand * v / mu;
                }
                VariableKind::Wind { generator } => r.wind[generator] = v,
                VariableKind::Availability { corridor } => r.availability.push((corridor, v)),
            }
        }
        r
    }
}

/// Dispatch, power flow and limit check for one operating state.
///
/// `net` already carries the plan and contingency; the realization's
/// availabilities are applied on top. Returns the report and the number of
/// power flows solved.
pub fn evaluate_state(
    case: &NetworkCase,
    spec: &StudySpec,
    net: &ExpandedNetwork,
    real: &Realization,
    contingency: usize,
) -> (ViolationReport, usize) {
    let mut net = net.clone();
    for &(l, h) in &real.availability {
        net.set_availability(l, h);
    }
    if !net.is_connected(case) {
        return (ViolationReport::failed(contingency), 0);
    }
    let mode = if net.outaged().is_some() || real.has_outage() {
        StudyMode::Outage
    } else {
        StudyMode::Normal
    };
    let Ok((sol, calls)) =
        solve_dispatched(case, &net, &real.loads, &real.wind, spec.model, &spec.pf)
    else {
        return (ViolationReport::failed(contingency), 0);
    };
    let flows = branch_flows(&sol, case, &net);
    let report = evaluate_limits(&sol, &flows, case, &net, mode, &spec.weights, contingency);
    (report, calls)
}
