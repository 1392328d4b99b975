//! Network data model: buses, generators, corridors, expansion plans and
//! the N-1 contingency list built on top of them.

use std::collections::VecDeque;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::uncertainty::WindModel;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("plan has {plan} entries but the case has {corridors} corridors")]
    DimensionMismatch { plan: usize, corridors: usize },
    #[error("corridor {corridor}: {additions} additions outside [0, {max}]")]
    OutOfBounds {
        corridor: usize,
        additions: u32,
        max: u32,
    },
    #[error("contingency on corridor {0} removes a circuit from an empty corridor")]
    EmptyCorridorOutage(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BusKind {
    Slack,
    Pv,
    Pq,
}

impl BusKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BusKind::Slack => "slack",
            BusKind::Pv => "pv",
            BusKind::Pq => "pq",
        }
    }
}

/// Per-unit voltage window used in one study mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VoltageBand {
    pub min: f64,
    pub max: f64,
}

impl VoltageBand {
    pub const fn new(min: f64, max: f64) -> Self {
        VoltageBand { min, max }
    }
}

/// Which voltage window applies to an operating state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StudyMode {
    /// No line outage present: the tight band (±5% in the bundled data).
    Normal,
    /// At least one line out: the relaxed band (±10%).
    Outage,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bus {
    pub id: u32,
    pub kind: BusKind,
    /// MW
    pub p_demand: f64,
    /// MVAr
    pub q_demand: f64,
    /// Fixed reactive support in MVAr, injected as a constant.
    pub q_reac: f64,
    /// Voltage setpoint for slack and PV buses, p.u.
    pub v_set: f64,
    pub normal: VoltageBand,
    pub outage: VoltageBand,
}

impl Bus {
    pub fn band(&self, mode: StudyMode) -> VoltageBand {
        match mode {
            StudyMode::Normal => self.normal,
            StudyMode::Outage => self.outage,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    Thermal,
    Wind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    /// Index into [`NetworkCase::buses`].
    pub bus: usize,
    pub kind: GenKind,
    pub p_min: f64,
    pub p_max: f64,
    pub q_min: f64,
    pub q_max: f64,
    /// Base dispatch in MW. For wind units this is the deterministic output
    /// used when no wind model is attached.
    pub p_base: f64,
    pub participation: f64,
}

/// A right-of-way between two buses holding identical parallel circuits.
#[derive(Debug, Clone, PartialEq)]
pub struct Corridor {
    pub id: u32,
    /// Index into [`NetworkCase::buses`].
    pub from: usize,
    pub to: usize,
    pub r: f64,
    pub x: f64,
    /// Total line-charging susceptance of one circuit.
    pub b: f64,
    /// MVA rating of one circuit.
    pub s_max: f64,
    /// Cost of one new circuit, in the case's cost unit.
    pub cost: f64,
    pub n0: u32,
    pub n_max: u32,
    pub for_rate: f64,
}

impl Corridor {
    pub fn series_admittance(&self) -> Complex64 {
        Complex64::new(1.0, 0.0) / Complex64::new(self.r, self.x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindSite {
    /// Index into [`NetworkCase::generators`].
    pub generator: usize,
    pub model: WindModel,
}

/// Probabilistic inputs attached to a case.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct UncertaintyData {
    pub wind: Vec<WindSite>,
    /// Load standard deviation in percent of the mean, per bus.
    pub load_sigma_pct: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkCase {
    pub name: String,
    pub base_mva: f64,
    pub cost_unit: String,
    pub buses: Vec<Bus>,
    pub generators: Vec<Generator>,
    pub corridors: Vec<Corridor>,
    pub uncertainty: Option<UncertaintyData>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

impl NetworkCase {
    pub fn bus_index(&self, id: u32) -> Option<usize> {
        self.buses.iter().position(|b| b.id == id)
    }

    pub fn slack(&self) -> Option<usize> {
        self.buses.iter().position(|b| b.kind == BusKind::Slack)
    }

    pub fn corridor_label(&self, l: usize) -> String {
        let c = &self.corridors[l];
        format!("{}-{}", self.buses[c.from].id, self.buses[c.to].id)
    }

    /// Index of the corridor joining `from` and `to` (bus ids, either order).
    pub fn find_corridor(&self, from: u32, to: u32) -> Option<usize> {
        let (a, b) = (self.bus_index(from)?, self.bus_index(to)?);
        self.corridors
            .iter()
            .position(|c| (c.from == a && c.to == b) || (c.from == b && c.to == a))
    }

    pub fn upper_bounds(&self) -> Vec<u32> {
        self.corridors.iter().map(|c| c.n_max).collect()
    }

    pub fn total_demand(&self) -> f64 {
        self.buses.iter().map(|b| b.p_demand).sum()
    }

    pub fn thermal_units(&self) -> impl Iterator<Item = (usize, &Generator)> {
        self.generators
            .iter()
            .enumerate()
            .filter(|(_, g)| g.kind == GenKind::Thermal)
    }

    /// Invariant and completeness checks. Parsing accepts anything that is
    /// well-formed; this is where semantic problems surface.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut err = |msg: String| {
            out.push(Diagnostic {
                severity: Severity::Error,
                message: msg,
            })
        };
        let slacks = self
            .buses
            .iter()
            .filter(|b| b.kind == BusKind::Slack)
            .count();
        if slacks != 1 {
            err(format!("expected exactly one slack bus, found {slacks}"));
        }
        if !(self.base_mva > 0.0) {
            err(format!("base_mva must be positive, got {}", self.base_mva));
        }
        for b in &self.buses {
            for (mode, band) in [("normal", b.normal), ("outage", b.outage)] {
                if !(band.min < band.max) {
                    err(format!(
                        "bus {}: {mode} voltage band [{}, {}] is empty",
                        b.id, band.min, band.max
                    ));
                }
            }
            if b.q_reac < 0.0 {
                err(format!("bus {}: q_reac {} < 0", b.id, b.q_reac));
            }
        }
        let mut pf_sum = 0.0;
        for (i, g) in self.generators.iter().enumerate() {
            let bus = self.buses[g.bus].id;
            if g.p_min > g.p_max {
                err(format!("generator {} at bus {bus}: p_min > p_max", i + 1));
            }
            if g.q_min > g.q_max {
                err(format!("generator {} at bus {bus}: q_min > q_max", i + 1));
            }
            if g.participation < 0.0 {
                err(format!(
                    "generator {} at bus {bus}: negative participation factor",
                    i + 1
                ));
            }
            match g.kind {
                GenKind::Thermal => pf_sum += g.participation,
                GenKind::Wind if g.participation != 0.0 => err(format!(
                    "wind generator {} at bus {bus} must have participation factor 0",
                    i + 1
                )),
                GenKind::Wind => {}
            }
        }
        if self.thermal_units().next().is_some() && (pf_sum - 1.0).abs() > 1e-6 {
            err(format!(
                "thermal participation factors sum to {pf_sum}, expected 1"
            ));
        }
        for c in &self.corridors {
            let label = format!("corridor {}", c.id);
            if !(c.x > 0.0) {
                err(format!("{label}: reactance must be positive"));
            }
            if !(c.s_max > 0.0) {
                err(format!("{label}: rating must be positive"));
            }
            if c.cost < 0.0 {
                err(format!("{label}: negative cost"));
            }
            if !(0.0..=1.0).contains(&c.for_rate) {
                err(format!(
                    "{label}: forced outage rate {} outside [0, 1]",
                    c.for_rate
                ));
            }
            if c.from == c.to {
                err(format!("{label}: both ends on the same bus"));
            }
        }
        if let Some(u) = &self.uncertainty {
            for (g, gen) in self.generators.iter().enumerate() {
                if gen.kind == GenKind::Wind && !u.wind.iter().any(|w| w.generator == g) {
                    out.push(Diagnostic {
                        severity: Severity::Warning,
                        message: format!(
                            "wind generator at bus {} has no wind model; it stays at p_base",
                            self.buses[gen.bus].id
                        ),
                    });
                }
            }
            for w in &u.wind {
                if let Err(e) = w.model.check() {
                    out.push(Diagnostic {
                        severity: Severity::Error,
                        message: format!("wind model: {e}"),
                    });
                }
            }
        }
        out
    }
}

/// Number of new circuits per corridor, indexed like [`NetworkCase::corridors`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExpansionPlan(Vec<u32>);

impl ExpansionPlan {
    pub fn new(additions: Vec<u32>) -> Self {
        ExpansionPlan(additions)
    }

    pub fn empty(corridors: usize) -> Self {
        ExpansionPlan(vec![0; corridors])
    }

    /// Builds a plan from `(from_bus, to_bus, additions)` triples.
    pub fn from_pairs(case: &NetworkCase, pairs: &[(u32, u32, u32)]) -> Option<Self> {
        let mut plan = vec![0; case.corridors.len()];
        for &(a, b, n) in pairs {
            plan[case.find_corridor(a, b)?] += n;
        }
        Some(ExpansionPlan(plan))
    }

    pub fn additions(&self) -> &[u32] {
        &self.0
    }

    pub fn additions_mut(&mut self) -> &mut [u32] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_lines(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Corridors receiving at least one new circuit.
    pub fn corridors_used(&self) -> usize {
        self.0.iter().filter(|&&n| n > 0).count()
    }

    pub fn check_bounds(&self, case: &NetworkCase) -> Result<(), NetworkError> {
        if self.0.len() != case.corridors.len() {
            return Err(NetworkError::DimensionMismatch {
                plan: self.0.len(),
                corridors: case.corridors.len(),
            });
        }
        for (l, (&n, c)) in self.0.iter().zip(&case.corridors).enumerate() {
            if n > c.n_max {
                return Err(NetworkError::OutOfBounds {
                    corridor: l,
                    additions: n,
                    max: c.n_max,
                });
            }
        }
        Ok(())
    }

    /// Human readable `2-6:3, 3-5:2` form, skipping zero entries.
    pub fn describe(&self, case: &NetworkCase) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(l, n)| format!("{}:{}", case.corridor_label(l), n))
            .collect();
        if parts.is_empty() {
            "(none)".to_string()
        } else {
            parts.join(", ")
        }
    }
}

impl From<Vec<u32>> for ExpansionPlan {
    fn from(v: Vec<u32>) -> Self {
        ExpansionPlan(v)
    }
}

/// Total investment `Σ C_l n_l`.
pub fn plan_cost(plan: &ExpansionPlan, case: &NetworkCase) -> Result<f64, NetworkError> {
    if plan.len() != case.corridors.len() {
        return Err(NetworkError::DimensionMismatch {
            plan: plan.len(),
            corridors: case.corridors.len(),
        });
    }
    Ok(plan
        .additions()
        .iter()
        .zip(&case.corridors)
        .map(|(&n, c)| c.cost * f64::from(n))
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Contingency {
    /// 0 for the base case.
    pub k: usize,
    pub outaged: Option<usize>,
    /// The outage splits the network; it stays in the list and is penalized.
    pub islands: bool,
}

impl Contingency {
    pub const BASE: Contingency = Contingency {
        k: 0,
        outaged: None,
        islands: false,
    };

    pub fn mode(&self) -> StudyMode {
        if self.outaged.is_some() {
            StudyMode::Outage
        } else {
            StudyMode::Normal
        }
    }
}

/// Circuit counts after applying a plan and (optionally) one outage.
///
/// `multiplicity` is the electrical weight of each corridor: normally equal
/// to the circuit count, but it can be fractional when a corridor's
/// availability is treated as a continuous random variable.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpandedNetwork {
    circuits: Vec<u32>,
    multiplicity: Vec<f64>,
    outaged: Option<usize>,
}

impl ExpandedNetwork {
    pub fn circuits(&self) -> &[u32] {
        &self.circuits
    }

    pub fn multiplicity(&self) -> &[f64] {
        &self.multiplicity
    }

    pub fn outaged(&self) -> Option<usize> {
        self.outaged
    }

    /// Scales one circuit of corridor `l` by availability `h` (1 = in
    /// service, 0 = out).
    pub fn set_availability(&mut self, l: usize, h: f64) {
        let n = f64::from(self.circuits[l]);
        if n > 0.0 {
            self.multiplicity[l] = n - 1.0 + h;
        }
    }

    /// Reactance of the corridor's parallel combination.
    pub fn equivalent_reactance(&self, case: &NetworkCase, l: usize) -> Option<f64> {
        let m = self.multiplicity[l];
        (m > 0.0).then(|| case.corridors[l].x / m)
    }

    pub fn is_energized(&self, l: usize) -> bool {
        self.multiplicity[l] > 1e-12
    }

    /// True iff every bus is reachable from the slack.
    pub fn is_connected(&self, case: &NetworkCase) -> bool {
        check_connectivity(case, self)
    }
}

pub fn apply_plan(
    case: &NetworkCase,
    plan: &ExpansionPlan,
    contingency: &Contingency,
) -> Result<ExpandedNetwork, NetworkError> {
    plan.check_bounds(case)?;
    let mut circuits: Vec<u32> = case
        .corridors
        .iter()
        .zip(plan.additions())
        .map(|(c, &n)| c.n0 + n)
        .collect();
    if let Some(l) = contingency.outaged {
        if circuits[l] == 0 {
            return Err(NetworkError::EmptyCorridorOutage(l));
        }
        circuits[l] -= 1;
    }
    let multiplicity = circuits.iter().map(|&n| f64::from(n)).collect();
    Ok(ExpandedNetwork {
        circuits,
        multiplicity,
        outaged: contingency.outaged,
    })
}

/// Base case first, then one outage per corridor that has a circuit to lose,
/// in corridor order.
pub fn enumerate_contingencies(case: &NetworkCase, plan: &ExpansionPlan) -> Vec<Contingency> {
    let mut out = vec![Contingency::BASE];
    for (l, (c, &n)) in case.corridors.iter().zip(plan.additions()).enumerate() {
        if c.n0 + n == 0 {
            continue;
        }
        let mut ctg = Contingency {
            k: out.len(),
            outaged: Some(l),
            islands: false,
        };
        ctg.islands = apply_plan(case, plan, &ctg)
            .map(|net| !net.is_connected(case))
            .unwrap_or(true);
        out.push(ctg);
    }
    out
}

pub fn check_connectivity(case: &NetworkCase, net: &ExpandedNetwork) -> bool {
    let n = case.buses.len();
    if n == 0 {
        return true;
    }
    let Some(slack) = case.slack() else {
        return false;
    };
    let mut adj = vec![Vec::new(); n];
    for (l, c) in case.corridors.iter().enumerate() {
        if net.is_energized(l) {
            adj[c.from].push(c.to);
            adj[c.to].push(c.from);
        }
    }
    let mut seen = vec![false; n];
    seen[slack] = true;
    let mut queue = VecDeque::from([slack]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn bus(id: u32, kind: BusKind, pd: f64) -> Bus {
        Bus {
            id,
            kind,
            p_demand: pd,
            q_demand: 0.0,
            q_reac: 0.0,
            v_set: 1.0,
            normal: VoltageBand::new(0.95, 1.05),
            outage: VoltageBand::new(0.90, 1.10),
        }
    }

    pub fn corridor(id: u32, from: usize, to: usize, x: f64, n0: u32) -> Corridor {
        Corridor {
            id,
            from,
            to,
            r: 0.0,
            x,
            b: 0.0,
            s_max: 100.0,
            cost: 10.0,
            n0,
            n_max: 3,
            for_rate: 0.01,
        }
    }

    pub fn thermal(bus: usize, p_max: f64, p_base: f64, pf: f64) -> Generator {
        Generator {
            bus,
            kind: GenKind::Thermal,
            p_min: 0.0,
            p_max,
            q_min: -100.0,
            q_max: 100.0,
            p_base,
            participation: pf,
        }
    }

    /// Three buses in a line 1-2-3 plus an unbuilt 1-3 corridor.
    pub fn three_bus() -> NetworkCase {
        NetworkCase {
            name: "three".into(),
            base_mva: 100.0,
            cost_unit: "1".into(),
            buses: vec![
                bus(1, BusKind::Slack, 0.0),
                bus(2, BusKind::Pq, 50.0),
                bus(3, BusKind::Pq, 50.0),
            ],
            generators: vec![thermal(0, 200.0, 100.0, 1.0)],
            corridors: vec![
                corridor(1, 0, 1, 0.1, 1),
                corridor(2, 1, 2, 0.1, 1),
                corridor(3, 0, 2, 0.2, 0),
            ],
            uncertainty: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cost_of_empty_plan_is_zero() {
        let case = three_bus();
        assert_eq!(plan_cost(&ExpansionPlan::empty(3), &case).unwrap(), 0.0);
    }

    #[test]
    fn cost_rejects_wrong_length() {
        let case = three_bus();
        assert!(matches!(
            plan_cost(&ExpansionPlan::new(vec![1, 2]), &case),
            Err(NetworkError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn addition_and_outage_counts() {
        let case = three_bus();
        let plan = ExpansionPlan::new(vec![2, 0, 0]);
        let base = apply_plan(&case, &plan, &Contingency::BASE).unwrap();
        assert_eq!(base.circuits()[0], 3);
        let out = Contingency {
            k: 1,
            outaged: Some(0),
            islands: false,
        };
        assert_eq!(apply_plan(&case, &plan, &out).unwrap().circuits()[0], 2);
    }

    #[test]
    fn outage_of_empty_corridor_is_an_error() {
        let case = three_bus();
        let out = Contingency {
            k: 1,
            outaged: Some(2),
            islands: false,
        };
        assert_eq!(
            apply_plan(&case, &ExpansionPlan::empty(3), &out),
            Err(NetworkError::EmptyCorridorOutage(2))
        );
    }

    #[test]
    fn parallel_reactance_halves() {
        let mut case = three_bus();
        case.corridors[0].x = 0.20;
        case.corridors[0].n0 = 2;
        let net = apply_plan(&case, &ExpansionPlan::empty(3), &Contingency::BASE).unwrap();
        // 1 / (1/0.2 + 1/0.2)
        let oracle = 1.0 / (1.0 / 0.20 + 1.0 / 0.20);
        assert!((net.equivalent_reactance(&case, 0).unwrap() - oracle).abs() < 1e-15);
    }

    #[test]
    fn contingency_list_skips_empty_corridors() {
        let case = three_bus();
        let list = enumerate_contingencies(&case, &ExpansionPlan::empty(3));
        assert_eq!(list.len(), 3);
        assert_eq!(list[0], Contingency::BASE);
        // the line topology 1-2-3 islands on either outage
        assert!(list[1].islands && list[2].islands);

        let with_ring = enumerate_contingencies(&case, &ExpansionPlan::new(vec![0, 0, 1]));
        assert_eq!(with_ring.len(), 4);
        assert!(with_ring.iter().all(|c| !c.islands));
        assert_eq!(with_ring[3].outaged, Some(2));
    }

    #[test]
    fn no_circuits_means_base_case_only() {
        let mut case = three_bus();
        for c in &mut case.corridors {
            c.n0 = 0;
        }
        assert_eq!(
            enumerate_contingencies(&case, &ExpansionPlan::empty(3)),
            vec![Contingency::BASE]
        );
    }

    #[test]
    fn single_new_circuit_outage_leaves_zero() {
        let mut case = three_bus();
        case.corridors[2].n0 = 0;
        let plan = ExpansionPlan::new(vec![0, 0, 1]);
        let list = enumerate_contingencies(&case, &plan);
        let hits: Vec<_> = list.iter().filter(|c| c.outaged == Some(2)).collect();
        assert_eq!(hits.len(), 1);
        let net = apply_plan(&case, &plan, hits[0]).unwrap();
        assert_eq!(net.circuits()[2], 0);
    }

    #[test]
    fn connectivity_cases() {
        let case = three_bus();
        let net = apply_plan(&case, &ExpansionPlan::empty(3), &Contingency::BASE).unwrap();
        assert!(net.is_connected(&case));

        let mut lonely = three_bus();
        lonely.corridors[1].n0 = 0;
        let net = apply_plan(&lonely, &ExpansionPlan::empty(3), &Contingency::BASE).unwrap();
        assert!(!net.is_connected(&lonely));

        let single = NetworkCase {
            buses: vec![bus(1, BusKind::Slack, 0.0)],
            generators: vec![],
            corridors: vec![],
            ..three_bus()
        };
        let net = apply_plan(&single, &ExpansionPlan::empty(0), &Contingency::BASE).unwrap();
        assert!(net.is_connected(&single));
    }

    #[test]
    fn fixture_validates() {
        assert!(three_bus().validate().is_empty());
    }

    #[test]
    fn validation_flags_bad_participation() {
        let mut case = three_bus();
        case.generators[0].participation = 0.7;
        let diags = case.validate();
        assert!(diags.iter().any(|d| d.message.contains("participation")));
    }

    proptest! {
        #[test]
        fn cost_is_linear(a in proptest::collection::vec(0u32..=1, 3), b in proptest::collection::vec(0u32..=1, 3)) {
            let case = three_bus();
            let sum: Vec<u32> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let ca = plan_cost(&ExpansionPlan::new(a), &case).unwrap();
            let cb = plan_cost(&ExpansionPlan::new(b), &case).unwrap();
            let cs = plan_cost(&ExpansionPlan::new(sum), &case).unwrap();
            prop_assert!((ca + cb - cs).abs() < 1e-9);
        }

        #[test]
        fn outage_removes_exactly_one(adds in proptest::collection::vec(0u32..=3, 3)) {
            let case = three_bus();
            let plan = ExpansionPlan::new(adds);
            let base = apply_plan(&case, &plan, &Contingency::BASE).unwrap();
            for ctg in enumerate_contingencies(&case, &plan).iter().skip(1) {
                let net = apply_plan(&case, &plan, ctg).unwrap();
                let l = ctg.outaged.unwrap();
                prop_assert_eq!(net.circuits()[l] + 1, base.circuits()[l]);
            }
        }
    }
}
