//! Independent Monte Carlo check of a plan's security under uncertainty.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::evaluate::contingencies;
use super::inputs::{evaluate_state, StudyInputs};
use super::{PlanError, StudySpec};
use crate::network::{apply_plan, ExpansionPlan, NetworkCase};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContingencyShare {
    pub k: usize,
    pub outaged: Option<String>,
    /// Fraction of samples violating some limit in this contingency.
    pub violation_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub samples: usize,
    /// Fraction of joint samples with a violation in any contingency.
    pub violation_fraction: f64,
    pub std_error: f64,
    pub per_contingency: Vec<ContingencyShare>,
}

impl Verdict {
    pub fn feasible(&self) -> bool {
        self.violation_fraction == 0.0
    }
}

/// Draws `samples` joint realizations of every random input of the study
/// and checks each contingency at each one. Without random inputs a single
/// state is solved and its outcome stands for every sample.
pub fn verify_plan(
    case: &NetworkCase,
    spec: &StudySpec,
    plan: &ExpansionPlan,
    samples: usize,
    seed: u64,
) -> Result<Verdict, PlanError> {
    let samples = samples.max(1);
    let inputs = StudyInputs::new(case, spec)?;
    let vars = inputs.variables(case, plan);
    let kinds: Vec<_> = vars.iter().map(|(k, _)| *k).collect();
    let ctgs = contingencies(case, plan, spec.security);
    let nets = ctgs
        .iter()
        .map(|c| apply_plan(case, plan, c))
        .collect::<Result<Vec<_>, _>>()?;

    let draws = if vars.is_empty() { 1 } else { samples };
    let rows: Vec<Vec<bool>> = (0..draws)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let values: Vec<f64> = vars
                .iter()
                .map(|(_, d)| d.quantile(rng.random::<f64>()))
                .collect();
            let real = inputs.realize(case, &kinds, &values);
            ctgs.iter()
                .zip(&nets)
                .map(|(c, net)| !evaluate_state(case, spec, net, &real, c.k).0.is_feasible())
                .collect()
        })
        .collect();

    let n = rows.len() as f64;
    let any = rows.iter().filter(|r| r.iter().any(|&v| v)).count() as f64 / n;
    let per_contingency = ctgs
        .iter()
        .enumerate()
        .map(|(j, c)| ContingencyShare {
            k: c.k,
            outaged: c.outaged.map(|l| case.corridor_label(l)),
            violation_fraction: rows.iter().filter(|r| r[j]).count() as f64 / n,
        })
        .collect();
    Ok(Verdict {
        samples,
        violation_fraction: any,
        std_error: if rows.len() > 1 {
            (any * (1.0 - any) / n).sqrt()
        } else {
            0.0
        },
        per_contingency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::*;
    use crate::network::UncertaintyData;
    use crate::planner::Security;
    use crate::powerflow::Model;

    fn case(s_max: f64) -> NetworkCase {
        let mut case = three_bus();
        for c in &mut case.corridors {
            c.s_max = s_max;
        }
        case.uncertainty = Some(UncertaintyData {
            wind: vec![],
            load_sigma_pct: vec![None, Some(10.0), Some(10.0)],
        });
        case
    }

    #[test]
    fn overloaded_at_mean_is_mostly_violated() {
        // corridor 1-2 carries both loads, about 100 MW, on a 95 MW rating
        let case = case(95.0);
        let mut spec = StudySpec::new(Model::Dc, Security::None);
        spec.samples = 2000;
        let v = verify_plan(&case, &spec, &ExpansionPlan::empty(3), 2000, 7).unwrap();
        assert!(v.violation_fraction >= 0.5, "{v:?}");
    }

    #[test]
    fn degenerate_spec_matches_deterministic() {
        let case = case(1000.0);
        let mut spec = StudySpec::new(Model::Dc, Security::NMinus1);
        spec.wind = false;
        spec.load = false;
        let ok = verify_plan(&case, &spec, &ExpansionPlan::new(vec![0, 0, 1]), 500, 1).unwrap();
        assert!(ok.feasible());
        // without 1-3 an outage islands a bus
        let bad = verify_plan(&case, &spec, &ExpansionPlan::empty(3), 500, 1).unwrap();
        assert_eq!(bad.violation_fraction, 1.0);
        assert_eq!(bad.per_contingency[0].violation_fraction, 0.0);
    }

    #[test]
    fn reproducible() {
        let case = case(95.0);
        let spec = StudySpec::new(Model::Dc, Security::None);
        let a = verify_plan(&case, &spec, &ExpansionPlan::empty(3), 300, 3).unwrap();
        let b = verify_plan(&case, &spec, &ExpansionPlan::empty(3), 300, 3).unwrap();
        assert_eq!(a, b);
    }
}
