//! Independent Monte Carlo check of the Garver plans: the probabilistic
//! optimum against a cheaper plan. The point estimate only probes 2m+1
//! states, so joint tails it never visits can still show up here as a small
//! violation fraction.
//!
//!     cargo run --release --example mcs_verify -- [samples]

use tnep::datasets::{self, plans};
use tnep::network::ExpansionPlan;
use tnep::planner::{verify_plan, Security, StudySpec};
use tnep::powerflow::Model;

fn main() {
    let samples = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(2000);
    let case = datasets::garver6(Model::Dc);
    let spec = StudySpec::new(Model::Dc, Security::For);
    let crisp = ExpansionPlan::from_pairs(&case, &[(2, 6, 2), (3, 5, 1), (4, 6, 2)]).unwrap();
    let optimum = ExpansionPlan::from_pairs(&case, plans::GARVER6_DC_FOR).unwrap();
    for (label, plan) in [("cheaper plan", crisp), ("optimum", optimum)] {
        let v = verify_plan(&case, &spec, &plan, samples, 11).unwrap();
        println!(
            "{label:<13} {}: violation fraction {:.4} (se {:.4}) over {} samples",
            plan.describe(&case),
            v.violation_fraction,
            v.std_error,
            v.samples
        );
        for c in v
            .per_contingency
            .iter()
            .filter(|c| c.violation_fraction > 0.0)
        {
            println!("    outage {:?}: {:.4}", c.outaged, c.violation_fraction);
        }
    }
}
