//! IEEE 24-bus, DC model, circuit outage rates. Scores the published plan
//! directly, then runs a short search.
//!
//!     cargo run --release --example ieee24_dc -- [trials]

use tnep::datasets::{self, plans};
use tnep::mabc::MabcConfig;
use tnep::network::ExpansionPlan;
use tnep::planner::{
    probabilistic_evaluate, solve_crisp, solve_probabilistic, EvalPolicy, GateConfig, Security,
    StudyInputs, StudySpec,
};
use tnep::powerflow::Model;

fn main() {
    let trials = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(2);
    let case = datasets::ieee24(Model::Dc);
    let spec = StudySpec::new(Model::Dc, Security::For);
    let inputs = StudyInputs::new(&case, &spec).expect("uncertainty data");

    let reference =
        ExpansionPlan::from_pairs(&case, plans::IEEE24_DC_FOR).expect("corridors exist");
    let d = probabilistic_evaluate(&case, &spec, &inputs, &reference, EvalPolicy::Rigorous, 1e7)
        .expect("evaluates");
    println!(
        "reference plan: {} lines, cost {}, E(F_pen) {:?}, feasible {}",
        reference.total_lines(),
        d.cost,
        d.e_fpen,
        d.feasible
    );

    let config = MabcConfig {
        trials,
        ..MabcConfig::default()
    };
    let crisp = solve_crisp(&case, &spec, &config).expect("crisp stage");
    println!(
        "crisp: {} lines at {}",
        crisp.plan.total_lines(),
        crisp.v_cr
    );
    let prob = solve_probabilistic(
        &case,
        &spec,
        &crisp,
        &config,
        &GateConfig::default(),
        EvalPolicy::Strategies,
    )
    .expect("probabilistic stage");
    println!(
        "search: {} lines at {} (feasible {})",
        prob.plan.total_lines(),
        prob.cost,
        prob.feasible
    );
    println!("  {}", prob.plan.describe(&case));
}
