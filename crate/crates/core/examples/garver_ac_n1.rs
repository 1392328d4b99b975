//! Garver 6-bus, AC model, N-1 security: crisp stage, then the
//! probabilistic stage seeded with the crisp plan.
//!
//!     cargo run --release --example garver_ac_n1 -- [trials]

use tnep::datasets;
use tnep::mabc::MabcConfig;
use tnep::planner::{
    solve_crisp, solve_probabilistic, EvalPolicy, GateConfig, Security, StudySpec,
};
use tnep::powerflow::Model;

fn main() {
    let trials = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(20);
    let case = datasets::garver6(Model::Ac);
    let spec = StudySpec::new(Model::Ac, Security::NMinus1);
    let config = MabcConfig {
        trials,
        ..MabcConfig::default()
    };

    let crisp = solve_crisp(&case, &spec, &config).expect("crisp stage");
    println!("crisp: {} at {}", crisp.plan.describe(&case), crisp.v_cr);

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
        "probabilistic: {} at {} (feasible {})",
        prob.plan.describe(&case),
        prob.cost,
        prob.feasible
    );
    let g = prob.counters.gate_rejections;
    println!(
        "pf calls {}, gate rejections corridor/line/cost {}/{}/{}",
        prob.counters.pf_calls, g.corridor, g.line, g.cost
    );
}
