//! Power flow count of the gated search against the ungated one on the
//! same seed. The ungated run is slow; keep the trial count small.
//!
//!     cargo run --release --example gates_vs_rigorous -- [trials]

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
        .unwrap_or(2);
    let case = datasets::garver6(Model::Ac);
    let spec = StudySpec::new(Model::Ac, Security::NMinus1);
    let config = MabcConfig {
        trials,
        ..MabcConfig::default()
    };
    let crisp = solve_crisp(&case, &spec, &config).expect("crisp stage");

    let mut calls = Vec::new();
    for policy in [EvalPolicy::Strategies, EvalPolicy::Rigorous] {
        let t = std::time::Instant::now();
        let out = solve_probabilistic(
            &case,
            &spec,
            &crisp,
            &config,
            &GateConfig::default(),
            policy,
        )
        .expect("probabilistic stage");
        println!(
            "{policy:?}: {} at {}, {} pf calls, {:.1} s",
            out.plan.describe(&case),
            out.cost,
            out.counters.pf_calls,
            t.elapsed().as_secs_f64()
        );
        calls.push(out.counters.pf_calls as f64);
    }
    println!("gated / ungated = {:.2}%", 100.0 * calls[0] / calls[1]);
}
