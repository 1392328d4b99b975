//! Garver 6-bus, DC model, circuit outage rates, 10 restarts.
//!
//!     cargo run --release --example garver_dc_for

use tnep::cli::{run_study, RunConfig};
use tnep::planner::{Security, StudySpec};
use tnep::powerflow::Model;

fn main() {
    let mut config = RunConfig::new("garver6", StudySpec::new(Model::Dc, Security::For));
    config.mabc.trials = 10;
    let outcome = run_study(&config).expect("study runs");
    let r = &outcome.report;
    println!("crisp cost {} {}", r.v_cr, r.cost_unit);
    println!("plan cost  {} {}", r.v_pr, r.cost_unit);
    for e in &r.plan {
        println!(
            "  {:>5}  +{}  {}",
            e.corridor, e.additions, e.cost_contribution
        );
    }
    println!(
        "new lines {}, feasible {}, pf calls {}",
        r.new_line_count, r.feasible, r.pf_calls
    );
}
