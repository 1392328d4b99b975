//! One AC power flow on Garver with a plan applied, then the same state
//! under the DC model.
//!
//!     cargo run --release --example power_flow

use tnep::datasets::{self, plans};
use tnep::network::{apply_plan, Contingency, ExpansionPlan};
use tnep::powerflow::{branch_flows, solve_dispatched, LoadState, Model, PfOptions};

fn main() {
    let case = datasets::garver6(Model::Ac);
    let plan = ExpansionPlan::from_pairs(&case, plans::GARVER6_AC_N1).unwrap();
    let net = apply_plan(&case, &plan, &Contingency::BASE).unwrap();
    let loads = LoadState::nominal(&case);
    // wind at its rated output, indexed by generator
    let wind: Vec<f64> = case.generators.iter().map(|g| g.p_max).collect();

    for model in [Model::Ac, Model::Dc] {
        let (sol, runs) =
            solve_dispatched(&case, &net, &loads, &wind, model, &PfOptions::default()).unwrap();
        println!(
            "{model}: converged {} in {} iterations ({runs} flow(s)), max mismatch {:.2e}",
            sol.converged, sol.iterations, sol.max_mismatch
        );
        for (b, bus) in case.buses.iter().enumerate() {
            println!(
                "  bus {}  V {:.4}  angle {:+.3} deg",
                bus.id,
                sol.point.v[b],
                sol.point.theta[b].to_degrees()
            );
        }
        let flows = branch_flows(&sol, &case, &net);
        for (l, c) in case.corridors.iter().enumerate() {
            if net.is_energized(l) {
                let n = net.multiplicity()[l];
                println!(
                    "  {:>4}  x{}  {:7.1} MW per circuit, limit {}",
                    case.corridor_label(l),
                    n,
                    flows.p_from[l],
                    c.s_max
                );
            }
        }
        println!("  losses {:.2} MW", flows.total_losses(&net));
    }
}
