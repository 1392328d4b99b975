//! IEEE 24-bus, AC model: the three published plans scored under each
//! study without truncation.
//!
//!     cargo run --release --example ieee24_ac_plans

use tnep::datasets::{self, plans};
use tnep::network::ExpansionPlan;
use tnep::planner::{probabilistic_evaluate, EvalPolicy, Security, StudyInputs, StudySpec};
use tnep::powerflow::Model;

fn main() {
    let case = datasets::ieee24(Model::Ac);
    let mut crisp = StudySpec::new(Model::Ac, Security::None);
    crisp.wind = false;
    crisp.load = false;
    let with_for = StudySpec::new(Model::Ac, Security::For);
    let n1 = StudySpec::new(Model::Ac, Security::NMinus1);

    let rows = [
        ("crisp plan, mean conditions", plans::IEEE24_AC_CRISP, crisp),
        ("FOR plan, FOR study", plans::IEEE24_AC_FOR, with_for),
        ("N-1 plan, N-1 study", plans::IEEE24_AC_N1, n1),
        ("crisp plan, FOR study", plans::IEEE24_AC_CRISP, with_for),
        ("crisp plan, N-1 study", plans::IEEE24_AC_CRISP, n1),
    ];
    for (label, pairs, spec) in rows {
        let plan = ExpansionPlan::from_pairs(&case, pairs).expect("corridors exist");
        let inputs = StudyInputs::new(&case, &spec).expect("uncertainty data");
        let d = probabilistic_evaluate(&case, &spec, &inputs, &plan, EvalPolicy::Rigorous, 1e7)
            .expect("evaluates");
        println!(
            "{label:<30} cost {:>5} {}  E(F_pen) {:>14.3}  feasible {}",
            d.cost,
            case.cost_unit,
            d.e_fpen.unwrap_or(f64::NAN),
            d.feasible
        );
    }
}
