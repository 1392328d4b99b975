//! Case validation: every bundled file, then a deliberately broken copy.
//!
//!     cargo run --release --example validate

use tnep::caseio::{parse_case, serialize_case};
use tnep::datasets;

fn main() {
    for (name, text) in datasets::ALL {
        let case = parse_case(text).unwrap();
        let diags = case.validate();
        println!("{name}: {} diagnostic(s)", diags.len());
        for d in diags {
            println!("  {d}");
        }
    }

    let mut broken = parse_case(datasets::GARVER6_DC).unwrap();
    broken.generators[0].participation = 0.5;
    let reparsed = parse_case(&serialize_case(&broken)).unwrap();
    println!("edited garver6-dc:");
    for d in reparsed.validate() {
        println!("  {d}");
    }

    match parse_case("[limits]\nname = x\n\n[buses]\nid kind p_demand q_demand\n1 slack ten 0\n") {
        Ok(_) => println!("unexpected: malformed text parsed"),
        Err(e) => println!("malformed text: {e}"),
    }
}
