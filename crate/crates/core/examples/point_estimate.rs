//! The 2m+1 point estimate scheme on a smooth function of five inputs,
//! compared with plain Monte Carlo.
//!
//!     cargo run --release --example point_estimate

use tnep::pem::{
    build_scheme, estimate_expectation, mcs_expectation, PointOutcome, TruncationPolicy,
};
use tnep::uncertainty::{discretize_normal, wind_power_distribution, LoadModel, WindModel};

fn f(x: &[f64]) -> f64 {
    // a load-minus-wind residual with a mild quadratic loss term
    let net = x[0] + x[1] + x[2] - x[3] - x[4];
    net + 1e-4 * net * net
}

fn main() {
    let wind = WindModel {
        alpha: 9.0,
        beta: 2.0,
        u_ci: 3.0,
        u_rt: 12.0,
        u_co: 25.0,
        p_rt: 120.0,
    };
    let load = |mu| {
        discretize_normal(
            &LoadModel {
                mu,
                sigma_pct: 10.0,
            },
            10_000,
        )
        .unwrap()
    };
    let dists = vec![
        load(240.0),
        load(160.0),
        load(240.0),
        wind_power_distribution(&wind, 10_000).unwrap(),
        wind_power_distribution(&WindModel { p_rt: 80.0, ..wind }, 10_000).unwrap(),
    ];

    let scheme = build_scheme(&dists).unwrap();
    println!(
        "{} variables, {} evaluations, p0 = {:.4}",
        scheme.m(),
        scheme.evaluation_count(),
        scheme.p0()
    );
    for (i, c) in scheme.concentrations().iter().enumerate() {
        println!(
            "  x{i}: xi = {:+.4} {:+.4}  p = {:.4} {:.4}",
            c.xi[0], c.xi[1], c.p[0], c.p[1]
        );
    }
    let pem = estimate_expectation(
        &scheme,
        |p| PointOutcome::feasible(f(&p.values)),
        TruncationPolicy::Never,
    );
    let mcs = mcs_expectation(&dists, f, 100_000, 7).unwrap();
    println!("PEM  E[f] = {:.4}", pem.expectation().unwrap());
    println!("MCS  E[f] = {:.4} +/- {:.4}", mcs.mean, mcs.std_error);
}
