//! Weibull wind speed, the turbine curve, and the moments the point
//! estimate scheme sees.
//!
//!     cargo run --release --example wind_model

use tnep::uncertainty::{discretize_weibull, wind_power, wind_power_distribution, WindModel};

fn main() {
    let (alpha, beta) = WindModel::weibull_from_mean_sd(8.0, 4.2).unwrap();
    println!("mean 8 m/s, sd 4.2 m/s -> scale {alpha:.3}, shape {beta:.3}");

    let model = WindModel {
        alpha: 9.0,
        beta: 2.0,
        u_ci: 3.0,
        u_rt: 12.0,
        u_co: 25.0,
        p_rt: 120.0,
    };
    let speed = discretize_weibull(&model, 10_000).unwrap();
    println!(
        "speed: mean {:.3} m/s (closed form {:.3})",
        speed.mean(),
        model.mean_speed()
    );
    for u in [2.0, 3.0, 6.0, 9.0, 12.0, 20.0, 26.0] {
        println!("  {u:>4} m/s -> {:6.1} MW", wind_power(u, &model));
    }
    let power = wind_power_distribution(&model, 10_000).unwrap();
    println!(
        "output: mean {:.2} MW, sd {:.2}, skewness {:.3}, kurtosis {:.3}",
        power.mean(),
        power.std_dev(),
        power.skewness(),
        power.kurtosis()
    );
}
