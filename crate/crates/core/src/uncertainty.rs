//! Random input models and their discretization.
//!
//! Every continuous input (Weibull wind speed, normal bus load) is turned
//! into an equiprobable discrete distribution by evaluating the inverse CDF
//! at the midpoints `(i - 0.5) / n`. The point-estimate machinery only needs
//! the first four moments, and this construction makes them deterministic.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::gamma::gamma;
use thiserror::Error;

/// Default discretization size.
pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UncertaintyError {
    #[error("probabilities must be non-negative and sum to 1 (sum = {0})")]
    BadProbabilities(f64),
    #[error("support and probability lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("empty distribution")]
    Empty,
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("invalid Weibull parameters: {0}")]
    InvalidWeibull(String),
    #[error("invalid load model: {0}")]
    InvalidLoad(String),
    #[error("forced outage rate {0} outside [0, 1]")]
    InvalidOutageRate(f64),
    #[error("standard deviation is zero; standardized moments are undefined")]
    ZeroVariance,
}

/// Finite support with probabilities and cached moments.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    support: Vec<f64>,
    probs: Vec<f64>,
    mean: f64,
    std_dev: f64,
    skewness: f64,
    kurtosis: f64,
}

impl DiscreteDistribution {
    pub fn new(support: Vec<f64>, probs: Vec<f64>) -> Result<Self, UncertaintyError> {
        if support.len() != probs.len() {
            return Err(UncertaintyError::LengthMismatch(support.len(), probs.len()));
        }
        if support.is_empty() {
            return Err(UncertaintyError::Empty);
        }
        let total: f64 = probs.iter().sum();
        if probs.iter().any(|&p| !(p >= 0.0)) || (total - 1.0).abs() > 1e-12 {
            return Err(UncertaintyError::BadProbabilities(total));
        }
        Ok(Self::with_moments(support, probs))
    }

    pub fn point(value: f64) -> Self {
        Self::with_moments(vec![value], vec![1.0])
    }

    pub fn equiprobable(support: Vec<f64>) -> Result<Self, UncertaintyError> {
        if support.is_empty() {
            return Err(UncertaintyError::Empty);
        }
        let p = 1.0 / support.len() as f64;
        let probs = vec![p; support.len()];
        Ok(Self::with_moments(support, probs))
    }

    fn with_moments(support: Vec<f64>, probs: Vec<f64>) -> Self {
        let mean: f64 = support.iter().zip(&probs).map(|(x, p)| x * p).sum();
        let central = |t: i32| -> f64 {
            support
                .iter()
                .zip(&probs)
                .map(|(x, p)| (x - mean).powi(t) * p)
                .sum()
        };
        let var = central(2).max(0.0);
        let mut std_dev = var.sqrt();
        if std_dev <= 1e-12 * mean.abs().max(1.0) {
            std_dev = 0.0;
        }
        let (skewness, kurtosis) = if std_dev > 0.0 {
            (central(3) / std_dev.powi(3), central(4) / std_dev.powi(4))
        } else {
            (f64::NAN, f64::NAN)
        };
        DiscreteDistribution {
            support,
            probs,
            mean,
            std_dev,
            skewness,
            kurtosis,
        }
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn std_dev(&self) -> f64 {
        self.std_dev
    }

    pub fn variance(&self) -> f64 {
        self.std_dev * self.std_dev
    }

    /// Coefficient of variation as used in the point-estimate literature:
    /// mean over standard deviation.
    pub fn nu(&self) -> f64 {
        self.mean / self.std_dev
    }

    /// λ3; NaN for a deterministic distribution.
    pub fn skewness(&self) -> f64 {
        self.skewness
    }

    /// λ4; NaN for a deterministic distribution.
    pub fn kurtosis(&self) -> f64 {
        self.kurtosis
    }

    /// Zero spread: the variable is pinned and cannot enter a PEM scheme.
    pub fn is_deterministic(&self) -> bool {
        self.std_dev == 0.0
    }

    pub fn min(&self) -> f64 {
        self.support.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.support
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Maps the support pointwise; probabilities are kept, moments recomputed.
    pub fn transform(&self, f: impl Fn(f64) -> f64) -> DiscreteDistribution {
        let support = self.support.iter().map(|&x| f(x)).collect();
        Self::with_moments(support, self.probs.clone())
    }

    /// Inverse-CDF sample for a uniform draw `u` in [0, 1).
    pub fn quantile(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        for (x, p) in self.support.iter().zip(&self.probs) {
            acc += p;
            if u < acc {
                return *x;
            }
        }
        *self.support.last().expect("non-empty support")
    }
}

/// `t`-th central moment `M'_t` and its standardized ratio `λ_t = M'_t / σ^t`.
pub fn central_moments(
    dist: &DiscreteDistribution,
    t: i32,
) -> Result<(f64, f64), UncertaintyError> {
    let m: f64 = dist
        .support
        .iter()
        .zip(&dist.probs)
        .map(|(x, p)| (x - dist.mean).powi(t) * p)
        .sum();
    if dist.std_dev == 0.0 {
        return Err(UncertaintyError::ZeroVariance);
    }
    Ok((m, m / dist.std_dev.powi(t)))
}

/// Wind regime at one site and the turbine curve that converts it to MW.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindModel {
    /// Weibull scale, m/s.
    pub alpha: f64,
    /// Weibull shape.
    pub beta: f64,
    pub u_ci: f64,
    pub u_rt: f64,
    pub u_co: f64,
    /// Rated output, MW.
    pub p_rt: f64,
}

impl WindModel {
    pub fn check(&self) -> Result<(), UncertaintyError> {
        if !(self.alpha > 0.0 && self.beta > 0.0) {
            return Err(UncertaintyError::InvalidWeibull(format!(
                "alpha = {}, beta = {}",
                self.alpha, self.beta
            )));
        }
        if !(self.u_ci < self.u_rt && self.u_rt <= self.u_co) || !(self.p_rt > 0.0) {
            return Err(UncertaintyError::InvalidWeibull(format!(
                "turbine curve u_ci = {}, u_rt = {}, u_co = {}, p_rt = {}",
                self.u_ci, self.u_rt, self.u_co, self.p_rt
            )));
        }
        Ok(())
    }

    /// Weibull parameters matching a mean and standard deviation of wind
    /// speed. The coefficient of variation depends on the shape alone, so
    /// the shape is found by bisection and the scale follows.
    pub fn weibull_from_mean_sd(mean: f64, sd: f64) -> Result<(f64, f64), UncertaintyError> {
        if !(mean > 0.0 && sd > 0.0) {
            return Err(UncertaintyError::InvalidWeibull(format!(
                "mean = {mean}, sd = {sd}"
            )));
        }
        let target = sd / mean;
        let cv = |k: f64| {
            let g1 = gamma(1.0 + 1.0 / k);
            (gamma(1.0 + 2.0 / k) / (g1 * g1) - 1.0).sqrt()
        };
        // cv is decreasing in the shape
        let (mut lo, mut hi) = (0.1, 100.0);
        if target > cv(lo) || target < cv(hi) {
            return Err(UncertaintyError::InvalidWeibull(format!(
                "coefficient of variation {target} out of range"
            )));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if cv(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let beta = 0.5 * (lo + hi);
        Ok((mean / gamma(1.0 + 1.0 / beta), beta))
    }

    pub fn mean_speed(&self) -> f64 {
        self.alpha * gamma(1.0 + 1.0 / self.beta)
    }
}

/// Normal load at one bus. Reactive demand follows the same draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoadModel {
    pub mu: f64,
    pub sigma_pct: f64,
}

impl LoadModel {
    pub fn sigma(&self) -> f64 {
        self.mu * self.sigma_pct / 100.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageModel {
    /// Probability that the circuit is out.
    pub rho: f64,
}

fn midpoints(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| (i as f64 + 0.5) / n as f64)
}

pub fn discretize_weibull(
    model: &WindModel,
    n_samples: usize,
) -> Result<DiscreteDistribution, UncertaintyError> {
    if n_samples < 2 {
        return Err(UncertaintyError::TooFewSamples(n_samples));
    }
    if !(model.alpha > 0.0 && model.beta > 0.0) {
        return Err(UncertaintyError::InvalidWeibull(format!(
            "alpha = {}, beta = {}",
            model.alpha, model.beta
        )));
    }
    let support = midpoints(n_samples)
        .map(|q| model.alpha * (-(1.0 - q).ln()).powf(1.0 / model.beta))
        .collect();
    DiscreteDistribution::equiprobable(support)
}

/// Turbine output for wind speed `u`.
pub fn wind_power(u: f64, model: &WindModel) -> f64 {
    if u < model.u_ci || u > model.u_co {
        0.0
    } else if u < model.u_rt {
        model.p_rt * (u - model.u_ci) / (model.u_rt - model.u_ci)
    } else {
        model.p_rt
    }
}

/// Distribution of turbine output: discretized wind speed pushed through the
/// power curve.
pub fn wind_power_distribution(
    model: &WindModel,
    n_samples: usize,
) -> Result<DiscreteDistribution, UncertaintyError> {
    model.check()?;
    Ok(discretize_weibull(model, n_samples)?.transform(|u| wind_power(u, model)))
}

pub fn discretize_normal(
    model: &LoadModel,
    n_samples: usize,
) -> Result<DiscreteDistribution, UncertaintyError> {
    if n_samples < 2 {
        return Err(UncertaintyError::TooFewSamples(n_samples));
    }
    if !(model.mu > 0.0) || !(model.sigma_pct >= 0.0) {
        return Err(UncertaintyError::InvalidLoad(format!(
            "mu = {}, sigma_pct = {}",
            model.mu, model.sigma_pct
        )));
    }
    let sigma = model.sigma();
    if sigma == 0.0 {
        return Ok(DiscreteDistribution::point(model.mu));
    }
    let normal =
        Normal::new(model.mu, sigma).map_err(|e| UncertaintyError::InvalidLoad(e.to_string()))?;
    let support = midpoints(n_samples)
        .map(|q| normal.inverse_cdf(q))
        .collect();
    DiscreteDistribution::equiprobable(support)
}

/// Availability of one circuit: 1 in service with probability `1 - ρ`.
///
/// ρ of exactly 0 or 1 gives a single-point distribution, which reports
/// [`DiscreteDistribution::is_deterministic`].
pub fn bernoulli_outage(model: &OutageModel) -> Result<DiscreteDistribution, UncertaintyError> {
    let rho = model.rho;
    if !(0.0..=1.0).contains(&rho) {
        return Err(UncertaintyError::InvalidOutageRate(rho));
    }
    if rho == 0.0 {
        return Ok(DiscreteDistribution::point(1.0));
    }
    if rho == 1.0 {
        return Ok(DiscreteDistribution::point(0.0));
    }
    DiscreteDistribution::new(vec![0.0, 1.0], vec![rho, 1.0 - rho])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn turbine() -> WindModel {
        WindModel {
            alpha: 8.0,
            beta: 2.0,
            u_ci: 3.0,
            u_rt: 12.0,
            u_co: 25.0,
            p_rt: 450.0,
        }
    }

    #[test]
    fn weibull_exponential_mean() {
        let m = WindModel {
            alpha: 1.0,
            beta: 1.0,
            ..turbine()
        };
        let d = discretize_weibull(&m, DEFAULT_SAMPLES).unwrap();
        // αΓ(1 + 1/β) = 1
        assert!((d.mean() - 1.0).abs() < 0.01);
    }

    #[test]
    fn weibull_rayleigh_mean() {
        let m = WindModel {
            alpha: 1.0,
            beta: 2.0,
            ..turbine()
        };
        let d = discretize_weibull(&m, DEFAULT_SAMPLES).unwrap();
        let analytic = std::f64::consts::PI.sqrt() / 2.0;
        assert!((d.mean() - analytic).abs() / analytic < 0.01);
        assert!((d.mean() - m.mean_speed()).abs() <= 3.0 * d.std_dev() / 100.0);
    }

    #[test]
    fn weibull_probabilities_equal() {
        let d = discretize_weibull(&turbine(), 1000).unwrap();
        assert!(d.probs().iter().all(|&p| p == 1.0 / 1000.0));
        assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weibull_rejects_bad_params() {
        let m = WindModel {
            alpha: -1.0,
            ..turbine()
        };
        assert!(discretize_weibull(&m, 100).is_err());
        assert!(discretize_weibull(&turbine(), 1).is_err());
    }

    #[test]
    fn weibull_inversion_round_trips() {
        let (alpha, beta) = WindModel::weibull_from_mean_sd(7.5, 3.5).unwrap();
        let m = WindModel {
            alpha,
            beta,
            ..turbine()
        };
        let d = discretize_weibull(&m, 100_000).unwrap();
        assert!((d.mean() - 7.5).abs() < 0.01);
        assert!((d.std_dev() - 3.5).abs() < 0.02);
    }

    #[test]
    fn turbine_curve_branches() {
        let m = turbine();
        assert_eq!(wind_power(2.0, &m), 0.0);
        assert_eq!(wind_power(12.0, &m), 450.0);
        assert_eq!(wind_power(7.5, &m), 225.0);
        assert_eq!(wind_power(25.0, &m), 450.0);
        assert_eq!(wind_power(26.0, &m), 0.0);
    }

    #[test]
    fn normal_moments() {
        let d = discretize_normal(
            &LoadModel {
                mu: 100.0,
                sigma_pct: 10.0,
            },
            DEFAULT_SAMPLES,
        )
        .unwrap();
        assert!((d.mean() - 100.0).abs() < 0.1);
        assert!((d.std_dev() - 10.0).abs() < 0.2);
        assert!(d.skewness().abs() < 0.01);
        assert!((d.kurtosis() - 3.0).abs() < 0.1);
    }

    #[test]
    fn bernoulli_closed_forms() {
        let rho = 0.01;
        let d = bernoulli_outage(&OutageModel { rho }).unwrap();
        assert!((d.mean() - 0.99).abs() < 1e-15);
        assert!((d.variance() - 0.0099).abs() < 1e-15);
        let q = 1.0 - rho;
        let skew = (2.0 * rho - 1.0) / (rho * q).sqrt();
        let kurt = 3.0 + (1.0 - 6.0 * rho * q) / (rho * q);
        assert!((d.skewness() - skew).abs() < 1e-9);
        assert!((d.kurtosis() - kurt).abs() < 1e-9);
        assert!((skew - -9.849).abs() < 1e-3);
        assert!((kurt - 98.01).abs() < 1e-2);

        let half = bernoulli_outage(&OutageModel { rho: 0.5 }).unwrap();
        assert!(half.skewness().abs() < 1e-15);
    }

    #[test]
    fn bernoulli_degenerate_rates() {
        assert!(bernoulli_outage(&OutageModel { rho: 0.0 })
            .unwrap()
            .is_deterministic());
        assert!(bernoulli_outage(&OutageModel { rho: 1.0 })
            .unwrap()
            .is_deterministic());
        assert!(bernoulli_outage(&OutageModel { rho: 1.5 }).is_err());
    }

    #[test]
    fn two_point_kurtosis() {
        let d = DiscreteDistribution::new(vec![-1.0, 1.0], vec![0.5, 0.5]).unwrap();
        let (_, l4) = central_moments(&d, 4).unwrap();
        assert!((l4 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_variance_signals() {
        assert_eq!(
            central_moments(&DiscreteDistribution::point(3.0), 2),
            Err(UncertaintyError::ZeroVariance)
        );
    }

    #[test]
    fn transforms() {
        let d = discretize_weibull(&turbine(), 2000).unwrap();
        assert_eq!(d.transform(|x| x), d);
        let p = d.transform(|u| wind_power(u, &turbine()));
        assert!(p.min() >= 0.0 && p.max() <= 450.0);
        let c = d.transform(|_| 4.0);
        assert!(c.is_deterministic());
    }

    #[test]
    fn rejects_bad_probabilities() {
        assert!(DiscreteDistribution::new(vec![1.0, 2.0], vec![0.5, 0.6]).is_err());
        assert!(DiscreteDistribution::new(vec![1.0, 2.0], vec![1.5, -0.5]).is_err());
        assert!(DiscreteDistribution::new(vec![1.0], vec![0.5, 0.5]).is_err());
    }

    proptest! {
        #[test]
        fn standardized_low_moments(values in proptest::collection::vec(-50.0f64..50.0, 2..40),
                                    weights in proptest::collection::vec(0.01f64..1.0, 40)) {
            let w = &weights[..values.len()];
            let total: f64 = w.iter().sum();
            let probs: Vec<f64> = w.iter().map(|x| x / total).collect();
            let Ok(d) = DiscreteDistribution::new(values, probs) else { return Ok(()); };
            prop_assume!(!d.is_deterministic() && d.std_dev() > 1e-6);
            let (_, l1) = central_moments(&d, 1).unwrap();
            let (_, l2) = central_moments(&d, 2).unwrap();
            prop_assert!(l1.abs() < 1e-12 * (1.0 + d.mean().abs() / d.std_dev()));
            prop_assert!((l2 - 1.0).abs() < 1e-12);
            prop_assert!(d.kurtosis() >= d.skewness().powi(2) + 1.0 - 1e-9);
        }

        #[test]
        fn turbine_output_bounded_and_monotone(u in 0.0f64..30.0, du in 0.0f64..5.0) {
            let m = turbine();
            let p = wind_power(u, &m);
            prop_assert!((0.0..=m.p_rt).contains(&p));
            if u + du <= m.u_rt {
                prop_assert!(wind_power(u + du, &m) >= p);
            }
        }
    }
}
