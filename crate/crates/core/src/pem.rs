//! Three-point (2m+1) point estimate scheme.
//!
//! Each input variable gets two standardized locations ξ1, ξ2 matched to
//! its skewness and kurtosis, plus a third location at the mean. The mean
//! locations of all variables coincide, so that point is evaluated once
//! with the pooled weight `p0 = Σ p3`.

use std::borrow::Borrow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::uncertainty::DiscreteDistribution;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PemError {
    #[error("variable has zero variance and must be pinned instead")]
    Deterministic,
    #[error("moments are infeasible for three-point matching (λ4 - 3(λ3/2)² = {0})")]
    MomentInfeasible(f64),
    #[error("scheme needs at least one variable")]
    NoVariables,
    #[error("Monte Carlo needs at least 100 samples, got {0}")]
    TooFewSamples(usize),
}

/// Locations and weights for one variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Concentration {
    /// Standardized locations; `xi[2]` is always 0.
    pub xi: [f64; 3],
    pub p: [f64; 3],
    /// Physical locations `μ + ξσ`.
    pub x: [f64; 3],
}

/// Concentration for one variable inside an `m`-variable scheme.
pub fn build_concentration(
    dist: &DiscreteDistribution,
    m: usize,
) -> Result<Concentration, PemError> {
    if dist.is_deterministic() {
        return Err(PemError::Deterministic);
    }
    let (l3, l4) = (dist.skewness(), dist.kurtosis());
    let half = l3 / 2.0;
    let disc = l4 - 3.0 * half * half;
    if !(disc > 0.0) {
        return Err(PemError::MomentInfeasible(disc));
    }
    let root = disc.sqrt();
    let xi1 = half - root;
    let xi2 = half + root;
    let p1 = 1.0 / (xi1 * (xi1 - xi2));
    let p2 = -1.0 / (xi2 * (xi1 - xi2));
    // For m = 1 this is the single-variable 1 - p1 - p2.
    let p3 = 1.0 / m.max(1) as f64 - p1 - p2;
    let (mu, sigma) = (dist.mean(), dist.std_dev());
    Ok(Concentration {
        xi: [xi1, xi2, 0.0],
        p: [p1, p2, p3],
        x: [mu + xi1 * sigma, mu + xi2 * sigma, mu],
    })
}

/// Where an evaluation point sits in the scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointLocation {
    Mean,
    /// Variable `variable` displaced to location `location` (0 or 1).
    Displaced {
        variable: usize,
        location: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalPoint {
    pub location: PointLocation,
    pub weight: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PemScheme {
    concentrations: Vec<Concentration>,
    means: Vec<f64>,
    p0: f64,
}

pub fn build_scheme<D: Borrow<DiscreteDistribution>>(dists: &[D]) -> Result<PemScheme, PemError> {
    if dists.is_empty() {
        return Err(PemError::NoVariables);
    }
    let m = dists.len();
    let concentrations = dists
        .iter()
        .map(|d| build_concentration(d.borrow(), m))
        .collect::<Result<Vec<_>, _>>()?;
    let p0 = concentrations.iter().map(|c| c.p[2]).sum();
    Ok(PemScheme {
        means: dists.iter().map(|d| d.borrow().mean()).collect(),
        concentrations,
        p0,
    })
}

impl PemScheme {
    pub fn m(&self) -> usize {
        self.concentrations.len()
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn concentrations(&self) -> &[Concentration] {
        &self.concentrations
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn evaluation_count(&self) -> usize {
        2 * self.m() + 1
    }

    pub fn total_weight(&self) -> f64 {
        self.p0
            + self
                .concentrations
                .iter()
                .map(|c| c.p[0] + c.p[1])
                .sum::<f64>()
    }

    /// A negative pooled mean weight is legitimate for this scheme but worth
    /// surfacing to callers.
    pub fn warnings(&self) -> Vec<String> {
        if self.p0 < 0.0 {
            vec![format!("mean-point weight p0 = {} is negative", self.p0)]
        } else {
            Vec::new()
        }
    }

    /// All 2m+1 points in evaluation order: the mean first, then each
    /// variable's two locations in index order.
    pub fn points(&self) -> Vec<EvalPoint> {
        let mut out = Vec::with_capacity(self.evaluation_count());
        out.push(EvalPoint {
            location: PointLocation::Mean,
            weight: self.p0,
            values: self.means.clone(),
        });
        for (b, c) in self.concentrations.iter().enumerate() {
            for a in 0..2 {
                let mut values = self.means.clone();
                values[b] = c.x[a];
                out.push(EvalPoint {
                    location: PointLocation::Displaced {
                        variable: b,
                        location: a,
                    },
                    weight: c.p[a],
                    values,
                });
            }
        }
        out
    }
}

/// Result of evaluating the output function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointOutcome {
    pub value: f64,
    pub feasible: bool,
}

impl PointOutcome {
    pub fn feasible(value: f64) -> Self {
        PointOutcome {
            value,
            feasible: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruncationPolicy {
    /// Evaluate every point.
    Never,
    /// Stop at the first infeasible point.
    FirstInfeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilisticResult {
    accumulated: f64,
    completed: bool,
    all_feasible: bool,
    truncated_at: Option<PointLocation>,
    partial_weight: f64,
    unevaluated_fraction: f64,
    evaluations: usize,
}

impl ProbabilisticResult {
    /// `E(Z)`; `None` when the run was truncated.
    pub fn expectation(&self) -> Option<f64> {
        self.completed.then_some(self.accumulated)
    }

    /// Weighted sum over the points evaluated so far.
    pub fn accumulated(&self) -> f64 {
        self.accumulated
    }

    pub fn completed(&self) -> bool {
        self.completed
    }

    pub fn all_feasible(&self) -> bool {
        self.all_feasible
    }

    pub fn truncated_at(&self) -> Option<PointLocation> {
        self.truncated_at
    }

    /// Signed weight of the points never evaluated.
    pub fn partial_weight(&self) -> f64 {
        self.partial_weight
    }

    /// Share of the absolute weight mass never evaluated, in [0, 1].
    pub fn unevaluated_fraction(&self) -> f64 {
        self.unevaluated_fraction
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }
}

pub fn estimate_expectation(
    scheme: &PemScheme,
    mut evaluator: impl FnMut(&EvalPoint) -> PointOutcome,
    policy: TruncationPolicy,
) -> ProbabilisticResult {
    let points = scheme.points();
    let mass: f64 = points.iter().map(|p| p.weight.abs()).sum();
    let mut accumulated = 0.0;
    let mut all_feasible = true;
    for (i, point) in points.iter().enumerate() {
        let outcome = evaluator(point);
        accumulated += point.weight * outcome.value;
        if !outcome.feasible {
            all_feasible = false;
            if policy == TruncationPolicy::FirstInfeasible {
                let rest = &points[i + 1..];
                let unevaluated: f64 = rest.iter().map(|p| p.weight.abs()).sum();
                return ProbabilisticResult {
                    accumulated,
                    completed: false,
                    all_feasible,
                    truncated_at: Some(point.location),
                    partial_weight: rest.iter().map(|p| p.weight).sum(),
                    unevaluated_fraction: if mass > 0.0 { unevaluated / mass } else { 0.0 },
                    evaluations: i + 1,
                };
            }
        }
    }
    ProbabilisticResult {
        accumulated,
        completed: true,
        all_feasible,
        truncated_at: None,
        partial_weight: 0.0,
        unevaluated_fraction: 0.0,
        evaluations: points.len(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McsEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Plain Monte Carlo over independent draws from each distribution.
pub fn mcs_expectation<D: Borrow<DiscreteDistribution>>(
    dists: &[D],
    mut evaluator: impl FnMut(&[f64]) -> f64,
    n_samples: usize,
    seed: u64,
) -> Result<McsEstimate, PemError> {
    if n_samples < 100 {
        return Err(PemError::TooFewSamples(n_samples));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = vec![0.0; dists.len()];
    // Welford
    let (mut mean, mut m2) = (0.0, 0.0);
    for i in 0..n_samples {
        for (v, d) in values.iter_mut().zip(dists) {
            *v = d.borrow().quantile(rng.random::<f64>());
        }
        let z = evaluator(&values);
        let delta = z - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (z - mean);
    }
    let var = m2 / (n_samples - 1) as f64;
    Ok(McsEstimate {
        mean,
        std_error: (var / n_samples as f64).sqrt(),
        samples: n_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uncertainty::{
        bernoulli_outage, discretize_normal, LoadModel, OutageModel, DEFAULT_SAMPLES,
    };

    /// Exact two-point-per-sign stand-in for a Gaussian: moments 0, 1, 0, 3.
    fn gaussian_like(mu: f64, sigma: f64) -> DiscreteDistribution {
        let s3 = 3f64.sqrt();
        DiscreteDistribution::new(
            vec![mu - s3 * sigma, mu, mu + s3 * sigma],
            vec![1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
        )
        .unwrap()
    }

    #[test]
    fn gaussian_concentration() {
        let c = build_concentration(&gaussian_like(0.0, 1.0), 1).unwrap();
        let s3 = 3f64.sqrt();
        assert!((c.xi[0] + s3).abs() < 1e-12);
        assert!((c.xi[1] - s3).abs() < 1e-12);
        assert_eq!(c.xi[2], 0.0);
        assert!((c.p[0] - 1.0 / 6.0).abs() < 1e-12);
        assert!((c.p[1] - 1.0 / 6.0).abs() < 1e-12);
        assert!((c.p[2] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn bernoulli_discriminant_positive() {
        let d = bernoulli_outage(&OutageModel { rho: 0.01 }).unwrap();
        let half = d.skewness() / 2.0;
        let disc = d.kurtosis() - 3.0 * half * half;
        assert!((disc - 25.2525).abs() < 1e-3);
        let c = build_concentration(&d, 1).unwrap();
        // the two locations land on the support points
        assert!(c.x[0].abs() < 1e-9);
        assert!((c.x[1] - 1.0).abs() < 1e-9);
        assert!((c.p[0] - 0.01).abs() < 1e-12);
    }

    #[test]
    fn deterministic_variable_rejected() {
        assert_eq!(
            build_concentration(&DiscreteDistribution::point(2.0), 1),
            Err(PemError::Deterministic)
        );
    }

    #[test]
    fn three_identical_gaussians_zero_mean_weight() {
        let g = gaussian_like(0.0, 1.0);
        let s = build_scheme(&[g.clone(), g.clone(), g]).unwrap();
        assert_eq!(s.evaluation_count(), 7);
        assert!(s.p0().abs() < 1e-12);
        assert!((s.total_weight() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_gaussian_scheme() {
        let s = build_scheme(&[gaussian_like(0.0, 1.0)]).unwrap();
        let w: Vec<f64> = s.points().iter().map(|p| p.weight).collect();
        assert_eq!(w.len(), 3);
        assert!((w[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((w[1] - 1.0 / 6.0).abs() < 1e-12);
        assert!((w[2] - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn constant_and_linear_evaluators() {
        let s = build_scheme(&[gaussian_like(5.0, 2.0)]).unwrap();
        let r = estimate_expectation(&s, |_| PointOutcome::feasible(7.0), TruncationPolicy::Never);
        assert!((r.expectation().unwrap() - 7.0).abs() < 1e-12);
        let r = estimate_expectation(
            &s,
            |p| PointOutcome::feasible(p.values[0]),
            TruncationPolicy::Never,
        );
        assert!((r.expectation().unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn square_of_standard_gaussian() {
        let s = build_scheme(&[gaussian_like(0.0, 1.0)]).unwrap();
        let r = estimate_expectation(
            &s,
            |p| PointOutcome::feasible(p.values[0] * p.values[0]),
            TruncationPolicy::Never,
        );
        // (1/6)·3 + (1/6)·3 + (2/3)·0
        assert!((r.expectation().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn truncation_stops_at_first_infeasible() {
        let g = gaussian_like(0.0, 1.0);
        let s = build_scheme(&[g.clone(), g]).unwrap();
        let mut calls = 0;
        let r = estimate_expectation(
            &s,
            |p| {
                calls += 1;
                PointOutcome {
                    value: 1.0,
                    feasible: p.values[0] <= 0.0,
                }
            },
            TruncationPolicy::FirstInfeasible,
        );
        // order: mean, (v0, low), (v0, high) <- infeasible
        assert_eq!(calls, 3);
        assert!(!r.completed());
        assert_eq!(r.expectation(), None);
        assert_eq!(
            r.truncated_at(),
            Some(PointLocation::Displaced {
                variable: 0,
                location: 1
            })
        );
        assert!(r.unevaluated_fraction() > 0.0 && r.unevaluated_fraction() < 1.0);
    }

    #[test]
    fn no_truncation_reports_infeasibility_but_completes() {
        let s = build_scheme(&[gaussian_like(0.0, 1.0)]).unwrap();
        let r = estimate_expectation(
            &s,
            |_| PointOutcome {
                value: 2.0,
                feasible: false,
            },
            TruncationPolicy::Never,
        );
        assert!(r.completed());
        assert!(!r.all_feasible());
        assert_eq!(r.partial_weight(), 0.0);
    }

    #[test]
    fn mcs_constant_has_zero_error() {
        let d = gaussian_like(0.0, 1.0);
        let est = mcs_expectation(&[d], |_| 3.0, 1000, 7).unwrap();
        assert_eq!(est.mean, 3.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn mcs_bernoulli_mean() {
        let d = bernoulli_outage(&OutageModel { rho: 0.01 }).unwrap();
        let est = mcs_expectation(&[d], |v| v[0], 100_000, 11).unwrap();
        // binomial standard error sqrt(ρ(1-ρ)/n)
        let se = (0.01f64 * 0.99 / 100_000.0).sqrt();
        assert!((est.std_error - se).abs() / se < 0.05);
        assert!((est.mean - 0.99).abs() <= 3.0 * se);
    }

    #[test]
    fn mcs_square_of_gaussian() {
        let d = discretize_normal(
            &LoadModel {
                mu: 1.0,
                sigma_pct: 100.0,
            },
            DEFAULT_SAMPLES,
        )
        .unwrap();
        let est = mcs_expectation(&[d], |v| (v[0] - 1.0).powi(2), 100_000, 3).unwrap();
        // Var(x²) = 2 for a standard normal
        assert!((est.std_error - (2.0f64 / 1e5).sqrt()).abs() < 5e-4);
        assert!((est.mean - 1.0).abs() <= 3.0 * est.std_error);
    }

    #[test]
    fn mcs_rejects_tiny_runs() {
        assert!(mcs_expectation::<DiscreteDistribution>(&[], |_| 0.0, 10, 0).is_err());
    }

    #[test]
    fn mcs_is_seeded() {
        let d = gaussian_like(0.0, 1.0);
        let a = mcs_expectation(std::slice::from_ref(&d), |v| v[0].exp(), 500, 42).unwrap();
        let b = mcs_expectation(&[d], |v| v[0].exp(), 500, 42).unwrap();
        assert_eq!(a, b);
    }
}
