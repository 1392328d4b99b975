//! Modified artificial bee colony over integer expansion plans.
//!
//! Employed bees perturb their own source, onlookers pick sources in
//! proportion to fitness, scouts replace sources that stopped improving.
//! Moves combine the usual ABC difference term with a pull towards the
//! best plan found so far, weighted by `w_g`.
//!
//! Candidates of one phase are generated from the population as it stood
//! at the start of the phase and handed to the evaluator as a batch, so the
//! evaluator may work on them concurrently. Results are committed in
//! candidate order.

use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::ExpansionPlan;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MabcError {
    #[error("invalid colony setting: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MabcConfig {
    /// Number of food sources.
    pub cs_n: usize,
    /// Corridors changed per move.
    pub psi: usize,
    /// Failed improvements tolerated before a source is abandoned.
    pub lim: u32,
    /// Cycles per trial.
    pub iter: usize,
    /// Weight of the pull towards the best plan.
    pub w_g: f64,
    pub seed: u64,
    /// Independent restarts.
    pub trials: usize,
}

impl Default for MabcConfig {
    fn default() -> Self {
        MabcConfig {
            cs_n: 20,
            psi: 2,
            lim: 6,
            iter: 30,
            w_g: 1.5,
            seed: 1,
            trials: 1,
        }
    }
}

impl MabcConfig {
    pub fn check(&self) -> Result<(), MabcError> {
        let bad = |m: &str| Err(MabcError::InvalidConfig(m.into()));
        if self.cs_n < 2 {
            return bad("cs_n must be at least 2");
        }
        if self.psi < 1 {
            return bad("psi must be at least 1");
        }
        if self.lim < 1 {
            return bad("lim must be at least 1");
        }
        if self.iter < 1 {
            return bad("iter must be at least 1");
        }
        if !(self.w_g >= 0.0) {
            return bad("w_g must be non-negative");
        }
        if self.trials < 1 {
            return bad("trials must be at least 1");
        }
        Ok(())
    }

    /// Seed of restart `t`, derived from the master seed.
    pub fn trial_seed(&self, t: usize) -> u64 {
        // splitmix64 step so that neighbouring master seeds do not share trials
        let mut z = self
            .seed
            .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(t as u64 + 1));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// What the evaluator reports for one plan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub v_aug: f64,
    /// No penalty was applied.
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoodSource {
    pub plan: ExpansionPlan,
    pub v_aug: f64,
    pub fitness: f64,
    pub feasible: bool,
    pub trials: u32,
}

impl FoodSource {
    fn new(plan: ExpansionPlan, e: Evaluation) -> Self {
        FoodSource {
            plan,
            v_aug: e.v_aug,
            fitness: 1.0 / e.v_aug,
            feasible: e.feasible,
            trials: 0,
        }
    }

    /// Strictly better, ties going to the lexicographically smaller plan.
    fn beats(&self, other: &FoodSource) -> bool {
        self.v_aug < other.v_aug || (self.v_aug == other.v_aug && self.plan < other.plan)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub cycle: usize,
    pub best_v_aug: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MabcOutcome {
    pub best: FoodSource,
    /// Best source that carried no penalty, if any was seen.
    pub best_feasible: Option<FoodSource>,
    /// Entry 0 is the initial population.
    pub trace: Vec<TracePoint>,
    pub evaluations: usize,
}

impl MabcOutcome {
    pub fn trace_csv(&self) -> String {
        let mut s = String::from("cycle,best_v_aug,evaluations\n");
        for p in &self.trace {
            let _ = writeln!(s, "{},{},{}", p.cycle, p.best_v_aug, p.evaluations);
        }
        s
    }
}

fn random_plan(upper: &[u32], rng: &mut ChaCha8Rng) -> ExpansionPlan {
    ExpansionPlan::new(upper.iter().map(|&u| rng.random_range(0..=u)).collect())
}

fn perturb(seed: &ExpansionPlan, upper: &[u32], rng: &mut ChaCha8Rng) -> ExpansionPlan {
    ExpansionPlan::new(
        seed.additions()
            .iter()
            .zip(upper)
            .map(|(&n, &u)| {
                (i64::from(n) + rng.random_range(-2i64..=2)).clamp(0, i64::from(u)) as u32
            })
            .collect(),
    )
}

/// Starting plans. A seed plan takes slot 0 unchanged and the other slots
/// are perturbations of it; without a seed every slot is uniform random.
pub fn initialize_population(
    seed_plan: Option<&ExpansionPlan>,
    cs_n: usize,
    upper: &[u32],
    rng: &mut ChaCha8Rng,
) -> Vec<ExpansionPlan> {
    (0..cs_n)
        .map(|i| match seed_plan {
            Some(s) if i == 0 => s.clone(),
            Some(s) => perturb(s, upper, rng),
            None => random_plan(upper, rng),
        })
        .collect()
}

/// Candidate from `source`: ψ distinct corridors move by
/// `round(n + φ(n - n_partner) + w_g φ'(n_best - n))`, φ and φ' uniform on
/// [-1, 1], clipped to the corridor's bounds.
pub fn neighbor_move(
    source: &ExpansionPlan,
    partner: &ExpansionPlan,
    best: &ExpansionPlan,
    psi: usize,
    w_g: f64,
    upper: &[u32],
    rng: &mut ChaCha8Rng,
) -> ExpansionPlan {
    let mut out = source.clone();
    let n_corr = source.len();
    if n_corr == 0 {
        return out;
    }
    for l in sample(rng, n_corr, psi.min(n_corr)).into_iter() {
        let n = f64::from(source.additions()[l]);
        let np = f64::from(partner.additions()[l]);
        let nb = f64::from(best.additions()[l]);
        let phi: f64 = rng.random_range(-1.0..=1.0);
        let phi_g: f64 = rng.random_range(-1.0..=1.0);
        let v = (n + phi * (n - np) + w_g * phi_g * (nb - n)).round();
        out.additions_mut()[l] = v.clamp(0.0, f64::from(upper[l])) as u32;
    }
    out
}

fn pick_partner(i: usize, cs_n: usize, rng: &mut ChaCha8Rng) -> usize {
    let k = rng.random_range(0..cs_n - 1);
    if k >= i {
        k + 1
    } else {
        k
    }
}

fn roulette(pop: &[FoodSource], rng: &mut ChaCha8Rng) -> usize {
    let weights: Vec<f64> = pop.iter().map(|s| s.fitness.max(1e-12)).collect();
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if u < *w {
            return i;
        }
        u -= w;
    }
    pop.len() - 1
}

struct Colony {
    pop: Vec<FoodSource>,
    best: FoodSource,
    best_feasible: Option<FoodSource>,
}

impl Colony {
    fn note(&mut self, s: &FoodSource) {
        if s.beats(&self.best) {
            self.best = s.clone();
        }
        if s.feasible && self.best_feasible.as_ref().is_none_or(|b| s.beats(b)) {
            self.best_feasible = Some(s.clone());
        }
    }

    /// Greedy replacement of source `i` by `cand`.
    fn offer(&mut self, i: usize, cand: FoodSource) {
        self.note(&cand);
        if cand.beats(&self.pop[i]) {
            self.pop[i] = cand;
        } else {
            self.pop[i].trials += 1;
        }
    }
}

/// One trial of the colony.
///
/// `evaluate` receives each phase's candidates and returns one
/// [`Evaluation`] per plan, in order.
pub fn run(
    config: &MabcConfig,
    upper: &[u32],
    seed_plan: Option<&ExpansionPlan>,
    mut evaluate: impl FnMut(&[ExpansionPlan]) -> Vec<Evaluation>,
) -> Result<MabcOutcome, MabcError> {
    config.check()?;
    let cs_n = config.cs_n;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut evaluations = 0;
    let mut eval = |plans: &[ExpansionPlan]| {
        let e = evaluate(plans);
        assert_eq!(e.len(), plans.len(), "evaluator must score every plan");
        e
    };

    let plans = initialize_population(seed_plan, cs_n, upper, &mut rng);
    let scores = eval(&plans);
    evaluations += plans.len();
    let pop: Vec<FoodSource> = plans
        .into_iter()
        .zip(scores)
        .map(|(p, e)| FoodSource::new(p, e))
        .collect();
    let first = pop
        .iter()
        .fold(&pop[0], |b, s| if s.beats(b) { s } else { b })
        .clone();
    let mut colony = Colony {
        best: first,
        best_feasible: None,
        pop,
    };
    for s in colony.pop.clone() {
        colony.note(&s);
    }
    let mut trace = vec![TracePoint {
        cycle: 0,
        best_v_aug: colony.best.v_aug,
        evaluations,
    }];

    for cycle in 1..=config.iter {
        // employed
        let cands: Vec<ExpansionPlan> = (0..cs_n)
            .map(|i| {
                let k = pick_partner(i, cs_n, &mut rng);
                neighbor_move(
                    &colony.pop[i].plan,
                    &colony.pop[k].plan,
                    &colony.best.plan,
                    config.psi,
                    config.w_g,
                    upper,
                    &mut rng,
                )
            })
            .collect();
        let scores = eval(&cands);
        evaluations += cands.len();
        for (i, (p, e)) in cands.into_iter().zip(scores).enumerate() {
            colony.offer(i, FoodSource::new(p, e));
        }

        // onlookers
        let picks: Vec<(usize, ExpansionPlan)> = (0..cs_n)
            .map(|_| {
                let i = roulette(&colony.pop, &mut rng);
                let k = pick_partner(i, cs_n, &mut rng);
                let cand = neighbor_move(
                    &colony.pop[i].plan,
                    &colony.pop[k].plan,
                    &colony.best.plan,
                    config.psi,
                    config.w_g,
                    upper,
                    &mut rng,
                );
                (i, cand)
            })
            .collect();
        let plans: Vec<ExpansionPlan> = picks.iter().map(|(_, p)| p.clone()).collect();
        let scores = eval(&plans);
        evaluations += plans.len();
        for ((i, p), e) in picks.into_iter().zip(scores) {
            colony.offer(i, FoodSource::new(p, e));
        }

        // scouts
        let tired: Vec<usize> = (0..cs_n)
            .filter(|&i| {
                colony.pop[i].trials > config.lim && colony.pop[i].plan != colony.best.plan
            })
            .collect();
        if !tired.is_empty() {
            let plans: Vec<ExpansionPlan> = tired
                .iter()
                .map(|_| match seed_plan {
                    Some(s) => perturb(s, upper, &mut rng),
                    None => random_plan(upper, &mut rng),
                })
                .collect();
            let scores = eval(&plans);
            evaluations += plans.len();
            for ((&i, p), e) in tired.iter().zip(plans).zip(scores) {
                let s = FoodSource::new(p, e);
                colony.note(&s);
                colony.pop[i] = s;
            }
        }

        trace.push(TracePoint {
            cycle,
            best_v_aug: colony.best.v_aug,
            evaluations,
        });
    }

    Ok(MabcOutcome {
        best: colony.best,
        best_feasible: colony.best_feasible,
        trace,
        evaluations,
    })
}

/// Convenience form of [`run`] for a plain scalar objective; every plan
/// counts as feasible.
pub fn run_scalar(
    config: &MabcConfig,
    upper: &[u32],
    seed_plan: Option<&ExpansionPlan>,
    mut v_aug: impl FnMut(&ExpansionPlan) -> f64,
) -> Result<MabcOutcome, MabcError> {
    run(config, upper, seed_plan, |plans| {
        plans
            .iter()
            .map(|p| Evaluation {
                v_aug: v_aug(p),
                feasible: true,
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn seed_plan_occupies_slot_zero() {
        let seed = ExpansionPlan::new(vec![0, 2, 3, 1]);
        let upper = [3, 3, 3, 3];
        let pop = initialize_population(Some(&seed), 20, &upper, &mut rng(4));
        assert_eq!(pop[0], seed);
        assert_eq!(pop.len(), 20);
        assert_eq!(
            pop,
            initialize_population(Some(&seed), 20, &upper, &mut rng(4))
        );
    }

    #[test]
    fn zero_weight_and_self_partner_is_identity() {
        let s = ExpansionPlan::new(vec![1, 2, 0]);
        let best = ExpansionPlan::new(vec![3, 0, 3]);
        let c = neighbor_move(&s, &s, &best, 2, 0.0, &[3, 3, 3], &mut rng(1));
        assert_eq!(c, s);
        let c = neighbor_move(&s, &s, &s, 3, 1.5, &[3, 3, 3], &mut rng(2));
        assert_eq!(c, s);
    }

    #[test]
    fn rejects_bad_config() {
        let c = MabcConfig {
            cs_n: 1,
            ..MabcConfig::default()
        };
        assert!(c.check().is_err());
    }

    /// Two corridors with three additions each: 16 plans, enumerated.
    fn toy(plan: &ExpansionPlan) -> f64 {
        let (a, b) = (
            f64::from(plan.additions()[0]),
            f64::from(plan.additions()[1]),
        );
        let cost = 30.0 * a + 20.0 * b;
        // needs 4 MW of capacity, corridor a carries 1.5, b carries 1
        let shortfall = (4.0 - 1.5 * a - b).max(0.0);
        cost + 1e3 * shortfall * shortfall
    }

    #[test]
    fn toy_problem_optimum_found() {
        let upper = [3, 3];
        let mut optimum = (f64::INFINITY, ExpansionPlan::empty(2));
        for a in 0..=3 {
            for b in 0..=3 {
                let p = ExpansionPlan::new(vec![a, b]);
                let v = toy(&p);
                if v < optimum.0 || (v == optimum.0 && p < optimum.1) {
                    optimum = (v, p);
                }
            }
        }
        let hits = (1..=10)
            .filter(|&seed| {
                let cfg = MabcConfig {
                    seed,
                    ..MabcConfig::default()
                };
                let out = run_scalar(&cfg, &upper, None, toy).unwrap();
                out.best.plan == optimum.1
            })
            .count();
        assert!(hits >= 9, "found the optimum in {hits} of 10 seeds");
    }

    #[test]
    fn trace_is_monotone_and_population_constant() {
        let cfg = MabcConfig {
            seed: 7,
            ..MabcConfig::default()
        };
        let mut sizes = Vec::new();
        let out = run(&cfg, &[3, 3], None, |plans| {
            sizes.push(plans.len());
            plans
                .iter()
                .map(|p| Evaluation {
                    v_aug: toy(p),
                    feasible: true,
                })
                .collect()
        })
        .unwrap();
        assert_eq!(out.trace.len(), cfg.iter + 1);
        assert!(out
            .trace
            .windows(2)
            .all(|w| w[1].best_v_aug <= w[0].best_v_aug));
        assert_eq!(sizes[0], cfg.cs_n);
        assert!(out
            .trace_csv()
            .starts_with("cycle,best_v_aug,evaluations\n0,"));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let cfg = MabcConfig::default();
        let a = run_scalar(&cfg, &[3, 3, 2], None, |p| {
            toy(p) + f64::from(p.additions()[2])
        })
        .unwrap();
        let b = run_scalar(&cfg, &[3, 3, 2], None, |p| {
            toy(p) + f64::from(p.additions()[2])
        })
        .unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn moves_stay_in_bounds(
            seed in 0u64..1000,
            src in proptest::collection::vec(0u32..=4, 6),
            par in proptest::collection::vec(0u32..=4, 6),
            best in proptest::collection::vec(0u32..=4, 6),
            w_g in 0.0f64..3.0,
        ) {
            let upper = [4, 4, 4, 4, 4, 4];
            let c = neighbor_move(
                &ExpansionPlan::new(src.clone()),
                &ExpansionPlan::new(par),
                &ExpansionPlan::new(best),
                2, w_g, &upper, &mut rng(seed),
            );
            prop_assert!(c.additions().iter().zip(&upper).all(|(n, u)| n <= u));
            let changed = c.additions().iter().zip(&src).filter(|(a, b)| a != b).count();
            prop_assert!(changed <= 2);
        }

        #[test]
        fn every_evaluated_plan_in_bounds(seed in 0u64..50) {
            let upper = [2u32, 3, 1];
            let cfg = MabcConfig { seed, iter: 5, ..MabcConfig::default() };
            let mut ok = true;
            run(&cfg, &upper, None, |plans| {
                ok &= plans.iter().all(|p| p.additions().iter().zip(&upper).all(|(n, u)| n <= u));
                plans.iter().map(|p| Evaluation { v_aug: 1.0 + f64::from(p.total_lines()), feasible: true }).collect()
            }).unwrap();
            prop_assert!(ok);
        }

        #[test]
        fn source_cost_never_increases(seed in 0u64..30) {
            // greedy replacement shows up as a non-increasing best
            let cfg = MabcConfig { seed, iter: 8, ..MabcConfig::default() };
            let out = run_scalar(&cfg, &[3, 3], None, toy).unwrap();
            prop_assert!(out.trace.windows(2).all(|w| w[1].best_v_aug <= w[0].best_v_aug));
        }
    }
}
