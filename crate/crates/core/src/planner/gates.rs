//! Cheap admission checks run before any probabilistic power flow. The
//! windows are built around the crisp plan, so the crisp plan always passes.

use serde::{Deserialize, Serialize};

use crate::network::ExpansionPlan;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateConfig {
    pub corridor_lo: f64,
    pub corridor_hi: f64,
    pub line_lo: f64,
    pub line_hi: f64,
    /// Initial cost ceiling as a multiple of the crisp cost.
    pub cost_hi_factor: f64,
    /// Unit of the penalties applied to rejected or truncated candidates.
    pub gate_penalty_base: f64,
}

impl Default for GateConfig {
    fn default() -> Self {
        GateConfig {
            corridor_lo: 0.9,
            corridor_hi: 1.3,
            line_lo: 0.7,
            line_hi: 2.0,
            cost_hi_factor: 2.0,
            gate_penalty_base: 1e7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    Corridor,
    Line,
    Cost,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GateOutcome {
    Pass,
    /// Rejected; `distance` is how far outside the window the candidate
    /// sits, relative to the window's reference size.
    Reject {
        gate: GateKind,
        distance: f64,
    },
}

impl GateOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, GateOutcome::Pass)
    }

    /// Penalty for a rejection. It always exceeds the worst truncation
    /// penalty so that a candidate that reached the power flows ranks ahead.
    pub fn penalty(&self, base: f64) -> f64 {
        match self {
            GateOutcome::Pass => 0.0,
            GateOutcome::Reject { distance, .. } => base * (3.0 + distance),
        }
    }
}

/// Integer window `[floor(lo·r), ceil(hi·r)]`.
fn window(reference: f64, lo: f64, hi: f64) -> (f64, f64) {
    ((lo * reference).floor(), (hi * reference).ceil())
}

fn check(value: f64, lo: f64, hi: f64, reference: f64, gate: GateKind) -> GateOutcome {
    let r = reference.max(1.0);
    if value < lo {
        GateOutcome::Reject {
            gate,
            distance: (lo - value) / r,
        }
    } else if value > hi {
        GateOutcome::Reject {
            gate,
            distance: (value - hi) / r,
        }
    } else {
        GateOutcome::Pass
    }
}

pub fn corridor_gate(
    plan: &ExpansionPlan,
    crisp: &ExpansionPlan,
    gates: &GateConfig,
) -> GateOutcome {
    let n = crisp.corridors_used() as f64;
    let (lo, hi) = window(n, gates.corridor_lo, gates.corridor_hi);
    check(plan.corridors_used() as f64, lo, hi, n, GateKind::Corridor)
}

pub fn line_gate(plan: &ExpansionPlan, crisp: &ExpansionPlan, gates: &GateConfig) -> GateOutcome {
    let t = f64::from(crisp.total_lines());
    let (lo, hi) = window(t, gates.line_lo, gates.line_hi);
    check(f64::from(plan.total_lines()), lo, hi, t, GateKind::Line)
}

/// Admits `v_cr ≤ cost ≤ v_ulim`.
pub fn cost_gate(cost: f64, v_cr: f64, v_ulim: f64) -> GateOutcome {
    check(cost, v_cr, v_ulim, v_cr, GateKind::Cost)
}

/// Per-trial gate context with the moving cost ceiling.
#[derive(Debug, Clone, PartialEq)]
pub struct GateState {
    pub config: GateConfig,
    pub crisp: ExpansionPlan,
    pub v_cr: f64,
    v_ulim: f64,
}

impl GateState {
    pub fn new(config: GateConfig, crisp: ExpansionPlan, v_cr: f64) -> Self {
        GateState {
            v_ulim: config.cost_hi_factor * v_cr,
            config,
            crisp,
            v_cr,
        }
    }

    pub fn v_ulim(&self) -> f64 {
        self.v_ulim
    }

    /// Lowers the ceiling to a newly found feasible cost. Never raises it.
    pub fn record_feasible(&mut self, cost: f64) {
        if cost >= self.v_cr {
            self.v_ulim = self.v_ulim.min(cost);
        }
    }

    /// Gates in order corridor, line, cost; the first rejection wins.
    pub fn screen(&self, plan: &ExpansionPlan, cost: f64) -> GateOutcome {
        for outcome in [
            corridor_gate(plan, &self.crisp, &self.config),
            line_gate(plan, &self.crisp, &self.config),
            cost_gate(cost, self.v_cr, self.v_ulim),
        ] {
            if !outcome.passed() {
                return outcome;
            }
        }
        GateOutcome::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn plan(v: &[u32]) -> ExpansionPlan {
        ExpansionPlan::new(v.to_vec())
    }

    // corridors 1-2 .. ; only counts matter here
    fn garver_crisp() -> ExpansionPlan {
        plan(&[0, 2, 2, 2, 0])
    }

    #[test]
    fn corridor_window_rounds_outward() {
        let g = GateConfig::default();
        let crisp = garver_crisp();
        assert!(corridor_gate(&plan(&[2, 3, 2, 3, 0]), &crisp, &g).passed());
        let five = plan(&[1, 1, 1, 1, 1]);
        assert!(matches!(
            corridor_gate(&five, &crisp, &g),
            GateOutcome::Reject {
                gate: GateKind::Corridor,
                ..
            }
        ));
        assert!(corridor_gate(&crisp, &crisp, &g).passed());
    }

    #[test]
    fn line_window() {
        let g = GateConfig::default();
        let crisp = garver_crisp();
        assert!(line_gate(&plan(&[2, 3, 2, 3, 0]), &crisp, &g).passed());
        assert!(!line_gate(&plan(&[0, 1, 1, 1, 0]), &crisp, &g).passed());
        assert!(line_gate(&plan(&[3, 3, 3, 3, 0]), &crisp, &g).passed());
        assert!(!line_gate(&plan(&[3, 3, 3, 3, 1]), &crisp, &g).passed());
    }

    #[test]
    fn cost_window_and_ceiling() {
        let mut s = GateState::new(GateConfig::default(), garver_crisp(), 160.0);
        assert_eq!(s.v_ulim(), 320.0);
        assert!(cost_gate(260.0, 160.0, s.v_ulim()).passed());
        assert!(!cost_gate(150.0, 160.0, s.v_ulim()).passed());
        s.record_feasible(260.0);
        assert!(!cost_gate(300.0, 160.0, s.v_ulim()).passed());
        s.record_feasible(290.0);
        assert_eq!(s.v_ulim(), 260.0);
    }

    #[test]
    fn rejection_outranks_truncation() {
        let g = GateConfig::default();
        let r = GateOutcome::Reject {
            gate: GateKind::Line,
            distance: 0.0,
        };
        // worst truncation is base · 3
        assert!(r.penalty(g.gate_penalty_base) >= 3.0 * g.gate_penalty_base);
        assert_eq!(GateOutcome::Pass.penalty(g.gate_penalty_base), 0.0);
    }

    proptest! {
        #[test]
        fn crisp_plan_always_passes(v in proptest::collection::vec(0u32..4, 1..12), cost in 1.0f64..1e4) {
            let crisp = ExpansionPlan::new(v);
            prop_assume!(crisp.total_lines() > 0);
            let s = GateState::new(GateConfig::default(), crisp.clone(), cost);
            prop_assert!(s.screen(&crisp, cost).passed());
        }

        #[test]
        fn ceiling_never_rises(costs in proptest::collection::vec(100.0f64..500.0, 1..20)) {
            let mut s = GateState::new(GateConfig::default(), plan(&[1]), 100.0);
            let mut last = s.v_ulim();
            for c in costs {
                s.record_feasible(c);
                prop_assert!(s.v_ulim() <= last && s.v_ulim() >= 100.0);
                last = s.v_ulim();
            }
        }
    }
}
