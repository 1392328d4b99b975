use num_complex::Complex64;
use serde::Serialize;

use super::{Model, PfSolution};
use crate::network::{ExpandedNetwork, NetworkCase};

/// Flows on one circuit of each corridor, in MW / MVAr / MVA.
///
/// Parallel circuits in a corridor are identical, so one circuit's flow
/// describes them all. Corridors without an energized circuit read zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchFlowSet {
    pub p_from: Vec<f64>,
    pub q_from: Vec<f64>,
    pub p_to: Vec<f64>,
    pub q_to: Vec<f64>,
    pub s_from: Vec<f64>,
    pub s_to: Vec<f64>,
}

impl BranchFlowSet {
    fn zeros(n: usize) -> Self {
        BranchFlowSet {
            p_from: vec![0.0; n],
            q_from: vec![0.0; n],
            p_to: vec![0.0; n],
            q_to: vec![0.0; n],
            s_from: vec![0.0; n],
            s_to: vec![0.0; n],
        }
    }

    /// Real power losses of all circuits, MW.
    pub fn total_losses(&self, net: &ExpandedNetwork) -> f64 {
        self.p_from
            .iter()
            .zip(&self.p_to)
            .zip(net.multiplicity())
            .map(|((a, b), m)| m * (a + b))
            .sum()
    }
}

pub fn branch_flows(sol: &PfSolution, case: &NetworkCase, net: &ExpandedNetwork) -> BranchFlowSet {
    let mut out = BranchFlowSet::zeros(case.corridors.len());
    let (v, th) = (&sol.point.v, &sol.point.theta);
    let base = case.base_mva;
    for (l, c) in case.corridors.iter().enumerate() {
        if !net.is_energized(l) {
            continue;
        }
        match sol.model {
            Model::Dc => {
                let p = (th[c.from] - th[c.to]) / c.x * base;
                out.p_from[l] = p;
                out.p_to[l] = -p;
                out.s_from[l] = p.abs();
                out.s_to[l] = p.abs();
            }
            Model::Ac => {
                let vf = Complex64::from_polar(v[c.from], th[c.from]);
                let vt = Complex64::from_polar(v[c.to], th[c.to]);
                let ys = c.series_admittance();
                let ysh = Complex64::new(0.0, c.b / 2.0);
                let i_f = (vf - vt) * ys + vf * ysh;
                let i_t = (vt - vf) * ys + vt * ysh;
                let s_f = vf * i_f.conj() * base;
                let s_t = vt * i_t.conj() * base;
                out.p_from[l] = s_f.re;
                out.q_from[l] = s_f.im;
                out.p_to[l] = s_t.re;
                out.q_to[l] = s_t.im;
                out.s_from[l] = s_f.re.hypot(s_f.im);
                out.s_to[l] = s_t.re.hypot(s_t.im);
            }
        }
    }
    out
}
