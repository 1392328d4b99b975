use nalgebra::{DMatrix, DVector};

use super::{assign_slack_power, Model, OperatingPoint, PfSolution};
use crate::network::{check_connectivity, ExpandedNetwork, NetworkCase};

/// Linear DC power flow `B θ = P` with the slack angle fixed at zero.
///
/// `p_gen` is MW per generator, `load_p` MW per bus. The slack bus absorbs
/// any imbalance. An islanded network is reported as not converged.
pub fn solve_dc_pf(
    case: &NetworkCase,
    net: &ExpandedNetwork,
    p_gen: &[f64],
    load_p: &[f64],
) -> PfSolution {
    let n = case.buses.len();
    let base = case.base_mva;
    let slack = case.slack().unwrap_or(0);
    let mut inj = vec![0.0; n];
    for (g, gen) in case.generators.iter().enumerate() {
        inj[gen.bus] += p_gen[g];
    }
    for i in 0..n {
        inj[i] = (inj[i] - load_p[i]) / base;
    }

    let failed = |p_gen: &[f64]| PfSolution {
        model: Model::Dc,
        point: OperatingPoint {
            v: vec![1.0; n],
            theta: vec![0.0; n],
            p_gen: p_gen.to_vec(),
            q_gen: vec![0.0; p_gen.len()],
        },
        converged: false,
        iterations: 0,
        max_mismatch: f64::INFINITY,
        mismatch: None,
    };
    if !check_connectivity(case, net) {
        return failed(p_gen);
    }

    // reduced index: every bus but the slack
    let idx: Vec<usize> = (0..n).filter(|&i| i != slack).collect();
    let mut pos = vec![usize::MAX; n];
    for (r, &i) in idx.iter().enumerate() {
        pos[i] = r;
    }
    let mut b = DMatrix::<f64>::zeros(idx.len(), idx.len());
    for (l, c) in case.corridors.iter().enumerate() {
        let m = net.multiplicity()[l];
        if m <= 0.0 {
            continue;
        }
        let y = m / c.x;
        let (f, t) = (pos[c.from], pos[c.to]);
        if f != usize::MAX {
            b[(f, f)] += y;
        }
        if t != usize::MAX {
            b[(t, t)] += y;
        }
        if f != usize::MAX && t != usize::MAX {
            b[(f, t)] -= y;
            b[(t, f)] -= y;
        }
    }
    let rhs = DVector::from_iterator(idx.len(), idx.iter().map(|&i| inj[i]));
    let Some(sol) = b.lu().solve(&rhs) else {
        return failed(p_gen);
    };
    let mut theta = vec![0.0; n];
    for (r, &i) in idx.iter().enumerate() {
        theta[i] = sol[r];
    }

    // recompute injections from flows to get the residual and the slack power
    let mut calc = vec![0.0; n];
    for (l, c) in case.corridors.iter().enumerate() {
        let m = net.multiplicity()[l];
        if m <= 0.0 {
            continue;
        }
        let flow = m * (theta[c.from] - theta[c.to]) / c.x;
        calc[c.from] += flow;
        calc[c.to] -= flow;
    }
    let max_mismatch = idx
        .iter()
        .map(|&i| (calc[i] - inj[i]).abs())
        .fold(0.0, f64::max);

    let mut p_out = p_gen.to_vec();
    assign_slack_power(case, &mut p_out, slack, (calc[slack] - inj[slack]) * base);

    PfSolution {
        model: Model::Dc,
        point: OperatingPoint {
            v: vec![1.0; n],
            theta,
            p_gen: p_out,
            q_gen: vec![0.0; p_gen.len()],
        },
        converged: max_mismatch.is_finite(),
        iterations: 1,
        max_mismatch,
        mismatch: None,
    }
}
