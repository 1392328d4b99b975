use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{assign_slack_power, LoadState, Model, OperatingPoint, PfOptions, PfSolution};
use crate::network::{BusKind, ExpandedNetwork, GenKind, NetworkCase};

/// Dense bus admittance matrix; parallel circuits scale by multiplicity.
pub(crate) fn build_ybus(case: &NetworkCase, net: &ExpandedNetwork) -> DMatrix<Complex64> {
    let n = case.buses.len();
    let mut y = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (l, c) in case.corridors.iter().enumerate() {
        let m = net.multiplicity()[l];
        if m <= 0.0 {
            continue;
        }
        let ys = c.series_admittance() * m;
        let ysh = Complex64::new(0.0, c.b / 2.0 * m);
        y[(c.from, c.from)] += ys + ysh;
        y[(c.to, c.to)] += ys + ysh;
        y[(c.from, c.to)] -= ys;
        y[(c.to, c.from)] -= ys;
    }
    y
}

fn injections(y: &DMatrix<Complex64>, v: &[f64], th: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = v.len();
    let mut p = vec![0.0; n];
    let mut q = vec![0.0; n];
    for i in 0..n {
        for k in 0..n {
            let yik = y[(i, k)];
            if yik.re == 0.0 && yik.im == 0.0 {
                continue;
            }
            let (s, c) = (th[i] - th[k]).sin_cos();
            p[i] += v[i] * v[k] * (yik.re * c + yik.im * s);
            q[i] += v[i] * v[k] * (yik.re * s - yik.im * c);
        }
    }
    (p, q)
}

/// Newton–Raphson in polar form from a flat start.
///
/// `p_gen` holds MW setpoints per generator (the slack unit's value is
/// replaced by whatever balances the network). PV buses hold their voltage
/// setpoint until their units' reactive limits bind, then become PQ at the
/// limit. Non-convergence is reported in the result, never as an error.
pub fn solve_ac_pf(
    case: &NetworkCase,
    net: &ExpandedNetwork,
    p_gen: &[f64],
    loads: &LoadState,
    opts: &PfOptions,
) -> PfSolution {
    let n = case.buses.len();
    let base = case.base_mva;
    let y = build_ybus(case, net);
    let slack = case.slack().unwrap_or(0);

    let mut thermal_at = vec![false; n];
    let mut q_lo = vec![0.0; n];
    let mut q_hi = vec![0.0; n];
    let mut p_spec = vec![0.0; n];
    for (g, gen) in case.generators.iter().enumerate() {
        p_spec[gen.bus] += p_gen[g];
        if gen.kind == GenKind::Thermal {
            thermal_at[gen.bus] = true;
            q_lo[gen.bus] += gen.q_min;
            q_hi[gen.bus] += gen.q_max;
        }
    }
    for (p, load) in p_spec.iter_mut().zip(&loads.p) {
        *p = (*p - load) / base;
    }
    // Fixed reactive injection for PQ buses, before any generator output.
    let q_fixed: Vec<f64> = (0..n)
        .map(|i| (case.buses[i].q_reac - loads.q[i]) / base)
        .collect();

    let mut kind: Vec<BusKind> = case
        .buses
        .iter()
        .enumerate()
        .map(|(i, b)| match b.kind {
            BusKind::Slack => BusKind::Slack,
            BusKind::Pv if thermal_at[i] => BusKind::Pv,
            _ => BusKind::Pq,
        })
        .collect();
    // Reactive generation pinned at a limit for buses switched PV -> PQ.
    let mut q_pinned = vec![0.0; n];

    let mut v: Vec<f64> = (0..n)
        .map(|i| match kind[i] {
            BusKind::Slack | BusKind::Pv => case.buses[i].v_set,
            BusKind::Pq => 1.0,
        })
        .collect();
    let mut th = vec![0.0; n];

    let mut converged = false;
    let mut iterations = 0;
    let mut max_mismatch;
    let mut last_mismatch = Vec::new();

    loop {
        let (pc, qc) = injections(&y, &v, &th);
        let ang: Vec<usize> = (0..n).filter(|&i| kind[i] != BusKind::Slack).collect();
        let mag: Vec<usize> = (0..n).filter(|&i| kind[i] == BusKind::Pq).collect();
        let mut f = Vec::with_capacity(ang.len() + mag.len());
        for &i in &ang {
            f.push(p_spec[i] - pc[i]);
        }
        for &i in &mag {
            f.push(q_fixed[i] + q_pinned[i] - qc[i]);
        }
        max_mismatch = f.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        if !max_mismatch.is_finite() {
            break;
        }

        // PV -> PQ switching once the solution is close.
        let mut switched = false;
        if opts.enforce_q_limits && max_mismatch < 1e-3 {
            for i in 0..n {
                if kind[i] != BusKind::Pv {
                    continue;
                }
                let q_gen = qc[i] - q_fixed[i];
                if q_gen > q_hi[i] / base + 1e-9 {
                    kind[i] = BusKind::Pq;
                    q_pinned[i] = q_hi[i] / base;
                    switched = true;
                } else if q_gen < q_lo[i] / base - 1e-9 {
                    kind[i] = BusKind::Pq;
                    q_pinned[i] = q_lo[i] / base;
                    switched = true;
                }
            }
        }
        if switched {
            if iterations >= opts.max_iterations {
                break;
            }
            continue;
        }
        last_mismatch = f.clone();
        if max_mismatch <= opts.tolerance {
            converged = true;
            break;
        }
        if iterations >= opts.max_iterations {
            break;
        }
        iterations += 1;

        let na = ang.len();
        let dim = na + mag.len();
        let mut pos_a = vec![usize::MAX; n];
        let mut pos_m = vec![usize::MAX; n];
        for (r, &i) in ang.iter().enumerate() {
            pos_a[i] = r;
        }
        for (r, &i) in mag.iter().enumerate() {
            pos_m[i] = na + r;
        }
        let mut jac = DMatrix::<f64>::zeros(dim, dim);
        for i in 0..n {
            let (ra, rm) = (pos_a[i], pos_m[i]);
            if ra == usize::MAX {
                continue;
            }
            for k in 0..n {
                let yik = y[(i, k)];
                if k != i && yik.re == 0.0 && yik.im == 0.0 {
                    continue;
                }
                let (ca, cm) = (pos_a[k], pos_m[k]);
                if k == i {
                    let (g, b) = (yik.re, yik.im);
                    let vi = v[i];
                    jac[(ra, ra)] = -qc[i] - b * vi * vi;
                    if cm != usize::MAX {
                        jac[(ra, cm)] = pc[i] / vi + g * vi;
                    }
                    if rm != usize::MAX {
                        jac[(rm, ra)] = pc[i] - g * vi * vi;
                        jac[(rm, rm)] = qc[i] / vi - b * vi;
                    }
                    continue;
                }
                let (s, c) = (th[i] - th[k]).sin_cos();
                let (g, b) = (yik.re, yik.im);
                let t1 = g * s - b * c;
                let t2 = g * c + b * s;
                if ca != usize::MAX {
                    jac[(ra, ca)] = v[i] * v[k] * t1;
                    if rm != usize::MAX {
                        jac[(rm, ca)] = -v[i] * v[k] * t2;
                    }
                }
                if cm != usize::MAX {
                    jac[(ra, cm)] = v[i] * t2;
                    if rm != usize::MAX {
                        jac[(rm, cm)] = v[i] * t1;
                    }
                }
            }
        }
        let rhs = DVector::from_vec(f);
        let Some(dx) = jac.lu().solve(&rhs) else {
            break;
        };
        for &i in &ang {
            th[i] += dx[pos_a[i]];
        }
        for &i in &mag {
            v[i] += dx[pos_m[i]];
        }
        if v.iter().any(|&x| !(x > 0.05) || x > 5.0) || th.iter().any(|x| !x.is_finite()) {
            break;
        }
    }

    let (pc, qc) = injections(&y, &v, &th);
    let mut p_out = p_gen.to_vec();
    let residual = (pc[slack] - p_spec[slack]) * base;
    assign_slack_power(case, &mut p_out, slack, residual);

    let mut q_out = vec![0.0; case.generators.len()];
    for i in 0..n {
        if !thermal_at[i] {
            continue;
        }
        let q_bus = (qc[i] - q_fixed[i]) * base;
        let units: Vec<usize> = case
            .generators
            .iter()
            .enumerate()
            .filter(|(_, g)| g.bus == i && g.kind == GenKind::Thermal)
            .map(|(g, _)| g)
            .collect();
        let range: f64 = units
            .iter()
            .map(|&g| case.generators[g].q_max - case.generators[g].q_min)
            .sum();
        for &g in &units {
            let gen = &case.generators[g];
            let share = if range > 0.0 {
                (gen.q_max - gen.q_min) / range
            } else {
                1.0 / units.len() as f64
            };
            q_out[g] = share * q_bus;
        }
    }

    PfSolution {
        model: Model::Ac,
        point: OperatingPoint {
            v,
            theta: th,
            p_gen: p_out,
            q_gen: q_out,
        },
        converged,
        iterations,
        max_mismatch,
        mismatch: opts.debug_mismatch.then_some(last_mismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::*;
    use crate::network::{apply_plan, Contingency, ExpansionPlan, NetworkCase};

    fn two_bus(x: f64, load: f64) -> NetworkCase {
        let mut case = three_bus();
        case.buses.truncate(2);
        case.buses[1].p_demand = load;
        case.corridors = vec![corridor(1, 0, 1, x, 1)];
        case.generators = vec![thermal(0, 500.0, load, 1.0)];
        case
    }

    /// Independent Gauss–Seidel solve of the 2-bus PQ problem.
    fn gauss_seidel_two_bus(x: f64, p_load_pu: f64, q_load_pu: f64) -> Complex64 {
        let y = Complex64::new(0.0, -1.0 / x);
        let v1 = Complex64::new(1.0, 0.0);
        let s2 = Complex64::new(-p_load_pu, -q_load_pu);
        let mut v2 = Complex64::new(1.0, 0.0);
        for _ in 0..10_000 {
            v2 = ((s2 / v2).conj() + y * v1) / y;
        }
        v2
    }

    #[test]
    fn two_bus_matches_gauss_seidel() {
        let case = two_bus(0.1, 50.0);
        let net = apply_plan(&case, &ExpansionPlan::empty(1), &Contingency::BASE).unwrap();
        let loads = LoadState::nominal(&case);
        let sol = solve_ac_pf(&case, &net, &[50.0], &loads, &PfOptions::default());
        assert!(sol.converged);
        let oracle = gauss_seidel_two_bus(0.1, 0.5, 0.0);
        assert!((sol.point.v[1] - oracle.norm()).abs() < 1e-6);
        assert!((sol.point.theta[1] - oracle.arg()).abs() < 1e-6);
    }

    #[test]
    fn zero_load_flat_profile() {
        let case = two_bus(0.1, 0.0);
        let net = apply_plan(&case, &ExpansionPlan::empty(1), &Contingency::BASE).unwrap();
        let loads = LoadState::nominal(&case);
        let sol = solve_ac_pf(&case, &net, &[0.0], &loads, &PfOptions::default());
        assert!(sol.converged);
        assert!(sol.point.v.iter().all(|&v| (v - 1.0).abs() < 1e-12));
        assert!(sol.point.theta.iter().all(|&t| t.abs() < 1e-12));
    }

    #[test]
    fn impossible_transfer_does_not_converge() {
        let case = two_bus(0.5, 900.0);
        let net = apply_plan(&case, &ExpansionPlan::empty(1), &Contingency::BASE).unwrap();
        let loads = LoadState::nominal(&case);
        let sol = solve_ac_pf(&case, &net, &[900.0], &loads, &PfOptions::default());
        assert!(!sol.converged);
    }

    #[test]
    fn pv_bus_switches_at_q_limit() {
        let mut case = three_bus();
        case.buses[2].kind = BusKind::Pv;
        case.buses[2].v_set = 1.10;
        case.generators.push(thermal(2, 100.0, 0.0, 0.0));
        case.generators[1].q_min = -5.0;
        case.generators[1].q_max = 5.0;
        case.generators[0].participation = 1.0;
        let net = apply_plan(&case, &ExpansionPlan::empty(3), &Contingency::BASE).unwrap();
        let loads = LoadState::nominal(&case);
        let opts = PfOptions {
            debug_mismatch: true,
            ..PfOptions::default()
        };
        let sol = solve_ac_pf(&case, &net, &[100.0, 0.0], &loads, &opts);
        assert!(sol.converged);
        assert!((sol.point.q_gen[1] - 5.0).abs() < 1e-4);
        assert!(sol.point.v[2] < 1.10);
        assert!(sol.mismatch.is_some());
    }
}
