//! Brute-force references shared by the suites.

use nalgebra::{DMatrix, DVector};
use wta::lp::{ConcaveBound, LpProblem, Relation};

/// Best vertex of a bounded LP by enumerating every choice of `n` active
/// hyperplanes among rows and bounds. `None` when no vertex is feasible.
pub fn vertex_oracle(p: &LpProblem) -> Option<f64> {
    let n = p.num_vars();
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for r in &p.rows {
        let mut a = vec![0.0; n];
        for &(j, v) in &r.terms {
            a[j] += v;
        }
        planes.push((a, r.rhs));
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        planes.push((e.clone(), p.lower[j]));
        planes.push((e, p.upper[j]));
    }
    let k = planes.len();
    let mut best: Option<f64> = None;
    let mut pick: Vec<usize> = (0..n).collect();
    loop {
        let a = DMatrix::from_fn(n, n, |i, j| planes[pick[i]].0[j]);
        let b = DVector::from_fn(n, |i, _| planes[pick[i]].1);
        if let Some(x) = a.lu().solve(&b) {
            let x: Vec<f64> = x.iter().copied().collect();
            let tol = 1e-9;
            let in_bounds = (0..n).all(|j| x[j] >= p.lower[j] - tol && x[j] <= p.upper[j] + tol);
            let rows_ok = p.rows.iter().all(|r| r.violation(&x) <= tol * (1.0 + r.rhs.abs()));
            if in_bounds && rows_ok {
                let f = p.objective(&x);
                best = Some(best.map_or(f, |b: f64| b.min(f)));
            }
        }
        // next combination
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if pick[i] < k - n + i {
                pick[i] += 1;
                for t in i + 1..n {
                    pick[t] = pick[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `min c1 P1 + c2 P2` subject to `f1(P1) + f2(P2) >= d`, by a 1000-point grid
/// over `P1` with the smaller root for `P2`, refined by ternary search.
pub fn two_source_oracle(c: [f64; 2], curves: [(f64, f64, f64); 2], d: f64) -> Option<f64> {
    let f = |k: usize, p: f64| curves[k].0 * p * p + curves[k].1 * p;
    let root = |k: usize, e: f64| -> Option<f64> {
        if e <= 0.0 {
            return Some(0.0);
        }
        let (a, b, pmax) = curves[k];
        let r = if a == 0.0 {
            e / b
        } else {
            let disc = b * b + 4.0 * a * e;
            if disc < 0.0 {
                return None;
            }
            (-b + disc.sqrt()) / (2.0 * a)
        };
        (r <= pmax * (1.0 + 1e-12)).then_some(r)
    };
    let g = |p1: f64| root(1, d - f(0, p1)).map(|p2| c[0] * p1 + c[1] * p2);
    let pmax1 = curves[0].2;
    let grid: Vec<f64> = (0..=1000).map(|i| pmax1 * i as f64 / 1000.0).collect();
    let (mut k_best, mut best) = (usize::MAX, f64::INFINITY);
    for (k, &p) in grid.iter().enumerate() {
        if let Some(v) = g(p) {
            if v < best {
                best = v;
                k_best = k;
            }
        }
    }
    if k_best == usize::MAX {
        return None;
    }
    let (mut lo, mut hi) = (grid[k_best.saturating_sub(1)], grid[(k_best + 1).min(1000)]);
    let val = |p: f64| g(p).unwrap_or(f64::INFINITY);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        let (v1, v2) = (val(m1), val(m2));
        best = best.min(v1).min(v2);
        if v1 <= v2 {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    Some(best)
}

pub fn two_source_lp(c: [f64; 2], curves: [(f64, f64, f64); 2], d: f64) -> (LpProblem, Vec<ConcaveBound>) {
    let mut p = LpProblem::new();
    let mut bounds = Vec::new();
    let mut demand = Vec::new();
    for k in 0..2 {
        let (a, b, pmax) = curves[k];
        let pv = p.add_var(format!("P{k}"), 0.0, pmax, c[k]);
        let ev = p.add_var(format!("E{k}"), 0.0, f64::INFINITY, 0.0);
        demand.push((ev, 1.0));
        bounds.push(ConcaveBound {
            name: format!("curve{k}"),
            e_var: ev,
            p_var: pv,
            a,
            b,
        });
    }
    p.add_row("demand", demand, Relation::Ge, d);
    (p, bounds)
}

/// Flows from the full nodal equations with node `reference` grounded.
pub fn dc_oracle(n: usize, branches: &[(usize, usize, f64)], inj: &[f64], reference: usize) -> Vec<f64> {
    let mut lap = DMatrix::<f64>::zeros(n, n);
    for &(a, b, s) in branches {
        lap[(a, a)] += s;
        lap[(b, b)] += s;
        lap[(a, b)] -= s;
        lap[(b, a)] -= s;
    }
    for k in 0..n {
        lap[(reference, k)] = 0.0;
    }
    lap[(reference, reference)] = 1.0;
    let mut rhs = DVector::from_column_slice(inj);
    rhs[reference] = 0.0;
    let theta = lap.lu().solve(&rhs).unwrap();
    branches.iter().map(|&(a, b, s)| s * (theta[a] - theta[b])).collect()
}
