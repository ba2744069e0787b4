//! Post-hoc optimality check that only looks at the problem data, the primal
//! point and the row duals. It shares no state with the simplex.

use super::{LpProblem, LpSolution, LpStatus, Relation};

/// Worst primal, dual-sign and complementarity residuals of a solution.
///
/// Primal residuals are scaled by `max(1, |rhs|)` or `max(1, |bound|)`;
/// dual residuals by `max(1, max |cost|)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct KktReport {
    pub primal: f64,
    pub dual: f64,
    pub complementarity: f64,
}

impl KktReport {
    pub fn max(&self) -> f64 {
        self.primal.max(self.dual).max(self.complementarity)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

fn bound_residuals(d: f64, x: f64, lo: f64, up: f64, scale: f64) -> (f64, f64) {
    let d = d / scale;
    let mut dual = 0.0f64;
    if lo == f64::NEG_INFINITY {
        dual = dual.max(d);
    }
    if up == f64::INFINITY {
        dual = dual.max(-d);
    }
    let to_lo = if lo.is_finite() {
        (x - lo).abs() / lo.abs().max(1.0)
    } else {
        f64::INFINITY
    };
    let to_up = if up.is_finite() {
        (up - x).abs() / up.abs().max(1.0)
    } else {
        f64::INFINITY
    };
    let comp = if d > 0.0 { d.min(to_lo) } else { (-d).min(to_up) };
    (dual, comp)
}

/// Evaluates the KKT conditions of `sol` for `p`. Non-optimal solutions get an
/// infinite report.
pub fn verify_kkt(p: &LpProblem, sol: &LpSolution) -> KktReport {
    if sol.status != LpStatus::Optimal || sol.x.len() != p.num_vars() || sol.duals.len() != p.num_rows() {
        return KktReport {
            primal: f64::INFINITY,
            dual: f64::INFINITY,
            complementarity: f64::INFINITY,
        };
    }
    let x = &sol.x;
    let y = &sol.duals;
    let scale = p.cost.iter().fold(1.0f64, |s, c| s.max(c.abs()));
    let mut rep = KktReport::default();

    let mut reduced = p.cost.clone();
    for (row, &yi) in p.rows.iter().zip(y) {
        for &(j, a) in &row.terms {
            reduced[j] -= yi * a;
        }
    }
    for j in 0..p.num_vars() {
        let (lo, up) = (p.lower[j], p.upper[j]);
        let viol = (lo - x[j]).max(x[j] - up).max(0.0);
        let mag = if x[j] < lo { lo } else { up }.abs().max(1.0);
        rep.primal = rep.primal.max(viol / mag);
        let (dual, comp) = bound_residuals(reduced[j], x[j], lo, up, scale);
        rep.dual = rep.dual.max(dual);
        rep.complementarity = rep.complementarity.max(comp);
    }
    for (row, &yi) in p.rows.iter().zip(y) {
        rep.primal = rep.primal.max(row.violation(x) / row.rhs.abs().max(1.0));
        let (lo, up) = match row.relation {
            Relation::Le => (f64::NEG_INFINITY, row.rhs),
            Relation::Ge => (row.rhs, f64::INFINITY),
            Relation::Eq => (row.rhs, row.rhs),
        };
        let (dual, comp) = bound_residuals(yi, row.activity(x), lo, up, scale);
        rep.dual = rep.dual.max(dual);
        rep.complementarity = rep.complementarity.max(comp);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{solve_lp, LpOptions};

    #[test]
    fn wrong_dual_sign_is_caught() {
        let mut p = LpProblem::new();
        let x = p.add_var("x", 0.0, f64::INFINITY, -1.0);
        p.add_row("cap", vec![(x, 1.0)], Relation::Le, 5.0);
        let mut sol = solve_lp(&p, &LpOptions::default()).unwrap();
        assert!(verify_kkt(&p, &sol).passes(1e-9));
        sol.duals[0] = 1.0;
        assert!(verify_kkt(&p, &sol).dual > 0.5);
    }

    #[test]
    fn slack_row_with_price_breaks_complementarity() {
        let mut p = LpProblem::new();
        let x = p.add_var("x", 0.0, 3.0, -1.0);
        p.add_row("loose", vec![(x, 1.0)], Relation::Le, 5.0);
        let mut sol = solve_lp(&p, &LpOptions::default()).unwrap();
        assert!(verify_kkt(&p, &sol).passes(1e-9));
        sol.duals[0] = -0.5;
        assert!(verify_kkt(&p, &sol).complementarity > 0.1);
    }
}
