//! Successive linearization of concave upper bounds `E <= a P^2 + b P`.
//!
//! With `a <= 0` the admissible set is convex, so every tangent line is an
//! outer approximation that never cuts off a feasible point. Each round adds
//! the tangent at the current `P` for every bound that is still violated.

use super::{solve_lp_warm, Basis, LpError, LpOptions, LpProblem, LpSolution, LpStatus, Relation};

/// `E <= a P^2 + b P` on variables `e_var` and `p_var`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcaveBound {
    pub name: String,
    pub e_var: usize,
    pub p_var: usize,
    pub a: f64,
    pub b: f64,
}

impl ConcaveBound {
    pub fn value(&self, p: f64) -> f64 {
        self.a * p * p + self.b * p
    }

    /// Relative excess of `e` over the curve at `p`.
    pub fn violation(&self, e: f64, p: f64) -> f64 {
        let f = self.value(p);
        (e - f) / f.abs().max(1.0)
    }

    /// Tangent at `p0` as `(slope, intercept)`: `E <= slope * P + intercept`.
    pub fn tangent(&self, p0: f64) -> (f64, f64) {
        (2.0 * self.a * p0 + self.b, -self.a * p0 * p0)
    }
}

/// One tangent cut added during the iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub iteration: usize,
    pub bound: usize,
    pub at: f64,
    pub slope: f64,
    pub intercept: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlpOptions {
    pub lp: LpOptions,
    /// Relative curve violation accepted at convergence.
    pub cut_tol: f64,
    pub max_iter: usize,
}

impl Default for SlpOptions {
    fn default() -> Self {
        Self {
            lp: LpOptions::default(),
            cut_tol: 1e-6,
            max_iter: 50,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SlpOutcome {
    pub solution: LpSolution,
    /// The last LP solved, including seed rows and cuts.
    pub problem: LpProblem,
    pub cuts: Vec<Cut>,
    pub iterations: usize,
    pub lp_iterations: usize,
    pub converged: bool,
    /// Largest relative curve violation before any projection.
    pub max_violation: f64,
}

fn add_tangent(p: &mut LpProblem, c: &ConcaveBound, p0: f64, tag: &str) -> (f64, f64) {
    let (slope, intercept) = c.tangent(p0);
    p.add_row(
        format!("{}_{tag}", c.name),
        vec![(c.e_var, 1.0), (c.p_var, -slope)],
        Relation::Le,
        intercept,
    );
    (slope, intercept)
}

/// Solves `base` subject to the concave bounds. Every curve gets seed
/// tangents at `P = 0` and at the upper bound of its `P` variable; seeds are
/// not counted as cuts.
pub fn slp_solve(base: &LpProblem, bounds: &[ConcaveBound], opts: &SlpOptions) -> Result<SlpOutcome, LpError> {
    for c in bounds {
        if c.a > 0.0 || !c.a.is_finite() || !c.b.is_finite() {
            return Err(LpError::Invalid(format!("bound {} is not concave", c.name)));
        }
        if c.e_var >= base.num_vars() || c.p_var >= base.num_vars() {
            return Err(LpError::Invalid(format!(
                "bound {} references a missing variable",
                c.name
            )));
        }
    }
    let mut p = base.clone();
    for c in bounds {
        add_tangent(&mut p, c, 0.0, "seed0");
        let hi = base.upper[c.p_var];
        if c.a < 0.0 && hi.is_finite() && hi > 0.0 {
            add_tangent(&mut p, c, hi, "seed1");
        }
    }
    let mut cuts = Vec::new();
    let mut basis: Option<Basis> = None;
    let mut lp_iterations = 0;
    let mut iteration = 0;
    loop {
        iteration += 1;
        let mut sol = solve_lp_warm(&p, &opts.lp, basis.as_ref())?;
        lp_iterations += sol.iterations;
        if sol.status != LpStatus::Optimal {
            return Ok(SlpOutcome {
                solution: sol,
                problem: p,
                cuts,
                iterations: iteration,
                lp_iterations,
                converged: false,
                max_violation: f64::INFINITY,
            });
        }
        let viol: Vec<f64> = bounds
            .iter()
            .map(|c| c.violation(sol.x[c.e_var], sol.x[c.p_var]))
            .collect();
        let max_violation = viol.iter().fold(0.0f64, |m, v| m.max(*v));
        if max_violation <= opts.cut_tol || iteration >= opts.max_iter {
            let converged = max_violation <= opts.cut_tol;
            if !converged {
                project(&mut sol, bounds, base);
                sol.objective = base.objective(&sol.x);
            }
            sol.iterations = lp_iterations;
            return Ok(SlpOutcome {
                solution: sol,
                problem: p,
                cuts,
                iterations: iteration,
                lp_iterations,
                converged,
                max_violation,
            });
        }
        for (k, c) in bounds.iter().enumerate() {
            if viol[k] > opts.cut_tol {
                let at = sol.x[c.p_var];
                let (slope, intercept) = add_tangent(&mut p, c, at, &format!("cut{}", cuts.len()));
                cuts.push(Cut {
                    iteration,
                    bound: k,
                    at,
                    slope,
                    intercept,
                });
            }
        }
        basis = sol.basis.take();
    }
}

/// Restores curve feasibility after the iteration cap: `P` is raised to the
/// smaller root of `a P^2 + b P = E` when that root lies within bounds,
/// otherwise `E` is lowered onto the curve.
fn project(sol: &mut LpSolution, bounds: &[ConcaveBound], base: &LpProblem) {
    for c in bounds {
        let (e, p) = (sol.x[c.e_var], sol.x[c.p_var]);
        if c.violation(e, p) <= 0.0 {
            continue;
        }
        let root = smaller_root(c.a, c.b, e);
        match root {
            Some(r) if r <= base.upper[c.p_var] => sol.x[c.p_var] = r,
            _ => sol.x[c.e_var] = c.value(p),
        }
    }
}

/// Smallest nonnegative `P` with `a P^2 + b P = e`, if any.
pub(crate) fn smaller_root(a: f64, b: f64, e: f64) -> Option<f64> {
    if a == 0.0 {
        return (b > 0.0).then(|| e / b);
    }
    let disc = b * b + 4.0 * a * e;
    if disc < 0.0 {
        return None;
    }
    // Stable form of (-b + sqrt(disc)) / (2a) for a < 0.
    Some(2.0 * e / (b + disc.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(a: f64, b: f64, pmax: f64, e0: f64) -> (LpProblem, Vec<ConcaveBound>) {
        let mut p = LpProblem::new();
        let pv = p.add_var("P", 0.0, pmax, 1.0);
        let ev = p.add_var("E", 0.0, f64::INFINITY, 0.0);
        p.add_row("need", vec![(ev, 1.0)], Relation::Ge, e0);
        let c = ConcaveBound {
            name: "curve".into(),
            e_var: ev,
            p_var: pv,
            a,
            b,
        };
        (p, vec![c])
    }

    #[test]
    fn linear_curve_needs_no_cuts() {
        let (p, c) = single(0.0, 11.0, 1000.0, 110.0);
        let out = slp_solve(&p, &c, &SlpOptions::default()).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
        assert!(out.cuts.is_empty());
        assert!((out.solution.x[0] - 10.0).abs() < 1e-9);
    }

    #[test]
    fn minimum_capacity_hits_smaller_root() {
        let (p, c) = single(-0.0549, 13.99, 40.0, 400.0);
        let out = slp_solve(&p, &c, &SlpOptions::default()).unwrap();
        assert!(out.converged);
        let root = smaller_root(-0.0549, 13.99, 400.0).unwrap();
        assert!((out.solution.x[0] - root).abs() / root < 1e-5);
    }

    #[test]
    fn iteration_cap_projects_onto_curve() {
        let (p, c) = single(-0.0549, 13.99, 40.0, 400.0);
        let opts = SlpOptions {
            max_iter: 1,
            ..SlpOptions::default()
        };
        let out = slp_solve(&p, &c, &opts).unwrap();
        assert!(!out.converged);
        let (e, pv) = (out.solution.x[1], out.solution.x[0]);
        assert!(c[0].violation(e, pv) <= 1e-12);
    }

    #[test]
    fn smaller_root_solves_quadratic() {
        let r = smaller_root(-6.34e-5, 11.44, 26862.0).unwrap();
        assert!((-6.34e-5 * r * r + 11.44 * r - 26862.0).abs() < 1e-6);
        assert!(smaller_root(-1.0, 1.0, 1.0).is_none());
    }
}
