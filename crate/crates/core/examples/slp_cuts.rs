//! Capacity needed for a daily energy target under a concave wind potential
//! curve, found by adding tangent cuts.

use wta::lp::{slp_solve, ConcaveBound, LpProblem, Relation, SlpOptions};

fn main() -> wta::Result<()> {
    let mut p = LpProblem::new();
    let cap = p.add_var("P", 0.0, 5000.0, 1.0);
    let energy = p.add_var("E", 0.0, f64::INFINITY, 0.0);
    p.add_row("target", vec![(energy, 1.0)], Relation::Ge, 26862.0);
    let curve = ConcaveBound {
        name: "wind".into(),
        e_var: energy,
        p_var: cap,
        a: -6.34e-5,
        b: 11.44,
    };
    let out = slp_solve(&p, std::slice::from_ref(&curve), &SlpOptions::default())?;
    for c in &out.cuts {
        println!(
            "round {:>2}: tangent at P = {:>8.2}  E <= {:.4} P + {:.2}",
            c.iteration, c.at, c.slope, c.intercept
        );
    }
    let pv = out.solution.x[cap];
    println!(
        "P = {pv:.2} MW after {} rounds, curve gives {:.1} MWh/d, converged {}",
        out.iterations,
        curve.value(pv),
        out.converged
    );
    Ok(())
}
