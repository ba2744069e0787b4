//! A small bounded LP solved from scratch, verified, and written in LP format.

use wta::lp::{solve_lp, verify_kkt, write_lp_file, LpOptions, LpProblem, Relation};

fn main() -> wta::Result<()> {
    // Two plants with capacity limits meet a demand at least cost.
    let mut p = LpProblem::new();
    let x = p.add_var("coal", 0.0, 60.0, 3.0);
    let y = p.add_var("wind", 0.0, 45.0, 1.0);
    let z = p.add_var("gas", 0.0, f64::INFINITY, 5.0);
    p.add_row("demand", vec![(x, 1.0), (y, 1.0), (z, 1.0)], Relation::Eq, 100.0);
    p.add_row("ramp", vec![(x, 1.0), (z, -2.0)], Relation::Le, 40.0);
    let sol = solve_lp(&p, &LpOptions::default())?;
    println!(
        "{:?} objective {:.3} after {} pivots",
        sol.status, sol.objective, sol.iterations
    );
    for (name, v) in p.names.iter().zip(&sol.x) {
        println!("  {name:<5} {v:>8.3}");
    }
    println!("duals {:?}", sol.duals);
    println!("{:?}", verify_kkt(&p, &sol));
    let mut text = Vec::new();
    write_lp_file(&p, &mut text).expect("in-memory write");
    print!("{}", String::from_utf8_lossy(&text));
    Ok(())
}
