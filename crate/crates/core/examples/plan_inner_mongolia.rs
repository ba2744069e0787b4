//! Solves the bundled twelve-region network and prints the plan.

use wta::data_io::bundled_scenario;
use wta::planner::{solve_configuration, Mode};

fn main() -> wta::Result<()> {
    let s = bundled_scenario()?;
    let t0 = std::time::Instant::now();
    let sol = solve_configuration(&s)?;
    let d = &sol.diagnostics;
    println!(
        "{} variables, {} rows, {} linearization rounds, {} cuts, {} pivots, {:.2?}",
        d.variables,
        d.rows,
        d.slp_iterations,
        d.cuts,
        d.lp_iterations,
        t0.elapsed()
    );
    println!("region  P_RE(MW)  E(MWh/d)  EL(MW)  BUF(kg)  HS(kg)  A_L/A_E/A_H (t/d)");
    for r in sol.regions.iter().filter(|r| r.p_re > 0.0 || r.ammonia() > 0.0) {
        println!(
            "{:>6} {:>9.2} {:>9.1} {:>7.2} {:>8.0} {:>7.0}  {:.1}/{:.1}/{:.1}",
            r.id,
            r.p_re,
            r.e,
            r.p_el(),
            r.m_buf(),
            r.m_hs,
            r.a_local / 1000.0,
            r.a_en / 1000.0,
            r.a_hsc / 1000.0
        );
    }
    for f in sol.hydrogen.iter().filter(|f| f.hydrogen > 0.0) {
        println!(
            "truck {:>2} -> {:>2}  {:>5.0} km  {:>9.1} kg/d",
            f.from, f.to, f.km, f.hydrogen
        );
    }
    for f in sol.electricity.iter().filter(|f| f.energy > 0.0) {
        println!("grid  {:>2} -> {:>2}  {:>9.1} MWh/d", f.from, f.to, f.energy);
    }
    for st in &sol.stacks {
        println!(
            "LCOA {:>2} {:<5} {:.4} €/kg on {:.1} t/d",
            st.region,
            st.mode.label(),
            st.lcoa,
            st.production / 1000.0
        );
    }
    if let Some(st) = sol.stack(12, Mode::Local) {
        let c = &st.components;
        println!(
            "region 12 local: RE {:.1}%  EL {:.1}%",
            100.0 * c.re / st.lcoa,
            100.0 * c.el / st.lcoa
        );
    }
    println!("mean LCOA {:.4} €/kg", sol.mean_lcoa());
    println!("KKT {:?}", d.kkt);
    println!("check max {:.2e}, failures {:?}", d.check.max(), d.check.failures);
    Ok(())
}
