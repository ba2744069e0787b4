//! Local conversion in one region over a range of daily wind energies.

use wta::data_io::bundled_scenario;
use wta::planner::local_sweep;

fn main() -> wta::Result<()> {
    let s = bundled_scenario()?;
    let energies: Vec<f64> = (0..=10).map(|k| 50.0 * k as f64).collect();
    println!("    E(MWh/d)  P_RE(MW)  P_EL(MW)  BUF(kg)  LCOA(€/kg)");
    for r in local_sweep(&s, 12, &energies)? {
        match (r.lcoa, &r.note) {
            (Some(l), _) => println!(
                "{:>12.0} {:>9.2} {:>9.2} {:>8.1} {:>11.4}",
                r.e, r.p_re, r.p_el, r.m_buf, l
            ),
            (None, Some(n)) => println!("{:>12.0}  {n}", r.e),
            (None, None) => println!("{:>12.0}  nothing to build", r.e),
        }
    }
    Ok(())
}
