//! Shortest truck routes, the distance cap and the cost of hauling hydrogen.

use wta::data_io::{bundled_scenario, hsc_model};
use wta::hsc::transport_cost_basis;

fn main() -> wta::Result<()> {
    let s = bundled_scenario()?;
    let m = hsc_model(&s)?;
    let e = &s.economics;
    println!("{} routes within {} km", m.paths.len(), m.d_max);
    println!("from  to    km     u  €/kg NH3");
    for p in &m.paths {
        let u = m.utilization(p.km);
        let t = transport_cost_basis(1000.0, p.km, u, e)?;
        let per_kg = (t.haulage() + e.hs_daily(t.storage_kg)) / (1000.0 * e.k_hta.value());
        println!(
            "{:>4} {:>3} {:>5.0} {:>5.2} {:>9.4}",
            s.regions[p.from].id, s.regions[p.to].id, p.km, u, per_kg
        );
    }
    let into_1: Vec<usize> = (1..s.regions.len())
        .filter(|&i| m.is_feasible(i, 0))
        .map(|i| s.regions[i].id)
        .collect();
    println!("suppliers within reach of region 1: {into_1:?}");
    let storage = m.storage_capacity(s.regions.len(), &[(1, 0, 300.0), (1, 5, 188.41)])?;
    println!("storage at region 2 for 488.41 kg/d of shipments: {:.2} kg", storage[1]);
    Ok(())
}
