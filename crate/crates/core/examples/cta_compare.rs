//! Coal and CO2 avoided by replacing coal-based ammonia, and the cost gap.

use wta::data_io::bundled_scenario;
use wta::economics::cta_comparison;
use wta::planner::solve_configuration;

fn main() -> wta::Result<()> {
    let s = bundled_scenario()?;
    let e = &s.economics;
    let wind = solve_configuration(&s)?.mean_lcoa();
    let production = 1.06e6;
    let c = cta_comparison(production, wind, e)?;
    println!("{:.2} Mt/yr replaced", production / 1e6);
    println!("coal saved   {:.2} Mtce/yr", c.coal_saved / 1e6);
    println!("CO2 avoided  {:.2} Mt/yr", c.co2_avoided / 1e6);
    println!(
        "wind-based {wind:.4} €/kg vs coal-based {:.2} €/kg: gap {:+.4}",
        e.cta_lcoa, c.lcoa_gap
    );
    let exact = e.coal_factor.exact().zip(e.co2_factor.exact());
    if let Some((coal, co2)) = exact {
        println!("factors as rationals: {coal} tce/t, {co2} t CO2/t");
    }
    Ok(())
}
