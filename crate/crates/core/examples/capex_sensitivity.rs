//! How the local cost in region 12 moves when wind and electrolyzer unit
//! costs fall.

use wta::data_io::bundled_scenario;
use wta::planner::{capex_sensitivity, solve_configuration};

fn main() -> wta::Result<()> {
    let s = bundled_scenario()?;
    let base = solve_configuration(&s)?;
    let scales: Vec<(f64, f64)> = [1.0, 0.9, 0.8, 0.7, 0.6, 0.5].iter().map(|&k| (k, k)).collect();
    let kept = capex_sensitivity(&s, &base, 12, &scales, false)?;
    let replanned = capex_sensitivity(&s, &base, 12, &scales, true)?;
    println!(
        "scale  fixed plan  re-planned  (coal-based: {:.2} €/kg)",
        s.economics.cta_lcoa
    );
    for (a, b) in kept.iter().zip(&replanned) {
        println!("{:>5.1} {:>11.4} {:>11.4}", a.re_scale, a.lcoa, b.lcoa);
    }
    Ok(())
}
