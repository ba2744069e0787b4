//! Levelized costs of electricity, hydrogen and ammonia from capacities.

use wta::economics::{annuity, lcoa_en, lcoa_local, lcoe, lcoh, EconomicParams, EnImport};

fn main() -> wta::Result<()> {
    let e = EconomicParams::default();
    println!(
        "annuity at {:.0}% over 20 years: {:.5}",
        100.0 * e.discount_rate,
        annuity(e.discount_rate, 20.0)
    );
    let (energy, p_re, p_el, buf) = (26862.0, 2385.0, 1450.56, 20_000.0);
    let c = lcoe(energy, p_re, &e)?;
    let h = lcoh(c, energy, p_el, &e)?;
    let a = energy * e.nh3_per_mwh();
    println!("LCOE {c:.4} €/kWh  LCOH {h:.3} €/kg  ({a:.0} kg/d NH3)");
    println!("local LCOA {:.4} €/kg", lcoa_local(h, a, buf, &e)?);
    let en = lcoa_en(&[EnImport { energy, lcoe: c }], p_el, buf, a, &e)?;
    println!("same energy shipped by wire: {en:.4} €/kg");
    println!(
        "per-kg layers: water {:.3} €/kg H2, nitrogen {:.4}, wheeling {:.4} €/kg NH3",
        e.water_per_kg_h2(),
        e.nitrogen_per_kg_nh3(),
        e.wheeling_per_kg_nh3()
    );
    Ok(())
}
