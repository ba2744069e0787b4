//! Fits `E = a P^2 + b P` to capacity/energy samples and reads off the
//! full-load hours of the fitted curve.

use wta::wind::{energy_bound, fit_potential, flh};

fn main() -> wta::Result<()> {
    // Samples around the curve of a strong western region, with some scatter.
    let scatter = [0.4, -0.3, 0.1, 0.6, -0.5, 0.2, -0.1, 0.3];
    let samples: Vec<(f64, f64)> = scatter
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let p = 600.0 * (k + 1) as f64;
            (p, -6.34e-5 * p * p + 11.44 * p + 40.0 * d)
        })
        .collect();
    let fit = fit_potential(&samples)?;
    let c = fit.curve;
    println!(
        "a = {:.4e}  b = {:.4}  P_max = {} MW  residual {:.2}",
        c.a, c.b, c.p_max, fit.residual_norm
    );
    for p in [500.0, 2385.0, c.p_max] {
        println!(
            "P = {p:>6.0} MW  E <= {:>8.0} MWh/d  FLH {:.2} h/d",
            energy_bound(&c, p)?,
            flh(&c, p)?
        );
    }
    Ok(())
}
