//! Sizes the hydrogen buffer between a fluctuating electrolyzer and a reactor
//! that must run inside its intake window.

use wta::buffer::{feasibility_check, size_buffer, BufferProblem};
use wta::data_io::bundled_scenario;
use wta::economics::EconomicParams;

fn main() -> wta::Result<()> {
    let e = EconomicParams::default();
    let a = 1700.0;
    println!("{}", feasibility_check(a, &e).explanation);
    let mut input = vec![25.0; 12];
    input.extend([0.0; 12]);
    let p = BufferProblem::new(input, a, &e);
    let (lo, hi) = p.window();
    let b = size_buffer(&p)?;
    println!("window [{lo:.1}, {hi:.1}] kg/h, tank {:.1} kg", b.capacity);
    for t in (0..24).step_by(3) {
        println!(
            "  h{t:02}  in {:>5.1}  out {:>5.2}  level {:>6.2}",
            p.input[t], b.output[t], b.level[t]
        );
    }

    let s = bundled_scenario()?;
    for w in &s.profiles {
        let need = 1e6 / e.k_hta.value();
        let b = size_buffer(&BufferProblem::new(w.p.iter().map(|v| v * need).collect(), 1e6, &e))?;
        println!(
            "region {:>2}: buffer {:.2}% of daily hydrogen",
            w.region,
            100.0 * b.capacity / need
        );
    }
    Ok(())
}
