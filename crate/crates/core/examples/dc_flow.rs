//! DC power flow on a triangle and on the bundled grid.

use wta::data_io::{bundled_scenario, grid_model};
use wta::grid::{Branch, GridModel};

fn main() -> wta::Result<()> {
    let line = |from, to| Branch {
        from,
        to,
        susceptance: 1.0,
        cap_fwd: 0.5,
        cap_rev: 0.5,
    };
    let tri = GridModel::new(vec![1, 2, 3], &[0, 0, 0], vec![line(1, 2), line(2, 3), line(3, 1)])?;
    let flows = tri.flows(&[1.0, -1.0, 0.0])?;
    println!("1 MW from node 1 to node 2: flows {flows:.4?}");
    let rep = tri.check_limits(&[vec![1.0, -1.0, 0.0]])?;
    for v in &rep.violations {
        println!("branch {} over its limit by {:.3} MW", v.branch, v.excess);
    }

    let s = bundled_scenario()?;
    let g = grid_model(&s)?;
    println!(
        "bundled grid: {} branches, reference nodes {:?}",
        g.branches.len(),
        g.reference
    );
    // 300 MW from region 8 to region 1, both in the western island.
    let mut inj = vec![0.0; s.regions.len()];
    inj[7] = 300.0;
    inj[0] = -300.0;
    let f = g.flows(&inj)?;
    for (b, v) in g.branches.iter().zip(&f).filter(|(_, v)| v.abs() > 1e-9) {
        println!("  {:>2}-{:<2} {:>8.2} MW", b.from, b.to, v);
    }
    Ok(())
}
