#![allow(dead_code, clippy::needless_range_loop)]

pub mod oracles;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wta::data_io::{Region, Scenario, SolverOptions, Zone};
use wta::economics::EconomicParams;
use wta::grid::Branch;
use wta::wind::{synth_profile, PotentialCurve, WindProfile, HOURS};

pub fn region(id: usize, zone: Zone, ammonia_tpd: f64, curve: Option<(f64, f64, f64)>) -> Region {
    Region {
        id,
        name: format!("T{id}"),
        zone,
        ammonia: ammonia_tpd * 1000.0,
        curve: curve.map(|(a, b, p_max)| PotentialCurve { a, b, p_max }),
    }
}

pub fn branch(from: usize, to: usize, cap: f64) -> Branch {
    Branch {
        from,
        to,
        susceptance: 1.0,
        cap_fwd: cap,
        cap_rev: cap,
    }
}

/// Profile with `peak` share in the first `hours` hours and the remainder
/// spread over the others.
pub fn block_profile(region: usize, hours: usize, share: f64) -> WindProfile {
    let mut p = [0.0; HOURS];
    for (t, v) in p.iter_mut().enumerate() {
        *v = if t < hours {
            share / hours as f64
        } else {
            (1.0 - share) / (HOURS - hours) as f64
        };
    }
    WindProfile { region, p }
}

pub fn scenario(
    regions: Vec<Region>,
    distances: Vec<Vec<f64>>,
    grid: Vec<Branch>,
    profiles: Vec<WindProfile>,
) -> Scenario {
    Scenario {
        regions,
        grid,
        distances,
        links: None,
        profiles,
        economics: EconomicParams::default(),
        options: SolverOptions::default(),
    }
}

/// Source region 1 with ample wind and demand region 2 `km` apart on one
/// grid branch.
pub fn two_region(km: f64, demand_tpd: f64, profile: WindProfile) -> Scenario {
    scenario(
        vec![
            region(1, Zone::Western, 0.0, Some((-6.34e-5, 11.44, 5000.0))),
            region(2, Zone::Western, demand_tpd, None),
        ],
        vec![vec![0.0, km], vec![km, 0.0]],
        vec![branch(1, 2, 1e6)],
        vec![WindProfile { region: 1, ..profile }],
    )
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Connected single- or two-island scenario with 3 to 6 regions and ample wind.
pub fn random_scenario(rng: &mut ChaCha8Rng) -> Scenario {
    let n = rng.random_range(3..=6);
    let split = if n >= 4 && rng.random_bool(0.5) { n - 2 } else { n };
    let mut regions = Vec::new();
    for k in 0..n {
        let zone = if k < split { Zone::Western } else { Zone::Eastern };
        let first = k == 0 || k == split;
        let wind = first || rng.random_bool(0.5);
        let curve = wind.then(|| {
            let b = rng.random_range(9.0..13.0);
            let pmax = rng.random_range(2000.0..5000.0);
            let bend = rng.random_range(0.3..0.9);
            (-bend * b / (2.0 * pmax), b, pmax)
        });
        let demand = if rng.random_bool(0.6) {
            rng.random_range(20.0..150.0)
        } else {
            0.0
        };
        regions.push(region(k + 1, zone, demand, curve));
    }
    if regions.iter().all(|r| r.ammonia == 0.0) {
        regions[n - 1].ammonia = 100e3;
    }
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = rng.random_range(80.0..900.0f64).round();
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let mut grid = Vec::new();
    for (lo, hi) in [(0, split), (split, n)] {
        for k in lo + 1..hi {
            grid.push(branch(k, k + 1, 1e5));
        }
        if hi - lo >= 3 && rng.random_bool(0.5) {
            grid.push(branch(lo + 1, hi, 1e5));
        }
    }
    let profiles = regions
        .iter()
        .filter(|r| r.has_wind())
        .map(|r| {
            let mut w = synth_profile(rng.random_range(0.0..1.0), rng.random()).unwrap();
            w.region = r.id;
            w
        })
        .collect();
    scenario(regions, dist, grid, profiles)
}

/// [`random_scenario`] from its own seed.
pub fn seeded_scenario(seed: u64) -> Scenario {
    random_scenario(&mut ChaCha8Rng::seed_from_u64(seed))
}
