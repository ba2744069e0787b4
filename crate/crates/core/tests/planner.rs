mod common;

use std::sync::OnceLock;

use common::{block_profile, branch, region, rel, scenario, seeded_scenario, two_region};
use wta::data_io::{bundled_scenario, Scenario, Zone};
use wta::planner::*;
use wta::wind::HOURS;
use wta::Error;

fn bundled() -> &'static (Scenario, PlanningSolution) {
    static CELL: OnceLock<(Scenario, PlanningSolution)> = OnceLock::new();
    CELL.get_or_init(|| {
        let s = bundled_scenario().unwrap();
        let sol = solve_configuration(&s).unwrap();
        (s, sol)
    })
}

/// Variable and row counts recomputed from the model's index tables.
fn counted(m: &PlanModel) -> (usize, usize) {
    let flag = |o: Option<usize>| o.is_some() as usize;
    let mut vars = 0;
    let mut rows = 0;
    for sv in &m.sources {
        let lh = flag(sv.el_lh);
        let hs = flag(sv.m_hs);
        vars += 2 + lh + hs;
        rows += 1 + lh + hs;
    }
    vars += 25 * m.local.len();
    rows += 25 * m.local.len();
    vars += m.hsc.len() + m.en.len();
    for dv in &m.demands {
        let modes = flag(dv.a_l) + flag(dv.a_e) + flag(dv.a_h);
        let e = flag(dv.el_e);
        vars += modes + e;
        rows += modes + 1 + 24 * e;
    }
    vars += 49 * m.buffers.len();
    rows += 96 * m.buffers.len();
    let g = (0..m.grid.branches.len())
        .filter(|&l| {
            m.en.iter().any(|x| {
                let from = m.sources[x.source].region;
                let to = m.demands[x.demand].region;
                (m.grid.ptdf[(l, from)] - m.grid.ptdf[(l, to)]).abs() > 1e-12
            })
        })
        .count();
    rows += 48 * g;
    (vars, rows)
}

#[test]
fn bundled_model_matches_the_counting_formula() {
    let s = bundled_scenario().unwrap();
    let m = build_model(&s).unwrap();
    assert_eq!(counted(&m), (m.lp.num_vars(), m.lp.num_rows()));
    assert_eq!((m.lp.num_vars(), m.lp.num_rows()), (269, 935));
}

#[test]
fn eastern_regions_get_no_variables() {
    let s = bundled_scenario().unwrap();
    let m = build_model(&s).unwrap();
    for sv in &m.sources {
        assert_eq!(s.regions[sv.region].zone, Zone::Western);
    }
    for dv in &m.demands {
        assert_eq!(s.regions[dv.region].zone, Zone::Western);
    }
    let eastern: Vec<usize> = s
        .regions
        .iter()
        .filter(|r| r.zone == Zone::Eastern)
        .map(|r| r.id)
        .collect();
    assert!(!eastern.is_empty());
    for name in &m.lp.names {
        for id in &eastern {
            for pat in [
                format!("[{id}]"),
                format!("[{id}->"),
                format!("->{id}]"),
                format!("[{id},"),
            ] {
                assert!(!name.contains(&pat), "{name} mentions eastern region {id}");
            }
        }
    }
}

#[test]
fn bundled_plan_passes_the_checker_and_adds_up() {
    let (s, sol) = bundled();
    assert!(sol.diagnostics.converged);
    assert!(sol.diagnostics.check.passes(), "{:?}", sol.diagnostics.check);
    let again = check_solution(s, sol).unwrap();
    assert!(again.passes());
    assert!(rel(stacked_cost(&sol.stacks), sol.objective) < 1e-9);
    for r in &s.regions {
        if r.ammonia > 0.0 {
            let got = sol.region(r.id).unwrap().ammonia();
            assert!(rel(got, r.ammonia) < 1e-6, "region {} gets {got}", r.id);
        }
    }
    for st in &sol.stacks {
        assert!(rel(st.components.total(), st.lcoa) < 1e-12);
    }
}

#[test]
fn electricity_stacks_carry_the_wheeling_surcharge() {
    let (s, sol) = bundled();
    let w = s.economics.wheeling_per_kg_nh3();
    let en: Vec<&LcoaStack> = sol.stacks.iter().filter(|st| st.mode == Mode::En).collect();
    assert!(!en.is_empty());
    for st in en {
        assert!((st.components.wheeling - w).abs() < 1e-12);
        assert_eq!(
            (st.components.transport, st.components.diesel, st.components.storage),
            (0.0, 0.0, 0.0)
        );
    }
    for st in sol.stacks.iter().filter(|st| st.mode != Mode::En) {
        assert_eq!(st.components.wheeling, 0.0);
    }
}

#[test]
fn trucks_never_exceed_the_distance_cap() {
    let (s, sol) = bundled();
    for f in &sol.hydrogen {
        assert!(f.km <= s.options.d_max_km);
    }
}

#[test]
fn single_region_plan_equals_the_local_sweep() {
    let tpd = 100.0;
    let s = scenario(
        vec![region(1, Zone::Western, tpd, Some((-6.34e-5, 11.44, 5000.0)))],
        vec![vec![0.0]],
        vec![],
        vec![block_profile(1, 8, 0.6)],
    );
    let m = build_model(&s).unwrap();
    assert_eq!((m.local.len(), m.hsc.len(), m.en.len(), m.buffers.len()), (1, 0, 0, 1));
    let sol = solve_configuration(&s).unwrap();
    let e = tpd * 1000.0 / s.economics.nh3_per_mwh();
    let row = &local_sweep(&s, 1, &[e]).unwrap()[0];
    let plan = sol.region(1).unwrap();
    assert!(rel(plan.e, e) < 1e-9);
    assert!(rel(plan.p_re, row.p_re) < 1e-5);
    assert!(rel(plan.p_el(), row.p_el) < 1e-6);
    assert!(rel(plan.m_buf(), row.m_buf) < 1e-6);
    assert!(rel(sol.mean_lcoa(), row.lcoa.unwrap()) < 1e-5);
    assert!(rel(sol.stack(1, Mode::Local).unwrap().lcoa, row.lcoa.unwrap()) < 1e-5);
}

#[test]
fn short_haul_goes_by_truck() {
    let s = two_region(200.0, 500.0, block_profile(1, 10, 0.7));
    let sol = solve_configuration(&s).unwrap();
    let d = sol.region(2).unwrap();
    assert!(d.a_hsc >= 0.99 * 500e3, "HSC share {}", d.a_hsc / 500e3);
}

#[test]
fn long_haul_goes_by_wire() {
    let s = two_region(800.0, 500.0, block_profile(1, 10, 0.7));
    let m = build_model(&s).unwrap();
    assert!(m.hsc.is_empty());
    let sol = solve_configuration(&s).unwrap();
    let d = sol.region(2).unwrap();
    assert!(rel(d.a_en, 500e3) < 1e-9 && d.a_hsc == 0.0);
    assert!(sol.hydrogen.is_empty());
}

#[test]
fn every_restriction_costs_at_least_as_much() {
    let open = two_region(200.0, 300.0, block_profile(1, 10, 0.7));
    let mut wire_only = open.clone();
    wire_only.options.d_max_km = 100.0;
    let mut truck_only = open.clone();
    truck_only.regions[1].zone = Zone::Eastern;
    truck_only.grid = vec![];
    let best = solve_configuration(&open).unwrap().objective;
    for restricted in [wire_only, truck_only] {
        let r = solve_configuration(&restricted).unwrap().objective;
        assert!(best <= r * (1.0 + 1e-7), "{best} > {r}");
    }
}

#[test]
fn stranded_demand_is_a_structural_error() {
    let s = scenario(
        vec![
            region(1, Zone::Western, 0.0, Some((-6.34e-5, 11.44, 5000.0))),
            region(2, Zone::Eastern, 10.0, None),
        ],
        vec![vec![0.0, 900.0], vec![900.0, 0.0]],
        vec![],
        vec![block_profile(1, 12, 0.5)],
    );
    assert!(matches!(build_model(&s), Err(Error::Structural(_))));
    assert!(matches!(solve_configuration(&s), Err(Error::Structural(_))));
}

#[test]
fn a_thin_branch_makes_demand_infeasible() {
    let mut s = two_region(800.0, 500.0, block_profile(1, 10, 0.7));
    s.grid = vec![branch(1, 2, 1.0)];
    assert!(matches!(solve_configuration(&s), Err(Error::Infeasible(_))));
}

#[test]
fn local_sweep_basics() {
    let s = bundled_scenario().unwrap();
    let es: Vec<f64> = (0..=10).map(|k| 45.0 * k as f64).collect();
    let rows = local_sweep(&s, 12, &es).unwrap();
    assert_eq!(rows.len(), es.len());
    assert_eq!(
        (rows[0].p_re, rows[0].p_el, rows[0].m_buf, rows[0].lcoa),
        (0.0, 0.0, 0.0, None)
    );
    for (row, e) in rows.iter().zip(&es) {
        assert_eq!(row.e, *e);
    }
    for w in rows[1..].windows(2) {
        assert!(w[1].p_re > w[0].p_re);
        assert!(w[1].lcoa.unwrap() >= w[0].lcoa.unwrap() - 1e-12);
    }
    let beyond = local_sweep(&s, 12, &[1e9]).unwrap();
    assert!(beyond[0].lcoa.is_none() && beyond[0].note.is_some());
}

#[test]
fn flat_wind_needs_no_buffer_and_peaky_wind_needs_more_of_everything() {
    let s = bundled_scenario().unwrap();
    let curve = s.region(12).unwrap().curve.unwrap();
    let e = [300.0];
    let flat = local_sweep_profile(&curve, &block_profile(12, 12, 0.5), &s.economics, &e).unwrap();
    assert!(flat[0].m_buf.abs() < 1e-9);
    assert!(rel(flat[0].p_el, 300.0 / HOURS as f64) < 1e-12);
    let mild = local_sweep_profile(&curve, &block_profile(12, 6, 0.4), &s.economics, &e).unwrap();
    let wild = local_sweep_profile(&curve, &block_profile(12, 6, 0.7), &s.economics, &e).unwrap();
    assert!(mild[0].p_el > flat[0].p_el && wild[0].p_el > mild[0].p_el);
    assert!(mild[0].m_buf > flat[0].m_buf && wild[0].m_buf > mild[0].m_buf);
    assert!(wild[0].lcoa > mild[0].lcoa);
}

#[test]
fn sweeps_are_deterministic_and_ordered() {
    let s = bundled_scenario().unwrap();
    let es: Vec<f64> = (0..40).map(|k| 12.0 * (40 - k) as f64).collect();
    let a = local_sweep(&s, 12, &es).unwrap();
    let b = local_sweep(&s, 12, &es).unwrap();
    assert_eq!(a, b);
    for (row, e) in a.iter().zip(&es) {
        assert_eq!(&local_sweep(&s, 12, &[*e]).unwrap()[0], row);
    }
}

#[test]
fn capex_scaling_of_a_fixed_plan() {
    let (s, sol) = bundled();
    let base = sol.stack(12, Mode::Local).unwrap().lcoa;
    let scales: Vec<(f64, f64)> = [1.0, 0.9, 0.8, 0.7, 0.6, 0.5].iter().map(|&k| (k, k)).collect();
    let pts = capex_sensitivity(s, sol, 12, &scales, false).unwrap();
    assert_eq!(pts[0].lcoa, base);
    for w in pts.windows(2) {
        assert!(w[1].lcoa < w[0].lcoa);
    }
    // Cost is affine in each scale on a fixed plan.
    let re_only = capex_sensitivity(s, sol, 12, &[(1.0, 1.0), (0.5, 1.0), (0.0001, 1.0)], false).unwrap();
    let slope1 = (re_only[0].lcoa - re_only[1].lcoa) / 0.5;
    let slope2 = (re_only[1].lcoa - re_only[2].lcoa) / (0.5 - 0.0001);
    assert!(rel(slope1, slope2) < 1e-9);
    assert!(matches!(
        capex_sensitivity(s, sol, 12, &[(0.0, 1.0)], false),
        Err(Error::Domain(_))
    ));
    assert!(capex_sensitivity(s, sol, 1, &[(1.0, 1.0)], false).is_err());
}

#[test]
fn capex_resolve_agrees_at_unit_scale() {
    let (s, sol) = bundled();
    let pts = capex_sensitivity(s, sol, 12, &[(1.0, 1.0)], true).unwrap();
    assert!(rel(pts[0].lcoa, sol.stack(12, Mode::Local).unwrap().lcoa) < 1e-6);
}

#[test]
fn random_networks_solve_and_pass_the_checker() {
    for seed in 0..80 {
        let s = seeded_scenario(seed);
        let sol = solve_configuration(&s).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(sol.diagnostics.converged, "seed {seed}");
        assert!(
            sol.diagnostics.check.passes(),
            "seed {seed}: {:?}",
            sol.diagnostics.check.failures
        );
        assert!(rel(stacked_cost(&sol.stacks), sol.objective) < 1e-9, "seed {seed}");
    }
}
