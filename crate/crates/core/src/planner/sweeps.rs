//! Parameter sweeps. Points are evaluated in parallel and returned in input
//! order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{decompose_costs, solve_configuration, Mode, PlanningSolution};
use crate::buffer::{size_buffer, BufferProblem};
use crate::data_io::Scenario;
use crate::economics::{lcoa_local, lcoe, lcoh, EconomicParams};
use crate::error::{Error, Result};
use crate::lp::smaller_root;
use crate::wind::{PotentialCurve, WindProfile};

/// One point of a single-region Local sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// MWh/d
    pub e: f64,
    /// MW
    pub p_re: f64,
    /// MW
    pub p_el: f64,
    /// kg
    pub m_buf: f64,
    /// €/kg NH3
    pub lcoa: Option<f64>,
    pub note: Option<String>,
}

fn sweep_point(curve: &PotentialCurve, w: &WindProfile, econ: &EconomicParams, e: f64) -> Result<SweepRow> {
    let skipped = |note: String| SweepRow {
        e,
        p_re: 0.0,
        p_el: 0.0,
        m_buf: 0.0,
        lcoa: None,
        note: Some(note),
    };
    if !(e >= 0.0) {
        return Ok(skipped(format!("energy {e} MWh/d is negative")));
    }
    if e == 0.0 {
        return Ok(SweepRow {
            e,
            p_re: 0.0,
            p_el: 0.0,
            m_buf: 0.0,
            lcoa: None,
            note: None,
        });
    }
    let p_re = match smaller_root(curve.a, curve.b, e) {
        Some(p) if p <= curve.p_max => p,
        _ => return Ok(skipped(format!("energy {e} MWh/d exceeds the wind potential"))),
    };
    let p_el = e * w.peak();
    let h2 = econ.h2_per_mwh();
    let ammonia = econ.nh3_per_mwh() * e;
    let input: Vec<f64> = w.p.iter().map(|v| v * e * h2).collect();
    let buf = size_buffer(&BufferProblem::new(input, ammonia, econ))?;
    let lcoa = lcoa_local(lcoh(lcoe(e, p_re, econ)?, e, p_el, econ)?, ammonia, buf.capacity, econ)?;
    Ok(SweepRow {
        e,
        p_re,
        p_el,
        m_buf: buf.capacity,
        lcoa: Some(lcoa),
        note: None,
    })
}

/// Local conversion of `energies` MWh/d in isolation: smallest wind capacity,
/// electrolyzer sized to the peak hour, smallest buffer and the levelized
/// cost.
pub fn local_sweep_profile(
    curve: &PotentialCurve,
    w: &WindProfile,
    econ: &EconomicParams,
    energies: &[f64],
) -> Result<Vec<SweepRow>> {
    energies.par_iter().map(|&e| sweep_point(curve, w, econ, e)).collect()
}

/// [`local_sweep_profile`] with the curve and profile of region `id`.
pub fn local_sweep(s: &Scenario, id: usize, energies: &[f64]) -> Result<Vec<SweepRow>> {
    let r = s
        .region(id)
        .ok_or_else(|| Error::Contract(format!("unknown region {id}")))?;
    let curve = r
        .curve
        .as_ref()
        .ok_or_else(|| Error::Contract(format!("region {id} has no wind")))?;
    let w = s
        .profile(id)
        .ok_or_else(|| Error::Contract(format!("region {id} has no profile")))?;
    local_sweep_profile(curve, w, &s.economics, energies)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapexPoint {
    pub re_scale: f64,
    pub el_scale: f64,
    /// Local levelized cost of the region, €/kg NH3.
    pub lcoa: f64,
}

fn scaled(s: &Scenario, re: f64, el: f64) -> Scenario {
    let mut t = s.clone();
    t.economics.re = s.economics.re.scaled(re);
    t.economics.el = s.economics.el.scaled(el);
    t
}

fn local_lcoa(sol: &PlanningSolution, id: usize) -> Result<f64> {
    sol.stack(id, Mode::Local)
        .map(|st| st.lcoa)
        .ok_or_else(|| Error::Contract(format!("region {id} has no local production")))
}

/// Local levelized cost of region `id` with wind and electrolyzer unit costs
/// scaled by each `(re, el)` pair. By default the capacities of `base` are
/// kept and only the costs are recomputed; with `resolve` every point gets a
/// fresh plan.
pub fn capex_sensitivity(
    s: &Scenario,
    base: &PlanningSolution,
    id: usize,
    scales: &[(f64, f64)],
    resolve: bool,
) -> Result<Vec<CapexPoint>> {
    if let Some(&(re, el)) = scales.iter().find(|(a, b)| !(*a > 0.0 && *b > 0.0)) {
        return Err(Error::Domain(format!("scales must be > 0, got ({re}, {el})")));
    }
    local_lcoa(base, id)?;
    scales
        .par_iter()
        .map(|&(re, el)| {
            let t = scaled(s, re, el);
            let lcoa = if resolve {
                local_lcoa(&solve_configuration(&t)?, id)?
            } else {
                let (stacks, _) = decompose_costs(&t, base)?;
                stacks
                    .iter()
                    .find(|st| st.region == id && st.mode == Mode::Local)
                    .map(|st| st.lcoa)
                    .expect("same production as base")
            };
            Ok(CapexPoint {
                re_scale: re,
                el_scale: el,
                lcoa,
            })
        })
        .collect()
}
