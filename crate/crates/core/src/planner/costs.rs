//! Per-mode levelized cost stacks.
//!
//! Shared facilities are attributed pro rata: wind capacity by the energy each
//! outlet takes, local electrolysis by the hydrogen each outlet takes and
//! source storage by each path's share of the trucked hydrogen. The stacks
//! weighted by production add up to the plan's daily cost.

use serde::{Deserialize, Serialize};

use super::model::{Mode, UnitCosts};
use super::{PlanningSolution, RegionPlan};
use crate::data_io::Scenario;
use crate::error::{Error, Result};
use crate::hsc::transport_cost_basis;

/// Cost components, each in €/kg NH3 once normalized.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StackComponents {
    pub re: f64,
    pub el: f64,
    pub buf: f64,
    pub water: f64,
    pub nitrogen: f64,
    pub wheeling: f64,
    pub transport: f64,
    pub diesel: f64,
    pub storage: f64,
}

impl StackComponents {
    pub fn total(&self) -> f64 {
        self.re
            + self.el
            + self.buf
            + self.water
            + self.nitrogen
            + self.wheeling
            + self.transport
            + self.diesel
            + self.storage
    }

    fn scaled(&self, f: f64) -> Self {
        Self {
            re: self.re * f,
            el: self.el * f,
            buf: self.buf * f,
            water: self.water * f,
            nitrogen: self.nitrogen * f,
            wheeling: self.wheeling * f,
            transport: self.transport * f,
            diesel: self.diesel * f,
            storage: self.storage * f,
        }
    }

    pub fn as_pairs(&self) -> [(&'static str, f64); 9] {
        [
            ("re", self.re),
            ("el", self.el),
            ("buf", self.buf),
            ("water", self.water),
            ("nitrogen", self.nitrogen),
            ("wheeling", self.wheeling),
            ("transport", self.transport),
            ("diesel", self.diesel),
            ("storage", self.storage),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LcoaStack {
    pub region: usize,
    pub mode: Mode,
    /// kg/d NH3
    pub production: f64,
    /// €/kg NH3
    pub components: StackComponents,
    pub lcoa: f64,
}

/// One wind region's row of the source table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSummary {
    pub region: usize,
    /// MWh/d
    pub e: f64,
    pub p_re: f64,
    /// `P / P_max`
    pub p_share: f64,
    /// Electrolysis attributed to this source's energy, MW.
    pub p_el: f64,
    /// €/kWh
    pub lcoe: f64,
    /// Ammonia cost had all of this energy been converted where the
    /// electrolysis sits, before transport and buffering, €/kg NH3.
    pub lcoa_local: Option<f64>,
}

fn share(part: f64, whole: f64) -> f64 {
    if whole > 0.0 {
        part / whole
    } else {
        0.0
    }
}

/// Stacks for every (region, mode) with positive production, and the source
/// summaries of the wind regions that produce energy.
pub fn decompose_costs(s: &Scenario, sol: &PlanningSolution) -> Result<(Vec<LcoaStack>, Vec<SourceSummary>)> {
    let econ = &s.economics;
    let uc = UnitCosts::new(econ);
    let eta_h = econ.eta_wth.value();
    let find = |id: usize| -> Result<&RegionPlan> {
        sol.region(id)
            .ok_or_else(|| Error::Contract(format!("solution lacks region {id}")))
    };
    // MWh/d of hydrogen-making energy per source: local plus trucks.
    let h2_energy = |r: &RegionPlan| r.e_local + r.e_hsc;

    let mut stacks = Vec::new();
    for r in &sol.regions {
        if r.a_local > 0.0 {
            let mut c = StackComponents {
                re: econ.re_daily(r.p_re) * share(r.e_local, r.e),
                el: econ.el_daily(r.p_el_lh) * share(r.e_local, h2_energy(r)),
                buf: econ.buf_daily(r.m_buf_local),
                water: uc.water_per_mwh * r.e_local,
                nitrogen: econ.nitrogen_per_kg_nh3() * r.a_local,
                ..StackComponents::default()
            };
            c = c.scaled(1.0 / r.a_local);
            stacks.push(LcoaStack {
                region: r.id,
                mode: Mode::Local,
                production: r.a_local,
                lcoa: c.total(),
                components: c,
            });
        }
        if r.a_en > 0.0 {
            let mut c = StackComponents {
                el: econ.el_daily(r.p_el_e),
                buf: econ.buf_daily(r.m_buf_en),
                nitrogen: econ.nitrogen_per_kg_nh3() * r.a_en,
                ..StackComponents::default()
            };
            for f in sol.electricity.iter().filter(|f| f.to == r.id) {
                let src = find(f.from)?;
                c.re += econ.re_daily(src.p_re) * share(f.energy, src.e);
                c.wheeling += uc.wheeling_per_mwh * f.energy;
                c.water += uc.water_per_mwh * f.energy;
            }
            c = c.scaled(1.0 / r.a_en);
            stacks.push(LcoaStack {
                region: r.id,
                mode: Mode::En,
                production: r.a_en,
                lcoa: c.total(),
                components: c,
            });
        }
        if r.a_hsc > 0.0 {
            let mut c = StackComponents {
                nitrogen: econ.nitrogen_per_kg_nh3() * r.a_hsc,
                ..StackComponents::default()
            };
            for f in sol.hydrogen.iter().filter(|f| f.to == r.id) {
                let src = find(f.from)?;
                let e = f.hydrogen / 1000.0 / eta_h;
                c.re += econ.re_daily(src.p_re) * share(e, src.e);
                c.el += econ.el_daily(src.p_el_lh) * share(e, h2_energy(src));
                c.storage += econ.hs_daily(src.m_hs) * share(f.hydrogen, src.m_hs);
                c.water += econ.water_per_kg_h2() * f.hydrogen;
                let t = transport_cost_basis(f.hydrogen, f.km, f.utilization, econ)?;
                c.transport += t.truck + t.trailer;
                c.diesel += t.diesel;
            }
            c = c.scaled(1.0 / r.a_hsc);
            stacks.push(LcoaStack {
                region: r.id,
                mode: Mode::Hsc,
                production: r.a_hsc,
                lcoa: c.total(),
                components: c,
            });
        }
    }

    let mut sources = Vec::new();
    for reg in s.regions.iter().filter(|r| r.has_wind()) {
        let r = find(reg.id)?;
        if !(r.e > 0.0) {
            continue;
        }
        let mut el_cost = econ.el_daily(r.p_el_lh);
        let mut p_el = r.p_el_lh;
        for f in sol.electricity.iter().filter(|f| f.from == r.id) {
            let dst = find(f.to)?;
            let w = share(f.energy, dst.e_import);
            el_cost += econ.el_daily(dst.p_el_e) * w;
            p_el += dst.p_el_e * w;
        }
        let re = econ.re_daily(r.p_re);
        let a = econ.nh3_per_mwh() * r.e;
        let lcoa_local = (a > 0.0).then(|| (re + el_cost + uc.water_per_mwh * r.e) / a + econ.nitrogen_per_kg_nh3());
        sources.push(SourceSummary {
            region: r.id,
            e: r.e,
            p_re: r.p_re,
            p_share: r.p_re / reg.curve.expect("wind region").p_max,
            p_el,
            lcoe: crate::economics::lcoe(r.e, r.p_re, econ)?,
            lcoa_local,
        });
    }
    Ok((stacks, sources))
}

/// Daily cost of the plan rebuilt from its stacks, €/d.
pub fn stacked_cost(stacks: &[LcoaStack]) -> f64 {
    stacks.iter().map(|s| s.lcoa * s.production).sum()
}
