//! LP assembly for the network plan.
//!
//! Units inside the LP: MW, MWh/d, tonnes (per day for flows) and €/d.
//!
//! Variables, with `W` the wind regions that have at least one outlet:
//! * per source in `W`: `P`, `E`; `EL(L+H)` when it feeds Local or truck
//!   outlets; `m_HS` when it has truck paths
//! * per Local region (wind and demand): `E^L` and 24 hourly `P^L_t`
//! * per truck path within the distance cap: `H`
//! * per same-island (source, demand) pair: `E_{s->d}`; its hourly power is
//!   `E_{s->d} p_{s,t}`
//! * per demand region: `A^L`, `A^E`, `A^H` for the available modes and
//!   `EL(E)` when it imports electricity
//! * per Local or electricity-fed buffer: capacity, 24 levels, 24 outputs
//!
//! Rows:
//! * per source: energy split (1); Local hourly share (24) and sum (1);
//!   electrolyzer peak (1); storage (1)
//! * per demand: one conversion row per mode, mode sum (1), `EL(E)` hourly (24)
//! * per buffer: level balance (24), level cap (24), intake window (48)
//! * per grid branch and hour touched by transfers: lower and upper limit (2)
//!
//! The wind curve `E <= a P^2 + b P` is handed to the linearization loop.
//!
//! Counts, with `S` the used wind regions, `L` the Local regions, `H` the truck
//! paths, `N` the electricity pairs, `D` the demand regions, `B` the buffers
//! and `G` the branches whose transfer factors differ across some pair:
//!
//! ```text
//! variables = sum_S (2 + l_s + h_s) + 25 |L| + |H| + |N| + sum_D (m_d + e_d) + 49 |B|
//! rows      = sum_S (1 + l_s + h_s) + 25 |L| + sum_D (m_d + 1 + 24 e_d) + 96 |B| + 48 |G|
//! ```
//!
//! where `l_s` and `h_s` flag the `EL(L+H)` and `m_HS` variables, `m_d` counts
//! the modes open to demand `d` and `e_d` flags electricity imports. The grid
//! term assumes every profile hour is positive; hours with no transfer are
//! skipped.

use serde::{Deserialize, Serialize};

use crate::data_io::{grid_model, hsc_model, Scenario};
use crate::economics::EconomicParams;
use crate::error::{Error, Result};
use crate::grid::GridModel;
use crate::hsc::{transport_cost_basis, HscModel};
use crate::lp::{ConcaveBound, LpProblem, Relation};
use crate::wind::HOURS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Local,
    En,
    Hsc,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::Local => "local",
            Mode::En => "en",
            Mode::Hsc => "hsc",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SourceVars {
    /// Region position.
    pub region: usize,
    pub p_re: usize,
    pub e: usize,
    pub el_lh: Option<usize>,
    pub m_hs: Option<usize>,
    /// Largest hourly profile value, 1/h.
    pub peak: f64,
}

#[derive(Debug, Clone)]
pub struct DemandVars {
    pub region: usize,
    pub a_l: Option<usize>,
    pub a_e: Option<usize>,
    pub a_h: Option<usize>,
    pub el_e: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct LocalVars {
    pub source: usize,
    pub demand: usize,
    pub e_l: usize,
    pub hourly: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct HscArc {
    pub source: usize,
    pub demand: usize,
    pub km: f64,
    /// Truck round-trip utilization factor.
    pub u: f64,
    pub var: usize,
}

#[derive(Debug, Clone)]
pub struct EnArc {
    pub source: usize,
    pub demand: usize,
    pub var: usize,
}

#[derive(Debug, Clone)]
pub struct BufferVars {
    pub demand: usize,
    pub mode: Mode,
    pub cap: usize,
    pub level: Vec<usize>,
    pub out: Vec<usize>,
}

/// The LP, its curve bounds and where every quantity lives.
#[derive(Debug, Clone)]
pub struct PlanModel {
    pub lp: LpProblem,
    pub curves: Vec<ConcaveBound>,
    pub sources: Vec<SourceVars>,
    pub demands: Vec<DemandVars>,
    pub local: Vec<LocalVars>,
    pub hsc: Vec<HscArc>,
    pub en: Vec<EnArc>,
    pub buffers: Vec<BufferVars>,
    pub grid: GridModel,
    pub trucks: HscModel,
}

/// Per-unit objective coefficients in LP units.
#[derive(Debug, Clone, Copy)]
pub(crate) struct UnitCosts {
    pub re_per_mw: f64,
    pub el_per_mw: f64,
    pub buf_per_t: f64,
    pub hs_per_t: f64,
    pub water_per_mwh: f64,
    pub wheeling_per_mwh: f64,
    pub nitrogen_per_t: f64,
}

impl UnitCosts {
    pub fn new(econ: &EconomicParams) -> Self {
        Self {
            re_per_mw: econ.re_daily(1.0),
            el_per_mw: econ.el_daily(1.0),
            buf_per_t: econ.buf_daily(1000.0),
            hs_per_t: econ.hs_daily(1000.0),
            water_per_mwh: econ.h2_per_mwh() * econ.water_per_kg_h2(),
            wheeling_per_mwh: econ.c_en * 1000.0,
            nitrogen_per_t: econ.nitrogen_per_kg_nh3() * 1000.0,
        }
    }

    /// Haulage plus electrolysis water per tonne of hydrogen on a path.
    pub fn hsc_per_t(&self, km: f64, u: f64, econ: &EconomicParams) -> f64 {
        let t = transport_cost_basis(1000.0, km, u, econ).expect("valid path");
        t.haulage() + 1000.0 * econ.water_per_kg_h2()
    }
}

/// Assembles the plan LP. Fails before solving when a demand region has no
/// way to be supplied.
pub fn build_model(s: &Scenario) -> Result<PlanModel> {
    let grid = grid_model(s)?;
    let trucks = hsc_model(s)?;
    let econ = &s.economics;
    let uc = UnitCosts::new(econ);
    let n = s.regions.len();
    let eta_h = econ.eta_wth.value();
    let eta_a = econ.eta_wta.value();
    let k_hta = econ.k_hta.value();

    let wind: Vec<usize> = (0..n).filter(|&i| s.regions[i].has_wind()).collect();
    let demand: Vec<usize> = (0..n).filter(|&i| s.regions[i].ammonia > 0.0).collect();
    let same_island = |a: usize, b: usize| s.regions[a].zone == s.regions[b].zone;

    let mut hsc_pairs = Vec::new();
    let mut en_pairs = Vec::new();
    let mut local_regions = Vec::new();
    for &d in &demand {
        for &w in &wind {
            if w == d {
                local_regions.push(d);
                continue;
            }
            if trucks.is_feasible(w, d) {
                hsc_pairs.push((w, d));
            }
            if same_island(w, d) {
                en_pairs.push((w, d));
            }
        }
        let supplied =
            local_regions.contains(&d) || hsc_pairs.iter().any(|p| p.1 == d) || en_pairs.iter().any(|p| p.1 == d);
        if !supplied {
            return Err(Error::Structural(format!(
                "region {} has demand but no local wind, truck path or grid-connected wind",
                s.regions[d].id
            )));
        }
    }
    hsc_pairs.sort_unstable();
    en_pairs.sort_unstable();

    let used: Vec<usize> = wind
        .iter()
        .copied()
        .filter(|w| {
            local_regions.contains(w) || hsc_pairs.iter().any(|p| p.0 == *w) || en_pairs.iter().any(|p| p.0 == *w)
        })
        .collect();

    let mut lp = LpProblem::new();
    let inf = f64::INFINITY;
    let mut sources = Vec::new();
    let mut curves = Vec::new();
    for &w in &used {
        let r = &s.regions[w];
        let c = r.curve.expect("wind region");
        let prof = s.profile(r.id).expect("validated profile");
        let p_re = lp.add_var(format!("P_RE[{}]", r.id), 0.0, c.p_max, uc.re_per_mw);
        let e = lp.add_var(format!("E[{}]", r.id), 0.0, inf, 0.0);
        let lh = local_regions.contains(&w) || hsc_pairs.iter().any(|p| p.0 == w);
        let el_lh = lh.then(|| lp.add_var(format!("EL_LH[{}]", r.id), 0.0, inf, uc.el_per_mw));
        let m_hs = hsc_pairs
            .iter()
            .any(|p| p.0 == w)
            .then(|| lp.add_var(format!("m_HS[{}]", r.id), 0.0, inf, uc.hs_per_t));
        curves.push(ConcaveBound {
            name: format!("wind[{}]", r.id),
            e_var: e,
            p_var: p_re,
            a: c.a,
            b: c.b,
        });
        sources.push(SourceVars {
            region: w,
            p_re,
            e,
            el_lh,
            m_hs,
            peak: prof.peak(),
        });
    }
    let src_of = |w: usize| sources.iter().position(|x: &SourceVars| x.region == w).unwrap();

    let mut demands = Vec::new();
    for &d in &demand {
        let id = s.regions[d].id;
        let has_l = local_regions.contains(&d);
        let has_e = en_pairs.iter().any(|p| p.1 == d);
        let has_h = hsc_pairs.iter().any(|p| p.1 == d);
        let a_l = has_l.then(|| lp.add_var(format!("A_L[{id}]"), 0.0, inf, uc.nitrogen_per_t));
        let a_e = has_e.then(|| lp.add_var(format!("A_E[{id}]"), 0.0, inf, uc.nitrogen_per_t));
        let a_h = has_h.then(|| lp.add_var(format!("A_H[{id}]"), 0.0, inf, uc.nitrogen_per_t));
        let el_e = has_e.then(|| lp.add_var(format!("EL_E[{id}]"), 0.0, inf, uc.el_per_mw));
        demands.push(DemandVars {
            region: d,
            a_l,
            a_e,
            a_h,
            el_e,
        });
    }
    let dem_of = |d: usize| demands.iter().position(|x: &DemandVars| x.region == d).unwrap();

    let mut local = Vec::new();
    for &d in &local_regions {
        let id = s.regions[d].id;
        let e_l = lp.add_var(format!("E_L[{id}]"), 0.0, inf, uc.water_per_mwh);
        let hourly = (0..HOURS)
            .map(|t| lp.add_var(format!("P_L[{id},{t}]"), 0.0, inf, 0.0))
            .collect();
        local.push(LocalVars {
            source: src_of(d),
            demand: dem_of(d),
            e_l,
            hourly,
        });
    }
    let mut hsc = Vec::new();
    for &(w, d) in &hsc_pairs {
        let km = trucks.distance(w, d);
        let u = trucks.utilization(km);
        let var = lp.add_var(
            format!("H[{}->{}]", s.regions[w].id, s.regions[d].id),
            0.0,
            inf,
            uc.hsc_per_t(km, u, econ),
        );
        hsc.push(HscArc {
            source: src_of(w),
            demand: dem_of(d),
            km,
            u,
            var,
        });
    }
    let mut en = Vec::new();
    for &(w, d) in &en_pairs {
        let var = lp.add_var(
            format!("E[{}->{}]", s.regions[w].id, s.regions[d].id),
            0.0,
            inf,
            uc.water_per_mwh + uc.wheeling_per_mwh,
        );
        en.push(EnArc {
            source: src_of(w),
            demand: dem_of(d),
            var,
        });
    }

    let profile = |k: usize| &s.profile(s.regions[sources[k].region].id).unwrap().p;

    // Sources.
    for (k, sv) in sources.iter().enumerate() {
        let id = s.regions[sv.region].id;
        let loc = local.iter().find(|l| l.source == k);
        let outs_e: Vec<usize> = en.iter().filter(|a| a.source == k).map(|a| a.var).collect();
        let outs_h: Vec<usize> = hsc.iter().filter(|a| a.source == k).map(|a| a.var).collect();
        let mut split = vec![(sv.e, 1.0)];
        if let Some(l) = loc {
            split.push((l.e_l, -1.0));
        }
        split.extend(outs_e.iter().map(|&v| (v, -1.0)));
        split.extend(outs_h.iter().map(|&v| (v, -1.0 / eta_h)));
        lp.add_row(format!("split[{id}]"), split, Relation::Eq, 0.0);

        let p = profile(k);
        if let Some(l) = loc {
            for t in 0..HOURS {
                let mut terms = vec![(sv.e, p[t]), (l.hourly[t], -1.0)];
                terms.extend(outs_e.iter().map(|&v| (v, -p[t])));
                lp.add_row(format!("local_share[{id},{t}]"), terms, Relation::Ge, 0.0);
            }
            let mut terms: Vec<(usize, f64)> = l.hourly.iter().map(|&v| (v, 1.0)).collect();
            terms.push((l.e_l, -1.0));
            lp.add_row(format!("local_sum[{id}]"), terms, Relation::Eq, 0.0);
        }
        if let Some(el) = sv.el_lh {
            let mut terms = vec![(el, 1.0), (sv.e, -sv.peak)];
            terms.extend(outs_e.iter().map(|&v| (v, sv.peak)));
            lp.add_row(format!("el_lh[{id}]"), terms, Relation::Ge, 0.0);
        }
        if let Some(m) = sv.m_hs {
            let mut terms = vec![(m, 1.0)];
            terms.extend(outs_h.iter().map(|&v| (v, -1.0)));
            lp.add_row(format!("storage[{id}]"), terms, Relation::Eq, 0.0);
        }
    }

    // Demands.
    for (k, dv) in demands.iter().enumerate() {
        let r = &s.regions[dv.region];
        let id = r.id;
        let mut sum = Vec::new();
        if let Some(a) = dv.a_l {
            let l = local.iter().find(|l| l.demand == k).unwrap();
            lp.add_row(
                format!("conv_L[{id}]"),
                vec![(a, 1.0), (l.e_l, -eta_a)],
                Relation::Eq,
                0.0,
            );
            sum.push((a, 1.0));
        }
        let imports: Vec<&EnArc> = en.iter().filter(|a| a.demand == k).collect();
        if let Some(a) = dv.a_e {
            let mut terms = vec![(a, 1.0)];
            terms.extend(imports.iter().map(|x| (x.var, -eta_a)));
            lp.add_row(format!("conv_E[{id}]"), terms, Relation::Eq, 0.0);
            sum.push((a, 1.0));
        }
        if let Some(a) = dv.a_h {
            let mut terms = vec![(a, 1.0)];
            terms.extend(hsc.iter().filter(|x| x.demand == k).map(|x| (x.var, -k_hta)));
            lp.add_row(format!("conv_H[{id}]"), terms, Relation::Eq, 0.0);
            sum.push((a, 1.0));
        }
        lp.add_row(format!("demand[{id}]"), sum, Relation::Eq, r.ammonia / 1000.0);
        if let Some(el) = dv.el_e {
            for t in 0..HOURS {
                let mut terms = vec![(el, 1.0)];
                terms.extend(imports.iter().map(|x| (x.var, -profile(x.source)[t])));
                lp.add_row(format!("el_e[{id},{t}]"), terms, Relation::Ge, 0.0);
            }
        }
    }

    // Buffers.
    let mut buffers = Vec::new();
    for (k, dv) in demands.iter().enumerate() {
        let id = s.regions[dv.region].id;
        for (mode, a) in [(Mode::Local, dv.a_l), (Mode::En, dv.a_e)] {
            let Some(a) = a else { continue };
            let tag = mode.label();
            let cap = lp.add_var(format!("m_BUF_{tag}[{id}]"), 0.0, inf, uc.buf_per_t);
            let level: Vec<usize> = (0..HOURS)
                .map(|t| lp.add_var(format!("lev_{tag}[{id},{t}]"), 0.0, inf, 0.0))
                .collect();
            let out: Vec<usize> = (0..HOURS)
                .map(|t| lp.add_var(format!("out_{tag}[{id},{t}]"), 0.0, inf, 0.0))
                .collect();
            for t in 0..HOURS {
                let mut terms = vec![(level[(t + 1) % HOURS], 1.0), (level[t], -1.0), (out[t], 1.0)];
                match mode {
                    Mode::Local => {
                        let l = local.iter().find(|l| l.demand == k).unwrap();
                        terms.push((l.hourly[t], -eta_h));
                    }
                    _ => {
                        for x in en.iter().filter(|x| x.demand == k) {
                            terms.push((x.var, -eta_h * profile(x.source)[t]));
                        }
                    }
                }
                lp.add_row(format!("buf_bal_{tag}[{id},{t}]"), terms, Relation::Eq, 0.0);
            }
            for t in 0..HOURS {
                lp.add_row(
                    format!("buf_cap_{tag}[{id},{t}]"),
                    vec![(cap, 1.0), (level[t], -1.0)],
                    Relation::Ge,
                    0.0,
                );
            }
            for t in 0..HOURS {
                lp.add_row(
                    format!("buf_min_{tag}[{id},{t}]"),
                    vec![(out[t], 1.0), (a, -econ.k_min)],
                    Relation::Ge,
                    0.0,
                );
                lp.add_row(
                    format!("buf_max_{tag}[{id},{t}]"),
                    vec![(out[t], 1.0), (a, -econ.k_max)],
                    Relation::Le,
                    0.0,
                );
            }
            buffers.push(BufferVars {
                demand: k,
                mode,
                cap,
                level,
                out,
            });
        }
    }

    // Grid limits on the flows caused by transfers.
    for (l, b) in grid.branches.iter().enumerate() {
        for t in 0..HOURS {
            let mut terms = Vec::new();
            for x in &en {
                let from = sources[x.source].region;
                let to = demands[x.demand].region;
                let c = (grid.ptdf[(l, from)] - grid.ptdf[(l, to)]) * profile(x.source)[t];
                if c.abs() > 1e-12 {
                    terms.push((x.var, c));
                }
            }
            if terms.is_empty() {
                continue;
            }
            let name = format!("{}-{}", b.from, b.to);
            lp.add_row(format!("flow_max[{name},{t}]"), terms.clone(), Relation::Le, b.cap_fwd);
            lp.add_row(format!("flow_min[{name},{t}]"), terms, Relation::Ge, -b.cap_rev);
        }
    }

    Ok(PlanModel {
        lp,
        curves,
        sources,
        demands,
        local,
        hsc,
        en,
        buffers,
        grid,
        trucks,
    })
}
