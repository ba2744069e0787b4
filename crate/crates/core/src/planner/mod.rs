//! Network-wide plan: capacities, transfers and hourly schedules that meet
//! every region's ammonia demand at least daily cost.

mod check;
mod costs;
mod model;
mod sweeps;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data_io::Scenario;
use crate::error::{Error, Result};
use crate::lp::{slp_solve, verify_kkt, KktReport, LpError, LpOptions, LpStatus, SlpOptions};
use crate::wind::HOURS;

pub use check::{check_solution, CheckReport, CHECK_TOL};
pub use costs::{decompose_costs, stacked_cost, LcoaStack, SourceSummary, StackComponents};
pub use model::{build_model, Mode, PlanModel};
pub use sweeps::{capex_sensitivity, local_sweep, local_sweep_profile, CapexPoint, SweepRow};

/// Capacities and daily quantities of one region. Mass in kg, energy in
/// MWh/d, power in MW.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RegionPlan {
    pub id: usize,
    pub p_re: f64,
    pub e: f64,
    pub e_local: f64,
    /// Energy sent out as electricity.
    pub e_export: f64,
    /// Energy converted to hydrogen for trucks.
    pub e_hsc: f64,
    /// Energy received as electricity.
    pub e_import: f64,
    pub p_el_lh: f64,
    pub p_el_e: f64,
    pub m_buf_local: f64,
    pub m_buf_en: f64,
    pub m_hs: f64,
    pub a_local: f64,
    pub a_en: f64,
    pub a_hsc: f64,
}

impl RegionPlan {
    pub fn p_el(&self) -> f64 {
        self.p_el_lh + self.p_el_e
    }

    pub fn m_buf(&self) -> f64 {
        self.m_buf_local + self.m_buf_en
    }

    pub fn ammonia(&self) -> f64 {
        self.a_local + self.a_en + self.a_hsc
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HydrogenFlow {
    pub from: usize,
    pub to: usize,
    pub km: f64,
    pub utilization: f64,
    /// kg/d
    pub hydrogen: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElectricityFlow {
    pub from: usize,
    pub to: usize,
    /// MWh/d
    pub energy: f64,
    /// MW per hour
    pub hourly: Vec<f64>,
}

/// Hourly operation of one buffer tank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BufferRun {
    pub region: usize,
    pub mode: Mode,
    /// kg
    pub capacity: f64,
    /// kg/h
    pub input: Vec<f64>,
    /// kg/h
    pub output: Vec<f64>,
    /// kg at the start of each hour
    pub level: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub variables: usize,
    /// Rows before seed tangents and cuts.
    pub rows: usize,
    pub slp_iterations: usize,
    pub lp_iterations: usize,
    pub cuts: usize,
    pub converged: bool,
    /// Largest relative wind-curve excess of the reported point.
    pub curve_violation: f64,
    pub kkt: KktReport,
    pub check: CheckReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanningSolution {
    /// €/d
    pub objective: f64,
    pub regions: Vec<RegionPlan>,
    pub hydrogen: Vec<HydrogenFlow>,
    pub electricity: Vec<ElectricityFlow>,
    /// Hourly local electrolysis power per region, MW.
    pub local_power: BTreeMap<usize, Vec<f64>>,
    /// Net injection per hour and grid node, MW.
    pub injections: Vec<Vec<f64>>,
    /// Flow per hour and branch, MW.
    pub branch_flows: Vec<Vec<f64>>,
    pub buffers: Vec<BufferRun>,
    pub stacks: Vec<LcoaStack>,
    pub sources: Vec<SourceSummary>,
    pub diagnostics: Diagnostics,
}

impl PlanningSolution {
    pub fn region(&self, id: usize) -> Option<&RegionPlan> {
        self.regions.iter().find(|r| r.id == id)
    }

    pub fn stack(&self, id: usize, mode: Mode) -> Option<&LcoaStack> {
        self.stacks.iter().find(|s| s.region == id && s.mode == mode)
    }

    /// Production-weighted mean levelized cost, €/kg NH3.
    pub fn mean_lcoa(&self) -> f64 {
        let a: f64 = self.regions.iter().map(RegionPlan::ammonia).sum();
        self.objective / a
    }
}

fn slp_options(s: &Scenario) -> SlpOptions {
    SlpOptions {
        lp: LpOptions {
            feas_tol: s.options.feas_tol,
            ..LpOptions::default()
        },
        cut_tol: s.options.cut_tol,
        max_iter: s.options.slp_max_iter,
    }
}

/// Builds and solves the plan, then decomposes and checks the result. A
/// converged plan that fails the check is reported as a solver failure; a
/// plan cut short by the round limit is returned with `converged` unset.
pub fn solve_configuration(s: &Scenario) -> Result<PlanningSolution> {
    let m = build_model(s)?;
    let out = slp_solve(&m.lp, &m.curves, &slp_options(s))?;
    match out.solution.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => {
            return Err(Error::Infeasible(
                "no plan meets every demand within the grid and buffer limits".into(),
            ))
        }
        LpStatus::Unbounded => return Err(Error::Infeasible("plan LP is unbounded".into())),
    }
    let kkt = if out.converged {
        verify_kkt(&out.problem, &out.solution)
    } else {
        KktReport {
            primal: f64::INFINITY,
            dual: f64::INFINITY,
            complementarity: f64::INFINITY,
        }
    };
    let x: Vec<f64> = out
        .solution
        .x
        .iter()
        .map(|&v| if v.abs() < 1e-11 { 0.0 } else { v })
        .collect();
    let curve_violation = m
        .curves
        .iter()
        .map(|c| c.violation(x[c.e_var], x[c.p_var]))
        .fold(0.0f64, f64::max);
    let mut sol = extract(s, &m, &x)?;
    sol.objective = m.lp.objective(&x);
    let (stacks, sources) = decompose_costs(s, &sol)?;
    sol.stacks = stacks;
    sol.sources = sources;
    sol.diagnostics = Diagnostics {
        variables: m.lp.num_vars(),
        rows: m.lp.num_rows(),
        slp_iterations: out.iterations,
        lp_iterations: out.lp_iterations,
        cuts: out.cuts.len(),
        converged: out.converged,
        curve_violation,
        kkt,
        check: CheckReport::default(),
    };
    sol.diagnostics.check = check_solution(s, &sol)?;
    if sol.diagnostics.converged && !sol.diagnostics.check.passes() {
        return Err(Error::Lp(LpError::Numerical(format!(
            "plan fails the independent check: {}",
            sol.diagnostics.check.failures.join("; ")
        ))));
    }
    Ok(sol)
}

fn extract(s: &Scenario, m: &PlanModel, x: &[f64]) -> Result<PlanningSolution> {
    let econ = &s.economics;
    let eta_h = econ.eta_wth.value();
    let mut regions: Vec<RegionPlan> = s
        .regions
        .iter()
        .map(|r| RegionPlan {
            id: r.id,
            ..RegionPlan::default()
        })
        .collect();
    for sv in &m.sources {
        let r = &mut regions[sv.region];
        r.p_re = x[sv.p_re];
        r.e = x[sv.e];
        r.p_el_lh = sv.el_lh.map_or(0.0, |v| x[v]);
        r.m_hs = sv.m_hs.map_or(0.0, |v| x[v] * 1000.0);
    }
    for dv in &m.demands {
        let r = &mut regions[dv.region];
        r.a_local = dv.a_l.map_or(0.0, |v| x[v] * 1000.0);
        r.a_en = dv.a_e.map_or(0.0, |v| x[v] * 1000.0);
        r.a_hsc = dv.a_h.map_or(0.0, |v| x[v] * 1000.0);
        r.p_el_e = dv.el_e.map_or(0.0, |v| x[v]);
    }
    let mut local_power = BTreeMap::<usize, Vec<f64>>::new();
    for l in &m.local {
        let reg = m.sources[l.source].region;
        regions[reg].e_local = x[l.e_l];
        local_power.insert(s.regions[reg].id, l.hourly.iter().map(|&v| x[v]).collect());
    }
    let profile = |reg: usize| s.profile(s.regions[reg].id).expect("validated profile").p;
    let mut hydrogen = Vec::new();
    for a in &m.hsc {
        let (from, to) = (m.sources[a.source].region, m.demands[a.demand].region);
        regions[from].e_hsc += x[a.var] / eta_h;
        hydrogen.push(HydrogenFlow {
            from: s.regions[from].id,
            to: s.regions[to].id,
            km: a.km,
            utilization: a.u,
            hydrogen: x[a.var] * 1000.0,
        });
    }
    let mut electricity = Vec::new();
    let nodes = s.regions.len();
    let mut injections = vec![vec![0.0; nodes]; HOURS];
    for a in &m.en {
        let (from, to) = (m.sources[a.source].region, m.demands[a.demand].region);
        let e = x[a.var];
        regions[from].e_export += e;
        regions[to].e_import += e;
        let p = profile(from);
        let hourly: Vec<f64> = p.iter().map(|v| e * v).collect();
        for t in 0..HOURS {
            injections[t][from] += hourly[t];
            injections[t][to] -= hourly[t];
        }
        electricity.push(ElectricityFlow {
            from: s.regions[from].id,
            to: s.regions[to].id,
            energy: e,
            hourly,
        });
    }
    let branch_flows = injections
        .iter()
        .map(|inj| m.grid.flows(inj))
        .collect::<Result<Vec<_>>>()?;
    let mut buffers = Vec::new();
    for b in &m.buffers {
        let reg = m.demands[b.demand].region;
        let id = s.regions[reg].id;
        let input: Vec<f64> = match b.mode {
            Mode::Local => local_power[&id].iter().map(|p| p * eta_h * 1000.0).collect(),
            _ => (0..HOURS)
                .map(|t| {
                    electricity
                        .iter()
                        .filter(|f| f.to == id)
                        .map(|f| f.hourly[t] * eta_h * 1000.0)
                        .sum()
                })
                .collect(),
        };
        let cap = x[b.cap] * 1000.0;
        match b.mode {
            Mode::Local => regions[reg].m_buf_local = cap,
            _ => regions[reg].m_buf_en = cap,
        }
        buffers.push(BufferRun {
            region: id,
            mode: b.mode,
            capacity: cap,
            input,
            output: b.out.iter().map(|&v| x[v] * 1000.0).collect(),
            level: b.level.iter().map(|&v| x[v] * 1000.0).collect(),
        });
    }
    Ok(PlanningSolution {
        objective: 0.0,
        regions,
        hydrogen,
        electricity,
        local_power,
        injections,
        branch_flows,
        buffers,
        stacks: Vec::new(),
        sources: Vec::new(),
        diagnostics: Diagnostics {
            variables: 0,
            rows: 0,
            slp_iterations: 0,
            lp_iterations: 0,
            cuts: 0,
            converged: false,
            curve_violation: 0.0,
            kkt: KktReport::default(),
            check: CheckReport::default(),
        },
    })
}
