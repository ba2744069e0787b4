//! Independent audit of a plan.
//!
//! Works only from the reported quantities and the scenario, never from the
//! LP, so a modeling slip in the assembly shows up here as a residual.

use serde::{Deserialize, Serialize};

use super::{Mode, PlanningSolution};
use crate::data_io::{grid_model, hsc_model, Scenario};
use crate::error::{Error, Result};
use crate::wind::HOURS;

/// Largest relative residual per family of conditions.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub demand: f64,
    pub wind_curve: f64,
    pub energy_split: f64,
    pub conversion: f64,
    pub hourly_power: f64,
    pub electrolysis: f64,
    pub buffer: f64,
    pub transport: f64,
    pub grid: f64,
    pub cost: f64,
    /// Names of the conditions whose residual exceeds the tolerance.
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn max(&self) -> f64 {
        [
            self.demand,
            self.wind_curve,
            self.energy_split,
            self.conversion,
            self.hourly_power,
            self.electrolysis,
            self.buffer,
            self.transport,
            self.grid,
            self.cost,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Relative tolerance applied by [`check_solution`].
pub const CHECK_TOL: f64 = 1e-6;

struct Audit {
    report: CheckReport,
}

impl Audit {
    /// Records `|lhs - rhs| / max(1, |scale|)` under `family`.
    fn eq(&mut self, family: fn(&mut CheckReport) -> &mut f64, what: String, lhs: f64, rhs: f64, scale: f64) {
        self.ge(family, what.clone(), lhs, rhs, scale);
        self.ge(family, what, rhs, lhs, scale);
    }

    /// Records the relative shortfall of `lhs >= rhs`.
    fn ge(&mut self, family: fn(&mut CheckReport) -> &mut f64, what: String, lhs: f64, rhs: f64, scale: f64) {
        let r = ((rhs - lhs) / scale.abs().max(1.0)).max(0.0);
        let r = if r.is_nan() { f64::INFINITY } else { r };
        let slot = family(&mut self.report);
        *slot = slot.max(r);
        if r > CHECK_TOL {
            self.report.failures.push(format!("{what}: residual {r:.3e}"));
        }
    }
}

/// Audits demand, wind curves, energy and mass balances, electrolyzer peaks,
/// buffer operation, truck paths, grid flows and the cost identity.
pub fn check_solution(s: &Scenario, sol: &PlanningSolution) -> Result<CheckReport> {
    let econ = &s.economics;
    let eta_h = econ.eta_wth.value() * 1000.0;
    let eta_a = econ.eta_wta.value() * 1000.0;
    let k_hta = econ.k_hta.value();
    let mut au = Audit {
        report: CheckReport::default(),
    };
    if sol.regions.len() != s.regions.len() {
        return Err(Error::Contract("solution and scenario list different regions".into()));
    }

    for (reg, r) in s.regions.iter().zip(&sol.regions) {
        let id = reg.id;
        au.eq(
            |c| &mut c.demand,
            format!("demand[{id}]"),
            r.ammonia(),
            reg.ammonia,
            reg.ammonia,
        );
        for (v, name) in [
            (r.p_re, "P_RE"),
            (r.e, "E"),
            (r.e_local, "E_L"),
            (r.e_export, "E_ES"),
            (r.e_hsc, "E_HS"),
            (r.p_el_lh, "EL_LH"),
            (r.p_el_e, "EL_E"),
            (r.m_buf_local, "m_BUF_L"),
            (r.m_buf_en, "m_BUF_E"),
            (r.m_hs, "m_HS"),
        ] {
            au.ge(|c| &mut c.energy_split, format!("{name}[{id}] >= 0"), v, 0.0, 1.0);
        }
        match reg.curve {
            Some(c) => {
                au.ge(|x| &mut x.wind_curve, format!("P_max[{id}]"), c.p_max, r.p_re, c.p_max);
                let f = c.a * r.p_re * r.p_re + c.b * r.p_re;
                au.ge(|x| &mut x.wind_curve, format!("curve[{id}]"), f, r.e, f);
            }
            None => {
                au.eq(|x| &mut x.wind_curve, format!("no wind[{id}]"), r.p_re + r.e, 0.0, 1.0);
            }
        }
        au.eq(
            |c| &mut c.energy_split,
            format!("split[{id}]"),
            r.e,
            r.e_local + r.e_export + r.e_hsc,
            r.e,
        );
        au.eq(
            |c| &mut c.conversion,
            format!("A_L[{id}]"),
            r.a_local,
            eta_a * r.e_local,
            r.a_local,
        );
        au.eq(
            |c| &mut c.conversion,
            format!("A_E[{id}]"),
            r.a_en,
            eta_a * r.e_import,
            r.a_en,
        );
        let h_in: f64 = sol.hydrogen.iter().filter(|f| f.to == id).map(|f| f.hydrogen).sum();
        au.eq(
            |c| &mut c.conversion,
            format!("A_H[{id}]"),
            r.a_hsc,
            k_hta * h_in,
            r.a_hsc,
        );
        let e_out: f64 = sol.electricity.iter().filter(|f| f.from == id).map(|f| f.energy).sum();
        let e_in: f64 = sol.electricity.iter().filter(|f| f.to == id).map(|f| f.energy).sum();
        let h_out: f64 = sol.hydrogen.iter().filter(|f| f.from == id).map(|f| f.hydrogen).sum();
        au.eq(|c| &mut c.energy_split, format!("E_ES[{id}]"), r.e_export, e_out, r.e);
        au.eq(
            |c| &mut c.energy_split,
            format!("E_ED[{id}]"),
            r.e_import,
            e_in,
            r.e_import,
        );
        au.eq(
            |c| &mut c.energy_split,
            format!("E_HS[{id}]"),
            r.e_hsc * eta_h,
            h_out,
            h_out,
        );
        au.eq(|c| &mut c.transport, format!("m_HS[{id}]"), r.m_hs, h_out, h_out);

        // Hourly power at the source.
        if r.e > 0.0 {
            let p = s
                .profile(id)
                .ok_or_else(|| Error::Contract(format!("no profile for region {id}")))?
                .p;
            let base = r.e - r.e_export;
            let local = sol.local_power.get(&id);
            let pl_sum: f64 = local.map_or(0.0, |v| v.iter().sum());
            au.eq(
                |c| &mut c.hourly_power,
                format!("sum P_L[{id}]"),
                pl_sum,
                r.e_local,
                r.e_local,
            );
            let mut hs_sum = 0.0;
            for t in 0..HOURS {
                let pl = local.map_or(0.0, |v| v[t]);
                let avail = base * p[t];
                au.ge(|c| &mut c.hourly_power, format!("P_L[{id},{t}] >= 0"), pl, 0.0, avail);
                au.ge(
                    |c| &mut c.hourly_power,
                    format!("P_HS[{id},{t}] >= 0"),
                    avail - pl,
                    0.0,
                    avail,
                );
                au.ge(
                    |c| &mut c.electrolysis,
                    format!("EL_LH[{id},{t}]"),
                    r.p_el_lh,
                    avail,
                    avail,
                );
                hs_sum += avail - pl;
            }
            au.eq(|c| &mut c.hourly_power, format!("sum P_HS[{id}]"), hs_sum, r.e_hsc, r.e);
        } else if let Some(v) = sol.local_power.get(&id) {
            let total: f64 = v.iter().map(|x| x.abs()).sum();
            au.eq(
                |c| &mut c.hourly_power,
                format!("P_L[{id}] without energy"),
                total,
                0.0,
                1.0,
            );
        }
        for t in 0..HOURS {
            let imp: f64 = sol.electricity.iter().filter(|f| f.to == id).map(|f| f.hourly[t]).sum();
            au.ge(|c| &mut c.electrolysis, format!("EL_E[{id},{t}]"), r.p_el_e, imp, imp);
        }
    }

    // Electricity transfers follow the source profile and stay in one island.
    for f in &sol.electricity {
        let (Some(a), Some(b)) = (s.region(f.from), s.region(f.to)) else {
            return Err(Error::Contract(format!(
                "transfer {}->{} names an unknown region",
                f.from, f.to
            )));
        };
        if a.zone != b.zone {
            au.eq(
                |c| &mut c.grid,
                format!("E[{}->{}] crosses islands", f.from, f.to),
                f.energy,
                0.0,
                1.0,
            );
        }
        let p = s.profile(f.from).map(|w| w.p).unwrap_or([0.0; HOURS]);
        for t in 0..HOURS {
            au.eq(
                |c| &mut c.grid,
                format!("E[{}->{},{t}] shape", f.from, f.to),
                f.hourly[t],
                f.energy * p[t],
                f.energy,
            );
        }
    }

    // Trucks: only feasible paths, distances and utilization as routed.
    let trucks = hsc_model(s)?;
    let pos = |id: usize| s.regions.iter().position(|r| r.id == id);
    for f in &sol.hydrogen {
        let (Some(a), Some(b)) = (pos(f.from), pos(f.to)) else {
            return Err(Error::Contract(format!(
                "path {}->{} names an unknown region",
                f.from, f.to
            )));
        };
        let km = trucks.distance(a, b);
        au.eq(|c| &mut c.transport, format!("km[{}->{}]", f.from, f.to), f.km, km, km);
        au.eq(
            |c| &mut c.transport,
            format!("u[{}->{}]", f.from, f.to),
            f.utilization,
            trucks.utilization(km),
            1.0,
        );
        au.ge(
            |c| &mut c.transport,
            format!("H[{}->{}] >= 0", f.from, f.to),
            f.hydrogen,
            0.0,
            1.0,
        );
        if !trucks.is_feasible(a, b) {
            au.eq(
                |c| &mut c.transport,
                format!("H[{}->{}] beyond cap", f.from, f.to),
                f.hydrogen,
                0.0,
                1.0,
            );
        }
    }

    // Buffers.
    for b in &sol.buffers {
        let r = sol
            .region(b.region)
            .ok_or_else(|| Error::Contract(format!("buffer in unknown region {}", b.region)))?;
        let (a, cap) = match b.mode {
            Mode::Local => (r.a_local, r.m_buf_local),
            _ => (r.a_en, r.m_buf_en),
        };
        let tag = format!("{}[{}]", b.mode.label(), b.region);
        au.eq(|c| &mut c.buffer, format!("capacity {tag}"), b.capacity, cap, cap);
        let inflow: f64 = b.input.iter().sum();
        au.eq(|c| &mut c.buffer, format!("intake {tag}"), inflow, a / k_hta, a / k_hta);
        let expected_in: Vec<f64> = match b.mode {
            Mode::Local => sol
                .local_power
                .get(&b.region)
                .map(|v| v.iter().map(|p| p * eta_h).collect())
                .unwrap_or_else(|| vec![0.0; HOURS]),
            _ => (0..HOURS)
                .map(|t| {
                    sol.electricity
                        .iter()
                        .filter(|f| f.to == b.region)
                        .map(|f| f.hourly[t] * eta_h)
                        .sum()
                })
                .collect(),
        };
        for t in 0..HOURS {
            let scale = a / k_hta;
            au.eq(
                |c| &mut c.buffer,
                format!("input {tag}[{t}]"),
                b.input[t],
                expected_in[t],
                scale,
            );
            let next = b.level[(t + 1) % HOURS];
            au.eq(
                |c| &mut c.buffer,
                format!("balance {tag}[{t}]"),
                next,
                b.level[t] + b.input[t] - b.output[t],
                scale,
            );
            au.ge(
                |c| &mut c.buffer,
                format!("level {tag}[{t}] >= 0"),
                b.level[t],
                0.0,
                scale,
            );
            au.ge(
                |c| &mut c.buffer,
                format!("level {tag}[{t}] <= cap"),
                b.capacity,
                b.level[t],
                scale,
            );
            au.ge(
                |c| &mut c.buffer,
                format!("k_min {tag}[{t}]"),
                b.output[t],
                econ.k_min * a,
                scale,
            );
            au.ge(
                |c| &mut c.buffer,
                format!("k_max {tag}[{t}]"),
                econ.k_max * a,
                b.output[t],
                scale,
            );
        }
    }

    // Grid: flows reproduce the injections and stay within limits; every
    // island balances every hour.
    let grid = grid_model(s)?;
    for t in 0..HOURS {
        let inj = &sol.injections[t];
        let scale = inj.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for &island in &[crate::data_io::Zone::Western, crate::data_io::Zone::Eastern] {
            let net: f64 = s
                .regions
                .iter()
                .zip(inj)
                .filter(|(r, _)| r.zone == island)
                .map(|(_, v)| v)
                .sum();
            au.eq(
                |c| &mut c.grid,
                format!("island {island} balance[{t}]"),
                net,
                0.0,
                scale,
            );
        }
        let flows = &sol.branch_flows[t];
        let bal = grid.nodal_balance(flows);
        for (k, (b, i)) in bal.iter().zip(inj).enumerate() {
            au.eq(|c| &mut c.grid, format!("node {}[{t}]", s.regions[k].id), *b, *i, scale);
        }
        for (l, br) in grid.branches.iter().enumerate() {
            let lim = br.cap_fwd.max(br.cap_rev);
            au.ge(
                |c| &mut c.grid,
                format!("branch {}-{} fwd[{t}]", br.from, br.to),
                br.cap_fwd,
                flows[l],
                lim,
            );
            au.ge(
                |c| &mut c.grid,
                format!("branch {}-{} rev[{t}]", br.from, br.to),
                flows[l],
                -br.cap_rev,
                lim,
            );
        }
    }

    // Cost identity.
    let stacked: f64 = super::costs::stacked_cost(&sol.stacks);
    au.eq(
        |c| &mut c.cost,
        "stacks vs objective".into(),
        stacked,
        sol.objective,
        sol.objective,
    );

    Ok(au.report)
}
