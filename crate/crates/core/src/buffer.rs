//! Intraday hydrogen buffer between electrolysis and ammonia synthesis.
//!
//! The reactor draws between `k_min A` and `k_max A` kg/h of hydrogen for a
//! daily ammonia output `A`. The tank level follows
//! `m[t+1] = m[t] + in[t] - out[t]` cyclically over the day, starting from a
//! free level, and the tank must hold the highest level reached.

use serde::{Deserialize, Serialize};

use crate::economics::EconomicParams;
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpOptions, LpProblem, LpStatus, Relation};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    pub explanation: String,
}

/// Whether the daily hydrogen need `A / k_hta` fits the reactor's daily intake
/// window `[24 k_min A, 24 k_max A]`.
pub fn feasibility_check(ammonia: f64, econ: &EconomicParams) -> Feasibility {
    let hours = crate::wind::HOURS as f64;
    let need = ammonia / econ.k_hta.value();
    let lo = hours * econ.k_min * ammonia;
    let hi = hours * econ.k_max * ammonia;
    let tol = 1e-12 * need.max(1.0);
    let feasible = ammonia >= 0.0 && need >= lo - tol && need <= hi + tol;
    let explanation = if feasible {
        format!("daily hydrogen {need} kg lies in [{lo}, {hi}] kg")
    } else if need < lo {
        format!("daily hydrogen {need} kg is below the minimum intake {lo} kg")
    } else {
        format!("daily hydrogen {need} kg exceeds the maximum intake {hi} kg")
    };
    Feasibility { feasible, explanation }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BufferProblem {
    /// kg per hour slot
    pub input: Vec<f64>,
    /// kg/d NH3
    pub ammonia: f64,
    pub k_min: f64,
    pub k_max: f64,
    pub k_hta: f64,
}

impl BufferProblem {
    pub fn new(input: Vec<f64>, ammonia: f64, econ: &EconomicParams) -> Self {
        Self {
            input,
            ammonia,
            k_min: econ.k_min,
            k_max: econ.k_max,
            k_hta: econ.k_hta.value(),
        }
    }

    pub fn window(&self) -> (f64, f64) {
        (self.k_min * self.ammonia, self.k_max * self.ammonia)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BufferSchedule {
    /// kg/h
    pub output: Vec<f64>,
    /// kg at the start of each hour
    pub level: Vec<f64>,
    /// kg
    pub capacity: f64,
}

impl BufferSchedule {
    pub fn empty(hours: usize) -> Self {
        Self {
            output: vec![0.0; hours],
            level: vec![0.0; hours],
            capacity: 0.0,
        }
    }
}

/// Smallest tank that lets the reactor stay inside its intake window.
pub fn size_buffer(p: &BufferProblem) -> Result<BufferSchedule> {
    let n = p.input.len();
    if n == 0 {
        return Err(Error::Contract("empty input profile".into()));
    }
    if p.input.iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::Contract("hydrogen input must be >= 0".into()));
    }
    let supplied: f64 = p.input.iter().sum();
    let need = p.ammonia / p.k_hta;
    if (supplied - need).abs() > 1e-9 * need.max(1.0) {
        return Err(Error::Contract(format!(
            "input {supplied} kg/d differs from the {need} kg/d hydrogen need"
        )));
    }
    if p.ammonia == 0.0 {
        return Ok(BufferSchedule::empty(n));
    }
    let (lo, hi) = p.window();
    if supplied < lo * n as f64 - 1e-9 * need || supplied > hi * n as f64 + 1e-9 * need {
        return Err(Error::Infeasible(format!(
            "daily hydrogen {supplied} kg outside the intake window [{}, {}] kg",
            lo * n as f64,
            hi * n as f64
        )));
    }
    let mut lp = LpProblem::new();
    let cap = lp.add_var("cap", 0.0, f64::INFINITY, 1.0);
    let out: Vec<usize> = (0..n).map(|t| lp.add_var(format!("out{t}"), lo, hi, 0.0)).collect();
    let lev: Vec<usize> = (0..n)
        .map(|t| lp.add_var(format!("lev{t}"), 0.0, f64::INFINITY, 0.0))
        .collect();
    for t in 0..n {
        let next = lev[(t + 1) % n];
        lp.add_row(
            format!("bal{t}"),
            vec![(next, 1.0), (lev[t], -1.0), (out[t], 1.0)],
            Relation::Eq,
            p.input[t],
        );
        lp.add_row(format!("top{t}"), vec![(cap, 1.0), (lev[t], -1.0)], Relation::Ge, 0.0);
    }
    let sol = solve_lp(&lp, &LpOptions::default())?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Infeasible(format!("buffer LP is {:?}", sol.status)));
    }
    Ok(BufferSchedule {
        output: out.iter().map(|&j| sol.x[j]).collect(),
        level: lev.iter().map(|&j| sol.x[j]).collect(),
        capacity: sol.x[cap],
    })
}
