//! Provenance record attached to every output.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::data_io::Scenario;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptionSnapshot {
    pub discount_rate: f64,
    pub d_max_km: f64,
    pub truck_speed_kmh: f64,
    pub truck_hours_per_day: f64,
    pub feas_tol: f64,
    pub cut_tol: f64,
    pub slp_max_iter: usize,
    pub profiles: String,
    pub jobs: Option<usize>,
}

impl OptionSnapshot {
    pub fn of(s: &Scenario, profiles: &str, jobs: Option<usize>) -> Self {
        let o = &s.options;
        Self {
            discount_rate: s.economics.discount_rate,
            d_max_km: o.d_max_km,
            truck_speed_kmh: o.truck_speed_kmh,
            truck_hours_per_day: o.truck_hours_per_day,
            feas_tol: o.feas_tol,
            cut_tol: o.cut_tol,
            slp_max_iter: o.slp_max_iter,
            profiles: profiles.to_string(),
            jobs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// SHA-256 of every input file, keyed by path as given.
    pub inputs: BTreeMap<String, String>,
    pub options: Option<OptionSnapshot>,
    pub lp_iterations: Option<usize>,
    pub slp_iterations: Option<usize>,
    pub cuts: Option<usize>,
    pub wall_clock_s: f64,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            inputs: BTreeMap::new(),
            options: None,
            lp_iterations: None,
            slp_iterations: None,
            cuts: None,
            wall_clock_s: 0.0,
        }
    }

    pub fn add_input(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        self.inputs
            .insert(path.display().to_string(), hex::encode(Sha256::digest(&bytes)));
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("manifest serializes")
    }

    /// First line of every CSV output.
    pub fn csv_line(&self) -> String {
        format!("# manifest: {}\n", self.to_json())
    }
}
