//! Scenario files: loading, validation and canonical writing.
//!
//! A scenario directory holds `regions.csv`, `distances.csv`, `grid.csv`,
//! `profiles.csv` and `economics.cfg`, plus an optional `hsc_links.csv`.
//! Ammonia demand is read in tonnes per day and kept in kg/d.

mod config;
mod tables;

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::economics::EconomicParams;
use crate::error::{Error, Result};
use crate::grid::{Branch, GridModel};
use crate::hsc::{self, Link};
use crate::wind::{synth_profile, PotentialCurve, WindProfile};

pub use config::{parse_config, write_config};
pub use tables::{
    parse_distances, parse_grid, parse_links, parse_profiles, parse_regions, write_distances, write_grid, write_links,
    write_profiles, write_regions,
};

pub const REGIONS_FILE: &str = "regions.csv";
pub const DISTANCES_FILE: &str = "distances.csv";
pub const GRID_FILE: &str = "grid.csv";
pub const PROFILES_FILE: &str = "profiles.csv";
pub const ECONOMICS_FILE: &str = "economics.cfg";
pub const LINKS_FILE: &str = "hsc_links.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Zone {
    Western,
    Eastern,
}

impl fmt::Display for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Zone::Western => "western",
            Zone::Eastern => "eastern",
        })
    }
}

impl std::str::FromStr for Zone {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "western" => Ok(Zone::Western),
            "eastern" => Ok(Zone::Eastern),
            other => Err(format!("unknown zone {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub id: usize,
    pub name: String,
    pub zone: Zone,
    /// kg/d NH3
    pub ammonia: f64,
    /// `None` when the region has no usable wind.
    pub curve: Option<PotentialCurve>,
}

impl Region {
    pub fn has_wind(&self) -> bool {
        self.curve.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Longest daily truck route, km.
    pub d_max_km: f64,
    pub truck_speed_kmh: f64,
    pub truck_hours_per_day: f64,
    /// Absolute primal feasibility tolerance of the LP.
    pub feas_tol: f64,
    /// Relative curve violation accepted by the linearization loop.
    pub cut_tol: f64,
    pub slp_max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            d_max_km: 500.0,
            truck_speed_kmh: 50.0,
            truck_hours_per_day: 10.0,
            feas_tol: 1e-7,
            cut_tol: 1e-6,
            slp_max_iter: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Sorted by id.
    pub regions: Vec<Region>,
    pub grid: Vec<Branch>,
    /// km, indexed by region position.
    pub distances: Vec<Vec<f64>>,
    /// Adjacent-region truck links by region id; derived from `distances`
    /// when absent.
    pub links: Option<Vec<(usize, usize, f64)>>,
    /// Sorted by region id.
    pub profiles: Vec<WindProfile>,
    pub economics: EconomicParams,
    pub options: SolverOptions,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<String>,
    /// Conditions worth noting that do not block planning.
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.issues.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(self.issues))
        }
    }
}

/// Locations of the scenario files.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioPaths {
    pub regions: PathBuf,
    pub distances: PathBuf,
    pub grid: PathBuf,
    pub profiles: PathBuf,
    pub economics: PathBuf,
    pub links: Option<PathBuf>,
}

impl ScenarioPaths {
    /// Standard file names inside `dir`; `hsc_links.csv` only if present.
    pub fn in_dir(dir: &Path) -> Self {
        let links = dir.join(LINKS_FILE);
        Self {
            regions: dir.join(REGIONS_FILE),
            distances: dir.join(DISTANCES_FILE),
            grid: dir.join(GRID_FILE),
            profiles: dir.join(PROFILES_FILE),
            economics: dir.join(ECONOMICS_FILE),
            links: links.exists().then_some(links),
        }
    }

    pub fn all(&self) -> Vec<&Path> {
        let mut v = vec![
            self.regions.as_path(),
            self.distances.as_path(),
            self.grid.as_path(),
            self.profiles.as_path(),
            self.economics.as_path(),
        ];
        v.extend(self.links.as_deref());
        v
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Parses every file. The result is not yet validated.
pub fn parse_scenario(paths: &ScenarioPaths) -> Result<Scenario> {
    let regions = parse_regions(&read_text(&paths.regions)?, &paths.regions)?;
    let ids: Vec<usize> = regions.iter().map(|r| r.id).collect();
    let distances = parse_distances(&read_text(&paths.distances)?, &paths.distances, &ids)?;
    let grid = parse_grid(&read_text(&paths.grid)?, &paths.grid)?;
    let profiles = parse_profiles(&read_text(&paths.profiles)?, &paths.profiles)?;
    let (economics, options) = parse_config(&read_text(&paths.economics)?, &paths.economics)?;
    let links = match &paths.links {
        Some(p) => Some(parse_links(&read_text(p)?, p)?),
        None => None,
    };
    Ok(Scenario {
        regions,
        grid,
        distances,
        links,
        profiles,
        economics,
        options,
    })
}

/// Parses and validates the files.
pub fn load_scenario(paths: &ScenarioPaths) -> Result<Scenario> {
    let s = parse_scenario(paths)?;
    validate_scenario(&s).into_result()?;
    Ok(s)
}

pub fn load_scenario_dir(dir: &Path) -> Result<Scenario> {
    load_scenario(&ScenarioPaths::in_dir(dir))
}

/// Writes every file of `s` into `dir` in canonical form.
pub fn write_scenario(dir: &Path, s: &Scenario) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_text(&dir.join(REGIONS_FILE), &write_regions(&s.regions))?;
    let ids: Vec<usize> = s.regions.iter().map(|r| r.id).collect();
    write_text(&dir.join(DISTANCES_FILE), &write_distances(&ids, &s.distances))?;
    write_text(&dir.join(GRID_FILE), &write_grid(&s.grid))?;
    write_text(&dir.join(PROFILES_FILE), &write_profiles(&s.profiles))?;
    write_text(&dir.join(ECONOMICS_FILE), &write_config(&s.economics, &s.options))?;
    if let Some(links) = &s.links {
        write_text(&dir.join(LINKS_FILE), &write_links(links))?;
    }
    Ok(())
}

/// Lists every violated invariant; an empty report means the planner can use `s`.
pub fn validate_scenario(s: &Scenario) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let issues = &mut rep.issues;
    let n = s.regions.len();
    if n == 0 {
        issues.push("no regions".into());
    }
    for (k, r) in s.regions.iter().enumerate() {
        if r.id != k + 1 {
            issues.push(format!(
                "region ids must be 1..{n} in order; position {} holds {}",
                k + 1,
                r.id
            ));
            break;
        }
    }
    for r in &s.regions {
        if !(r.ammonia >= 0.0) {
            issues.push(format!("region {}: ammonia demand {} must be >= 0", r.id, r.ammonia));
        }
        if let Some(c) = &r.curve {
            issues.extend(c.issues().into_iter().map(|m| format!("region {}: {m}", r.id)));
            if !c.nondecreasing() {
                rep.warnings
                    .push(format!("region {}: energy bound falls before p_max", r.id));
            }
        }
    }

    if s.distances.len() != n || s.distances.iter().any(|row| row.len() != n) {
        issues.push(format!("distance matrix must be {n} x {n}"));
    } else {
        for i in 0..n {
            if s.distances[i][i] != 0.0 {
                issues.push(format!("distance {0}->{0} must be 0", i + 1));
            }
            for j in 0..n {
                let d = s.distances[i][j];
                if i != j && !(d > 0.0) {
                    issues.push(format!("distance {}->{} must be > 0, got {d}", i + 1, j + 1));
                }
                if j > i && d != s.distances[j][i] {
                    issues.push(format!(
                        "distances are asymmetric: {}->{} = {d}, {}->{} = {}",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1,
                        s.distances[j][i]
                    ));
                }
            }
        }
    }

    let known = |id: usize| id >= 1 && id <= n;
    let mut grid_ok = true;
    for b in &s.grid {
        for end in [b.from, b.to] {
            if !known(end) {
                issues.push(format!(
                    "grid branch {}-{} references unknown region {end}",
                    b.from, b.to
                ));
                grid_ok = false;
            }
        }
    }
    if grid_ok && n > 0 {
        if let Err(e) = grid_model(s) {
            issues.push(e.to_string());
        }
    }

    let mut seen = vec![false; n + 1];
    for w in &s.profiles {
        if !known(w.region) {
            issues.push(format!("profile references unknown region {}", w.region));
            continue;
        }
        if std::mem::replace(&mut seen[w.region], true) {
            issues.push(format!("region {} has two profiles", w.region));
        }
        issues.extend(w.issues());
    }
    for r in &s.regions {
        if r.has_wind() && !seen.get(r.id).copied().unwrap_or(false) {
            issues.push(format!("wind region {} has no profile", r.id));
        }
    }

    if let Some(links) = &s.links {
        if links.iter().any(|&(a, b, _)| !known(a) || !known(b)) {
            issues.push("truck link references an unknown region".into());
        } else if s.distances.len() == n {
            match hsc::shortest_paths(n, &id_links(links)) {
                Ok(sp) => {
                    for i in 0..n {
                        for j in 0..n {
                            if sp.dist[i][j] != s.distances[i][j] {
                                issues.push(format!(
                                    "truck links give {}->{} = {} km, distance table has {}",
                                    i + 1,
                                    j + 1,
                                    sp.dist[i][j],
                                    s.distances[i][j]
                                ));
                            }
                        }
                    }
                }
                Err(e) => issues.push(e.to_string()),
            }
        }
    }

    issues.extend(s.economics.issues());
    let o = &s.options;
    if !(o.d_max_km >= 0.0) {
        issues.push(format!("d_max_km {} must be >= 0", o.d_max_km));
    }
    if !(o.truck_speed_kmh > 0.0 && o.truck_hours_per_day > 0.0) {
        issues.push("truck speed and hours must be > 0".into());
    }
    if !(o.feas_tol > 0.0 && o.cut_tol > 0.0) || o.slp_max_iter == 0 {
        issues.push("solver tolerances and iteration cap must be > 0".into());
    }
    rep
}

fn id_links(links: &[(usize, usize, f64)]) -> Vec<Link> {
    links
        .iter()
        .map(|&(a, b, km)| Link { a: a - 1, b: b - 1, km })
        .collect()
}

/// Grid with one island per zone.
pub fn grid_model(s: &Scenario) -> Result<GridModel> {
    let nodes: Vec<usize> = s.regions.iter().map(|r| r.id).collect();
    let islands: Vec<usize> = s.regions.iter().map(|r| r.zone as usize).collect();
    GridModel::new(nodes, &islands, s.grid.clone())
}

/// Truck network with the scenario's distance cap and fleet parameters.
pub fn hsc_model(s: &Scenario) -> Result<hsc::HscModel> {
    let links = match &s.links {
        Some(l) => id_links(l),
        None => hsc::derive_links(&s.distances),
    };
    let o = &s.options;
    hsc::HscModel::new(
        s.regions.len(),
        links,
        o.d_max_km,
        o.truck_speed_kmh,
        o.truck_hours_per_day,
    )
}

impl Scenario {
    pub fn region(&self, id: usize) -> Option<&Region> {
        self.regions.get(id.wrapping_sub(1)).filter(|r| r.id == id)
    }

    pub fn profile(&self, id: usize) -> Option<&WindProfile> {
        self.profiles.iter().find(|w| w.region == id)
    }

    /// Replaces every wind region's profile with `synth_profile(intensity, seed + id)`.
    pub fn with_synthetic_profiles(mut self, intensity: f64, seed: u64) -> Result<Self> {
        let mut profiles = Vec::new();
        for r in self.regions.iter().filter(|r| r.has_wind()) {
            let mut w = synth_profile(intensity, seed.wrapping_add(r.id as u64))?;
            w.region = r.id;
            profiles.push(w);
        }
        self.profiles = profiles;
        Ok(self)
    }

    /// Total demand, kg/d.
    pub fn total_ammonia(&self) -> f64 {
        self.regions.iter().map(|r| r.ammonia).sum()
    }
}

/// Directory of the bundled Inner Mongolia scenario.
pub fn bundled_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join("inner_mongolia")
}

/// The bundled Inner Mongolia scenario.
pub fn bundled_scenario() -> Result<Scenario> {
    load_scenario_dir(&bundled_dir())
}

/// Fluctuation intensity and seed behind each bundled profile. Stronger
/// intraday swings in regions 2, 11 and 12, mild ones in 4 and 8.
pub const BUNDLED_PROFILE_SEEDS: [(usize, f64, u64); 7] = [
    (2, 0.85, 2),
    (4, 0.3, 4),
    (8, 0.3, 8),
    (9, 0.5, 9),
    (10, 0.45, 10),
    (11, 0.8, 11),
    (12, 0.7, 12),
];
