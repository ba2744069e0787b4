//! Command-line front end.
//!
//! Exit codes: 0 success, 1 data error, 2 solver failure, 64 usage error.

pub mod manifest;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::buffer::{feasibility_check, size_buffer, BufferProblem};
use crate::data_io::{
    bundled_dir, grid_model, hsc_model, parse_profiles, parse_scenario, read_text, validate_scenario, Scenario,
    ScenarioPaths,
};
use crate::economics::Coef;
use crate::error::{Error, Result};
use crate::planner::{capex_sensitivity, local_sweep, solve_configuration, PlanningSolution};
use crate::wind::{fit_potential, HOURS};
use manifest::{OptionSnapshot, RunManifest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "wta", version, about = "Wind-to-ammonia network planning")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Scenario directory (default: the bundled Inner Mongolia data).
    #[arg(long, global = true, value_name = "DIR")]
    scenario: Option<PathBuf>,
    /// Directory for output files; stdout when absent.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "R")]
    discount_rate: Option<f64>,
    /// Truck distance cap.
    #[arg(long, global = true, value_name = "KM")]
    dmax: Option<f64>,
    /// Profile file, or `synth:<intensity>:<seed>`.
    #[arg(long, global = true, value_name = "SRC")]
    profiles: Option<String>,
    /// Relative wind-curve tolerance of the linearization.
    #[arg(long, global = true, value_name = "X")]
    tol: Option<f64>,
    /// Linearization rounds.
    #[arg(long, global = true, value_name = "N")]
    max_iter: Option<usize>,
    /// Worker threads for sweeps.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the scenario files.
    Validate,
    /// Solve the plan and write solution.json and the tables.
    Solve,
    /// Solve and print the tables as text.
    Report,
    /// Fit a wind potential curve to `p_mw,e_mwh` samples.
    Fit {
        #[arg(long, value_name = "FILE")]
        samples: PathBuf,
    },
    /// Hydrogen buffer tools.
    Buffer {
        #[command(subcommand)]
        command: BufferCommand,
    },
    /// Truck network tools.
    Hsc {
        #[command(subcommand)]
        command: HscCommand,
    },
    /// Grid tools.
    Grid {
        #[command(subcommand)]
        command: GridCommand,
    },
    /// Parameter sweeps.
    Sweep {
        #[command(subcommand)]
        command: SweepCommand,
    },
    /// Compare with coal-based ammonia.
    CompareCta {
        /// Replaced coal-based production, Mt/yr.
        #[arg(long, value_name = "MT", default_value = "1.06")]
        production_mt: String,
        /// Wind-based cost, €/kg; the plan's mean when absent.
        #[arg(long, value_name = "EUR")]
        wta_lcoa: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
enum BufferCommand {
    /// Smallest buffer for a region's profile and demand.
    Size {
        #[arg(long)]
        region: usize,
        /// Daily ammonia output; the region's demand when absent.
        #[arg(long, value_name = "T")]
        ammonia_tpd: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
enum HscCommand {
    /// Shortest truck routes between all regions and their feasibility.
    Paths,
}

#[derive(Debug, Subcommand)]
enum GridCommand {
    /// Branch flows and limit breaches for hourly injections; the plan's
    /// injections when no file is given.
    Check {
        /// CSV `hour,<id>,<id>...` of MW injections.
        #[arg(long, value_name = "FILE")]
        injections: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum SweepCommand {
    /// Local conversion in one region over a range of daily energies.
    Local {
        #[arg(long, default_value_t = 12)]
        region: usize,
        /// `start:stop:count`, MWh/d.
        #[arg(long, default_value = "0:500:11")]
        energy: String,
    },
    /// Local cost under scaled wind and electrolyzer unit costs.
    Capex {
        #[arg(long, default_value_t = 12)]
        region: usize,
        #[arg(long, default_value = "0.5:1.0:6")]
        re: String,
        #[arg(long, default_value = "0.5:1.0:6")]
        el: String,
        /// Re-plan at every point instead of keeping the base capacities.
        #[arg(long)]
        resolve: bool,
    },
}

/// Parses `start:stop:count` into evenly spaced values, or a single number.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::Domain(format!("range `{text}` is not `start:stop:count` or a number"));
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![v.trim().parse().map_err(|_| bad())?]),
        [a, b, n] => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            match n {
                0 => Err(bad()),
                1 => Ok(vec![a]),
                _ => Ok((0..n)
                    .map(|i| {
                        if i == n - 1 {
                            b
                        } else {
                            a + (b - a) * i as f64 / (n - 1) as f64
                        }
                    })
                    .collect()),
            }
        }
        _ => Err(bad()),
    }
}

struct Context {
    global: Global,
    manifest: RunManifest,
}

impl Context {
    fn profile_label(&self) -> String {
        self.global.profiles.clone().unwrap_or_else(|| "scenario".into())
    }

    /// Loads the scenario with command-line overrides and validates it.
    fn scenario(&mut self) -> Result<Scenario> {
        let dir = self.global.scenario.clone().unwrap_or_else(bundled_dir);
        let mut paths = ScenarioPaths::in_dir(&dir);
        let mut synth = None;
        match self.global.profiles.as_deref() {
            Some(p) if p.starts_with("synth:") => {
                let f: Vec<&str> = p.split(':').collect();
                let bad = || Error::Domain(format!("profile source `{p}` is not synth:<intensity>:<seed>"));
                if f.len() != 3 {
                    return Err(bad());
                }
                let i: f64 = f[1].parse().map_err(|_| bad())?;
                let seed: u64 = f[2].parse().map_err(|_| bad())?;
                synth = Some((i, seed));
            }
            Some(p) => paths.profiles = PathBuf::from(p),
            None => {}
        }
        for p in paths.all() {
            if synth.is_some() && p == paths.profiles {
                continue;
            }
            self.manifest.add_input(p)?;
        }
        let mut s = parse_scenario(&paths)?;
        if let Some((i, seed)) = synth {
            s = s.with_synthetic_profiles(i, seed)?;
        }
        let g = &self.global;
        if let Some(r) = g.discount_rate {
            s.economics.discount_rate = r;
        }
        if let Some(d) = g.dmax {
            s.options.d_max_km = d;
        }
        if let Some(t) = g.tol {
            s.options.cut_tol = t;
        }
        if let Some(n) = g.max_iter {
            s.options.slp_max_iter = n;
        }
        validate_scenario(&s).into_result()?;
        self.manifest.options = Some(OptionSnapshot::of(&s, &self.profile_label(), g.jobs));
        Ok(s)
    }

    fn solve(&mut self, s: &Scenario) -> Result<PlanningSolution> {
        let sol = solve_configuration(s)?;
        let d = &sol.diagnostics;
        self.manifest.lp_iterations = Some(d.lp_iterations);
        self.manifest.slp_iterations = Some(d.slp_iterations);
        self.manifest.cuts = Some(d.cuts);
        Ok(sol)
    }
}

struct Outputs<'a> {
    dir: Option<PathBuf>,
    stdout: &'a mut Vec<u8>,
}

impl Outputs<'_> {
    /// Writes `text` to `name` in the output directory, or to stdout.
    fn emit(&mut self, name: &str, text: &str) -> Result<()> {
        match &self.dir {
            Some(d) => {
                std::fs::create_dir_all(d).map_err(|e| Error::io(d, e))?;
                let p = d.join(name);
                std::fs::write(&p, text).map_err(|e| Error::io(&p, e))?;
                writeln!(self.stdout, "wrote {}", p.display()).map_err(|e| Error::io("<stdout>", e))
            }
            None => self
                .stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::io("<stdout>", e)),
        }
    }
}

/// Runs the program on `args` (including the program name) with the process
/// streams and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let mut buf = Vec::new();
    let result = match cli.global.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli, &mut buf)),
            Err(e) => Err(Error::Domain(format!("cannot start {n} workers: {e}"))),
        },
        None => dispatch(cli, &mut buf),
    };
    let _ = stdout.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_solver_failure() {
                EXIT_SOLVER
            } else {
                EXIT_DATA
            }
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate => "validate",
        Command::Solve => "solve",
        Command::Report => "report",
        Command::Fit { .. } => "fit",
        Command::Buffer { .. } => "buffer size",
        Command::Hsc { .. } => "hsc paths",
        Command::Grid { .. } => "grid check",
        Command::Sweep {
            command: SweepCommand::Local { .. },
        } => "sweep local",
        Command::Sweep {
            command: SweepCommand::Capex { .. },
        } => "sweep capex",
        Command::CompareCta { .. } => "compare-cta",
    }
}

fn dispatch(cli: Cli, stdout: &mut Vec<u8>) -> Result<i32> {
    let start = Instant::now();
    let mut cx = Context {
        manifest: RunManifest::new(command_name(&cli.command)),
        global: cli.global,
    };
    let mut out = Outputs {
        dir: cx.global.out.clone(),
        stdout,
    };
    let elapsed = |cx: &mut Context| cx.manifest.wall_clock_s = start.elapsed().as_secs_f64();
    match cli.command {
        Command::Validate => {
            let dir = cx.global.scenario.clone().unwrap_or_else(bundled_dir);
            let mut paths = ScenarioPaths::in_dir(&dir);
            if let Some(p) = cx.global.profiles.as_deref().filter(|p| !p.starts_with("synth:")) {
                paths.profiles = PathBuf::from(p);
            }
            for p in paths.all() {
                cx.manifest.add_input(p)?;
            }
            let s = parse_scenario(&paths)?;
            let rep = validate_scenario(&s);
            elapsed(&mut cx);
            let doc = report::json_document(
                &cx.manifest,
                json!({"valid": rep.is_empty(), "issues": rep.issues, "warnings": rep.warnings}),
            );
            out.emit("validation.json", &doc)?;
            Ok(if rep.is_empty() { EXIT_OK } else { EXIT_DATA })
        }
        Command::Solve => {
            let s = cx.scenario()?;
            let sol = cx.solve(&s)?;
            elapsed(&mut cx);
            let m = &cx.manifest;
            if out.dir.is_some() {
                out.emit("solution.json", &report::solution_json(m, &sol))?;
                out.emit("table_I.csv", &report::table_i(m, &sol)?)?;
                out.emit("table_II.csv", &report::table_ii(m, &sol)?)?;
                out.emit("lcoa_stacks.csv", &report::lcoa_stacks(m, &sol)?)?;
                out.emit("transport.csv", &report::transport(m, &sol)?)?;
            } else {
                out.emit("solution.json", &report::solution_json(m, &sol))?;
            }
            Ok(EXIT_OK)
        }
        Command::Report => {
            let s = cx.scenario()?;
            let sol = cx.solve(&s)?;
            elapsed(&mut cx);
            out.emit("report.txt", &report::text_report(&cx.manifest, &sol))?;
            Ok(EXIT_OK)
        }
        Command::Fit { samples } => {
            cx.manifest.add_input(&samples)?;
            let pts = read_samples(&samples)?;
            let fit = fit_potential(&pts)?;
            elapsed(&mut cx);
            let c = fit.curve;
            let doc = report::json_document(
                &cx.manifest,
                json!({
                    "a": c.a,
                    "b": c.b,
                    "p_max_mw": c.p_max,
                    "residual_norm": fit.residual_norm,
                    "concave": c.a <= 0.0,
                    "nondecreasing": c.nondecreasing(),
                }),
            );
            out.emit("fit.json", &doc)?;
            Ok(EXIT_OK)
        }
        Command::Buffer {
            command: BufferCommand::Size { region, ammonia_tpd },
        } => {
            let s = cx.scenario()?;
            let r = s
                .region(region)
                .ok_or_else(|| Error::Domain(format!("unknown region {region}")))?;
            let w = s
                .profile(region)
                .ok_or_else(|| Error::Domain(format!("region {region} has no wind profile")))?;
            let ammonia = ammonia_tpd.map_or(r.ammonia, |t| t * 1000.0);
            let econ = &s.economics;
            let need = ammonia / econ.k_hta.value();
            let feas = feasibility_check(ammonia, econ);
            let sched = if feas.feasible {
                let input: Vec<f64> = w.p.iter().map(|p| p * need).collect();
                Some(size_buffer(&BufferProblem::new(input.clone(), ammonia, econ))?).map(|b| (input, b))
            } else {
                None
            };
            elapsed(&mut cx);
            let body = match &sched {
                Some((input, b)) => json!({
                    "region": region,
                    "ammonia_kg_per_day": ammonia,
                    "hydrogen_kg_per_day": need,
                    "feasibility": feas,
                    "capacity_kg": b.capacity,
                    "share_of_daily_hydrogen": if need > 0.0 { b.capacity / need } else { 0.0 },
                    "input_kg_per_h": input,
                    "output_kg_per_h": b.output,
                    "level_kg": b.level,
                }),
                None => json!({
                    "region": region,
                    "ammonia_kg_per_day": ammonia,
                    "hydrogen_kg_per_day": need,
                    "feasibility": feas,
                }),
            };
            out.emit("buffer.json", &report::json_document(&cx.manifest, body))?;
            Ok(if sched.is_some() { EXIT_OK } else { EXIT_DATA })
        }
        Command::Hsc {
            command: HscCommand::Paths,
        } => {
            let s = cx.scenario()?;
            let m = hsc_model(&s)?;
            let n = s.regions.len();
            let mut rows = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let km = m.distance(i, j);
                    let route: Vec<String> = m.sp.routes[i][j].iter().map(|&k| s.regions[k].id.to_string()).collect();
                    rows.push((
                        s.regions[i].id,
                        s.regions[j].id,
                        km,
                        m.utilization(km),
                        m.is_feasible(i, j),
                        route.join("-"),
                    ));
                }
            }
            elapsed(&mut cx);
            let header = ["from", "to", "km", "utilization", "feasible", "route"];
            out.emit("hsc_paths.csv", &report::csv_document(&cx.manifest, &header, &rows)?)?;
            Ok(EXIT_OK)
        }
        Command::Grid {
            command: GridCommand::Check { injections },
        } => {
            let s = cx.scenario()?;
            let g = grid_model(&s)?;
            let hourly = match &injections {
                Some(p) => {
                    cx.manifest.add_input(p)?;
                    read_injections(p, &s)?
                }
                None => cx.solve(&s)?.injections,
            };
            let rep = g.check_limits(&hourly)?;
            elapsed(&mut cx);
            let ok = rep.violations.is_empty();
            let branches: Vec<String> = g.branches.iter().map(|b| format!("{}-{}", b.from, b.to)).collect();
            let doc = report::json_document(
                &cx.manifest,
                json!({
                    "within_limits": ok,
                    "branches": branches,
                    "reference_nodes": g.reference,
                    "flows_mw": rep.flows,
                    "utilization": rep.utilization,
                    "violations": rep.violations,
                }),
            );
            out.emit("grid_check.json", &doc)?;
            Ok(if ok { EXIT_OK } else { EXIT_DATA })
        }
        Command::Sweep {
            command: SweepCommand::Local { region, energy },
        } => {
            let s = cx.scenario()?;
            let e = parse_range(&energy)?;
            let rows = local_sweep(&s, region, &e)?;
            elapsed(&mut cx);
            let rows: Vec<_> = rows
                .iter()
                .map(|r| (r.e, r.p_re, r.p_el, r.m_buf, r.lcoa, r.note.clone().unwrap_or_default()))
                .collect();
            let header = [
                "e_mwh_per_day",
                "p_re_mw",
                "p_el_mw",
                "m_buf_kg",
                "lcoa_eur_per_kg",
                "note",
            ];
            out.emit("sweep_local.csv", &report::csv_document(&cx.manifest, &header, &rows)?)?;
            Ok(EXIT_OK)
        }
        Command::Sweep {
            command:
                SweepCommand::Capex {
                    region,
                    re,
                    el,
                    resolve,
                },
        } => {
            let s = cx.scenario()?;
            let (re, el) = (parse_range(&re)?, parse_range(&el)?);
            let grid: Vec<(f64, f64)> = re.iter().flat_map(|&a| el.iter().map(move |&b| (a, b))).collect();
            let base = cx.solve(&s)?;
            let pts = capex_sensitivity(&s, &base, region, &grid, resolve)?;
            elapsed(&mut cx);
            let rows: Vec<_> = pts.iter().map(|p| (p.re_scale, p.el_scale, p.lcoa)).collect();
            let header = ["re_scale", "el_scale", "lcoa_eur_per_kg"];
            out.emit("sweep_capex.csv", &report::csv_document(&cx.manifest, &header, &rows)?)?;
            Ok(EXIT_OK)
        }
        Command::CompareCta {
            production_mt,
            wta_lcoa,
        } => {
            let s = cx.scenario()?;
            let prod: Coef = production_mt
                .parse()
                .map_err(|_| Error::Domain(format!("production `{production_mt}` is not a number")))?;
            if !(prod.value() >= 0.0) {
                return Err(Error::Domain(format!("production {production_mt} must be >= 0")));
            }
            let wta = match wta_lcoa {
                Some(v) => v,
                None => cx.solve(&s)?.mean_lcoa(),
            };
            let econ = &s.economics;
            let cmp = crate::economics::cta_comparison(prod.value() * 1e6, wta, econ)?;
            let coal = product_mt(&prod, &econ.coal_factor);
            let co2 = product_mt(&prod, &econ.co2_factor);
            elapsed(&mut cx);
            let doc = report::json_document(
                &cx.manifest,
                json!({
                    "production_mt_per_year": prod.value(),
                    "wta_lcoa_eur_per_kg": wta,
                    "cta_lcoa_eur_per_kg": econ.cta_lcoa,
                    "lcoa_gap_eur_per_kg": cmp.lcoa_gap,
                    "coal_saved_mtce_per_year": coal,
                    "co2_avoided_mt_per_year": co2,
                    "summary": format!(
                        "replacing {} Mt/yr of coal-based ammonia saves {coal:.2} Mtce of coal and {co2:.2} Mt CO2 per year",
                        prod.value()
                    ),
                }),
            );
            out.emit("cta.json", &doc)?;
            Ok(EXIT_OK)
        }
    }
}

/// `production * factor` in Mt, exact when both are decimal fractions.
fn product_mt(production: &Coef, factor: &Coef) -> f64 {
    match (production.exact(), factor.exact()) {
        (Some(p), Some(f)) => {
            let r = p * f;
            *r.numer() as f64 / *r.denom() as f64
        }
        _ => production.value() * factor.value(),
    }
}

fn read_samples(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = read_text(path)?;
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut pts = Vec::new();
    for (k, rec) in rdr.deserialize::<(f64, f64)>().enumerate() {
        let (p, e) = rec.map_err(|e| Error::Parse {
            file: path.into(),
            line: k + 2,
            msg: e.to_string(),
        })?;
        pts.push((p, e));
    }
    Ok(pts)
}

fn read_injections(path: &Path, s: &Scenario) -> Result<Vec<Vec<f64>>> {
    let text = read_text(path)?;
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Schema {
            file: path.into(),
            msg: e.to_string(),
        })?
        .iter()
        .map(str::to_string)
        .collect();
    let mut expect = vec!["hour".to_string()];
    expect.extend(s.regions.iter().map(|r| r.id.to_string()));
    if header != expect {
        return Err(Error::Schema {
            file: path.into(),
            msg: format!("header must be `{}`", expect.join(",")),
        });
    }
    let mut hourly = Vec::new();
    for (k, rec) in rdr.deserialize::<Vec<f64>>().enumerate() {
        let row = rec.map_err(|e| Error::Parse {
            file: path.into(),
            line: k + 2,
            msg: e.to_string(),
        })?;
        hourly.push(row[1..].to_vec());
    }
    if hourly.is_empty() || hourly.len() > HOURS * 366 {
        return Err(Error::Schema {
            file: path.into(),
            msg: format!("{} rows of injections", hourly.len()),
        });
    }
    Ok(hourly)
}

/// Parses profiles from `path`, for callers that override a scenario's profiles.
pub fn load_profiles(path: &Path) -> Result<Vec<crate::wind::WindProfile>> {
    parse_profiles(&read_text(path)?, path)
}
