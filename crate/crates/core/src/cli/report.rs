//! Output documents and tables.

use serde::Serialize;
use serde_json::{json, Value};

use super::manifest::RunManifest;
use crate::error::Result;
use crate::planner::PlanningSolution;

/// JSON document with the manifest as its first field.
pub fn json_document(manifest: &RunManifest, body: Value) -> String {
    let mut doc = serde_json::Map::new();
    doc.insert(
        "manifest".into(),
        serde_json::to_value(manifest).expect("manifest serializes"),
    );
    if let Value::Object(m) = body {
        doc.extend(m);
    } else {
        doc.insert("result".into(), body);
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("document serializes");
    s.push('\n');
    s
}

/// CSV with a manifest comment line followed by `header` and `rows`.
pub fn csv_document<R: Serialize>(manifest: &RunManifest, header: &[&str], rows: &[R]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let wrap = |e: csv::Error| crate::Error::Domain(format!("csv output: {e}"));
    w.write_record(header).map_err(wrap)?;
    for r in rows {
        w.serialize(r).map_err(wrap)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| crate::Error::Domain(format!("csv output: {e}")))?;
    Ok(manifest.csv_line() + &String::from_utf8(bytes).expect("csv is utf-8"))
}

pub fn solution_json(manifest: &RunManifest, sol: &PlanningSolution) -> String {
    json_document(
        manifest,
        json!({
            "objective_eur_per_day": sol.objective,
            "mean_lcoa_eur_per_kg": sol.mean_lcoa(),
            "capacities": sol.regions,
            "flows": {
                "hydrogen": sol.hydrogen,
                "electricity": sol.electricity,
            },
            "schedules": {
                "local_power": sol.local_power,
                "injections": sol.injections,
                "branch_flows": sol.branch_flows,
                "buffers": sol.buffers,
            },
            "lcoa_stacks": sol.stacks,
            "sources": sol.sources,
            "diagnostics": sol.diagnostics,
        }),
    )
}

pub const TABLE_I_HEADER: [&str; 11] = [
    "region",
    "p_re_mw",
    "p_el_lh_mw",
    "p_el_e_mw",
    "p_el_mw",
    "m_buf_kg",
    "m_hs_kg",
    "a_local_tpd",
    "a_en_tpd",
    "a_hsc_tpd",
    "a_total_tpd",
];

pub fn table_i(manifest: &RunManifest, sol: &PlanningSolution) -> Result<String> {
    let rows: Vec<_> = sol
        .regions
        .iter()
        .map(|r| {
            (
                r.id,
                r.p_re,
                r.p_el_lh,
                r.p_el_e,
                r.p_el(),
                r.m_buf(),
                r.m_hs,
                r.a_local / 1000.0,
                r.a_en / 1000.0,
                r.a_hsc / 1000.0,
                r.ammonia() / 1000.0,
            )
        })
        .collect();
    csv_document(manifest, &TABLE_I_HEADER, &rows)
}

pub const TABLE_II_HEADER: [&str; 7] = [
    "region",
    "e_mwh_per_day",
    "p_re_mw",
    "p_re_share",
    "p_el_mw",
    "lcoe_eur_per_kwh",
    "lcoa_local_eur_per_kg",
];

pub fn table_ii(manifest: &RunManifest, sol: &PlanningSolution) -> Result<String> {
    let rows: Vec<_> = sol
        .sources
        .iter()
        .map(|s| (s.region, s.e, s.p_re, s.p_share, s.p_el, s.lcoe, s.lcoa_local))
        .collect();
    csv_document(manifest, &TABLE_II_HEADER, &rows)
}

pub const STACK_HEADER: [&str; 13] = [
    "region",
    "mode",
    "production_tpd",
    "re",
    "el",
    "buf",
    "water",
    "nitrogen",
    "wheeling",
    "transport",
    "diesel",
    "storage",
    "lcoa",
];

pub fn lcoa_stacks(manifest: &RunManifest, sol: &PlanningSolution) -> Result<String> {
    let rows: Vec<_> = sol
        .stacks
        .iter()
        .map(|s| {
            let c = &s.components;
            (
                s.region,
                s.mode.label(),
                s.production / 1000.0,
                c.re,
                c.el,
                c.buf,
                c.water,
                c.nitrogen,
                c.wheeling,
                (c.transport, c.diesel, c.storage, s.lcoa),
            )
        })
        .collect();
    csv_document(manifest, &STACK_HEADER, &rows)
}

pub const TRANSPORT_HEADER: [&str; 6] = ["mode", "from", "to", "km", "quantity", "unit"];

type TransportRow = (&'static str, usize, usize, Option<f64>, f64, &'static str);

pub fn transport(manifest: &RunManifest, sol: &PlanningSolution) -> Result<String> {
    let mut rows: Vec<TransportRow> = Vec::new();
    for f in &sol.hydrogen {
        rows.push(("hsc", f.from, f.to, Some(f.km), f.hydrogen, "kg_h2_per_day"));
    }
    for f in &sol.electricity {
        rows.push(("en", f.from, f.to, None, f.energy, "mwh_per_day"));
    }
    csv_document(manifest, &TRANSPORT_HEADER, &rows)
}

fn opt(v: Option<f64>, prec: usize) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.prec$}"))
}

/// Fixed-width text rendering of the facility, source and cost tables.
pub fn text_report(manifest: &RunManifest, sol: &PlanningSolution) -> String {
    let mut s = format!("# manifest: {}\n\n", manifest.to_json());
    s += "Facilities\n";
    s += "region   P_RE MW  P_EL MW   BUF kg    HS kg   A_L t/d   A_E t/d   A_H t/d\n";
    for r in &sol.regions {
        s += &format!(
            "{:>6} {:>9.2} {:>8.2} {:>8.0} {:>8.0} {:>9.1} {:>9.1} {:>9.1}\n",
            r.id,
            r.p_re,
            r.p_el(),
            r.m_buf(),
            r.m_hs,
            r.a_local / 1000.0,
            r.a_en / 1000.0,
            r.a_hsc / 1000.0
        );
    }
    s += "\nSources\n";
    s += "region  E MWh/d   P_RE MW  P/Pmax  P_EL MW  LCOE €/kWh  LCOA_L €/kg\n";
    for r in &sol.sources {
        s += &format!(
            "{:>6} {:>8.1} {:>9.2} {:>7.3} {:>8.2} {:>11.4} {:>12}\n",
            r.region,
            r.e,
            r.p_re,
            r.p_share,
            r.p_el,
            r.lcoe,
            opt(r.lcoa_local, 4)
        );
    }
    s += "\nLevelized cost of ammonia, €/kg\n";
    s += "region mode   t/d      RE     EL    BUF  water     N2  wheel  truck diesel  store  total\n";
    for st in &sol.stacks {
        let c = &st.components;
        s += &format!(
            "{:>6} {:<5} {:>6.1} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>6.3}\n",
            st.region,
            st.mode.label(),
            st.production / 1000.0,
            c.re,
            c.el,
            c.buf,
            c.water,
            c.nitrogen,
            c.wheeling,
            c.transport,
            c.diesel,
            c.storage,
            st.lcoa
        );
    }
    let d = &sol.diagnostics;
    s += &format!(
        "\nmean {:.4} €/kg, daily cost {:.0} €\n{} variables, {} rows, {} rounds, {} cuts, converged {}\n",
        sol.mean_lcoa(),
        sol.objective,
        d.variables,
        d.rows,
        d.slp_iterations,
        d.cuts,
        d.converged
    );
    s += &format!(
        "KKT residual {:.2e}, check residual {:.2e}\n",
        d.kkt.max(),
        d.check.max()
    );
    s
}
