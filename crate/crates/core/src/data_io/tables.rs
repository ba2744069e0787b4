use std::fmt::Write;
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, Trim};

use super::{Region, Zone};
use crate::error::{Error, Result};
use crate::grid::Branch;
use crate::wind::{PotentialCurve, WindProfile, HOURS};

fn parse_err(file: &Path, line: u64, msg: impl Into<String>) -> Error {
    Error::Parse {
        file: file.to_path_buf(),
        line: line as usize,
        msg: msg.into(),
    }
}

fn schema_err(file: &Path, msg: impl Into<String>) -> Error {
    Error::Schema {
        file: file.to_path_buf(),
        msg: msg.into(),
    }
}

/// Data records with their line numbers, after checking the header.
fn records(text: &str, file: &Path, header: &[&str]) -> Result<Vec<(u64, StringRecord)>> {
    let mut rdr = ReaderBuilder::new()
        .trim(Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let found = rdr.headers().map_err(|e| schema_err(file, e.to_string()))?.clone();
    if found.is_empty() || found.iter().all(str::is_empty) {
        return Err(schema_err(file, "missing header row"));
    }
    for col in header {
        if !found.iter().any(|h| h == *col) {
            return Err(schema_err(file, format!("missing column {col:?}")));
        }
    }
    if found.len() != header.len() || found.iter().zip(header).any(|(a, b)| a != *b) {
        return Err(schema_err(file, format!("header must be {}", header.join(","))));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(file, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        out.push((line, rec));
    }
    Ok(out)
}

fn num(rec: &StringRecord, k: usize, name: &str, file: &Path, line: u64) -> Result<f64> {
    let s = &rec[k];
    let v: f64 = s
        .parse()
        .map_err(|_| parse_err(file, line, format!("{name}: {s:?} is not a number")))?;
    if !v.is_finite() {
        return Err(parse_err(file, line, format!("{name}: {s:?} is not finite")));
    }
    Ok(v)
}

fn id(rec: &StringRecord, k: usize, name: &str, file: &Path, line: u64) -> Result<usize> {
    let s = &rec[k];
    s.parse()
        .map_err(|_| parse_err(file, line, format!("{name}: {s:?} is not a region id")))
}

pub const REGION_HEADER: [&str; 7] = ["id", "name", "zone", "ammonia_tpd", "a", "b", "p_re_max_mw"];

pub fn parse_regions(text: &str, file: &Path) -> Result<Vec<Region>> {
    let mut out = Vec::new();
    for (line, rec) in records(text, file, &REGION_HEADER)? {
        let zone: Zone = rec[2].parse().map_err(|e: String| parse_err(file, line, e))?;
        let blank = [4, 5, 6].map(|k| rec[k].is_empty());
        let curve = match blank {
            [true, true, true] => None,
            [false, false, false] => Some(PotentialCurve {
                a: num(&rec, 4, "a", file, line)?,
                b: num(&rec, 5, "b", file, line)?,
                p_max: num(&rec, 6, "p_re_max_mw", file, line)?,
            }),
            _ => {
                return Err(parse_err(
                    file,
                    line,
                    "a, b and p_re_max_mw must be all set or all blank",
                ))
            }
        };
        if rec[1].contains(',') {
            return Err(parse_err(file, line, "name may not contain commas"));
        }
        out.push(Region {
            id: id(&rec, 0, "id", file, line)?,
            name: rec[1].to_string(),
            zone,
            ammonia: num(&rec, 3, "ammonia_tpd", file, line)? * 1000.0,
            curve,
        });
    }
    if out.is_empty() {
        return Err(schema_err(file, "no regions"));
    }
    out.sort_by_key(|r| r.id);
    if let Some(w) = out.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(schema_err(file, format!("region {} listed twice", w[0].id)));
    }
    Ok(out)
}

pub fn write_regions(regions: &[Region]) -> String {
    let mut s = REGION_HEADER.join(",");
    s.push('\n');
    for r in regions {
        let t = r.ammonia / 1000.0;
        match &r.curve {
            Some(c) => writeln!(s, "{},{},{},{t},{},{},{}", r.id, r.name, r.zone, c.a, c.b, c.p_max),
            None => writeln!(s, "{},{},{},{t},,,", r.id, r.name, r.zone),
        }
        .unwrap();
    }
    s
}

/// Square matrix keyed by the header ids; rows and columns are reordered to
/// follow `ids`.
pub fn parse_distances(text: &str, file: &Path, ids: &[usize]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = ReaderBuilder::new()
        .trim(Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| schema_err(file, e.to_string()))?.clone();
    if header.len() < 2 || &header[0] != "id" {
        return Err(schema_err(file, "header must be id followed by region ids"));
    }
    let cols: Vec<usize> = header
        .iter()
        .skip(1)
        .map(|h| {
            h.parse()
                .map_err(|_| parse_err(file, 1, format!("{h:?} is not a region id")))
        })
        .collect::<Result<_>>()?;
    let pos = |r: usize| ids.iter().position(|&x| x == r);
    let n = ids.len();
    let mut sorted_cols = cols.clone();
    sorted_cols.sort_unstable();
    let mut sorted_ids = ids.to_vec();
    sorted_ids.sort_unstable();
    if sorted_cols != sorted_ids {
        return Err(schema_err(
            file,
            format!("columns {cols:?} do not match regions {ids:?}"),
        ));
    }
    let mut d = vec![vec![f64::NAN; n]; n];
    let mut filled = vec![false; n];
    for rec in rdr.records() {
        let rec = rec.map_err(|e| parse_err(file, e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        let row_id = id(&rec, 0, "id", file, line)?;
        let i = pos(row_id).ok_or_else(|| parse_err(file, line, format!("unknown region {row_id}")))?;
        if std::mem::replace(&mut filled[i], true) {
            return Err(parse_err(file, line, format!("region {row_id} listed twice")));
        }
        for (k, &c) in cols.iter().enumerate() {
            d[i][pos(c).unwrap()] = num(&rec, k + 1, "distance", file, line)?;
        }
    }
    if let Some(i) = filled.iter().position(|f| !f) {
        return Err(schema_err(file, format!("no row for region {}", ids[i])));
    }
    Ok(d)
}

pub fn write_distances(ids: &[usize], d: &[Vec<f64>]) -> String {
    let mut s = String::from("id");
    for i in ids {
        write!(s, ",{i}").unwrap();
    }
    s.push('\n');
    for (i, row) in ids.iter().zip(d) {
        write!(s, "{i}").unwrap();
        for v in row {
            write!(s, ",{v}").unwrap();
        }
        s.push('\n');
    }
    s
}

pub const GRID_HEADER: [&str; 5] = ["from", "to", "susceptance_pu", "cap_fwd_mw", "cap_rev_mw"];

pub fn parse_grid(text: &str, file: &Path) -> Result<Vec<Branch>> {
    let mut out = Vec::new();
    for (line, rec) in records(text, file, &GRID_HEADER)? {
        out.push(Branch {
            from: id(&rec, 0, "from", file, line)?,
            to: id(&rec, 1, "to", file, line)?,
            susceptance: num(&rec, 2, "susceptance_pu", file, line)?,
            cap_fwd: num(&rec, 3, "cap_fwd_mw", file, line)?,
            cap_rev: num(&rec, 4, "cap_rev_mw", file, line)?,
        });
    }
    out.sort_by_key(|b| (b.from, b.to));
    Ok(out)
}

pub fn write_grid(branches: &[Branch]) -> String {
    let mut s = GRID_HEADER.join(",");
    s.push('\n');
    for b in branches {
        writeln!(s, "{},{},{},{},{}", b.from, b.to, b.susceptance, b.cap_fwd, b.cap_rev).unwrap();
    }
    s
}

pub fn profile_header() -> Vec<String> {
    let mut h = vec!["region_id".to_string()];
    h.extend((0..HOURS).map(|t| format!("h{t:02}")));
    h
}

pub fn parse_profiles(text: &str, file: &Path) -> Result<Vec<WindProfile>> {
    let header = profile_header();
    let cols: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut out = Vec::new();
    for (line, rec) in records(text, file, &cols)? {
        let mut p = [0.0; HOURS];
        for (t, v) in p.iter_mut().enumerate() {
            *v = num(&rec, t + 1, cols[t + 1], file, line)?;
        }
        out.push(WindProfile {
            region: id(&rec, 0, "region_id", file, line)?,
            p,
        });
    }
    out.sort_by_key(|w| w.region);
    Ok(out)
}

pub fn write_profiles(profiles: &[WindProfile]) -> String {
    let mut s = profile_header().join(",");
    s.push('\n');
    for w in profiles {
        write!(s, "{}", w.region).unwrap();
        for v in &w.p {
            write!(s, ",{v}").unwrap();
        }
        s.push('\n');
    }
    s
}

pub const LINK_HEADER: [&str; 3] = ["from", "to", "km"];

pub fn parse_links(text: &str, file: &Path) -> Result<Vec<(usize, usize, f64)>> {
    let mut out = Vec::new();
    for (line, rec) in records(text, file, &LINK_HEADER)? {
        let a = id(&rec, 0, "from", file, line)?;
        let b = id(&rec, 1, "to", file, line)?;
        out.push((a.min(b), a.max(b), num(&rec, 2, "km", file, line)?));
    }
    out.sort_by_key(|x| (x.0, x.1));
    Ok(out)
}

pub fn write_links(links: &[(usize, usize, f64)]) -> String {
    let mut s = LINK_HEADER.join(",");
    s.push('\n');
    for (a, b, km) in links {
        writeln!(s, "{a},{b},{km}").unwrap();
    }
    s
}
