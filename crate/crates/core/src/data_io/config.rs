//! `key = value` economics and solver settings. Omitted keys keep their
//! defaults; unknown or repeated keys are errors. Values may be written as
//! `num/den`.

use std::fmt::Write;
use std::path::Path;

use super::SolverOptions;
use crate::economics::{Coef, EconomicParams, FacilityCost};
use crate::error::{Error, Result};

enum Slot<'a> {
    Plain(&'a mut f64),
    Ratio(&'a mut Coef),
    Count(&'a mut usize),
}

fn slots<'a>(e: &'a mut EconomicParams, o: &'a mut SolverOptions) -> Vec<(&'static str, Slot<'a>)> {
    use Slot::*;
    let EconomicParams {
        discount_rate,
        re,
        el,
        buf,
        hs,
        truck,
        trailer,
        c_n2,
        c_water,
        c_diesel,
        c_en,
        eta_wta,
        eta_wth,
        k_hta,
        k_nta,
        k_wth,
        k_min,
        k_max,
        carbon_tax,
        cta_lcoa,
        coal_factor,
        co2_factor,
    } = e;
    let mut v: Vec<(&'static str, Slot<'a>)> = vec![("discount_rate", Plain(discount_rate))];
    let facility = |v: &mut Vec<(&'static str, Slot<'a>)>, keys: [&'static str; 3], f: &'a mut FacilityCost| {
        let FacilityCost {
            unit_cost,
            fixopex,
            lifetime,
        } = f;
        v.push((keys[0], Plain(unit_cost)));
        v.push((keys[1], Plain(fixopex)));
        v.push((keys[2], Plain(lifetime)));
    };
    facility(&mut v, ["re_unit_cost", "re_fixopex", "re_lifetime"], re);
    facility(&mut v, ["el_unit_cost", "el_fixopex", "el_lifetime"], el);
    facility(&mut v, ["buf_unit_cost", "buf_fixopex", "buf_lifetime"], buf);
    facility(&mut v, ["hs_unit_cost", "hs_fixopex", "hs_lifetime"], hs);
    facility(&mut v, ["truck_unit_cost", "truck_fixopex", "truck_lifetime"], truck);
    facility(
        &mut v,
        ["trailer_unit_cost", "trailer_fixopex", "trailer_lifetime"],
        trailer,
    );
    v.extend([
        ("c_n2", Plain(c_n2)),
        ("c_water", Plain(c_water)),
        ("c_diesel", Ratio(c_diesel)),
        ("c_en", Plain(c_en)),
        ("eta_wta", Ratio(eta_wta)),
        ("eta_wth", Ratio(eta_wth)),
        ("k_hta", Ratio(k_hta)),
        ("k_nta", Ratio(k_nta)),
        ("k_wth", Ratio(k_wth)),
        ("k_min", Plain(k_min)),
        ("k_max", Plain(k_max)),
        ("carbon_tax", Plain(carbon_tax)),
        ("cta_lcoa", Plain(cta_lcoa)),
        ("coal_factor", Ratio(coal_factor)),
        ("co2_factor", Ratio(co2_factor)),
    ]);
    let SolverOptions {
        d_max_km,
        truck_speed_kmh,
        truck_hours_per_day,
        feas_tol,
        cut_tol,
        slp_max_iter,
    } = o;
    v.extend([
        ("d_max_km", Plain(d_max_km)),
        ("truck_speed_kmh", Plain(truck_speed_kmh)),
        ("truck_hours_per_day", Plain(truck_hours_per_day)),
        ("feas_tol", Plain(feas_tol)),
        ("cut_tol", Plain(cut_tol)),
        ("slp_max_iter", Count(slp_max_iter)),
    ]);
    v
}

pub fn parse_config(text: &str, file: &Path) -> Result<(EconomicParams, SolverOptions)> {
    let mut econ = EconomicParams::default();
    let mut opts = SolverOptions::default();
    let mut table = slots(&mut econ, &mut opts);
    let mut seen = vec![false; table.len()];
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |msg: String| Error::Parse {
            file: file.to_path_buf(),
            line,
            msg,
        };
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got {content:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        let idx = table
            .iter()
            .position(|(name, _)| *name == key)
            .ok_or_else(|| err(format!("unknown key {key:?}")))?;
        if std::mem::replace(&mut seen[idx], true) {
            return Err(err(format!("key {key:?} repeated")));
        }
        match &mut table[idx].1 {
            Slot::Plain(v) => **v = value.parse::<Coef>().map_err(err)?.value(),
            Slot::Ratio(v) => **v = value.parse().map_err(err)?,
            Slot::Count(v) => **v = value.parse().map_err(|_| err(format!("{value:?} is not a count")))?,
        }
    }
    drop(table);
    Ok((econ, opts))
}

pub fn write_config(econ: &EconomicParams, opts: &SolverOptions) -> String {
    let mut e = econ.clone();
    let mut o = opts.clone();
    let mut s = String::new();
    for (key, slot) in slots(&mut e, &mut o) {
        match slot {
            Slot::Plain(v) => writeln!(s, "{key} = {v}"),
            Slot::Ratio(v) => writeln!(s, "{key} = {v}"),
            Slot::Count(v) => writeln!(s, "{key} = {v}"),
        }
        .unwrap();
    }
    s
}
