//! Annuitized facility costs and levelized costs of electricity, hydrogen and
//! ammonia.
//!
//! Units: capacities in MW (wind, electrolysis) or kg (tanks, truck and
//! trailer capability per day); energies in MWh/d; masses in kg/d; costs in
//! €/d. Levelized results are €/kWh or €/kg.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DAYS_PER_YEAR: f64 = 365.0;

/// Numeric config value kept as `num/den` so ratio literals such as `17/165`
/// survive a write/read cycle unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coef {
    pub num: f64,
    pub den: f64,
}

impl Coef {
    pub const fn new(num: f64, den: f64) -> Self {
        Self { num, den }
    }

    pub const fn whole(v: f64) -> Self {
        Self { num: v, den: 1.0 }
    }

    pub fn value(&self) -> f64 {
        self.num / self.den
    }

    /// Exact rational value of the decimal literals, if it fits in `i128`.
    pub fn exact(&self) -> Option<Ratio<i128>> {
        let n = decimal_ratio(&self.num.to_string())?;
        let d = decimal_ratio(&self.den.to_string())?;
        (d != Ratio::from_integer(0)).then(|| n / d)
    }
}

fn decimal_ratio(s: &str) -> Option<Ratio<i128>> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let digits = format!("{int}{frac}");
    let mut mantissa: i128 = digits.parse().ok()?;
    if neg {
        mantissa = -mantissa;
    }
    let scale = 10i128.checked_pow(u32::try_from(frac.len()).ok()?)?;
    Some(Ratio::new(mantissa, scale))
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1.0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Coef {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| -> std::result::Result<f64, String> {
            let v: f64 = t.trim().parse().map_err(|_| format!("not a number: {t:?}"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("not finite: {t:?}"))
            }
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let den = parse(d)?;
                if den == 0.0 {
                    return Err(format!("zero denominator in {s:?}"));
                }
                Ok(Coef::new(parse(n)?, den))
            }
            None => Ok(Coef::whole(parse(s)?)),
        }
    }
}

/// Unit cost, fixed O&M share of capital per year, and lifetime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FacilityCost {
    pub unit_cost: f64,
    pub fixopex: f64,
    pub lifetime: f64,
}

impl FacilityCost {
    /// Daily capital plus fixed O&M for `capacity` units.
    pub fn daily(&self, capacity: f64, discount_rate: f64) -> f64 {
        annualized_daily_cost(self.unit_cost, capacity, self.lifetime, self.fixopex, discount_rate)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            unit_cost: self.unit_cost * factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconomicParams {
    pub discount_rate: f64,
    /// €/kW
    pub re: FacilityCost,
    /// €/kW
    pub el: FacilityCost,
    /// €/kg
    pub buf: FacilityCost,
    /// €/kg
    pub hs: FacilityCost,
    /// € per kg/d of hauling capability
    pub truck: FacilityCost,
    pub trailer: FacilityCost,
    /// €/kg N2
    pub c_n2: f64,
    /// €/kg water
    pub c_water: f64,
    /// €/(km kg H2)
    pub c_diesel: Coef,
    /// €/kWh
    pub c_en: f64,
    /// kg NH3 per kWh
    pub eta_wta: Coef,
    /// kg H2 per kWh
    pub eta_wth: Coef,
    /// kg NH3 per kg H2
    pub k_hta: Coef,
    /// kg NH3 per kg N2
    pub k_nta: Coef,
    /// kg H2 per kg water
    pub k_wth: Coef,
    /// (kg/h H2) per (kg/d NH3)
    pub k_min: f64,
    pub k_max: f64,
    /// €/t CO2
    pub carbon_tax: f64,
    /// €/kg NH3
    pub cta_lcoa: f64,
    /// tce per t NH3
    pub coal_factor: Coef,
    /// t CO2 per t NH3
    pub co2_factor: Coef,
}

impl Default for EconomicParams {
    fn default() -> Self {
        let tank = FacilityCost {
            unit_cost: 500.0,
            fixopex: 0.02,
            lifetime: 20.0,
        };
        Self {
            discount_rate: 0.1,
            re: FacilityCost {
                unit_cost: 1000.0,
                fixopex: 0.02,
                lifetime: 20.0,
            },
            el: FacilityCost {
                unit_cost: 500.0,
                fixopex: 0.03,
                lifetime: 10.0,
            },
            buf: tank,
            hs: tank,
            truck: FacilityCost {
                unit_cost: 37.21,
                fixopex: 0.12,
                lifetime: 8.0,
            },
            trailer: FacilityCost {
                unit_cost: 200.0,
                fixopex: 0.02,
                lifetime: 12.0,
            },
            c_n2: 0.1,
            c_water: 0.004,
            c_diesel: Coef::new(0.42, 4300.0),
            c_en: 0.008,
            eta_wta: Coef::new(17.0, 165.0),
            eta_wth: Coef::new(1.0, 55.0),
            k_hta: Coef::new(17.0, 3.0),
            k_nta: Coef::new(17.0, 14.0),
            k_wth: Coef::new(1.0, 9.0),
            k_min: 0.007,
            k_max: 0.01,
            carbon_tax: 25.0,
            cta_lcoa: 0.41,
            coal_factor: Coef::new(1.79, 1.06),
            co2_factor: Coef::new(4.89, 1.06),
        }
    }
}

impl EconomicParams {
    /// kg H2 per MWh.
    pub fn h2_per_mwh(&self) -> f64 {
        self.eta_wth.value() * 1000.0
    }

    /// kg NH3 per MWh.
    pub fn nh3_per_mwh(&self) -> f64 {
        self.eta_wta.value() * 1000.0
    }

    pub fn re_daily(&self, p_mw: f64) -> f64 {
        self.re.daily(p_mw * 1000.0, self.discount_rate)
    }

    pub fn el_daily(&self, p_mw: f64) -> f64 {
        self.el.daily(p_mw * 1000.0, self.discount_rate)
    }

    pub fn buf_daily(&self, kg: f64) -> f64 {
        self.buf.daily(kg, self.discount_rate)
    }

    pub fn hs_daily(&self, kg: f64) -> f64 {
        self.hs.daily(kg, self.discount_rate)
    }

    /// Electrolysis water per kg H2, €.
    pub fn water_per_kg_h2(&self) -> f64 {
        self.c_water / self.k_wth.value()
    }

    /// Nitrogen per kg NH3, €.
    pub fn nitrogen_per_kg_nh3(&self) -> f64 {
        self.c_n2 / self.k_nta.value()
    }

    /// Wheeling charge per kg NH3 made from transported electricity, €.
    pub fn wheeling_per_kg_nh3(&self) -> f64 {
        self.c_en / self.eta_wta.value()
    }

    /// Invariant violations, including the exact `eta_wta = k_hta * eta_wth`.
    pub fn issues(&self) -> Vec<String> {
        let mut out = Vec::new();
        match (self.eta_wta.exact(), self.k_hta.exact(), self.eta_wth.exact()) {
            (Some(wta), Some(hta), Some(wth)) => {
                if wta != hta * wth {
                    out.push(format!(
                        "eta_wta = {} differs from k_hta * eta_wth = {}",
                        self.eta_wta,
                        hta * wth
                    ));
                }
            }
            _ => out.push("conversion coefficients are not exact decimal ratios".into()),
        }
        let facilities = [
            ("re", self.re),
            ("el", self.el),
            ("buf", self.buf),
            ("hs", self.hs),
            ("truck", self.truck),
            ("trailer", self.trailer),
        ];
        for (name, f) in facilities {
            if !(f.unit_cost >= 0.0) || !(f.fixopex >= 0.0) {
                out.push(format!("{name}: costs must be >= 0"));
            }
            if !(f.lifetime >= 1.0) {
                out.push(format!("{name}: lifetime {} must be >= 1", f.lifetime));
            }
        }
        let plain = [
            ("c_n2", self.c_n2),
            ("c_water", self.c_water),
            ("c_diesel", self.c_diesel.value()),
            ("c_en", self.c_en),
            ("carbon_tax", self.carbon_tax),
            ("cta_lcoa", self.cta_lcoa),
        ];
        for (name, v) in plain {
            if !(v >= 0.0) {
                out.push(format!("{name} = {v} must be >= 0"));
            }
        }
        for (name, c) in [
            ("eta_wta", self.eta_wta),
            ("eta_wth", self.eta_wth),
            ("k_hta", self.k_hta),
            ("k_nta", self.k_nta),
            ("k_wth", self.k_wth),
        ] {
            if !(c.value() > 0.0) {
                out.push(format!("{name} must be > 0"));
            }
        }
        if !(0.0 < self.k_min && self.k_min < self.k_max) {
            out.push(format!("need 0 < k_min ({}) < k_max ({})", self.k_min, self.k_max));
        }
        if !(0.0..1.0).contains(&self.discount_rate) {
            out.push(format!("discount_rate {} outside [0, 1)", self.discount_rate));
        }
        out
    }
}

/// Capital recovery factor; `1/n` at zero interest.
pub fn annuity(rate: f64, years: f64) -> f64 {
    if rate == 0.0 {
        return 1.0 / years;
    }
    let g = (1.0 + rate).powf(years);
    rate * g / (g - 1.0)
}

pub fn annualized_daily_cost(unit_cost: f64, capacity: f64, lifetime: f64, fixopex: f64, rate: f64) -> f64 {
    unit_cost * capacity * (annuity(rate, lifetime) + fixopex) / DAYS_PER_YEAR
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be > 0, got {v}")))
    }
}

/// €/kWh for `e` MWh/d from `p` MW of turbines.
pub fn lcoe(e: f64, p: f64, econ: &EconomicParams) -> Result<f64> {
    positive("daily energy", e)?;
    Ok(econ.re_daily(p) / (e * 1000.0))
}

/// Electrolyzer cost with water, €/d, for `p_el` MW making hydrogen from `e` MWh/d.
pub fn electrolysis_daily(e: f64, p_el: f64, econ: &EconomicParams) -> f64 {
    econ.el_daily(p_el) + e * econ.h2_per_mwh() * econ.water_per_kg_h2()
}

/// €/kg H2 from electricity at `lcoe` with `e_local` MWh/d through `p_el` MW.
pub fn lcoh(lcoe: f64, e_local: f64, p_el: f64, econ: &EconomicParams) -> Result<f64> {
    positive("local energy", e_local)?;
    let eta = econ.eta_wth.value();
    Ok(lcoe / eta + electrolysis_daily(e_local, p_el, econ) / (eta * e_local * 1000.0))
}

/// €/kg NH3 for local synthesis of `a_l` kg/d with a `buf_kg` buffer tank.
pub fn lcoa_local(lcoh: f64, a_l: f64, buf_kg: f64, econ: &EconomicParams) -> Result<f64> {
    positive("local ammonia", a_l)?;
    let n2 = econ.nitrogen_per_kg_nh3() * a_l;
    Ok(lcoh / econ.k_hta.value() + (econ.buf_daily(buf_kg) + n2) / a_l)
}

/// Electricity bought from one source region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnImport {
    /// MWh/d
    pub energy: f64,
    /// €/kWh at the source
    pub lcoe: f64,
}

/// €/kg NH3 for `a_e` kg/d made from imported electricity.
pub fn lcoa_en(imports: &[EnImport], p_el: f64, buf_kg: f64, a_e: f64, econ: &EconomicParams) -> Result<f64> {
    positive("EN ammonia", a_e)?;
    if imports.iter().any(|i| !(i.energy >= 0.0)) {
        return Err(Error::Domain("imports must be >= 0".into()));
    }
    let energy: f64 = imports.iter().map(|i| i.energy).sum();
    let re: f64 = imports.iter().map(|i| i.lcoe * i.energy * 1000.0).sum();
    let en = econ.c_en * energy * 1000.0;
    let total =
        re + electrolysis_daily(energy, p_el, econ) + en + econ.buf_daily(buf_kg) + econ.nitrogen_per_kg_nh3() * a_e;
    Ok(total / a_e)
}

/// Daily cost of moving hydrogen on one path, €/d.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TransportCost {
    pub truck: f64,
    pub trailer: f64,
    pub diesel: f64,
    /// kg of storage the flow needs at the source
    pub storage_kg: f64,
}

impl TransportCost {
    pub fn haulage(&self) -> f64 {
        self.truck + self.trailer + self.diesel
    }
}

/// Hydrogen bought from one source region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HscImport {
    /// kg/d
    pub hydrogen: f64,
    /// €/kg H2 at the source
    pub lcoh: f64,
    pub transport: TransportCost,
}

/// €/kg NH3 for `a_h` kg/d made from trucked hydrogen; `storage_daily` is the
/// €/d share of source storage tanks.
pub fn lcoa_hsc(imports: &[HscImport], storage_daily: f64, a_h: f64, econ: &EconomicParams) -> Result<f64> {
    positive("HSC ammonia", a_h)?;
    let h2: f64 = imports.iter().map(|i| i.lcoh * i.hydrogen).sum();
    let ht: f64 = imports.iter().map(|i| i.transport.haulage()).sum();
    Ok((h2 + ht + storage_daily + econ.nitrogen_per_kg_nh3() * a_h) / a_h)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CtaComparison {
    /// €/kg, WtA minus CtA
    pub lcoa_gap: f64,
    /// tce/yr
    pub coal_saved: f64,
    /// t CO2/yr
    pub co2_avoided: f64,
}

/// Savings when `production` t/yr of coal-based ammonia is replaced.
pub fn cta_comparison(production: f64, wta_lcoa: f64, econ: &EconomicParams) -> Result<CtaComparison> {
    if !(production >= 0.0) {
        return Err(Error::Domain(format!("production {production} must be >= 0")));
    }
    Ok(CtaComparison {
        lcoa_gap: wta_lcoa - econ.cta_lcoa,
        coal_saved: production * econ.coal_factor.value(),
        co2_avoided: production * econ.co2_factor.value(),
    })
}
