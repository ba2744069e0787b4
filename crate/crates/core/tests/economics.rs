mod common;

use num_rational::Ratio;
use proptest::prelude::*;
use wta::data_io::{bundled_scenario, hsc_model};
use wta::economics::*;
use wta::hsc::transport_cost_basis;

fn round4(v: f64) -> f64 {
    (v * 1e4).round() / 1e4
}

#[test]
fn annuity_oracle() {
    // Direct closed form, written independently of the library.
    let crf = |i: f64, n: i32| i / (1.0 - (1.0 + i).powi(-n));
    assert!((annuity(0.1, 20.0) - crf(0.1, 20)).abs() < 1e-14);
    assert!((annuity(0.1, 20.0) - 0.117_46).abs() < 1e-5);
    assert!((annuity(0.07, 8.0) - crf(0.07, 8)).abs() < 1e-14);
    assert_eq!(annuity(0.0, 20.0), 0.05);
    let daily = annualized_daily_cost(1000.0, 2.0, 20.0, 0.0, 0.0);
    assert!((daily - 1000.0 * 2.0 / (20.0 * 365.0)).abs() < 1e-12);
    let e = EconomicParams::default();
    assert!((annuity(e.discount_rate, e.re.lifetime) + e.re.fixopex - 0.1375).abs() < 1e-4);
}

#[test]
fn region_8_lcoe() {
    let e = EconomicParams::default();
    let v = lcoe(26862.0, 2385.0, &e).unwrap();
    assert!((v / 0.0337 - 1.0).abs() <= 0.05, "LCOE = {v}");
    assert!(lcoe(0.0, 10.0, &e).is_err());
}

#[test]
fn per_kg_anchors() {
    let e = EconomicParams::default();
    assert_eq!(round4(e.wheeling_per_kg_nh3()), 0.0776);
    assert_eq!(round4(e.nitrogen_per_kg_nh3()), 0.0824);
    assert!((e.water_per_kg_h2() - 0.036).abs() < 1e-15);
    assert!((e.h2_per_mwh() - 1000.0 / 55.0).abs() < 1e-12);
    assert!((e.nh3_per_mwh() - 17000.0 / 165.0).abs() < 1e-12);
}

#[test]
fn hydrogen_cost_without_electrolyzer_is_lcoe_times_55_plus_water() {
    let e = EconomicParams::default();
    let h = lcoh(0.03, 1000.0, 0.0, &e).unwrap();
    assert!((h - (0.03 * 55.0 + 0.036)).abs() < 1e-12);
}

#[test]
fn local_lcoa_components() {
    let e = EconomicParams::default();
    let (energy, p_el, buf) = (1000.0, 60.0, 500.0);
    let a = energy * e.nh3_per_mwh();
    let c = 0.03;
    let h = lcoh(c, energy, p_el, &e).unwrap();
    let v = lcoa_local(h, a, buf, &e).unwrap();
    let direct = (c * energy * 1000.0 + e.el_daily(p_el) + energy * e.h2_per_mwh() * 0.036 + e.buf_daily(buf)) / a
        + e.nitrogen_per_kg_nh3();
    assert!(common::rel(v, direct) < 1e-12);
}

#[test]
fn en_lcoa_carries_the_wheeling_layer() {
    let e = EconomicParams::default();
    let energy = 1000.0;
    let a = energy * e.nh3_per_mwh();
    let imports = [EnImport { energy, lcoe: 0.03 }];
    let en = lcoa_en(&imports, 50.0, 100.0, a, &e).unwrap();
    let local = lcoa_local(lcoh(0.03, energy, 50.0, &e).unwrap(), a, 100.0, &e).unwrap();
    assert!((en - local - e.wheeling_per_kg_nh3()).abs() < 1e-12);
}

#[test]
fn hsc_surcharge_grows_with_distance_and_averages_near_five_cents() {
    let s = bundled_scenario().unwrap();
    let e = &s.economics;
    let m = hsc_model(&s).unwrap();
    let h = 1000.0;
    let per_kg_nh3 = |km: f64| {
        let t = transport_cost_basis(h, km, m.utilization(km), e).unwrap();
        (t.haulage() + e.hs_daily(t.storage_kg)) / (h * e.k_hta.value())
    };
    let mut last = per_kg_nh3(0.0);
    for km in (10..=500).step_by(10) {
        let v = per_kg_nh3(km as f64);
        assert!(v >= last - 1e-15);
        last = v;
    }
    let kms: Vec<f64> = m.paths.iter().filter(|p| p.from != p.to).map(|p| p.km).collect();
    assert!(!kms.is_empty());
    let mean = kms.iter().map(|&k| per_kg_nh3(k)).sum::<f64>() / kms.len() as f64;
    assert!((0.025..=0.075).contains(&mean), "mean HSC surcharge {mean}");
}

#[test]
fn coal_replacement_arithmetic() {
    let e = EconomicParams::default();
    let c = cta_comparison(1.06e6, 0.55, &e).unwrap();
    assert!((c.coal_saved - 1.79e6).abs() < 1e-6);
    assert!((c.co2_avoided - 4.89e6).abs() < 1e-6);
    assert!((c.lcoa_gap - 0.14).abs() < 1e-12);
    let production = Ratio::new(106i128, 100);
    assert_eq!(e.coal_factor.exact().unwrap() * production, Ratio::new(179, 100));
    assert_eq!(e.co2_factor.exact().unwrap() * production, Ratio::new(489, 100));
    let zero = cta_comparison(0.0, 0.55, &e).unwrap();
    assert_eq!((zero.coal_saved, zero.co2_avoided), (0.0, 0.0));
    assert!(cta_comparison(-1.0, 0.5, &e).is_err());
}

#[test]
fn conversion_identity_holds_as_rationals() {
    let e = EconomicParams::default();
    let lhs = e.eta_wta.exact().unwrap();
    let rhs = e.k_hta.exact().unwrap() * e.eta_wth.exact().unwrap();
    assert_eq!(lhs, rhs);
    assert_eq!(lhs, Ratio::new(17, 165));
}

proptest! {
    #[test]
    fn lcoa_is_scale_free(lambda in 0.01f64..100.0, energy in 1.0f64..1e5, c in 0.01f64..0.1) {
        let e = EconomicParams::default();
        let go = |k: f64| {
            let a = k * energy * e.nh3_per_mwh();
            let h = lcoh(c, k * energy, k * energy / 20.0, &e).unwrap();
            lcoa_local(h, a, k * energy * 0.5, &e).unwrap()
        };
        prop_assert!(common::rel(go(1.0), go(lambda)) < 1e-10);
    }

    #[test]
    fn splitting_imports_at_equal_cost_changes_nothing(energy in 1.0f64..1e4, share in 0.0f64..=1.0, c in 0.01f64..0.1) {
        let e = EconomicParams::default();
        let a = energy * e.nh3_per_mwh();
        let whole = lcoa_en(&[EnImport { energy, lcoe: c }], 40.0, 10.0, a, &e).unwrap();
        let split = lcoa_en(
            &[EnImport { energy: energy * share, lcoe: c }, EnImport { energy: energy * (1.0 - share), lcoe: c }],
            40.0, 10.0, a, &e,
        ).unwrap();
        prop_assert!(common::rel(whole, split) < 1e-12);
    }

    #[test]
    fn lcoe_scales_with_turbine_cost(k in 0.1f64..3.0, p in 1.0f64..5000.0, energy in 1.0f64..1e5) {
        let e = EconomicParams::default();
        let scaled = EconomicParams { re: e.re.scaled(k), ..e.clone() };
        let ratio = lcoe(energy, p, &scaled).unwrap() / lcoe(energy, p, &e).unwrap();
        prop_assert!((ratio - k).abs() < 1e-12 * k);
    }
}
