mod common;

use common::rel;
use nalgebra::{Matrix2, Vector2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wta::wind::{
    energy_bound, fit_potential, flh, profile_stats, scale_profile, synth_profile, PotentialCurve, WindProfile, HOURS,
};

const REGION_8: PotentialCurve = PotentialCurve {
    a: -6.34e-5,
    b: 11.44,
    p_max: 2655.0,
};

#[test]
fn exact_samples_recover_the_curve() {
    let pts: Vec<(f64, f64)> = (1..=20)
        .map(|k| {
            let p = 130.0 * k as f64;
            (p, -6.34e-5 * p * p + 11.44 * p)
        })
        .collect();
    let fit = fit_potential(&pts).unwrap();
    assert!(rel(fit.curve.a, -6.34e-5) < 1e-9, "a = {}", fit.curve.a);
    assert!(rel(fit.curve.b, 11.44) < 1e-9, "b = {}", fit.curve.b);
    assert_eq!(fit.curve.p_max, 2600.0);
}

#[test]
fn samples_on_a_line_give_zero_curvature() {
    let pts: Vec<(f64, f64)> = (1..=10).map(|k| (k as f64 * 7.0, 77.0 * k as f64)).collect();
    let fit = fit_potential(&pts).unwrap();
    assert!(fit.curve.a.abs() < 1e-12);
    assert!(rel(fit.curve.b, 11.0) < 1e-12);
}

#[test]
fn noisy_fit_matches_normal_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let pts: Vec<(f64, f64)> = (0..30)
            .map(|_| {
                let p: f64 = rng.random_range(10.0..2000.0);
                (p, -5e-5 * p * p + 12.0 * p + rng.random_range(-200.0..200.0))
            })
            .collect();
        let (mut s4, mut s3, mut s2, mut y2, mut y1) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(p, e) in &pts {
            s4 += p.powi(4);
            s3 += p.powi(3);
            s2 += p * p;
            y2 += e * p * p;
            y1 += e * p;
        }
        let sol = Matrix2::new(s4, s3, s3, s2).lu().solve(&Vector2::new(y2, y1)).unwrap();
        let fit = fit_potential(&pts).unwrap();
        assert!(rel(fit.curve.a, sol[0]) < 1e-7, "{} vs {}", fit.curve.a, sol[0]);
        assert!(rel(fit.curve.b, sol[1]) < 1e-9, "{} vs {}", fit.curve.b, sol[1]);
    }
}

#[test]
fn too_few_or_duplicate_samples_fail() {
    assert!(fit_potential(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
    assert!(fit_potential(&[(1.0, 1.0), (1.0, 2.0), (2.0, 3.0)]).is_err());
}

#[test]
fn region_eight_energy_and_full_load_hours() {
    let e = energy_bound(&REGION_8, 2385.0).unwrap();
    assert!(rel(e, 26923.8) < 1e-4, "E = {e}");
    assert!(rel(e, 26862.0) < 0.005);
    let h = flh(&REGION_8, 2385.0).unwrap();
    assert!((h - 11.29).abs() < 0.005, "flh = {h}");
    assert!(h * 365.0 > 4000.0);
    assert_eq!(energy_bound(&REGION_8, 0.0).unwrap(), 0.0);
}

#[test]
fn region_twelve_bound_at_capacity() {
    let c = PotentialCurve {
        a: -5.49e-2,
        b: 13.99,
        p_max: 40.0,
    };
    assert!((energy_bound(&c, 40.0).unwrap() - 471.76).abs() < 1e-9);
}

#[test]
fn scaling_flat_and_zero() {
    let flat = WindProfile::flat(1);
    assert!(scale_profile(240.0, &flat)
        .unwrap()
        .iter()
        .all(|v| (v - 10.0).abs() < 1e-12));
    assert!(scale_profile(0.0, &flat).unwrap().iter().all(|v| *v == 0.0));
}

#[test]
fn stats_of_flat_and_half_day_profiles() {
    let s = profile_stats(&WindProfile::flat(1));
    for q in [s.min, s.lower_quartile, s.median, s.upper_quartile, s.max] {
        assert!((q - 1.0 / 24.0).abs() < 1e-15);
    }
    assert!(s.cv.abs() < 1e-12);
    let mut p = [0.0; HOURS];
    p[..12].fill(1.0 / 12.0);
    let s = profile_stats(&WindProfile { region: 1, p });
    assert_eq!(s.min, 0.0);
    assert_eq!(s.max, 1.0 / 12.0);
    assert!((s.median - 1.0 / 24.0).abs() < 1e-15);
}

#[test]
fn zero_intensity_is_flat() {
    let w = synth_profile(0.0, 99).unwrap();
    assert!(w.p.iter().all(|v| (v - 1.0 / 24.0).abs() < 1e-15));
}

proptest! {
    #[test]
    fn full_load_hours_fall_with_capacity(a in -1e-2f64..=0.0, b in 5.0f64..15.0, p1 in 0.1f64..100.0, dp in 0.0f64..100.0) {
        let c = PotentialCurve { a, b, p_max: 1e4 };
        prop_assert!(flh(&c, p1).unwrap() >= flh(&c, p1 + dp).unwrap());
    }

    #[test]
    fn scaling_conserves_energy(seed in any::<u64>(), intensity in 0.0f64..=1.0, e in 0.0f64..1e5) {
        let w = synth_profile(intensity, seed).unwrap();
        let total: f64 = scale_profile(e, &w).unwrap().iter().sum();
        prop_assert!((total - e).abs() <= 1e-12 * e.max(1.0));
    }

    #[test]
    fn synthetic_profiles_are_valid_and_repeatable(seed in any::<u64>(), intensity in 0.0f64..=1.0) {
        let w = synth_profile(intensity, seed).unwrap();
        prop_assert!(w.issues().is_empty());
        prop_assert_eq!(w.p, synth_profile(intensity, seed).unwrap().p);
    }

    #[test]
    fn stronger_intensity_has_larger_cv(seed in any::<u64>()) {
        let lo = profile_stats(&synth_profile(0.2, seed).unwrap()).cv;
        let hi = profile_stats(&synth_profile(0.9, seed).unwrap()).cv;
        prop_assert!(hi > lo);
    }
}
