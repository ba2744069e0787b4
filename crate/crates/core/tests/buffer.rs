mod common;

use proptest::prelude::*;
use wta::buffer::{feasibility_check, size_buffer, BufferProblem};
use wta::data_io::bundled_scenario;
use wta::economics::EconomicParams;
use wta::Error;

#[test]
fn default_window_always_admits_the_demand() {
    let e = EconomicParams::default();
    let per_a = (24.0 * e.k_min, 24.0 * e.k_max);
    assert!((per_a.0 - 0.168).abs() < 1e-12 && (per_a.1 - 0.240).abs() < 1e-12);
    assert!((1.0 / e.k_hta.value() - 3.0 / 17.0).abs() < 1e-15);
    for a in [0.0, 1.0, 1700.0, 2.009e6] {
        assert!(feasibility_check(a, &e).feasible, "A = {a}");
    }
    let tight = EconomicParams { k_max: 0.006, ..e };
    let f = feasibility_check(1700.0, &tight);
    assert!(!f.feasible);
    assert!(f.explanation.contains("exceeds"));
}

#[test]
fn uniform_input_needs_no_tank() {
    let e = EconomicParams::default();
    let a = 1700.0;
    let h = a / e.k_hta.value();
    let b = size_buffer(&BufferProblem::new(vec![h / 24.0; 24], a, &e)).unwrap();
    assert!(b.capacity.abs() < 1e-9);
}

#[test]
fn two_block_instance() {
    let e = EconomicParams::default();
    let mut input = vec![25.0; 12];
    input.extend([0.0; 12]);
    let p = BufferProblem::new(input, 1700.0, &e);
    let (lo, hi) = p.window();
    assert!((lo - 11.9).abs() < 1e-12 && (hi - 17.0).abs() < 1e-12);
    let b = size_buffer(&p).unwrap();
    assert!(common::rel(b.capacity, 142.8) < 1e-6, "m_BUF = {}", b.capacity);
    // Charging half: 25 in, 13.1 out; idle half drains at the minimum.
    assert!(b.output[12..].iter().all(|o| (o - 11.9).abs() < 1e-6));
    let out_charging: f64 = b.output[..12].iter().sum();
    assert!((out_charging - 12.0 * 13.1).abs() < 1e-6);
}

#[test]
fn bundled_profiles_need_at_most_a_tenth_of_daily_hydrogen() {
    let s = bundled_scenario().unwrap();
    let e = &s.economics;
    for w in &s.profiles {
        let a = 1e6;
        let h = a / e.k_hta.value();
        let b = size_buffer(&BufferProblem::new(w.p.iter().map(|v| v * h).collect(), a, e)).unwrap();
        assert!(
            b.capacity <= 0.10 * h,
            "region {}: {:.2}%",
            w.region,
            100.0 * b.capacity / h
        );
    }
}

#[test]
fn mismatched_input_is_a_contract_error() {
    let e = EconomicParams::default();
    let r = size_buffer(&BufferProblem::new(vec![1.0; 24], 1700.0, &e));
    assert!(matches!(r, Err(Error::Contract(_))));
}

#[test]
fn zero_demand_gives_empty_schedule() {
    let e = EconomicParams::default();
    let b = size_buffer(&BufferProblem::new(vec![0.0; 24], 0.0, &e)).unwrap();
    assert_eq!(b.capacity, 0.0);
}

/// Smallest tank over a grid of output schedules.
fn brute_force(input: &[f64], lo: f64, hi: f64, steps: usize) -> f64 {
    let n = input.len();
    let total: f64 = input.iter().sum();
    let mut best = f64::INFINITY;
    let mut idx = vec![0usize; n - 1];
    loop {
        let mut out: Vec<f64> = idx.iter().map(|&k| lo + (hi - lo) * k as f64 / steps as f64).collect();
        let last = total - out.iter().sum::<f64>();
        if last >= lo - 1e-12 && last <= hi + 1e-12 {
            out.push(last);
            let mut level = 0.0f64;
            let (mut mn, mut mx) = (0.0f64, 0.0f64);
            for t in 0..n {
                level += input[t] - out[t];
                mn = mn.min(level);
                mx = mx.max(level);
            }
            best = best.min(mx - mn);
        }
        let mut k = 0;
        loop {
            if k == n - 1 {
                return best;
            }
            idx[k] += 1;
            if idx[k] <= steps {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn small_instances_match_exhaustive_search(
        input in prop::collection::vec(0u32..20, 4),
        below in 0.1f64..0.9,
        above in 0.1f64..2.0,
    ) {
        let input: Vec<f64> = input.into_iter().map(f64::from).collect();
        let total: f64 = input.iter().sum();
        prop_assume!(total > 0.0);
        let mean = total / 4.0;
        let p = BufferProblem {
            input: input.clone(),
            ammonia: total,
            k_min: mean * (1.0 - below) / total,
            k_max: mean * (1.0 + above) / total,
            k_hta: 1.0,
        };
        let (lo, hi) = p.window();
        let b = size_buffer(&p).unwrap();
        let steps = 40;
        let brute = brute_force(&input, lo, hi, steps);
        prop_assert!(b.capacity <= brute + 1e-7, "lp {} brute {}", b.capacity, brute);
        prop_assert!(brute - b.capacity <= 4.0 * (hi - lo) / steps as f64 + 1e-9);
    }

    #[test]
    fn schedules_respect_window_and_balance(seed in any::<u64>(), intensity in 0.0f64..=1.0, a in 1.0f64..1e6) {
        let e = EconomicParams::default();
        let w = wta::wind::synth_profile(intensity, seed).unwrap();
        let h = a / e.k_hta.value();
        let p = BufferProblem::new(w.p.iter().map(|v| v * h).collect(), a, &e);
        let (lo, hi) = p.window();
        let b = size_buffer(&p).unwrap();
        let tol = 1e-7 * h;
        for t in 0..24 {
            prop_assert!(b.output[t] >= lo - tol && b.output[t] <= hi + tol);
            prop_assert!(b.level[t] >= -tol && b.level[t] <= b.capacity + tol);
            let next = b.level[(t + 1) % 24];
            prop_assert!((next - (b.level[t] + p.input[t] - b.output[t])).abs() <= tol);
        }
    }
}
