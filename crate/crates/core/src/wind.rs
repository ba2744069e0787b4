//! Wind potential curves and daily profiles.
//!
//! A region's usable daily energy is bounded by `E <= a P^2 + b P` for an
//! installed capacity `P` in `[0, p_max]`; `a <= 0` makes the average
//! full-load hours `a P + b` fall as capacity grows. Profiles describe the
//! hourly share of one day's energy.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HOURS: usize = 24;

/// Hour length in hours.
pub const TAU: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialCurve {
    /// h/d/MW
    pub a: f64,
    /// h/d
    pub b: f64,
    /// MW
    pub p_max: f64,
}

impl PotentialCurve {
    /// Invariant violations; the slope check is a warning-level issue.
    pub fn issues(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.a <= 0.0) {
            out.push(format!("a = {} must be <= 0 (concave curve)", self.a));
        }
        if !(self.b > 0.0) {
            out.push(format!("b = {} must be > 0", self.b));
        }
        if !(self.p_max >= 0.0) {
            out.push(format!("p_max = {} must be >= 0", self.p_max));
        }
        out
    }

    /// True when the curve keeps rising up to `p_max`.
    pub fn nondecreasing(&self) -> bool {
        self.b + 2.0 * self.a * self.p_max >= 0.0
    }
}

/// Energy bound `a P^2 + b P` in MWh/d.
pub fn energy_bound(c: &PotentialCurve, p: f64) -> Result<f64> {
    if !(0.0..=c.p_max).contains(&p) {
        return Err(Error::Domain(format!("capacity {p} MW outside [0, {}]", c.p_max)));
    }
    Ok(c.a * p * p + c.b * p)
}

/// Average full-load hours per day at capacity `p`, the secant slope `a P + b`.
pub fn flh(c: &PotentialCurve, p: f64) -> Result<f64> {
    if !(p > 0.0) || p > c.p_max {
        return Err(Error::Domain(format!("capacity {p} MW outside (0, {}]", c.p_max)));
    }
    Ok(c.a * p + c.b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveFit {
    pub curve: PotentialCurve,
    pub residual_norm: f64,
}

/// Least-squares fit of `E = a P^2 + b P` through the origin.
pub fn fit_potential(samples: &[(f64, f64)]) -> Result<CurveFit> {
    if samples.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 samples, got {}", samples.len())));
    }
    if let Some(&(p, e)) = samples
        .iter()
        .find(|(p, e)| !(p.is_finite() && *p >= 0.0 && e.is_finite()))
    {
        return Err(Error::Fit(format!(
            "sample ({p}, {e}) is not a finite point with P >= 0"
        )));
    }
    let mut ps: Vec<f64> = samples.iter().map(|s| s.0).collect();
    ps.sort_by(f64::total_cmp);
    if ps.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Fit("capacity values must be distinct".into()));
    }
    if ps.iter().filter(|p| **p > 0.0).count() < 2 {
        return Err(Error::Fit(
            "rank deficient: fewer than 2 distinct nonzero capacities".into(),
        ));
    }
    let n = samples.len();
    let s1 = samples.iter().map(|s| s.0 * s.0).sum::<f64>().sqrt();
    let s2 = samples.iter().map(|s| s.0.powi(4)).sum::<f64>().sqrt();
    let x = DMatrix::from_fn(n, 2, |r, c| {
        let p = samples[r].0;
        if c == 0 {
            p * p / s2
        } else {
            p / s1
        }
    });
    let y = DVector::from_iterator(n, samples.iter().map(|s| s.1));
    let svd = x.clone().svd(true, true);
    let sv = &svd.singular_values;
    if sv.min() <= 1e-12 * sv.max() {
        return Err(Error::Fit("rank deficient design matrix".into()));
    }
    let coef = svd.solve(&y, 0.0).map_err(|e| Error::Fit(e.to_string()))?;
    let residual_norm = (&x * &coef - &y).norm();
    Ok(CurveFit {
        curve: PotentialCurve {
            a: coef[0] / s2,
            b: coef[1] / s1,
            p_max: ps[n - 1],
        },
        residual_norm,
    })
}

/// Hourly share of one day's wind energy, in 1/h.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindProfile {
    pub region: usize,
    pub p: [f64; HOURS],
}

impl WindProfile {
    pub fn flat(region: usize) -> Self {
        Self {
            region,
            p: [1.0 / HOURS as f64; HOURS],
        }
    }

    pub fn peak(&self) -> f64 {
        self.p.iter().fold(0.0f64, |m, v| m.max(*v))
    }

    pub fn issues(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(t) = self.p.iter().position(|v| !(*v >= 0.0) || !v.is_finite()) {
            out.push(format!("profile {} hour {t} is negative or not finite", self.region));
        }
        let sum: f64 = self.p.iter().sum::<f64>() * TAU;
        if (sum - 1.0).abs() > 1e-9 {
            out.push(format!("profile {} sums to {sum}, expected 1", self.region));
        }
        out
    }
}

/// Hourly power `E p_t` in MW for daily energy `e` in MWh.
pub fn scale_profile(e: f64, w: &WindProfile) -> Result<[f64; HOURS]> {
    if !(e >= 0.0) {
        return Err(Error::Domain(format!("daily energy {e} must be >= 0")));
    }
    if let Some(msg) = w.issues().into_iter().next() {
        return Err(Error::Domain(msg));
    }
    Ok(w.p.map(|v| e * v))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileStats {
    pub min: f64,
    pub lower_quartile: f64,
    pub median: f64,
    pub upper_quartile: f64,
    pub max: f64,
    /// Population standard deviation over the mean.
    pub cv: f64,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = q * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn profile_stats(w: &WindProfile) -> ProfileStats {
    let mut s = w.p.to_vec();
    s.sort_by(f64::total_cmp);
    let mean = s.iter().sum::<f64>() / s.len() as f64;
    let var = s.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / s.len() as f64;
    ProfileStats {
        min: s[0],
        lower_quartile: quantile(&s, 0.25),
        median: quantile(&s, 0.5),
        upper_quartile: quantile(&s, 0.75),
        max: s[s.len() - 1],
        cv: if mean > 0.0 { var.sqrt() / mean } else { 0.0 },
    }
}

const SYNTH_PERIOD_H: f64 = 6.0;
const SYNTH_NOISE: f64 = 0.35;

/// Seeded stand-in profile: `(1 + s z_t) / 24` where `z` is a zero-mean,
/// unit-peak mix of a short-period sinusoid and uniform noise. The CV is
/// `s` times the CV of `z`, so it grows linearly with `intensity`.
pub fn synth_profile(intensity: f64, seed: u64) -> Result<WindProfile> {
    if !(0.0..=1.0).contains(&intensity) {
        return Err(Error::Domain(format!("intensity {intensity} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phase: f64 = rng.random_range(0.0..SYNTH_PERIOD_H);
    let mut z = [0.0; HOURS];
    for (t, v) in z.iter_mut().enumerate() {
        let wave = (std::f64::consts::TAU * (t as f64 + phase) / SYNTH_PERIOD_H).sin();
        *v = wave + SYNTH_NOISE * rng.random_range(-1.0..1.0);
    }
    let mean = z.iter().sum::<f64>() / HOURS as f64;
    z.iter_mut().for_each(|v| *v -= mean);
    let peak = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut p = z.map(|v| (1.0 + intensity * v / peak).max(0.0));
    let sum: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= sum * TAU);
    Ok(WindProfile { region: 0, p })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_twelve_bound() {
        let c = PotentialCurve {
            a: -5.49e-2,
            b: 13.99,
            p_max: 40.0,
        };
        assert!((energy_bound(&c, 40.0).unwrap() - 471.76).abs() < 1e-9);
        assert_eq!(energy_bound(&c, 0.0).unwrap(), 0.0);
        assert!(energy_bound(&c, 41.0).is_err());
    }

    #[test]
    fn flh_rejects_zero_capacity() {
        let c = PotentialCurve {
            a: -6.34e-5,
            b: 11.44,
            p_max: 2655.0,
        };
        assert!(flh(&c, 0.0).is_err());
        assert!((flh(&c, 1e-9).unwrap() - 11.44).abs() < 1e-9);
    }

    #[test]
    fn stats_of_half_day_profile() {
        let mut p = [0.0; HOURS];
        p[..12].iter_mut().for_each(|v| *v = 1.0 / 12.0);
        let s = profile_stats(&WindProfile { region: 1, p });
        assert_eq!(s.min, 0.0);
        assert!((s.max - 1.0 / 12.0).abs() < 1e-15);
        assert!((s.median - 1.0 / 24.0).abs() < 1e-15);
    }

    #[test]
    fn zero_intensity_is_flat() {
        let w = synth_profile(0.0, 7).unwrap();
        assert!(w.p.iter().all(|v| (v - 1.0 / 24.0).abs() < 1e-15));
    }

    #[test]
    fn linear_samples_give_zero_curvature() {
        let s: Vec<(f64, f64)> = (1..6).map(|k| (k as f64 * 10.0, 110.0 * k as f64)).collect();
        let f = fit_potential(&s).unwrap();
        assert!(f.curve.a.abs() < 1e-12);
        assert!((f.curve.b - 11.0).abs() < 1e-9);
    }

    #[test]
    fn fit_rejects_single_nonzero_capacity() {
        assert!(fit_potential(&[(0.0, 0.0), (5.0, 50.0)]).is_err());
        assert!(fit_potential(&[(0.0, 0.0), (5.0, 50.0), (5.0, 51.0)]).is_err());
    }
}
