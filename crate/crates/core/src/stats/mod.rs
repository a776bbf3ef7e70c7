//! Statistical checks for normal generators.
//!
//! Reports are plain data computed from input slices. [`suite`] fixes the
//! sample sizes and pass/fail bands; rendering is left to the callers.

mod gamma;
pub mod suite;

pub use gamma::{chi2_sf, ln_gamma, regularized_upper_gamma};

use std::f64::consts::FRAC_PI_2;

use crate::error::{invalid, Result};
use crate::wallace::{ScaleMode, WallaceState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chi2Report {
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
    pub bin_count: usize,
    pub sample_count: usize,
}

/// Sample moments with z-scores against N(0, 1): expected (0, 1, 3) with
/// per-sample variances (1, 2, 96).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentsReport {
    pub n: usize,
    pub m1: f64,
    pub m2: f64,
    pub m4: f64,
    pub z1: f64,
    pub z2: f64,
    pub z4: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutocorrReport {
    pub lag: usize,
    pub r: f64,
    pub n: usize,
}

/// Maps a normal pair to `u = exp(-(x²+y²)/2)` and `v = atan(x/y)`, both
/// uniform for i.i.d. N(0, 1) input. `None` for the origin.
pub fn to_uv(x: f64, y: f64) -> Option<(f64, f64)> {
    if x == 0.0 && y == 0.0 {
        return None;
    }
    let u = (-0.5 * (x * x + y * y)).exp();
    let v = if y == 0.0 { FRAC_PI_2.copysign(x) } else { (x / y).atan() };
    Some((u, v))
}

/// Splits consecutive values into pairs and transforms each; origin pairs
/// are dropped.
pub fn uv_columns(values: &[f64]) -> (Vec<f64>, Vec<f64>) {
    values
        .chunks_exact(2)
        .filter_map(|p| to_uv(p[0], p[1]))
        .unzip()
}

/// Pearson χ² of `values` against `k` equal-width bins on `[lo, hi]`.
pub fn chi2_bins(values: &[f64], k: usize, lo: f64, hi: f64) -> Result<Chi2Report> {
    if k < 2 {
        return Err(invalid("need at least two bins"));
    }
    if !(lo < hi) {
        return Err(invalid(format!("empty range [{lo}, {hi}]")));
    }
    if values.is_empty() {
        return Err(invalid("no values to bin"));
    }
    let mut counts = vec![0u64; k];
    let width = (hi - lo) / k as f64;
    for &v in values {
        if !(lo..=hi).contains(&v) {
            return Err(invalid(format!("value {v} outside [{lo}, {hi}]")));
        }
        let idx = (((v - lo) / width) as usize).min(k - 1);
        counts[idx] += 1;
    }
    let expected = values.len() as f64 / k as f64;
    let statistic = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let dof = (k - 1) as u64;
    Ok(Chi2Report {
        statistic,
        dof,
        p_value: chi2_sf(statistic, dof),
        bin_count: k,
        sample_count: values.len(),
    })
}

pub fn moments(values: &[f64]) -> Result<MomentsReport> {
    if values.is_empty() {
        return Err(invalid("moments of an empty sample"));
    }
    let (mut s1, mut s2, mut s4) = (0.0, 0.0, 0.0);
    for &z in values {
        let z2 = z * z;
        s1 += z;
        s2 += z2;
        s4 += z2 * z2;
    }
    let n = values.len();
    let nf = n as f64;
    let (m1, m2, m4) = (s1 / nf, s2 / nf, s4 / nf);
    let z = |m: f64, expect: f64, var: f64| (m - expect) * (nf / var).sqrt();
    Ok(MomentsReport { n, m1, m2, m4, z1: z(m1, 0.0, 1.0), z2: z(m2, 1.0, 2.0), z4: z(m4, 3.0, 96.0) })
}

/// Lag-`lag` autocorrelation of the overlapping head `z[..n-lag]` and tail
/// `z[lag..]`, both centred on the full-sample mean. Normalised by the two
/// ranges' own sums of squares, so `|r| <= 1`.
pub fn autocorr_at_lag(values: &[f64], lag: usize) -> Result<AutocorrReport> {
    let n = values.len();
    if n <= lag + 1 {
        return Err(invalid(format!("{n} values too few for lag {lag}")));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let pairs = n - lag;
    let (mut num, mut head, mut tail) = (0.0, 0.0, 0.0);
    for (a, b) in values[..pairs].iter().zip(&values[lag..]) {
        let (da, db) = (a - mean, b - mean);
        num += da * db;
        head += da * da;
        tail += db * db;
    }
    let denom = (head * tail).sqrt();
    if !(denom > 0.0) {
        return Err(invalid("zero-variance series"));
    }
    Ok(AutocorrReport { lag, r: num / denom, n: pairs })
}

/// Runs `passes` passes of a chi-squared-mode generator and returns the
/// sample mean and variance of the target sums of squares.
pub fn sumsq_distribution_check(state: &mut WallaceState, passes: usize) -> Result<(f64, f64)> {
    if state.config().scale_mode != ScaleMode::ChiSquared {
        return Err(invalid("sum-of-squares distribution needs chi-squared scaling"));
    }
    if passes == 0 {
        return Err(invalid("need at least one pass"));
    }
    let mut targets = Vec::with_capacity(passes);
    for _ in 0..passes {
        targets.push(state.advance_pass()?.target_sumsq);
    }
    let mean = targets.iter().sum::<f64>() / passes as f64;
    let variance = if passes > 1 {
        targets.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / (passes - 1) as f64
    } else {
        0.0
    };
    Ok((mean, variance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wallace::WallaceConfig;

    #[test]
    fn uv_cardinal_points() {
        let (u, v) = to_uv(0.0, 1.0).unwrap();
        assert!((u - (-0.5f64).exp()).abs() < 1e-15);
        assert_eq!(v, 0.0);
        let (u, v) = to_uv(1.0, 1.0).unwrap();
        assert!((u - (-1.0f64).exp()).abs() < 1e-15);
        assert!((v - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert_eq!(to_uv(0.0, 0.0), None);
        assert_eq!(to_uv(2.0, 0.0).unwrap().1, FRAC_PI_2);
        assert_eq!(to_uv(-2.0, -0.0).unwrap().1, -FRAC_PI_2);
    }

    #[test]
    fn uv_columns_skip_origin() {
        let (u, v) = uv_columns(&[0.0, 0.0, 1.0, 1.0, 5.0]);
        assert_eq!(u.len(), 1);
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn chi2_bins_exact_cases() {
        let even: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let r = chi2_bins(&even, 10, 0.0, 1.0).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.dof, 9);
        assert_eq!(r.p_value, 1.0);

        let lumped = vec![0.05; 1000];
        assert_eq!(chi2_bins(&lumped, 10, 0.0, 1.0).unwrap().statistic, 9000.0);

        let top = vec![1.0; 10];
        assert_eq!(chi2_bins(&top, 2, 0.0, 1.0).unwrap().statistic, 10.0);
    }

    #[test]
    fn chi2_bins_rejects_bad_input() {
        assert!(chi2_bins(&[0.5], 1, 0.0, 1.0).is_err());
        assert!(chi2_bins(&[0.5], 4, 1.0, 1.0).is_err());
        assert!(chi2_bins(&[1.5], 4, 0.0, 1.0).is_err());
        assert!(chi2_bins(&[f64::NAN], 4, 0.0, 1.0).is_err());
        assert!(chi2_bins(&[], 4, 0.0, 1.0).is_err());
    }

    #[test]
    fn moments_small_samples() {
        let r = moments(&[1.0, -1.0]).unwrap();
        assert_eq!((r.m1, r.m2, r.m4), (0.0, 1.0, 1.0));
        let r = moments(&[0.0; 4]).unwrap();
        assert_eq!((r.m1, r.m2, r.m4), (0.0, 0.0, 0.0));
        assert!(r.z4.is_finite());
        assert!(moments(&[]).is_err());
    }

    #[test]
    fn autocorr_exact_cases() {
        let alt: Vec<f64> = (0..1000).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        assert!((autocorr_at_lag(&alt, 1).unwrap().r + 1.0).abs() < 1e-12);
        let ramp: Vec<f64> = (0..50).map(|i| (i * i) as f64).collect();
        assert!((autocorr_at_lag(&ramp, 0).unwrap().r - 1.0).abs() < 1e-12);
        assert!(autocorr_at_lag(&[1.0; 10], 1).is_err());
        assert!(autocorr_at_lag(&ramp, 49).is_err());
    }

    #[test]
    fn sumsq_single_pass_and_mode_guard() {
        let mut st = WallaceState::new(WallaceConfig::with_seed(1, 0)).unwrap();
        let expected = crate::wallace::chi2_target(st.active_pool().withheld(), 2048);
        let (mean, var) = sumsq_distribution_check(&mut st, 1).unwrap();
        assert_eq!(mean, expected);
        assert_eq!(var, 0.0);
        assert!(sumsq_distribution_check(&mut st, 0).is_err());

        let fixed = WallaceConfig { scale_mode: ScaleMode::Fixed, ..WallaceConfig::default() };
        let mut st = WallaceState::new(fixed).unwrap();
        assert!(sumsq_distribution_check(&mut st, 10).is_err());
    }
}
