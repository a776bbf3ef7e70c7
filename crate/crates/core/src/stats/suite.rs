//! The fixed battery of checks with their pass/fail bands.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use crate::bench::Method;
use crate::error::{invalid, Result};
use crate::reference::{BoxMuller, Polar};
use crate::wallace::{FixedPass, ScaleMode, WallaceConfig, WallaceState};
use crate::NormalSource;

use super::{autocorr_at_lag, chi2_bins, moments, sumsq_distribution_check, uv_columns, AutocorrReport};

/// Bins used for the (u, v) uniformity test.
pub const UNIFORMITY_BINS: usize = 1000;
/// ±3.5σ band for χ²₉₉₉.
pub const UNIFORMITY_BAND: (f64, f64) = (842.0, 1156.0);
/// CLT band width, in standard errors, for moments and autocorrelation.
pub const Z_BAND: f64 = 4.0;
/// Floor on the autocorrelation bound.
pub const AUTOCORR_BOUND: f64 = 0.01;
/// Relative bands for the sum-of-squares mean and variance.
pub const SUMSQ_MEAN_BAND: f64 = 0.10;
pub const SUMSQ_VAR_BAND: f64 = 0.30;
/// Default base sample count; suites scale from it.
pub const DEFAULT_BASE_SAMPLES: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Uniformity,
    Moments,
    Autocorr,
    Sumsq,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Uniformity, Suite::Moments, Suite::Autocorr, Suite::Sumsq];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Uniformity => "uniformity",
            Suite::Moments => "moments",
            Suite::Autocorr => "autocorr",
            Suite::Sumsq => "sumsq",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Within { lo: f64, hi: f64 },
    AbsAtMost(f64),
    AbsAtLeast(f64),
}

impl Threshold {
    pub fn admits(&self, v: f64) -> bool {
        match *self {
            Threshold::Within { lo, hi } => (lo..=hi).contains(&v),
            Threshold::AbsAtMost(b) => v.abs() <= b,
            Threshold::AbsAtLeast(b) => v.abs() >= b,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Threshold::Within { lo, hi } => write!(f, "[{lo},{hi}]"),
            Threshold::AbsAtMost(b) => write!(f, "|x|<={b}"),
            Threshold::AbsAtLeast(b) => write!(f, "|x|>={b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub test: String,
    pub method: String,
    pub statistic: f64,
    pub threshold: Threshold,
    pub pass: bool,
}

impl Verdict {
    fn new(test: impl Into<String>, method: impl Into<String>, statistic: f64, threshold: Threshold) -> Self {
        Verdict { test: test.into(), method: method.into(), statistic, pass: threshold.admits(statistic), threshold }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub stream_id: u64,
    pub throwaway_f: u32,
    pub pool_exponent: u32,
    /// Uniformity uses this many pairs, moments ten times as many values,
    /// autocorrelation this many values, sum-of-squares one pass per hundred.
    pub base_samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 1, stream_id: 0, throwaway_f: 3, pool_exponent: 10, base_samples: DEFAULT_BASE_SAMPLES }
    }
}

impl SuiteConfig {
    pub fn wallace_config(&self) -> WallaceConfig {
        WallaceConfig {
            throwaway_f: self.throwaway_f,
            pool_exponent: self.pool_exponent,
            ..WallaceConfig::with_seed(self.seed, self.stream_id)
        }
    }
}

pub fn make_source(method: Method, cfg: &SuiteConfig) -> Result<Box<dyn NormalSource>> {
    Ok(match method {
        Method::Wallace => Box::new(WallaceState::new(cfg.wallace_config())?),
        Method::Polar => Box::new(Polar::new(cfg.seed, cfg.stream_id)),
        Method::BoxMuller => Box::new(BoxMuller::new(cfg.seed, cfg.stream_id)),
    })
}

pub fn draw(src: &mut dyn NormalSource, count: usize) -> Result<Vec<f64>> {
    let mut out = vec![0.0; count];
    src.fill_standard(&mut out)?;
    Ok(out)
}

/// `|r|` bound for a series of `n` values.
pub fn autocorr_bound(n: usize) -> f64 {
    AUTOCORR_BOUND.max(Z_BAND / (n as f64).sqrt())
}

/// Lags at which the unit-stride flaw would show for `γ ∈ {1, N/2}`,
/// plus short lags.
pub fn engineered_lags(n: usize) -> [usize; 4] {
    [1, 7, 2 * n - 1, 2 * n - n / 2]
}

fn uniformity(method: Method, cfg: &SuiteConfig) -> Result<Vec<Verdict>> {
    let mut src = make_source(method, cfg)?;
    let values = draw(src.as_mut(), 2 * cfg.base_samples)?;
    let (u, v) = uv_columns(&values);
    let band = Threshold::Within { lo: UNIFORMITY_BAND.0, hi: UNIFORMITY_BAND.1 };
    let ru = chi2_bins(&u, UNIFORMITY_BINS, 0.0, 1.0)?;
    let rv = chi2_bins(&v, UNIFORMITY_BINS, -FRAC_PI_2, FRAC_PI_2)?;
    Ok(vec![
        Verdict::new("uniformity_u", method.name(), ru.statistic, band),
        Verdict::new("uniformity_v", method.name(), rv.statistic, band),
    ])
}

fn moment_checks(method: Method, cfg: &SuiteConfig) -> Result<Vec<Verdict>> {
    let mut src = make_source(method, cfg)?;
    let values = draw(src.as_mut(), 10 * cfg.base_samples)?;
    let r = moments(&values)?;
    let n = r.n as f64;
    let bound = |var: f64| Threshold::AbsAtMost(Z_BAND * (var / n).sqrt());
    Ok(vec![
        Verdict::new("moment_mean", method.name(), r.m1, bound(1.0)),
        Verdict::new("moment_m2_minus_1", method.name(), r.m2 - 1.0, bound(2.0)),
        Verdict::new("moment_m4_minus_3", method.name(), r.m4 - 3.0, bound(96.0)),
    ])
}

fn autocorr_checks(method: Method, cfg: &SuiteConfig) -> Result<Vec<Verdict>> {
    let mut src = make_source(method, cfg)?;
    let values = draw(src.as_mut(), cfg.base_samples)?;
    let bound = Threshold::AbsAtMost(autocorr_bound(values.len()));
    engineered_lags(1 << cfg.pool_exponent)
        .into_iter()
        .map(|lag| {
            let r = autocorr_at_lag(&values, lag)?;
            Ok(Verdict::new(format!("autocorr_lag_{lag}"), method.name(), r.r, bound))
        })
        .collect()
}

fn sumsq_checks(method: Method, cfg: &SuiteConfig) -> Result<Vec<Verdict>> {
    if method != Method::Wallace {
        return Ok(Vec::new());
    }
    let mut st = WallaceState::new(cfg.wallace_config())?;
    let nu = 2.0 * st.config().n() as f64;
    let passes = (cfg.base_samples / 100).max(1);
    let (mean, var) = sumsq_distribution_check(&mut st, passes)?;
    Ok(vec![
        Verdict::new(
            "sumsq_mean",
            method.name(),
            mean,
            Threshold::Within { lo: nu * (1.0 - SUMSQ_MEAN_BAND), hi: nu * (1.0 + SUMSQ_MEAN_BAND) },
        ),
        Verdict::new(
            "sumsq_variance",
            method.name(),
            var,
            Threshold::Within { lo: 2.0 * nu * (1.0 - SUMSQ_VAR_BAND), hi: 2.0 * nu * (1.0 + SUMSQ_VAR_BAND) },
        ),
    ])
}

pub fn run_suite(suite: Suite, method: Method, cfg: &SuiteConfig) -> Result<Vec<Verdict>> {
    if cfg.base_samples == 0 {
        return Err(invalid("sample count must be positive"));
    }
    match suite {
        Suite::Uniformity => uniformity(method, cfg),
        Suite::Moments => moment_checks(method, cfg),
        Suite::Autocorr => autocorr_checks(method, cfg),
        Suite::Sumsq => sumsq_checks(method, cfg),
    }
}

/// Unit-stride, constant-parameter generator: α = β = 1, γ = δ = `gamma`,
/// θ = π/6, f = 1, no rescaling.
pub fn flawed_generator(cfg: &SuiteConfig, gamma: usize) -> Result<WallaceState> {
    let wcfg = WallaceConfig { throwaway_f: 1, scale_mode: ScaleMode::Fixed, ..cfg.wallace_config() };
    WallaceState::with_fixed_pass(wcfg, FixedPass::unit_stride(gamma))
}

/// Autocorrelation at lag 2N − γ for the flawed and the recommended
/// configurations, in that order.
pub fn stride_flaw_reports(cfg: &SuiteConfig, gamma: usize, samples: usize) -> Result<(AutocorrReport, AutocorrReport)> {
    let n = 1usize << cfg.pool_exponent;
    if gamma >= n {
        return Err(invalid(format!("gamma {gamma} must be below N = {n}")));
    }
    let lag = 2 * n - gamma;
    let mut flawed = flawed_generator(cfg, gamma)?;
    let bad = autocorr_at_lag(&draw(&mut flawed, samples)?, lag)?;
    let mut good = WallaceState::new(cfg.wallace_config())?;
    let ok = autocorr_at_lag(&draw(&mut good, samples)?, lag)?;
    Ok((bad, ok))
}
