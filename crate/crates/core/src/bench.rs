//! Throughput harness: nanoseconds per delivered N(μ, σ²) value.

use std::fmt;
use std::hint::black_box;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{invalid, Error, Result};
use crate::reference::{BoxMuller, Polar};
use crate::wallace::{WallaceConfig, WallaceState};
use crate::NormalSource;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Wallace,
    Polar,
    BoxMuller,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Wallace, Method::Polar, Method::BoxMuller];

    pub fn name(self) -> &'static str {
        match self {
            Method::Wallace => "wallace",
            Method::Polar => "polar",
            Method::BoxMuller => "boxmuller",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wallace" => Ok(Method::Wallace),
            "polar" => Ok(Method::Polar),
            "boxmuller" | "box-muller" => Ok(Method::BoxMuller),
            other => Err(invalid(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub seconds: f64,
    /// Values generated per call.
    pub block: usize,
    pub seed: u64,
    pub stream_id: u64,
    /// Wallace throw-away factor.
    pub throwaway_f: u32,
    pub pool_exponent: u32,
    pub mu: f64,
    pub sigma: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            seconds: 1.0,
            block: 1 << 16,
            seed: 1,
            stream_id: 0,
            throwaway_f: 3,
            pool_exponent: 10,
            mu: 0.0,
            sigma: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchResult {
    pub method: Method,
    /// Throw-away factor, Wallace only.
    pub throwaway_f: Option<u32>,
    pub values: u64,
    pub elapsed: Duration,
    pub ns_per_value: f64,
}

fn timed(
    cfg: &BenchConfig,
    mut fill: impl FnMut(&mut [f64]) -> Result<()>,
) -> Result<(u64, Duration)> {
    if !(cfg.seconds >= 0.0 && cfg.seconds.is_finite()) {
        return Err(invalid(format!("bench duration {} must be finite and non-negative", cfg.seconds)));
    }
    if cfg.block == 0 {
        return Err(invalid("bench block size must be positive"));
    }
    let mut buf = vec![0.0; cfg.block];
    // Warm-up block, untimed.
    fill(&mut buf)?;
    let budget = Duration::from_secs_f64(cfg.seconds);
    let start = Instant::now();
    let mut values = 0u64;
    loop {
        fill(&mut buf)?;
        black_box(&buf);
        values += buf.len() as u64;
        if start.elapsed() >= budget {
            break;
        }
    }
    Ok((values, start.elapsed()))
}

/// The reference generators pay for the μ + σz step too.
fn affine(buf: &mut [f64], mu: f64, sigma: f64) {
    for v in buf {
        *v = mu + sigma * *v;
    }
}

fn reference_fill<S: NormalSource>(mut src: S, cfg: &BenchConfig) -> Result<(u64, Duration)> {
    timed(cfg, |buf| {
        src.fill_standard(buf)?;
        affine(buf, cfg.mu, cfg.sigma);
        Ok(())
    })
}

pub fn run(method: Method, cfg: &BenchConfig) -> Result<BenchResult> {
    let (values, elapsed) = match method {
        Method::Wallace => {
            let wcfg = WallaceConfig {
                throwaway_f: cfg.throwaway_f,
                pool_exponent: cfg.pool_exponent,
                ..WallaceConfig::with_seed(cfg.seed, cfg.stream_id)
            };
            let mut gen = WallaceState::new(wcfg)?;
            timed(cfg, |buf| gen.fill_into(buf, cfg.mu, cfg.sigma))?
        }
        Method::Polar => reference_fill(Polar::new(cfg.seed, cfg.stream_id), cfg)?,
        Method::BoxMuller => reference_fill(BoxMuller::new(cfg.seed, cfg.stream_id), cfg)?,
    };
    Ok(BenchResult {
        method,
        throwaway_f: (method == Method::Wallace).then_some(cfg.throwaway_f),
        values,
        elapsed,
        ns_per_value: elapsed.as_nanos() as f64 / values as f64,
    })
}
