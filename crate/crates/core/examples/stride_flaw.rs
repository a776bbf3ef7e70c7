//! Unit strides with a fixed offset make output `i` and output `i + 2N - γ`
//! nearly copies of each other. Random odd strides remove the correlation.

use wallace_rng::stats::suite::{stride_flaw_reports, SuiteConfig};

fn main() -> wallace_rng::Result<()> {
    let cfg = SuiteConfig::default();
    let n = 1usize << cfg.pool_exponent;
    println!("{:>6} {:>6} {:>12} {:>12}", "gamma", "lag", "unit-stride", "recommended");
    for gamma in [1, 16, n / 4, n / 2, n - 1] {
        let (bad, good) = stride_flaw_reports(&cfg, gamma, 1_000_000)?;
        println!("{gamma:>6} {:>6} {:>12.4} {:>12.4}", bad.lag, bad.r, good.r);
    }
    Ok(())
}
