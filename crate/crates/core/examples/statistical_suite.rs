//! Run every suite against every method at a reduced sample size.

use wallace_rng::stats::suite::{run_suite, Suite, SuiteConfig};
use wallace_rng::Method;

fn main() -> wallace_rng::Result<()> {
    let cfg = SuiteConfig { base_samples: 200_000, ..SuiteConfig::default() };
    let mut failures = 0;
    for method in Method::ALL {
        for suite in Suite::ALL {
            for v in run_suite(suite, method, &cfg)? {
                println!(
                    "{:<10} {:<20} {:>14.6e}  {:<28} {}",
                    v.method,
                    v.test,
                    v.statistic,
                    v.threshold.to_string(),
                    if v.pass { "PASS" } else { "FAIL" }
                );
                failures += !v.pass as usize;
            }
        }
    }
    println!("{failures} failing checks");
    Ok(())
}
