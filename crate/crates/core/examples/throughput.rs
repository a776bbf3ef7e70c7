//! Nanoseconds per value for each method, and how the pool generator's cost
//! grows with the throw-away factor.

use wallace_rng::bench::{run, BenchConfig};
use wallace_rng::Method;

fn main() -> wallace_rng::Result<()> {
    let base = BenchConfig { seconds: 0.5, ..BenchConfig::default() };
    for method in Method::ALL {
        let r = run(method, &base)?;
        println!("{:<10} {:>8.2} ns/value", r.method.name(), r.ns_per_value);
    }
    let times = (1..=4)
        .map(|f| Ok(run(Method::Wallace, &BenchConfig { throwaway_f: f, ..base })?.ns_per_value))
        .collect::<wallace_rng::Result<Vec<f64>>>()?;
    for (f, t) in (1..).zip(&times) {
        println!("f = {f}: {t:>7.2} ns/value ({:.2}x f = 1)", t / times[0]);
    }
    Ok(())
}
