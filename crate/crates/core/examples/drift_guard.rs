//! The periodic sum-of-squares audit: rounding drift is absorbed, a clobbered
//! pool entry is reported.

use wallace_rng::{Error, WallaceConfig, WallaceState};

fn main() -> wallace_rng::Result<()> {
    let cfg = WallaceConfig::with_seed(3, 0);
    let per = 2 * cfg.n() - 1;

    let mut gen = WallaceState::new(cfg)?;
    gen.fill(per, 0.0, 1.0)?;
    let pool = gen.active_pool_mut();
    let q = pool.tracked_sumsq();
    pool.set_tracked_sumsq(q * (1.0 + 1e-5));
    gen.fill(30 * per, 0.0, 1.0)?;
    println!("1e-5 tracking error: residual gap now {:.2e}", gen.drift_check()?);

    let mut gen = WallaceState::new(cfg)?;
    gen.fill(per, 0.0, 1.0)?;
    gen.active_pool_mut().x_mut()[0] += 1000.0;
    loop {
        match gen.fill(per, 0.0, 1.0) {
            Ok(_) => continue,
            Err(Error::CorruptedState(msg)) => {
                println!("corruption caught after pass {}: {msg}", gen.pass_count());
                break;
            }
            Err(e) => return Err(e),
        }
    }
    gen.restart();
    println!("after restart: gap {:.2e}", gen.drift_check()?);
    Ok(())
}
