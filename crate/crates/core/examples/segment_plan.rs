//! How one pass splits the index range into wrap-free strided runs.

use wallace_rng::wallace::plan_segments;
use wallace_rng::{PassParams, Rotation2};

fn main() -> wallace_rng::Result<()> {
    let n = 256;
    for (alpha, beta, gamma, delta) in [(3, 5, 0, 0), (3, 7, 5, 11), (5, 11, 200, 17)] {
        let p = PassParams::unscaled(alpha, beta, gamma, delta, Rotation2::IDENTITY);
        let segs = plan_segments(&p, n)?;
        println!("alpha={alpha} beta={beta} gamma={gamma} delta={delta}: {} segments", segs.len());
        for s in &segs {
            println!(
                "  j in {:>3}..={:<3}  x index {alpha}j{:+}  y index {beta}j{:+}",
                s.low, s.high, s.jx, s.jy
            );
        }
    }
    Ok(())
}
