//! Draw normal variates from the pool generator, standard and shifted.

use wallace_rng::{NormalSource, WallaceConfig, WallaceState};

fn main() -> wallace_rng::Result<()> {
    let mut gen = WallaceState::new(WallaceConfig::with_seed(42, 0))?;

    let z = gen.fill(8, 0.0, 1.0)?;
    println!("standard: {z:.4?}");

    let heights = gen.fill(5, 170.0, 7.5)?;
    println!("N(170, 7.5^2): {heights:.2?}");

    // Any NormalSource can fill a caller-owned buffer.
    let mut buf = [0.0; 4];
    gen.fill_standard(&mut buf)?;
    println!("buffer: {buf:.4?}");

    println!(
        "emitted {} values over {} passes (N = {}, f = {})",
        gen.numbers_emitted(),
        gen.pass_count(),
        gen.config().n(),
        gen.config().throwaway_f
    );
    Ok(())
}
