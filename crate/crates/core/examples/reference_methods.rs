//! Box-Muller and Polar generators side by side with the pool generator.

use wallace_rng::reference::{box_muller_pair, polar_accept, polar_pair_counted};
use wallace_rng::stats::moments;
use wallace_rng::{BoxMuller, NormalSource, Polar, UniformState, WallaceConfig, WallaceState};

fn summarize(name: &str, src: &mut dyn NormalSource) -> wallace_rng::Result<()> {
    let mut v = vec![0.0; 1_000_000];
    src.fill_standard(&mut v)?;
    let m = moments(&v)?;
    println!("{name:<10} mean {:+.5}  m2 {:.5}  m4 {:.4}", m.m1, m.m2, m.m4);
    Ok(())
}

fn main() -> wallace_rng::Result<()> {
    let p = box_muller_pair(0.5, 0.25)?;
    println!("box_muller_pair(0.5, 0.25) = ({:.6}, {:.6})", p.x, p.y);
    if let Some(p) = polar_accept(0.6, 0.0) {
        println!("polar_accept(0.6, 0.0) = ({:.6}, {:.6})", p.x, p.y);
    }

    let mut u = UniformState::seed_state(1, 0);
    let (mut pairs, mut tries) = (0u64, 0u64);
    while tries < 100_000 {
        tries += polar_pair_counted(&mut u).1 as u64;
        pairs += 1;
    }
    println!("polar acceptance rate {:.4} (pi/4 = {:.4})", pairs as f64 / tries as f64, std::f64::consts::FRAC_PI_4);

    summarize("wallace", &mut WallaceState::new(WallaceConfig::with_seed(1, 0))?)?;
    summarize("polar", &mut Polar::new(1, 0))?;
    summarize("boxmuller", &mut BoxMuller::new(1, 0))?;
    Ok(())
}
