//! Save a generator mid-stream, reload it from disk and continue.

use wallace_rng::{load_state, save_state, WallaceConfig, WallaceState};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut gen = WallaceState::new(WallaceConfig::with_seed(7, 0))?;
    gen.fill(5_000, 0.0, 1.0)?;

    let path = std::env::temp_dir().join("wallace-checkpoint.bin");
    std::fs::write(&path, save_state(&gen)?)?;
    println!("saved {} bytes to {}", std::fs::metadata(&path)?.len(), path.display());

    let mut resumed = load_state(&std::fs::read(&path)?)?;
    let a = gen.fill(10_000, 0.0, 1.0)?;
    let b = resumed.fill(10_000, 0.0, 1.0)?;
    println!("continuations identical: {}", a == b);

    let mut damaged = std::fs::read(&path)?;
    damaged.truncate(damaged.len() - 8);
    match load_state(&damaged) {
        Ok(_) => println!("damaged file unexpectedly loaded"),
        Err(e) => println!("damaged file rejected: {e}"),
    }
    std::fs::remove_file(&path)?;
    Ok(())
}
