//! Independent generators per thread, separated by stream id.

use std::thread;

use wallace_rng::stats::moments;
use wallace_rng::{WallaceConfig, WallaceState};

fn main() {
    let seed = 2024;
    let handles: Vec<_> = (0..4u64)
        .map(|stream| {
            thread::spawn(move || {
                let mut gen = WallaceState::new(WallaceConfig::with_seed(seed, stream)).expect("valid config");
                let v = gen.fill(1_000_000, 0.0, 1.0).expect("fill");
                (stream, v[0], moments(&v).expect("non-empty"))
            })
        })
        .collect();
    for h in handles {
        let (stream, first, m) = h.join().expect("worker");
        println!("stream {stream}: first {first:+.6}  mean {:+.5}  m2 {:.5}", m.m1, m.m2);
    }
}
