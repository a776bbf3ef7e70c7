//! Box-Muller and Polar normal generators.
//!
//! Both are scalar and unoptimised. They refill the Wallace pool, serve as
//! baselines for the benchmark, and act as known-good inputs for the
//! statistical suite.

use std::f64::consts::TAU;

use crate::error::{invalid, Result};
use crate::uniform::UniformState;
use crate::NormalSource;

/// Smallest positive value of the 53-bit uniform grid; replaces a zero draw.
const MIN_POSITIVE_UNIFORM: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalPair {
    pub x: f64,
    pub y: f64,
}

/// Box-Muller transform of `u1 ∈ (0, 1)`, `u2 ∈ [0, 1)`.
pub fn box_muller_pair(u1: f64, u2: f64) -> Result<NormalPair> {
    if !(u1 > 0.0 && u1 < 1.0) {
        return Err(invalid(format!("box-muller radius input {u1} not in (0, 1)")));
    }
    Ok(box_muller_unchecked(u1, u2))
}

#[inline]
fn box_muller_unchecked(u1: f64, u2: f64) -> NormalPair {
    let radius = (-2.0 * u1.ln()).sqrt();
    let (sin, cos) = (TAU * u2).sin_cos();
    NormalPair { x: radius * cos, y: radius * sin }
}

/// Draws `u1` then `u2` from `state` and applies the Box-Muller transform.
#[inline]
pub fn box_muller_from(state: &mut UniformState) -> NormalPair {
    let mut u1 = state.next_uniform();
    if u1 == 0.0 {
        u1 = MIN_POSITIVE_UNIFORM;
    }
    let u2 = state.next_uniform();
    box_muller_unchecked(u1, u2)
}

/// Accepted branch of the polar method for a point `(v1, v2)` in the square.
/// `None` when the point falls outside the open unit disc or at the origin.
#[inline]
pub fn polar_accept(v1: f64, v2: f64) -> Option<NormalPair> {
    let s = v1 * v1 + v2 * v2;
    if s > 0.0 && s < 1.0 {
        let factor = (-2.0 * s.ln() / s).sqrt();
        Some(NormalPair { x: v1 * factor, y: v2 * factor })
    } else {
        None
    }
}

/// Polar method; also returns how many candidate points were drawn.
pub fn polar_pair_counted(state: &mut UniformState) -> (NormalPair, u32) {
    let mut attempts = 0;
    loop {
        attempts += 1;
        let v1 = 2.0 * state.next_uniform() - 1.0;
        let v2 = 2.0 * state.next_uniform() - 1.0;
        if let Some(pair) = polar_accept(v1, v2) {
            return (pair, attempts);
        }
    }
}

#[inline]
pub fn polar_pair(state: &mut UniformState) -> NormalPair {
    polar_pair_counted(state).0
}

/// Streaming Box-Muller generator.
#[derive(Debug, Clone)]
pub struct BoxMuller {
    uniform: UniformState,
    spare: Option<f64>,
}

impl BoxMuller {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        BoxMuller { uniform: UniformState::seed_state(seed, stream_id), spare: None }
    }
}

/// Streaming polar-method generator.
#[derive(Debug, Clone)]
pub struct Polar {
    uniform: UniformState,
    spare: Option<f64>,
}

impl Polar {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Polar { uniform: UniformState::seed_state(seed, stream_id), spare: None }
    }
}

fn fill_pairs(
    out: &mut [f64],
    spare: &mut Option<f64>,
    mut next: impl FnMut() -> NormalPair,
) {
    let rest = match (spare.take(), out.split_first_mut()) {
        (Some(v), Some((first, tail))) => {
            *first = v;
            tail
        }
        (held, _) => {
            *spare = held;
            out
        }
    };
    let mut chunks = rest.chunks_exact_mut(2);
    for chunk in &mut chunks {
        let p = next();
        chunk[0] = p.x;
        chunk[1] = p.y;
    }
    if let [last] = chunks.into_remainder() {
        let p = next();
        *last = p.x;
        *spare = Some(p.y);
    }
}

impl NormalSource for BoxMuller {
    fn fill_standard(&mut self, out: &mut [f64]) -> Result<()> {
        let uniform = &mut self.uniform;
        fill_pairs(out, &mut self.spare, || box_muller_from(uniform));
        Ok(())
    }
}

impl NormalSource for Polar {
    fn fill_standard(&mut self, out: &mut [f64]) -> Result<()> {
        let uniform = &mut self.uniform;
        fill_pairs(out, &mut self.spare, || polar_pair(uniform));
        Ok(())
    }
}
