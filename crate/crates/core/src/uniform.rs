//! Additive lagged-Fibonacci uniform generator.
//!
//! `x[n] = x[n-607] + x[n-273] (mod 2^64)`, kept in a circular table of 607
//! words. The generator seeds the normal pool, picks the per-pass strides and
//! offsets, and builds the rotations, so every other generator in the crate
//! inherits its reproducibility.

use crate::error::{invalid, Result};

/// Long lag of the recurrence.
pub const LAG_LONG: usize = 607;
/// Short lag of the recurrence.
pub const LAG_SHORT: usize = 273;
/// Raw outputs discarded after seeding.
pub const WARMUP_DRAWS: usize = 10 * LAG_LONG;
/// Largest modulus accepted by [`UniformState::next_int_below`].
pub const MAX_INT_MODULUS: u32 = 1 << 20;

const CURSOR_GAP: usize = LAG_LONG - LAG_SHORT;
const INV_2_53: f64 = 1.0 / (1u64 << 53) as f64;

/// SplitMix64 finalizer.
#[inline]
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, PartialEq, Eq)]
pub struct UniformState {
    lag_table: Box<[u64; LAG_LONG]>,
    cursor_r: usize,
    cursor_s: usize,
    seed: u64,
    stream_id: u64,
    draws: u64,
}

impl std::fmt::Debug for UniformState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UniformState")
            .field("cursor_r", &self.cursor_r)
            .field("cursor_s", &self.cursor_s)
            .field("seed", &self.seed)
            .field("stream_id", &self.stream_id)
            .field("draws", &self.draws)
            .finish_non_exhaustive()
    }
}

impl UniformState {
    /// Seeds a new stream. Distinct `stream_id`s under one `seed` give
    /// unrelated sequences, so parallel workers can share a user seed.
    pub fn seed_state(seed: u64, stream_id: u64) -> Self {
        let mut table = Box::new([0u64; LAG_LONG]);
        let mut z = seed ^ mix64(stream_id).rotate_left(32);
        for slot in table.iter_mut() {
            z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
            *slot = mix64(z);
        }
        // Full period needs at least one odd word, which also rules out the
        // all-zero table.
        if table.iter().all(|w| w & 1 == 0) {
            table[0] |= 1;
        }
        let mut state = UniformState {
            lag_table: table,
            cursor_r: 0,
            cursor_s: CURSOR_GAP,
            seed,
            stream_id,
            draws: 0,
        };
        for _ in 0..WARMUP_DRAWS {
            state.next_raw();
        }
        state.draws = 0;
        state
    }

    /// Rebuilds a state from its serialized parts. Returns `None` when the
    /// cursors are out of range or misaligned, or the table is all zeros.
    pub fn from_raw_parts(
        lag_table: [u64; LAG_LONG],
        cursor_r: usize,
        cursor_s: usize,
        seed: u64,
        stream_id: u64,
        draws: u64,
    ) -> Option<Self> {
        if cursor_r >= LAG_LONG || cursor_s >= LAG_LONG {
            return None;
        }
        if (cursor_s + LAG_LONG - cursor_r) % LAG_LONG != CURSOR_GAP {
            return None;
        }
        if lag_table.iter().all(|&w| w == 0) {
            return None;
        }
        Some(UniformState {
            lag_table: Box::new(lag_table),
            cursor_r,
            cursor_s,
            seed,
            stream_id,
            draws,
        })
    }

    pub fn lag_table(&self) -> &[u64; LAG_LONG] {
        &self.lag_table
    }

    pub fn cursors(&self) -> (usize, usize) {
        (self.cursor_r, self.cursor_s)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Number of outputs produced since seeding (warm-up excluded).
    pub fn draws(&self) -> u64 {
        self.draws
    }

    #[inline]
    pub fn next_raw(&mut self) -> u64 {
        let word = self.lag_table[self.cursor_r].wrapping_add(self.lag_table[self.cursor_s]);
        self.lag_table[self.cursor_r] = word;
        self.cursor_r = if self.cursor_r + 1 == LAG_LONG { 0 } else { self.cursor_r + 1 };
        self.cursor_s = if self.cursor_s + 1 == LAG_LONG { 0 } else { self.cursor_s + 1 };
        self.draws = self.draws.wrapping_add(1);
        word
    }

    /// Uniform in `[0, 1)` from the top 53 bits of the next word.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        (self.next_raw() >> 11) as f64 * INV_2_53
    }

    /// `floor(u * m)` for `1 <= m <= 2^20`.
    pub fn next_int_below(&mut self, m: u32) -> Result<u32> {
        if m == 0 || m > MAX_INT_MODULUS {
            return Err(invalid(format!("modulus {m} outside [1, 2^20]")));
        }
        Ok(self.int_below_unchecked(m))
    }

    #[inline]
    pub(crate) fn int_below_unchecked(&mut self, m: u32) -> u32 {
        ((self.next_uniform() * m as f64) as u32).min(m - 1)
    }
}
