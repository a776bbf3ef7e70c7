//! Binary state file, little-endian throughout:
//!
//! ```text
//! magic u32 "WRNG" | version u32 | pool_exponent u32 | throwaway_f u32
//! scale_mode u8 | restart_interval u64 | drift_check_period u64
//! seed u64 | stream_id u64 | pass_count u64 | numbers_emitted u64 | avail u64
//! active u8 | lag table 607 x u64 | cursor_r u32 | cursor_s u32 | draws u64
//! pool 0: N x f64 x, N x f64 y, f64 tracked_sumsq, f64 withheld
//! pool 1: same
//! ```

use crate::error::{invalid, MalformedState, Result};
use crate::uniform::{UniformState, LAG_LONG};

use super::params::ScaleMode;
use super::pool::{Pool, MAX_POOL_EXPONENT, MIN_POOL_EXPONENT};
use super::{WallaceConfig, WallaceState};

/// "WRNG" read as a little-endian u32.
pub const STATE_MAGIC: u32 = 0x5752_4E47;
pub const STATE_VERSION: u32 = 1;

const HEADER_LEN: usize = 4 * 4 + 1 + 8 * 7 + 1;
const UNIFORM_LEN: usize = LAG_LONG * 8 + 4 + 4 + 8;

fn pool_len(n: usize) -> usize {
    (2 * n + 2) * 8
}

/// Serialized size for pools of half-length `n`.
pub fn state_len(n: usize) -> usize {
    HEADER_LEN + UNIFORM_LEN + 2 * pool_len(n)
}

pub fn save_state(state: &WallaceState) -> Result<Vec<u8>> {
    if state.fixed_pass.is_some() {
        return Err(invalid("generators with fixed pass parameters cannot be saved"));
    }
    let cfg = &state.config;
    let mut out = Vec::with_capacity(state_len(cfg.n()));
    out.extend_from_slice(&STATE_MAGIC.to_le_bytes());
    out.extend_from_slice(&STATE_VERSION.to_le_bytes());
    out.extend_from_slice(&cfg.pool_exponent.to_le_bytes());
    out.extend_from_slice(&cfg.throwaway_f.to_le_bytes());
    out.push(cfg.scale_mode.to_byte());
    for v in [
        cfg.restart_interval_passes,
        cfg.drift_check_period,
        cfg.seed,
        cfg.stream_id,
        state.pass_count,
        state.numbers_emitted,
        state.avail,
    ] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.push(state.active as u8);

    let u = &state.ustate;
    for w in u.lag_table() {
        out.extend_from_slice(&w.to_le_bytes());
    }
    let (r, s) = u.cursors();
    out.extend_from_slice(&(r as u32).to_le_bytes());
    out.extend_from_slice(&(s as u32).to_le_bytes());
    out.extend_from_slice(&u.draws().to_le_bytes());

    for pool in &state.pools {
        for v in pool.x().iter().chain(pool.y()) {
            out.extend_from_slice(&v.to_bits().to_le_bytes());
        }
        out.extend_from_slice(&pool.tracked_sumsq().to_bits().to_le_bytes());
        out.extend_from_slice(&pool.withheld().to_bits().to_le_bytes());
    }
    Ok(out)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
    expected: usize,
}

impl<'a> Reader<'a> {
    fn take<const K: usize>(&mut self) -> std::result::Result<[u8; K], MalformedState> {
        let end = self.pos + K;
        let chunk = self.bytes.get(self.pos..end).ok_or(MalformedState::Truncated {
            needed: self.expected.max(end),
            found: self.bytes.len(),
        })?;
        self.pos = end;
        Ok(chunk.try_into().expect("chunk length"))
    }

    fn u8(&mut self) -> std::result::Result<u8, MalformedState> {
        Ok(self.take::<1>()?[0])
    }

    fn u32(&mut self) -> std::result::Result<u32, MalformedState> {
        Ok(u32::from_le_bytes(self.take()?))
    }

    fn u64(&mut self) -> std::result::Result<u64, MalformedState> {
        Ok(u64::from_le_bytes(self.take()?))
    }

    fn f64(&mut self) -> std::result::Result<f64, MalformedState> {
        Ok(f64::from_bits(self.u64()?))
    }
}

fn range(ok: bool, field: &'static str) -> std::result::Result<(), MalformedState> {
    if ok {
        Ok(())
    } else {
        Err(MalformedState::FieldRange(field))
    }
}

fn read_state(bytes: &[u8]) -> std::result::Result<WallaceState, MalformedState> {
    let mut rd = Reader { bytes, pos: 0, expected: HEADER_LEN };
    let magic = rd.u32()?;
    if magic != STATE_MAGIC {
        return Err(MalformedState::BadMagic(magic));
    }
    let version = rd.u32()?;
    if version != STATE_VERSION {
        return Err(MalformedState::UnsupportedVersion(version));
    }
    let pool_exponent = rd.u32()?;
    range((MIN_POOL_EXPONENT..=MAX_POOL_EXPONENT).contains(&pool_exponent), "pool_exponent")?;
    let n = 1usize << pool_exponent;
    rd.expected = state_len(n);

    let throwaway_f = rd.u32()?;
    range(throwaway_f >= 1, "throwaway_f")?;
    let scale_mode = ScaleMode::from_byte(rd.u8()?).ok_or(MalformedState::FieldRange("scale_mode"))?;
    let restart_interval_passes = rd.u64()?;
    let drift_check_period = rd.u64()?;
    let seed = rd.u64()?;
    let stream_id = rd.u64()?;
    let pass_count = rd.u64()?;
    let numbers_emitted = rd.u64()?;
    let avail = rd.u64()?;
    range(avail < 2 * n as u64, "avail")?;
    let active = rd.u8()?;
    range(active <= 1, "active")?;

    let mut table = [0u64; LAG_LONG];
    for w in table.iter_mut() {
        *w = rd.u64()?;
    }
    let cursor_r = rd.u32()? as usize;
    let cursor_s = rd.u32()? as usize;
    let draws = rd.u64()?;
    let ustate = UniformState::from_raw_parts(table, cursor_r, cursor_s, seed, stream_id, draws)
        .ok_or(MalformedState::FieldRange("uniform_state"))?;

    let read_pool = |rd: &mut Reader<'_>| -> std::result::Result<Pool, MalformedState> {
        let mut pool = Pool::zeroed(pool_exponent).expect("exponent checked");
        for v in pool.x_mut().iter_mut() {
            *v = rd.f64()?;
        }
        for v in pool.y_mut().iter_mut() {
            *v = rd.f64()?;
        }
        pool.set_tracked_sumsq(rd.f64()?);
        pool.set_withheld(rd.f64()?);
        Ok(pool)
    };
    let pools = [read_pool(&mut rd)?, read_pool(&mut rd)?];
    if rd.pos != bytes.len() {
        return Err(MalformedState::TrailingBytes(bytes.len() - rd.pos));
    }

    let live = &pools[active as usize];
    range(live.x().iter().chain(live.y()).all(|v| v.is_finite()), "pool_values")?;
    range(live.tracked_sumsq() > 0.0 && live.tracked_sumsq().is_finite(), "tracked_sumsq")?;
    range(live.withheld().is_finite(), "withheld")?;

    let config = WallaceConfig {
        pool_exponent,
        throwaway_f,
        scale_mode,
        restart_interval_passes,
        drift_check_period,
        seed,
        stream_id,
    };
    Ok(WallaceState::from_parts(
        pools,
        active as usize,
        ustate,
        config,
        pass_count,
        avail,
        numbers_emitted,
    ))
}

/// Parses a state written by [`save_state`].
pub fn load_state(bytes: &[u8]) -> Result<WallaceState> {
    Ok(read_state(bytes)?)
}
