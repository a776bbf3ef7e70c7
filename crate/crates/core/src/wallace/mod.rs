//! The pool generator.
//!
//! A pool of 2N normal variates is regenerated wholesale by applying a
//! random, scaled 2×2 rotation to pairs `(x[αj+γ mod N], y[βj+δ mod N])`.
//! Only one pool in `throwaway_f` is handed out, and one value of each
//! handed-out pool is kept back to drive the next pass's chi-squared
//! rescaling of the sum of squares.

mod params;
mod persist;
mod pool;
mod rotation;
mod segment;

pub use params::{chi2_target, select_pass_params, PassParams, ScaleMode, ALPHA_CHOICES, BETA_CHOICES};
pub use persist::{load_state, save_state, STATE_MAGIC, STATE_VERSION};
pub use pool::{Pool, MAX_POOL_EXPONENT, MIN_POOL_EXPONENT};
pub use rotation::{AngleBand, Rotation2, TAN_HALF_MAX, TAN_HALF_MIN};
pub use segment::{plan_segments, regenerate, Segment};

use crate::error::{invalid, Error, Result};
use crate::reference::box_muller_from;
use crate::uniform::UniformState;
use crate::NormalSource;

/// Relative gap between tracked and recomputed sum of squares above which
/// the pool is treated as overwritten rather than drifted.
pub const CORRUPTION_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WallaceConfig {
    /// N = 2^pool_exponent.
    pub pool_exponent: u32,
    /// Passes per user-visible pool.
    pub throwaway_f: u32,
    pub scale_mode: ScaleMode,
    /// Refill the pool from Box-Muller every this many passes; 0 disables.
    pub restart_interval_passes: u64,
    /// Passes between sum-of-squares audits; 0 disables.
    pub drift_check_period: u64,
    pub seed: u64,
    pub stream_id: u64,
}

impl Default for WallaceConfig {
    fn default() -> Self {
        WallaceConfig {
            pool_exponent: 10,
            throwaway_f: 3,
            scale_mode: ScaleMode::ChiSquared,
            restart_interval_passes: 0,
            drift_check_period: 64,
            seed: 0,
            stream_id: 0,
        }
    }
}

impl WallaceConfig {
    pub fn with_seed(seed: u64, stream_id: u64) -> Self {
        WallaceConfig { seed, stream_id, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_POOL_EXPONENT..=MAX_POOL_EXPONENT).contains(&self.pool_exponent) {
            return Err(invalid(format!(
                "pool exponent {} outside [{MIN_POOL_EXPONENT}, {MAX_POOL_EXPONENT}]",
                self.pool_exponent
            )));
        }
        if self.throwaway_f == 0 {
            return Err(invalid("throw-away factor must be at least 1"));
        }
        Ok(())
    }

    /// Half-length N of each pool.
    pub fn n(&self) -> usize {
        1 << self.pool_exponent
    }
}

/// Pass parameters that stay the same on every pass. Only used to reproduce
/// the unit-stride correlation flaw; never a production configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPass {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    pub delta: usize,
    pub rot: Rotation2,
}

impl FixedPass {
    /// Unit strides, `γ = δ = offset`, θ = π/6.
    pub fn unit_stride(offset: usize) -> Self {
        FixedPass {
            alpha: 1,
            beta: 1,
            gamma: offset,
            delta: offset,
            rot: Rotation2::new(3f64.sqrt() / 2.0, 0.5),
        }
    }
}

/// Complete generator: two pool buffers, the uniform stream, configuration
/// and counters.
#[derive(Debug, Clone, PartialEq)]
pub struct WallaceState {
    pools: [Pool; 2],
    active: usize,
    ustate: UniformState,
    config: WallaceConfig,
    pass_count: u64,
    avail: u64,
    numbers_emitted: u64,
    fixed_pass: Option<FixedPass>,
}

fn crosses_multiple(before: u64, after: u64, period: u64) -> bool {
    period > 0 && before / period != after / period
}

impl WallaceState {
    pub fn new(config: WallaceConfig) -> Result<Self> {
        config.validate()?;
        let pools = [Pool::zeroed(config.pool_exponent)?, Pool::zeroed(config.pool_exponent)?];
        let mut state = WallaceState {
            pools,
            active: 0,
            ustate: UniformState::seed_state(config.seed, config.stream_id),
            config,
            pass_count: 0,
            avail: 0,
            numbers_emitted: 0,
            fixed_pass: None,
        };
        state.init_pool();
        Ok(state)
    }

    /// Generator with constant pass parameters and the whole pool emitted
    /// each refill. Requires `ScaleMode::Fixed`, since there is no
    /// chi-squared draw to withhold a value for.
    pub fn with_fixed_pass(config: WallaceConfig, fixed: FixedPass) -> Result<Self> {
        if config.scale_mode != ScaleMode::Fixed {
            return Err(invalid("fixed pass parameters require fixed scale mode"));
        }
        let mut state = WallaceState::new(config)?;
        let probe = PassParams::unscaled(fixed.alpha, fixed.beta, fixed.gamma, fixed.delta, fixed.rot);
        plan_segments(&probe, config.n())?;
        state.fixed_pass = Some(fixed);
        Ok(state)
    }

    pub(crate) fn from_parts(
        pools: [Pool; 2],
        active: usize,
        ustate: UniformState,
        config: WallaceConfig,
        pass_count: u64,
        avail: u64,
        numbers_emitted: u64,
    ) -> Self {
        WallaceState { pools, active, ustate, config, pass_count, avail, numbers_emitted, fixed_pass: None }
    }

    pub fn config(&self) -> &WallaceConfig {
        &self.config
    }

    pub fn pass_count(&self) -> u64 {
        self.pass_count
    }

    pub fn numbers_emitted(&self) -> u64 {
        self.numbers_emitted
    }

    /// Values left in the active pool before the next refill.
    pub fn avail(&self) -> u64 {
        self.avail
    }

    pub fn active_index(&self) -> usize {
        self.active
    }

    pub fn pools(&self) -> &[Pool; 2] {
        &self.pools
    }

    pub fn active_pool(&self) -> &Pool {
        &self.pools[self.active]
    }

    /// Direct access to the pool being consumed. Writes here are invisible
    /// to sum-of-squares tracking and will be caught by the next audit
    /// unless they preserve the sum.
    pub fn active_pool_mut(&mut self) -> &mut Pool {
        &mut self.pools[self.active]
    }

    pub fn uniform(&self) -> &UniformState {
        &self.ustate
    }

    pub fn fixed_pass(&self) -> Option<&FixedPass> {
        self.fixed_pass.as_ref()
    }

    /// Values handed out per refill: 2N − 1, or 2N when pass parameters are
    /// fixed and nothing is withheld.
    pub fn values_per_refill(&self) -> u64 {
        let two_n = 2 * self.config.n() as u64;
        if self.fixed_pass.is_some() {
            two_n
        } else {
            two_n - 1
        }
    }

    /// Refills the active pool with 2N Box-Muller variates plus one extra
    /// withheld variate.
    pub fn init_pool(&mut self) {
        let ustate = &mut self.ustate;
        let pool = &mut self.pools[self.active];
        let (x, y) = pool.halves_mut();
        for half in [x, y] {
            for pair in half.chunks_exact_mut(2) {
                let p = box_muller_from(ustate);
                pair[0] = p.x;
                pair[1] = p.y;
            }
        }
        let extra = box_muller_from(ustate).x;
        pool.set_withheld(extra);
        let q = pool.recompute_sumsq();
        pool.set_tracked_sumsq(q);
        self.avail = 0;
    }

    /// Re-seeds the pool from the (advanced) uniform stream. Counters are
    /// kept; unconsumed values are dropped.
    pub fn restart(&mut self) {
        self.init_pool();
    }

    fn pass(&mut self) -> Result<PassParams> {
        let (first, second) = self.pools.split_at_mut(1);
        let (src, dst) = if self.active == 0 {
            (&first[0], &mut second[0])
        } else {
            (&second[0], &mut first[0])
        };
        let params = match self.fixed_pass {
            Some(fp) => {
                let (scale, target_sumsq) = params::scale_for(src, self.config.scale_mode)?;
                PassParams { scale, target_sumsq, ..PassParams::unscaled(fp.alpha, fp.beta, fp.gamma, fp.delta, fp.rot) }
            }
            None => select_pass_params(&mut self.ustate, src, self.config.scale_mode)?,
        };
        regenerate(src, dst, &params)?;
        self.active ^= 1;
        self.pass_count += 1;
        Ok(params)
    }

    /// Runs a single pass outside the refill schedule and returns its
    /// parameters. Any values left in the previous pool are discarded.
    pub fn advance_pass(&mut self) -> Result<PassParams> {
        self.avail = 0;
        self.pass()
    }

    /// Runs `throwaway_f` passes and exposes the resulting pool. Restarts and
    /// sum-of-squares audits fire when the pass counter crosses a multiple of
    /// their period.
    pub fn refill(&mut self) -> Result<()> {
        let before = self.pass_count;
        let after = before + self.config.throwaway_f as u64;
        if crosses_multiple(before, after, self.config.restart_interval_passes) {
            self.restart();
        }
        for _ in 0..self.config.throwaway_f {
            self.pass()?;
        }
        if crosses_multiple(before, after, self.config.drift_check_period) {
            self.drift_check()?;
        }
        self.avail = self.values_per_refill();
        Ok(())
    }

    /// Compares the active pool's sum of squares with the tracked value and
    /// returns the relative gap. Small gaps are absorbed into the tracked
    /// value; a gap above [`CORRUPTION_THRESHOLD`] is an error.
    pub fn drift_check(&mut self) -> Result<f64> {
        let pool = &mut self.pools[self.active];
        let recomputed = pool.recompute_sumsq();
        let tracked = pool.tracked_sumsq();
        let gap = (recomputed / tracked - 1.0).abs();
        if !(gap <= CORRUPTION_THRESHOLD) {
            return Err(Error::CorruptedState(format!(
                "pool sum of squares {recomputed} differs from tracked {tracked} (relative {gap:e})"
            )));
        }
        pool.set_tracked_sumsq(recomputed);
        Ok(gap)
    }

    /// Fills `out` with `mu + sigma * z` for successive pool values `z`.
    pub fn fill_into(&mut self, out: &mut [f64], mu: f64, sigma: f64) -> Result<()> {
        if !(sigma >= 0.0) || !mu.is_finite() || !sigma.is_finite() {
            return Err(invalid(format!("need finite mu and sigma >= 0, got mu={mu} sigma={sigma}")));
        }
        let mut rest = out;
        while !rest.is_empty() {
            if self.avail == 0 {
                self.refill()?;
            }
            let start = (self.values_per_refill() - self.avail) as usize;
            let take = rest.len().min(self.avail as usize);
            let (chunk, tail) = rest.split_at_mut(take);
            let pool = &self.pools[self.active];
            let n = pool.n();
            let end = start + take;
            let x_part = if start < n { &pool.x()[start..end.min(n)] } else { &[][..] };
            let y_part = if end > n { &pool.y()[start.max(n) - n..end - n] } else { &[][..] };
            for (o, &z) in chunk.iter_mut().zip(x_part.iter().chain(y_part)) {
                *o = mu + sigma * z;
            }
            self.avail -= take as u64;
            self.numbers_emitted += take as u64;
            rest = tail;
        }
        Ok(())
    }

    pub fn fill(&mut self, count: usize, mu: f64, sigma: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; count];
        self.fill_into(&mut out, mu, sigma)?;
        Ok(out)
    }
}

impl NormalSource for WallaceState {
    fn fill_standard(&mut self, out: &mut [f64]) -> Result<()> {
        self.fill_into(out, 0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixed_config(seed: u64) -> WallaceConfig {
        WallaceConfig { scale_mode: ScaleMode::Fixed, ..WallaceConfig::with_seed(seed, 0) }
    }

    #[test]
    fn config_validation() {
        assert!(WallaceConfig::default().validate().is_ok());
        let bad_f = WallaceConfig { throwaway_f: 0, ..Default::default() };
        assert!(bad_f.validate().is_err());
        let small = WallaceConfig { pool_exponent: 7, ..Default::default() };
        assert!(WallaceState::new(small).is_err());
    }

    #[test]
    fn init_tracks_exact_sum_and_waits_for_refill() {
        let st = WallaceState::new(WallaceConfig::with_seed(1, 0)).unwrap();
        let pool = st.active_pool();
        assert_eq!(pool.tracked_sumsq(), pool.recompute_sumsq());
        assert_eq!(st.avail(), 0);
        assert!((1728.0..=2368.0).contains(&pool.tracked_sumsq()));
        let again = WallaceState::new(WallaceConfig::with_seed(1, 0)).unwrap();
        assert_eq!(again.active_pool(), pool);
    }

    #[test]
    fn refill_accounting() {
        let mut st = WallaceState::new(WallaceConfig::with_seed(2, 0)).unwrap();
        for i in 1..=5 {
            st.refill().unwrap();
            assert_eq!(st.pass_count(), 3 * i);
            assert_eq!(st.avail(), 2047);
        }
        let mut one = WallaceState::new(WallaceConfig { throwaway_f: 1, ..WallaceConfig::with_seed(2, 0) }).unwrap();
        one.refill().unwrap();
        assert_eq!(one.pass_count(), 1);
        assert_eq!(one.avail(), 2047);
    }

    #[test]
    fn chisq_refill_lands_on_target() {
        let mut st = WallaceState::new(WallaceConfig::with_seed(3, 0)).unwrap();
        for _ in 0..50 {
            st.refill().unwrap();
            let pool = st.active_pool();
            let rel = (pool.recompute_sumsq() / pool.tracked_sumsq() - 1.0).abs();
            assert!(rel <= 1e-9, "rel {rel}");
        }
    }

    #[test]
    fn fill_edge_cases() {
        let mut st = WallaceState::new(WallaceConfig::with_seed(4, 0)).unwrap();
        let before = st.clone();
        assert!(st.fill(0, 0.0, 1.0).unwrap().is_empty());
        assert_eq!(st, before);
        assert_eq!(st.fill(5, 7.0, 0.0).unwrap(), vec![7.0; 5]);
        assert!(st.fill(3, 0.0, -1.0).is_err());
        assert!(st.fill(3, 0.0, f64::NAN).is_err());
    }

    #[test]
    fn fill_consumes_x_then_y_without_withheld_slot() {
        let mut st = WallaceState::new(WallaceConfig::with_seed(5, 0)).unwrap();
        let out = st.fill(2047, 0.0, 1.0).unwrap();
        let pool = st.active_pool();
        assert_eq!(&out[..1024], pool.x());
        assert_eq!(&out[1024..], &pool.y()[..1023]);
        assert_eq!(st.avail(), 0);
        assert_eq!(pool.withheld(), pool.y()[1023]);
    }

    #[test]
    fn chunked_fill_matches_single_fill() {
        let mut a = WallaceState::new(WallaceConfig::with_seed(6, 1)).unwrap();
        let mut b = a.clone();
        let whole = a.fill(10_000, 1.0, 2.0).unwrap();
        let mut pieces = Vec::new();
        for len in [1, 1023, 1024, 2, 4095, 3855] {
            pieces.extend(b.fill(len, 1.0, 2.0).unwrap());
        }
        assert_eq!(whole, pieces);
        assert_eq!(a.numbers_emitted(), 10_000);
    }

    #[test]
    fn drift_check_paths() {
        let mut st = WallaceState::new(fixed_config(7)).unwrap();
        st.refill().unwrap();
        let pool = st.active_pool_mut();
        let truth = pool.recompute_sumsq();
        pool.set_tracked_sumsq(truth * (1.0 + 1e-5));
        let gap = st.drift_check().unwrap();
        assert!(gap > 0.0 && gap < 1e-3);
        assert_eq!(st.active_pool().tracked_sumsq(), truth);

        st.active_pool_mut().x_mut()[3] += 1000.0;
        assert!(matches!(st.drift_check(), Err(Error::CorruptedState(_))));
    }

    #[test]
    fn restart_disabled_by_default() {
        let mut st = WallaceState::new(WallaceConfig { throwaway_f: 1, ..WallaceConfig::with_seed(8, 0) }).unwrap();
        let mut shadow = st.clone();
        let initial = st.uniform().draws();
        // With restarts disabled the uniform stream is consumed only by pass
        // parameter draws: 4 ints and 2 uniforms per pass.
        for _ in 0..10_000 {
            st.refill().unwrap();
        }
        for _ in 0..10_000 {
            shadow.advance_pass().unwrap();
        }
        assert_eq!(st.uniform().draws(), shadow.uniform().draws());
        assert_eq!(st.uniform().draws() - initial, 10_000 * 6);
    }

    #[test]
    fn restart_interval_is_deterministic() {
        let cfg = WallaceConfig { restart_interval_passes: 100, ..WallaceConfig::with_seed(9, 0) };
        let mut a = WallaceState::new(cfg).unwrap();
        let mut b = WallaceState::new(cfg).unwrap();
        let draws_before = a.uniform().draws();
        let xa = a.fill(300_000, 0.0, 1.0).unwrap();
        let xb = b.fill(300_000, 0.0, 1.0).unwrap();
        assert_eq!(xa, xb);
        // Each restart draws 2N + 2 uniforms for the Box-Muller refill.
        let passes = a.pass_count();
        let restarts = passes / 100;
        assert!(restarts >= 3);
        assert_eq!(a.uniform().draws() - draws_before, passes * 6 + restarts * 2050);
    }

    #[test]
    fn fixed_pass_requires_fixed_scaling() {
        assert!(WallaceState::with_fixed_pass(WallaceConfig::default(), FixedPass::unit_stride(1)).is_err());
        let cfg = fixed_config(1);
        assert!(WallaceState::with_fixed_pass(cfg, FixedPass::unit_stride(1024)).is_err());
        let st = WallaceState::with_fixed_pass(cfg, FixedPass::unit_stride(1)).unwrap();
        assert_eq!(st.values_per_refill(), 2048);
    }
}
