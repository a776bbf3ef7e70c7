use crate::error::{invalid, Result};

/// Smallest supported pool exponent (N = 256).
pub const MIN_POOL_EXPONENT: u32 = 8;
/// Largest supported pool exponent; offsets are drawn with a 20-bit modulus.
pub const MAX_POOL_EXPONENT: u32 = 20;

/// One buffer of 2N normal variates stored as two halves of length N.
#[derive(Debug, Clone, PartialEq)]
pub struct Pool {
    x: Vec<f64>,
    y: Vec<f64>,
    tracked_sumsq: f64,
    withheld: f64,
}

impl Pool {
    /// An all-zero pool of half-length `2^exponent`.
    pub fn zeroed(exponent: u32) -> Result<Self> {
        if !(MIN_POOL_EXPONENT..=MAX_POOL_EXPONENT).contains(&exponent) {
            return Err(invalid(format!(
                "pool exponent {exponent} outside [{MIN_POOL_EXPONENT}, {MAX_POOL_EXPONENT}]"
            )));
        }
        let n = 1usize << exponent;
        Ok(Pool { x: vec![0.0; n], y: vec![0.0; n], tracked_sumsq: 0.0, withheld: 0.0 })
    }

    /// Builds a pool from explicit halves. Lengths must match and be a power
    /// of two; the tracked sum of squares is computed directly.
    pub fn from_halves(x: Vec<f64>, y: Vec<f64>, withheld: f64) -> Result<Self> {
        if x.len() != y.len() || !x.len().is_power_of_two() {
            return Err(invalid("pool halves must share a power-of-two length"));
        }
        let mut pool = Pool { x, y, tracked_sumsq: 0.0, withheld };
        pool.tracked_sumsq = pool.recompute_sumsq();
        Ok(pool)
    }

    /// Half-length N.
    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Mutable access to the x half. Writes bypass sum-of-squares tracking.
    pub fn x_mut(&mut self) -> &mut [f64] {
        &mut self.x
    }

    /// Mutable access to the y half. Writes bypass sum-of-squares tracking.
    pub fn y_mut(&mut self) -> &mut [f64] {
        &mut self.y
    }

    pub(crate) fn halves_mut(&mut self) -> (&mut [f64], &mut [f64]) {
        (&mut self.x, &mut self.y)
    }

    pub fn tracked_sumsq(&self) -> f64 {
        self.tracked_sumsq
    }

    pub fn set_tracked_sumsq(&mut self, q: f64) {
        self.tracked_sumsq = q;
    }

    /// The variate reserved for the next chi-squared draw.
    pub fn withheld(&self) -> f64 {
        self.withheld
    }

    pub(crate) fn set_withheld(&mut self, w: f64) {
        self.withheld = w;
    }

    /// Sum of squares of all 2N values, x half first.
    pub fn recompute_sumsq(&self) -> f64 {
        self.x.iter().chain(&self.y).map(|v| v * v).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.x.iter().chain(&self.y).fold(0.0, |m, v| m.max(v.abs()))
    }
}
