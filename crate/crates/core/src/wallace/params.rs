use crate::error::{Error, Result};
use crate::uniform::UniformState;

use super::pool::Pool;
use super::rotation::Rotation2;

pub const ALPHA_CHOICES: [usize; 2] = [3, 5];
pub const BETA_CHOICES: [usize; 2] = [7, 11];

/// How each pass rescales the pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScaleMode {
    /// Rescale so the sum of squares follows a chi-squared law.
    #[default]
    ChiSquared,
    /// Pure rotation; the sum of squares is conserved.
    Fixed,
}

impl ScaleMode {
    pub(crate) fn to_byte(self) -> u8 {
        match self {
            ScaleMode::ChiSquared => 0,
            ScaleMode::Fixed => 1,
        }
    }

    pub(crate) fn from_byte(b: u8) -> Option<Self> {
        match b {
            0 => Some(ScaleMode::ChiSquared),
            1 => Some(ScaleMode::Fixed),
            _ => None,
        }
    }
}

/// Everything one regeneration pass needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassParams {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    pub delta: usize,
    pub rot: Rotation2,
    /// Multiplier applied to the rotation.
    pub scale: f64,
    /// Sum of squares the new pool will carry.
    pub target_sumsq: f64,
}

impl PassParams {
    /// Unscaled parameters; `target_sumsq` is left at 0 and must be filled by
    /// the caller before a regeneration relies on it.
    pub fn unscaled(alpha: usize, beta: usize, gamma: usize, delta: usize, rot: Rotation2) -> Self {
        PassParams { alpha, beta, gamma, delta, rot, scale: 1.0, target_sumsq: 0.0 }
    }
}

/// Approximate χ²_ν sample from a standard normal `r`:
/// `S = (r + sqrt(2ν − 1))² / 2`.
#[inline]
pub fn chi2_target(r: f64, nu: u64) -> f64 {
    let shifted = r + ((2 * nu - 1) as f64).sqrt();
    0.5 * shifted * shifted
}

/// Scale factor and target sum of squares for the next pass over `pool`.
pub(crate) fn scale_for(pool: &Pool, mode: ScaleMode) -> Result<(f64, f64)> {
    let q = pool.tracked_sumsq();
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::CorruptedState(format!("tracked sum of squares {q} is not positive")));
    }
    Ok(match mode {
        ScaleMode::Fixed => (1.0, q),
        ScaleMode::ChiSquared => {
            let target = chi2_target(pool.withheld(), 2 * pool.n() as u64);
            ((target / q).sqrt(), target)
        }
    })
}

/// Draws α, β, γ, δ and the rotation for the next pass, in that order, and
/// derives the scale factor from the pool.
pub fn select_pass_params(ustate: &mut UniformState, pool: &Pool, mode: ScaleMode) -> Result<PassParams> {
    let (scale, target_sumsq) = scale_for(pool, mode)?;
    let n = pool.n() as u32;
    let alpha = ALPHA_CHOICES[ustate.int_below_unchecked(2) as usize];
    let beta = BETA_CHOICES[ustate.int_below_unchecked(2) as usize];
    let gamma = ustate.next_int_below(n)? as usize;
    let delta = ustate.next_int_below(n)? as usize;
    let rot = Rotation2::from_uniform(ustate);
    Ok(PassParams { alpha, beta, gamma, delta, rot, scale, target_sumsq })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wallace::pool::Pool;

    fn unit_pool(exponent: u32) -> Pool {
        let n = 1 << exponent;
        Pool::from_halves(vec![1.0; n], vec![1.0; n], 0.25).unwrap()
    }

    #[test]
    fn chi2_target_values() {
        assert!((chi2_target(0.0, 2048) - 2047.5).abs() < 1e-9);
        // (1 + sqrt(4095))^2 / 2 = 2111.99218702...
        assert!((chi2_target(1.0, 2048) - 2_111.992_187_023_104_6).abs() < 1e-9);
        assert!(chi2_target(-(4095f64).sqrt(), 2048).abs() < 1e-12);
    }

    #[test]
    fn chi2_target_mean_is_nu() {
        let mut src = crate::reference::BoxMuller::new(21, 0);
        let mut r = vec![0.0; 100_000];
        crate::NormalSource::fill_standard(&mut src, &mut r).unwrap();
        let mean = r.iter().map(|&v| chi2_target(v, 2048)).sum::<f64>() / r.len() as f64;
        assert!((mean - 2048.0).abs() <= 20.0, "mean {mean}");
    }

    #[test]
    fn fixed_mode_has_unit_scale() {
        let mut u = UniformState::seed_state(1, 0);
        let pool = unit_pool(10);
        let p = select_pass_params(&mut u, &pool, ScaleMode::Fixed).unwrap();
        assert_eq!(p.scale, 1.0);
        assert_eq!(p.target_sumsq, pool.tracked_sumsq());
    }

    #[test]
    fn chisq_mode_scale_hits_target() {
        let mut u = UniformState::seed_state(1, 0);
        let pool = unit_pool(10);
        let p = select_pass_params(&mut u, &pool, ScaleMode::ChiSquared).unwrap();
        assert_eq!(p.target_sumsq, chi2_target(0.25, 2048));
        assert!((p.scale * p.scale * pool.tracked_sumsq() / p.target_sumsq - 1.0).abs() < 1e-15);
    }

    #[test]
    fn stride_sets_are_balanced() {
        let mut u = UniformState::seed_state(2, 0);
        let pool = unit_pool(10);
        let (mut a3, mut b7) = (0u32, 0u32);
        let draws = 10_000;
        for _ in 0..draws {
            let p = select_pass_params(&mut u, &pool, ScaleMode::ChiSquared).unwrap();
            assert!(ALPHA_CHOICES.contains(&p.alpha));
            assert!(BETA_CHOICES.contains(&p.beta));
            assert!(p.gamma < 1024 && p.delta < 1024);
            assert_eq!(gcd(p.alpha, 1024), 1);
            assert_eq!(gcd(p.beta, 1024), 1);
            a3 += (p.alpha == 3) as u32;
            b7 += (p.beta == 7) as u32;
        }
        for c in [a3, b7] {
            assert!((c as f64 / draws as f64 - 0.5).abs() <= 0.02);
        }
    }

    #[test]
    fn nonpositive_tracked_sum_is_corruption() {
        let mut u = UniformState::seed_state(1, 0);
        let mut pool = unit_pool(8);
        pool.set_tracked_sumsq(0.0);
        assert!(matches!(
            select_pass_params(&mut u, &pool, ScaleMode::Fixed),
            Err(Error::CorruptedState(_))
        ));
        pool.set_tracked_sumsq(f64::NAN);
        assert!(select_pass_params(&mut u, &pool, ScaleMode::ChiSquared).is_err());
    }

    fn gcd(mut a: usize, mut b: usize) -> usize {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
}
